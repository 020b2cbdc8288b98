// Copyright 2026 The sgqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion; with
// --criterion N only that criterion runs. Exit status is nonzero if any
// selected criterion fails.

#include "sgqst/sgqst.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace sgqst;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

LearnerConfig learner(std::size_t d, std::uint64_t n, std::uint64_t k) {
    LearnerConfig c;
    c.d = d;
    c.shots = n;
    c.iterations = k;
    return c;
}

// 1. every output of 500 randomized runs is a valid density matrix
Outcome validity() {
    Stopwatch clock;
    const std::size_t dims[] = {2, 3, 4};
    const double lambdas[] = {0.0, 0.2, 1.0};
    RngHandle master(0xACC1, 0);
    int invalid = 0;
    for (int run = 0; run < 500; ++run) {
        const std::size_t d = dims[run % 3];
        const bool exact = (run / 3) % 2 == 0;
        const double lambda = lambdas[(run / 6) % 3];
        RngHandle rng = master.split(static_cast<std::uint64_t>(run));
        RngHandle srng = rng.split(0);
        const auto rho = ginibre_mixed_state(d, 1 + rng.next_u64() % d, srng);
        MeasurementDevice dev(rho, exact ? MeasurementMode::exact(100) : MeasurementMode::sampled(100), lambda,
                              rng.split(1));
        RngHandle lrng = rng.split(2);
        auto cfg = learner(d, 100, 50);
        if (run % 2 == 1) cfg.normalization = Normalization::NoiseAware;
        const auto res = learn_state(dev, cfg, lrng);
        if (!validate_density(res.rho_hat.matrix()).report.ok()) ++invalid;
    }
    const double t = clock.seconds();
    return {invalid == 0 && t < 300.0, std::to_string(invalid) + " invalid of 500, " + fmt(t) + " s"};
}

// 2. top eigenpair agrees with the eigendecomposition oracle
Outcome oracle_equivalence() {
    Stopwatch clock;
    RngHandle srng(0xACC2, 0);
    std::vector<double> fid, dp;
    std::uint64_t trial = 0;
    while (fid.size() < 50) {
        const auto rho = ginibre_mixed_state(2, 2, srng);
        const auto truth = hermitian_eig(rho);
        if (truth.values[0] - truth.values[1] < 0.2) continue;
        MeasurementDevice dev(rho, MeasurementMode::exact(1000), 0.0, RngHandle(0xACC2, 1000 + trial));
        RngHandle rng(0xACC2, 1 + trial++);
        const auto res = learn_state(dev, learner(2, 1000, 2000), rng);
        fid.push_back(overlap(res.spectrum.vectors[0], truth.vectors[0]));
        dp.push_back(std::abs(res.spectrum.values[0] - truth.values[0]));
    }
    const double mf = median(fid), md = median(dp), t = clock.seconds();
    return {mf >= 0.99 && md <= 0.02 && t < 120.0,
            "median fidelity " + fmt(mf) + ", median |dp1| " + fmt(md) + ", " + fmt(t) + " s"};
}

// 3. pure states: a single eigenvector and near-perfect reconstruction
Outcome pure_state_reduction() {
    Stopwatch clock;
    RngHandle srng(0xACC3, 0);
    int rank_one = 0;
    std::vector<double> infid;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const auto rho = DensityMatrix::pure(haar_random_pure(2, srng));
        MeasurementDevice dev(rho, MeasurementMode::exact(1000), 0.0, RngHandle(0xACC3, 1000 + trial));
        RngHandle rng(0xACC3, 1 + trial);
        const auto res = learn_state(dev, learner(2, 1000, 500), rng);
        if (res.learned_rank == 1) ++rank_one;
        infid.push_back(infidelity(rho, res.rho_hat));
    }
    const double mi = median(infid), t = clock.seconds();
    return {rank_one >= 45 && mi <= 1e-3 && t < 60.0,
            "rank one in " + std::to_string(rank_one) + "/50, median infidelity " + fmt(mi) + ", " + fmt(t) + " s"};
}

ExperimentConfig experiment(std::size_t d, std::uint64_t n, std::uint64_t k, std::uint64_t trials,
                            std::uint64_t seed) {
    ExperimentConfig c;
    c.d = d;
    c.shots = n;
    c.iterations = k;
    c.trials = trials;
    c.seed = seed;
    c.checkpoints = {k * d};
    return c;
}

// 4. more copies and more iterations both lower the infidelity (d = 2)
Outcome shots_and_iterations() {
    Stopwatch clock;
    struct Series {
        std::string label;
        double at10, at300;
    };
    std::vector<Series> series;
    for (std::uint64_t n : {10, 100, 1000, 0}) {
        auto c = experiment(2, n == 0 ? 1000 : n, 300, 50, 0xACC4);
        if (n == 0) c.mode = ModeKind::Exact;
        c.checkpoints = {10, 100, 300};
        const auto rep = run_experiment(c);
        series.push_back({n == 0 ? "exact" : "N=" + std::to_string(n), rep.checkpoints[0].median,
                          rep.checkpoints[2].median});
    }
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0 && !(series[i - 1].at300 > series[i].at300)) pass = false;
        if (!(series[i].at300 < series[i].at10)) pass = false;
        detail += series[i].label + " " + fmt(series[i].at10) + "->" + fmt(series[i].at300) + "; ";
    }
    const double t = clock.seconds();
    pass = pass && t < 600.0;
    return {pass, detail + fmt(t) + " s"};
}

// 5. larger dimension is no easier at fixed N and K
Outcome dimension_scaling() {
    Stopwatch clock;
    std::vector<double> med;
    std::string detail;
    for (std::size_t d : {2, 4, 6}) {
        const auto rep = run_experiment(experiment(d, 1000, 300, 25, 0xACC5));
        med.push_back(rep.final_summary.median);
        detail += "d=" + std::to_string(d) + " " + fmt(med.back()) + "; ";
    }
    const double t = clock.seconds();
    return {med[0] <= med[1] && med[1] <= med[2] && t < 1200.0, detail + fmt(t) + " s"};
}

// 6. noisy readout with noise-aware normalization beats the I/2 guess
Outcome noise_robustness() {
    Stopwatch clock;
    auto c = experiment(2, 1000, 300, 25, 0xACC6);
    c.lambda = 0.2;
    c.normalization = Normalization::NoiseAware;
    const auto rep = run_experiment(c);
    std::vector<double> guess;
    for (std::uint64_t t = 0; t < c.trials; ++t) {
        guess.push_back(infidelity(trial_state(c, t), DensityMatrix::maximally_mixed(2)));
    }
    const double learned = rep.final_summary.median, baseline = median(guess), t = clock.seconds();
    return {learned < baseline && t < 300.0,
            "learned " + fmt(learned) + " vs maximally mixed " + fmt(baseline) + ", " + fmt(t) + " s"};
}

// 7. copy ledger equals N (d (2K + 1) + 1) exactly
Outcome budget_exactness() {
    RngHandle rng(0xACC7, 0);
    int exact = 0;
    std::string misses;
    for (int i = 0; i < 20; ++i) {
        const std::size_t d = 2 + rng.next_u64() % 5;
        const std::uint64_t n = 1 + rng.next_u64() % 500;
        const std::uint64_t k = 1 + rng.next_u64() % 60;
        RngHandle srng = rng.split(static_cast<std::uint64_t>(i));
        const auto rho = ginibre_mixed_state(d, d, srng);
        MeasurementDevice dev(rho, MeasurementMode::sampled(n), 0.0, srng.split(1));
        RngHandle lrng = srng.split(2);
        const auto res = learn_state(dev, learner(d, n, k), lrng);
        const std::uint64_t expected = n * (d * (2 * k + 1) + 1);
        if (budget(dev) == expected && res.copies_used == expected) {
            ++exact;
        } else {
            misses += " (d=" + std::to_string(d) + " N=" + std::to_string(n) + " K=" + std::to_string(k) +
                      ": " + std::to_string(budget(dev)) + " != " + std::to_string(expected) + ")";
        }
    }
    return {exact == 20, std::to_string(exact) + "/20 exact" + misses};
}

// 8. core unit/property checks, recomputed here from first principles
Outcome unit_bundle() {
    std::vector<std::string> failed;
    auto check = [&](bool ok, const char *name) {
        if (!ok) failed.emplace_back(name);
    };

    // noise matrix: entries (1 - lambda) delta + lambda / d
    bool stochastic = true;
    for (std::size_t d = 2; d <= 16; ++d) {
        for (double lambda : {0.0, 0.2, 0.7, 1.0}) {
            const auto m = stochastic_matrix(NoiseModel(lambda, d));
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                stochastic = stochastic && std::abs(m.row(i).sum() - 1.0) < 1e-12 && std::abs(m.col(i).sum() - 1.0) < 1e-12;
                stochastic = stochastic && m.row(i).minCoeff() >= 0.0;
            }
        }
    }
    check(stochastic, "doubly stochastic noise matrix");

    bool unbiased = true;
    for (std::size_t p : {2, 3, 5, 7, 11}) {
        const auto set = build_initializer_bases(p);
        unbiased = unbiased && set.bases.size() == p + 1 && set.exact_count == p + 1;
        for (std::size_t a = 0; a < set.bases.size(); ++a) {
            for (std::size_t b = 0; b < set.bases.size(); ++b) {
                for (std::size_t i = 0; i < p; ++i) {
                    for (std::size_t j = 0; j < p; ++j) {
                        const double want = a == b ? (i == j ? 1.0 : 0.0) : 1.0 / static_cast<double>(p);
                        unbiased = unbiased && std::abs(overlap(set.bases[a][i], set.bases[b][j]) - want) < 1e-10;
                    }
                }
            }
        }
    }
    check(unbiased, "MUB overlaps 1/d for prime d");

    {
        RngHandle rng(0xACC8, 0);
        bool ok = true;
        for (int t = 0; t < 200; ++t) {
            const std::size_t d = 2 + t % 4;
            const auto a = ginibre_mixed_state(d, 1 + t % d, rng);
            const auto b = ginibre_mixed_state(d, 1 + (t + 1) % d, rng);
            ok = ok && infidelity(a, a) < 1e-8 && std::abs(infidelity(a, b) - infidelity(b, a)) < 1e-6;
            const auto psi = StateVector::basis(d, 0), phi = StateVector::basis(d, 1);
            ok = ok && std::abs(infidelity(DensityMatrix::pure(psi), DensityMatrix::pure(phi)) - 1.0) < 1e-10;
        }
        check(ok, "infidelity identity/symmetry/orthogonality");
    }

    {
        const auto g1 = gains(1);
        const auto g100 = gains(100);
        check(g1.first == 1.0 && g1.second == 0.1, "gains at k=1");
        check(std::abs(g100.first - std::exp(-0.602 * std::log(100.0))) < 1e-12 &&
                  std::abs(g100.first - 0.06252) < 1e-4 && std::abs(g100.second - 0.06281) < 1e-4,
              "gains at k=100");
    }

    {
        RngHandle rng(0xACC9, 0);
        constexpr double kBeta = 1e-4;
        int agree = 0;
        for (int t = 0; t < 1000; ++t) {
            const std::size_t d = 2 + t % 5;
            const auto rho = ginibre_mixed_state(d, 1 + t % d, rng);
            const auto phi = haar_random_pure(d, rng);
            const auto delta = perturbation_vector(d, rng);
            MeasurementDevice dev(rho, MeasurementMode::exact(1), 0.0, RngHandle(0, 0));
            const auto etas = perturbed_states(phi, delta, kBeta);
            const double mp = deflated_mu(dev, etas->first, {}), mm = deflated_mu(dev, etas->second, {});
            const auto g = spsa_gradient(mp, mm, kBeta, delta);
            const CVector &v = phi.amplitudes();
            const double f = v.dot(rho.matrix() * v).real();
            const double dir = 2.0 * delta.entries().dot(rho.matrix() * v).real() - 2.0 * f * delta.entries().dot(v).real();
            if ((g.entries().dot(delta.entries()).real() > 0) == (dir > 0)) ++agree;
        }
        check(agree >= 990, "SPSA gradient sign agreement");
    }

    std::string detail = failed.empty() ? "all checks passed" : "failed:";
    for (const auto &f : failed) detail += " [" + f + "]";
    return {failed.empty(), detail};
}

// 9. byte-identical desk CSV for 1, 2 and 8 workers
Outcome thread_determinism() {
    Stopwatch clock;
    auto csv_for = [](unsigned threads) {
        std::vector<ExperimentReport> reps;
        for (const auto &c : figure_preset("fig2", "desk", 7)) reps.push_back(run_experiment(c, threads));
        return to_csv(reps);
    };
    const std::string one = csv_for(1), two = csv_for(2), eight = csv_for(8);
    const bool same = one == two && one == eight;
    return {same, std::string(same ? "identical" : "different") + " CSV (" + std::to_string(one.size()) +
                      " bytes), " + fmt(clock.seconds()) + " s"};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance suite"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"validity of every estimate", validity},
        {"oracle eigenpair equivalence", oracle_equivalence},
        {"pure-state reduction", pure_state_reduction},
        {"shots and iterations ordering", shots_and_iterations},
        {"dimension scaling", dimension_scaling},
        {"noise robustness", noise_robustness},
        {"budget exactness", budget_exactness},
        {"unit and property checks", unit_bundle},
        {"thread-count determinism", thread_determinism},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << i + 1 << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
                  << o.detail << std::endl;
    }
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
