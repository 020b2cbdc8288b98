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

#pragma once

/// \file harness.hpp
/// Seeded Monte-Carlo trial ensembles and the figure presets.
///
/// Trial t of an experiment draws everything from RngHandle(seed, t): the
/// state from split(0), shot noise from split(1), and the learner's own
/// randomness from split(2). Trials therefore do not depend on each other or
/// on the number of worker threads, and configs sharing a seed, d and rank
/// see the same states.

#include "sgqst/core.hpp"
#include "sgqst/learner.hpp"
#include "sgqst/measurement.hpp"
#include "sgqst/metrics.hpp"
#include "sgqst/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace sgqst {

struct ExperimentConfig {
    int config_id = 0;
    std::size_t d = 2;
    std::uint64_t shots = 1000;
    std::uint64_t iterations = 300;
    std::uint64_t trials = 1;
    double lambda = 0.0;
    ModeKind mode = ModeKind::Shots;
    double epsilon = 1e-4;
    Normalization normalization = Normalization::Standard;
    std::uint64_t seed = 1;
    /// Cumulative SPSA iteration indices (across eigenvector phases).
    std::vector<std::uint64_t> checkpoints;
    /// Rank of the random states; 0 means full rank.
    std::size_t rank = 0;
    /// Fixed truth state used by every trial instead of a random draw.
    std::optional<DensityMatrix> truth;
    std::string preset;
    bool reduced_scale = false;

    [[nodiscard]] std::size_t state_rank() const { return rank == 0 ? d : rank; }

    void validate() const {
        if (d < 2) throw std::invalid_argument("experiment: d must be >= 2");
        if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
        if (shots < 1) throw std::invalid_argument("experiment: N must be >= 1");
        if (iterations < 1) throw std::invalid_argument("experiment: K must be >= 1");
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("experiment: lambda must lie in [0, 1]");
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("experiment: epsilon must lie in (0, 1)");
        if (state_rank() > d) throw std::invalid_argument("experiment: rank must be in 1..d");
        if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
            std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
            throw std::invalid_argument("experiment: checkpoints must be strictly ascending");
        }
        if (!checkpoints.empty() && (checkpoints.front() < 1 || checkpoints.back() > iterations * d)) {
            throw std::invalid_argument("experiment: checkpoints must lie in 1..K*d");
        }
        if (truth && truth->dim() != d) throw std::invalid_argument("experiment: truth state has wrong dimension");
    }

    [[nodiscard]] LearnerConfig learner_config() const {
        LearnerConfig cfg;
        cfg.d = d;
        cfg.shots = shots;
        cfg.iterations = iterations;
        cfg.epsilon = epsilon;
        cfg.normalization = normalization;
        cfg.seed = seed;
        return cfg;
    }
};

struct CheckpointValue {
    std::uint64_t iteration;
    double infidelity;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::vector<CheckpointValue> checkpoints;
    double final_infidelity = 0.0;
    std::uint64_t copies_used = 0;
    std::size_t r_hat = 0;
    std::size_t learned_rank = 0;
};

struct CheckpointSummary {
    std::uint64_t iteration;
    double median;
    double q25;
    double q75;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CheckpointSummary> checkpoints;
    /// Summary of final infidelities; `iteration` holds K*d.
    CheckpointSummary final_summary{};
    std::vector<TrialRecord> trials;
    std::uint64_t total_copies = 0;
    double wall_seconds = 0.0;
};

/// Worker count: `requested` if non-zero, else SGQST_THREADS if set and
/// non-zero, else the hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char *env = std::getenv("SGQST_THREADS")) {
        char *end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

inline DensityMatrix trial_state(const ExperimentConfig &cfg, std::uint64_t trial) {
    if (cfg.truth) return *cfg.truth;
    RngHandle rng = RngHandle(cfg.seed, trial).split(0);
    return ginibre_mixed_state(cfg.d, cfg.state_rank(), rng);
}

/// One trial: draw the state, run the learner, score every checkpoint.
inline TrialRecord run_trial(const ExperimentConfig &cfg, std::uint64_t trial) {
    const RngHandle base(cfg.seed, trial);
    const DensityMatrix rho = trial_state(cfg, trial);
    const MeasurementMode mode =
        cfg.mode == ModeKind::Exact ? MeasurementMode::exact(cfg.shots) : MeasurementMode::sampled(cfg.shots);
    MeasurementDevice dev(rho, mode, cfg.lambda, base.split(1));
    RngHandle learner_rng = base.split(2);

    TrialRecord rec;
    rec.trial = trial;
    for (auto c : cfg.checkpoints) rec.checkpoints.push_back({c, 0.0});
    std::size_t next = 0;
    LearnObserver observer;
    if (!cfg.checkpoints.empty()) {
        observer = [&](const IterationSnapshot &snap) {
            if (next < cfg.checkpoints.size() && snap.cumulative == cfg.checkpoints[next]) {
                rec.checkpoints[next].infidelity = infidelity(rho, provisional_estimate(snap));
                ++next;
            }
        };
    }
    const TomographyResult res = learn_state(dev, cfg.learner_config(), learner_rng, observer);

    rec.final_infidelity = infidelity(rho, res.rho_hat);
    rec.copies_used = res.copies_used;
    rec.r_hat = res.r_hat;
    rec.learned_rank = res.learned_rank;
    // At or after the last iteration the estimate is the finished one.
    for (auto &cp : rec.checkpoints) {
        if (cp.iteration >= res.total_iterations) cp.infidelity = rec.final_infidelity;
    }
    return rec;
}

inline CheckpointSummary summarize(std::uint64_t iteration, const std::vector<double> &values) {
    const double qs[] = {0.25, 0.75};
    const auto q = quantiles(values, qs);
    return {iteration, median(values), q[0], q[1]};
}

/// Runs every trial of `cfg` on a pool of `threads` workers (0 = resolve via
/// SGQST_THREADS / hardware) and folds the results in trial order.
inline ExperimentReport run_experiment(const ExperimentConfig &cfg, unsigned threads = 0) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t n = cfg.trials;
    std::vector<std::optional<TrialRecord>> records(n);
    std::vector<std::string> errors(n);
    std::atomic<std::uint64_t> cursor{0};

    auto worker = [&] {
        for (std::uint64_t t = cursor++; t < n; t = cursor++) {
            try {
                records[t] = run_trial(cfg, t);
            } catch (const std::exception &e) {
                errors[t] = e.what();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), n));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    ExperimentReport report;
    report.config = cfg;
    for (std::uint64_t t = 0; t < n; ++t) {
        if (!records[t]) {
            std::ostringstream os;
            os << "config " << cfg.config_id << " trial " << t << " failed: " << errors[t];
            throw std::runtime_error(os.str());
        }
        report.total_copies += records[t]->copies_used;
        report.trials.push_back(std::move(*records[t]));
    }
    for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
        std::vector<double> vals;
        for (const auto &tr : report.trials) vals.push_back(tr.checkpoints[c].infidelity);
        report.checkpoints.push_back(summarize(cfg.checkpoints[c], vals));
    }
    std::vector<double> finals;
    for (const auto &tr : report.trials) finals.push_back(tr.final_infidelity);
    report.final_summary = summarize(cfg.iterations * cfg.d, finals);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

inline const std::vector<std::string> &figure_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4"};
    return names;
}

/// Experiment grids for the three figure designs. "desk" scale cuts the trial
/// counts (1000 -> 50 for fig2, 100 -> 25 for fig3 and fig4) and caps K.
inline std::vector<ExperimentConfig> figure_preset(const std::string &name, const std::string &scale,
                                                   std::uint64_t seed = 1) {
    if (scale != "full" && scale != "desk") {
        throw std::invalid_argument("unknown scale '" + scale + "' (expected full|desk)");
    }
    const bool desk = scale == "desk";
    std::vector<ExperimentConfig> out;
    auto base = [&](std::size_t d) {
        ExperimentConfig c;
        c.config_id = static_cast<int>(out.size());
        c.d = d;
        c.mode = ModeKind::Shots;
        c.seed = seed;
        c.preset = name + "/" + scale;
        c.reduced_scale = desk;
        return c;
    };
    // j*K for every phase, preceded by a few early points within phase one.
    auto phase_checkpoints = [](std::uint64_t k, std::size_t d) {
        std::vector<std::uint64_t> cps;
        for (std::uint64_t e : {k / 30, k / 10, k / 3}) {
            if (e >= 1 && (cps.empty() || e > cps.back())) cps.push_back(e);
        }
        for (std::uint64_t j = 1; j <= d; ++j) cps.push_back(j * k);
        return cps;
    };

    if (name == "fig2") {
        const std::uint64_t k = desk ? 300 : 1000;
        for (std::uint64_t n : {10, 100, 1000, 10000}) {
            ExperimentConfig c = base(2);
            c.shots = n;
            c.iterations = k;
            c.trials = desk ? 50 : 1000;
            c.checkpoints = phase_checkpoints(k, 2);
            out.push_back(std::move(c));
        }
    } else if (name == "fig3") {
        const std::uint64_t k = desk ? 300 : 1000;
        for (std::size_t d = 2; d <= 8; ++d) {
            ExperimentConfig c = base(d);
            c.shots = 1000;
            c.iterations = k;
            c.trials = desk ? 25 : 100;
            c.checkpoints = phase_checkpoints(k, d);
            out.push_back(std::move(c));
        }
    } else if (name == "fig4") {
        // K = (N_tot - 1e4) / (N d) with the same N_tot for every d.
        const std::uint64_t n = 1000;
        const std::uint64_t n_tot = desk ? 10'000 + 600'000 : 10'000 + 2'400'000;
        for (double lambda : {0.0, 0.2}) {
            for (std::size_t d : {2, 4, 6, 8}) {
                ExperimentConfig c = base(d);
                c.shots = n;
                c.iterations = (n_tot - 10'000) / (n * d);
                c.lambda = lambda;
                c.normalization = lambda > 0.0 ? Normalization::NoiseAware : Normalization::Standard;
                c.trials = desk ? 25 : 100;
                c.checkpoints = phase_checkpoints(c.iterations, d);
                out.push_back(std::move(c));
            }
        }
    } else {
        std::string valid;
        for (const auto &v : figure_names()) valid += (valid.empty() ? "" : ", ") + v;
        throw std::invalid_argument("unknown figure preset '" + name + "' (valid: " + valid + ")");
    }
    return out;
}

} // namespace sgqst
