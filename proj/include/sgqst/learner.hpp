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

/// \file learner.hpp
/// Self-guided learning of a mixed state, one eigenvector at a time.
///
/// Each eigenvector is found by SPSA ascent of <phi|rho|phi> over unit
/// vectors. Eigenvector i >= 2 starts from a random vector in the orthogonal
/// complement of the ones already found and maximizes the deflated objective
///
///     mu(eta) = <eta|rho|eta> - sum_j |<eta|psi_j>|^2 ,
///
/// whose maximizer is the next eigenvector. The eigenvalue of each phase is
/// the sample average of the raw (undeflated) measured expectations at both
/// perturbed points over all K iterations. Learning stops once the estimated
/// eigenvalues sum past 1 - epsilon or d eigenvectors are known; the learned
/// vectors are then orthonormalized and the eigenvalues finalized.
///
/// A full run consumes N(d(2K+1)+1) copies: N per initializer basis, 2N per
/// SPSA iteration, and, when stopping early at rank r, 2NK(d - r) more copies
/// to re-measure the eigenvalues in the learned basis.

#include "sgqst/core.hpp"
#include "sgqst/measurement.hpp"
#include "sgqst/mub.hpp"
#include "sgqst/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgqst {

/// alpha_k = alpha_scale / k^alpha_exponent, beta_k = beta_scale / k^beta_exponent.
struct GainSchedule {
    double alpha_scale = 1.0;
    double alpha_exponent = 0.602;
    double beta_scale = 0.1;
    double beta_exponent = 0.101;

    [[nodiscard]] std::pair<double, double> at(std::uint64_t k) const {
        if (k == 0) throw std::invalid_argument("gains: iteration index starts at 1");
        const double kd = static_cast<double>(k);
        return {alpha_scale / std::pow(kd, alpha_exponent), beta_scale / std::pow(kd, beta_exponent)};
    }
};

/// Standard gains (alpha_k, beta_k) at iteration k >= 1.
inline std::pair<double, double> gains(std::uint64_t k) { return GainSchedule{}.at(k); }

enum class Normalization { Standard, NoiseAware };

inline const char *to_string(Normalization n) {
    return n == Normalization::Standard ? "standard" : "noise-aware";
}

inline Normalization parse_normalization(const std::string &s) {
    if (s == "standard") return Normalization::Standard;
    if (s == "noise-aware") return Normalization::NoiseAware;
    throw std::invalid_argument("unknown normalization '" + s + "' (expected standard|noise-aware)");
}

struct LearnerConfig {
    std::size_t d = 2;
    std::uint64_t shots = 1000;      // N
    std::uint64_t iterations = 100;  // K
    double epsilon = 1e-4;
    Normalization normalization = Normalization::Standard;
    std::uint64_t seed = 0;
    GainSchedule gains{};
    bool record_trace = false;

    void validate() const {
        if (d < 2) throw std::invalid_argument("LearnerConfig: d must be >= 2");
        if (shots < 1) throw std::invalid_argument("LearnerConfig: N must be >= 1");
        if (iterations < 1) throw std::invalid_argument("LearnerConfig: K must be >= 1");
        if (!(epsilon > 0.0 && epsilon < 1.0)) {
            throw std::invalid_argument("LearnerConfig: epsilon must lie in (0, 1)");
        }
    }
};

struct IterationRecord {
    std::uint64_t k;
    double alpha;
    double beta;
    double mu_plus;   // deflated
    double mu_minus;  // deflated
    double running_value;
};

struct EigenpairEstimate {
    StateVector vector;
    double value = 0.0;
    std::uint64_t measured_iterations = 0;
    std::uint64_t skipped_iterations = 0;
    std::vector<IterationRecord> trace;
};

/// Maximum number of delta redraws before an iteration is skipped.
inline constexpr int kMaxResamples = 8;

/// eta+- = normalize(phi +- beta delta); nullopt when either side cancels to
/// (numerically) zero and delta must be redrawn.
inline std::optional<std::pair<StateVector, StateVector>>
perturbed_states(const StateVector &phi, const RawVector &delta, double beta) {
    detail::require_same_dim(static_cast<std::ptrdiff_t>(phi.dim()),
                             static_cast<std::ptrdiff_t>(delta.dim()), "perturbed_states");
    if (!(beta > 0.0)) throw std::invalid_argument("perturbed_states: beta must be positive");
    auto plus = StateVector::try_normalized(phi.amplitudes() + beta * delta.entries(), 1e-10);
    auto minus = StateVector::try_normalized(phi.amplitudes() - beta * delta.entries(), 1e-10);
    if (!plus || !minus) return std::nullopt;
    return std::make_pair(*std::move(plus), *std::move(minus));
}

/// Measured expectation at eta and its deflated counterpart.
struct DeflatedMeasurement {
    double raw;
    double deflated;
};

namespace detail {

inline double overlap_sum(const StateVector &eta, std::span<const StateVector> prior) {
    double s = 0.0;
    for (const auto &psi : prior) s += std::norm(psi.amplitudes().dot(eta.amplitudes()));
    return s;
}

inline void require_orthonormal(std::span<const StateVector> vs, const char *what) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (std::abs(inner_product(vs[i], vs[j])) > kSpectralTolerance) {
                throw std::invalid_argument(std::string(what) + ": prior vectors are not orthonormal");
            }
        }
    }
}

} // namespace detail

/// One N-copy measurement at eta; the overlap subtraction is classical.
inline DeflatedMeasurement measure_deflated(MeasurementDevice &dev, const StateVector &eta,
                                            std::span<const StateVector> prior) {
    const double raw = dev.noisy_expectation(eta);
    return {raw, raw - detail::overlap_sum(eta, prior)};
}

inline double deflated_mu(MeasurementDevice &dev, const StateVector &eta, std::span<const StateVector> prior) {
    detail::require_orthonormal(prior, "deflated_mu");
    return measure_deflated(dev, eta, prior).deflated;
}

/// ((mu+ - mu-) / (2 beta)) delta
inline RawVector spsa_gradient(double mu_plus, double mu_minus, double beta, const RawVector &delta) {
    if (!(beta > 0.0)) throw std::invalid_argument("spsa_gradient: beta must be positive");
    return ((mu_plus - mu_minus) / (2.0 * beta)) * delta;
}

/// normalize(phi + alpha g); nullopt signals a skipped update.
inline std::optional<StateVector> spsa_update(const StateVector &phi, const RawVector &gradient, double alpha) {
    detail::require_same_dim(static_cast<std::ptrdiff_t>(phi.dim()),
                             static_cast<std::ptrdiff_t>(gradient.dim()), "spsa_update");
    if (!(alpha >= 0.0)) throw std::invalid_argument("spsa_update: alpha must be non-negative");
    return StateVector::try_normalized(phi.amplitudes() + alpha * gradient.entries(), 1e-10);
}

/// Called after every SPSA iteration with (k, phi_k, q_k / 2k).
using EigenvectorObserver = std::function<void(std::uint64_t, const StateVector &, double)>;

/// K SPSA iterations from phi0 against the deflated objective. Consumes 2NK
/// copies (fewer only if an iteration had to be skipped).
inline EigenpairEstimate learn_eigenvector(MeasurementDevice &dev, const StateVector &phi0,
                                           std::span<const StateVector> prior, const LearnerConfig &cfg,
                                           RngHandle &rng, const EigenvectorObserver &observer = {}) {
    cfg.validate();
    detail::require_same_dim(static_cast<std::ptrdiff_t>(dev.dim()),
                             static_cast<std::ptrdiff_t>(phi0.dim()), "learn_eigenvector");
    detail::require_orthonormal(prior, "learn_eigenvector");

    const std::size_t d = dev.dim();
    EigenpairEstimate est{phi0, 0.0, 0, 0, {}};
    if (cfg.record_trace) est.trace.reserve(cfg.iterations);
    StateVector phi = phi0;
    double q = 0.0;

    for (std::uint64_t k = 1; k <= cfg.iterations; ++k) {
        const auto [alpha, beta] = cfg.gains.at(k);

        std::optional<std::pair<StateVector, StateVector>> etas;
        RawVector delta;
        for (int attempt = 0; attempt < kMaxResamples && !etas; ++attempt) {
            delta = perturbation_vector(d, rng);
            etas = perturbed_states(phi, delta, beta);
        }
        if (!etas) {
            ++est.skipped_iterations;
            if (observer) observer(k, phi, est.measured_iterations ? q / (2.0 * est.measured_iterations) : 0.0);
            continue;
        }

        const auto plus = measure_deflated(dev, etas->first, prior);
        const auto minus = measure_deflated(dev, etas->second, prior);
        q += plus.raw + minus.raw;
        ++est.measured_iterations;

        const RawVector g = spsa_gradient(plus.deflated, minus.deflated, beta, delta);
        if (auto next = spsa_update(phi, g, alpha)) {
            phi = *std::move(next);
        } else {
            ++est.skipped_iterations;
        }

        const double running = q / (2.0 * static_cast<double>(est.measured_iterations));
        if (cfg.record_trace) {
            est.trace.push_back({k, alpha, beta, plus.deflated, minus.deflated, running});
        }
        if (observer) observer(k, phi, running);
    }

    est.vector = phi;
    est.value = est.measured_iterations ? q / (2.0 * static_cast<double>(est.measured_iterations)) : 0.0;
    return est;
}

namespace detail {

/// Component of v orthogonal to the orthonormal set `basis` (two passes).
inline CVector project_out(CVector v, std::span<const StateVector> basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto &e : basis) v -= e.amplitudes() * e.amplitudes().dot(v);
    }
    return v;
}

} // namespace detail

/// Minimum squared residual norm for a vector to count as independent of the
/// preceding ones during Gram-Schmidt.
inline constexpr double kIndependenceThreshold = 1e-12;

/// Gram-Schmidt (QR with positive diagonal). Throws naming the first input
/// that is linearly dependent on its predecessors.
inline std::vector<StateVector> orthonormalize(std::span<const StateVector> vectors) {
    std::vector<StateVector> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (i > 0) {
            detail::require_same_dim(static_cast<std::ptrdiff_t>(vectors[0].dim()),
                                     static_cast<std::ptrdiff_t>(vectors[i].dim()), "orthonormalize");
        }
        const CVector r = detail::project_out(vectors[i].amplitudes(), out);
        if (r.squaredNorm() <= kIndependenceThreshold) {
            std::ostringstream os;
            os << "orthonormalize: vector " << i << " is linearly dependent on the preceding vectors";
            throw std::invalid_argument(os.str());
        }
        out.push_back(StateVector::normalized(r));
    }
    return out;
}

/// Random unit vector orthogonal to every vector in `prior` (which need not be
/// orthonormal; their span is what is excluded).
inline StateVector nullspace_init(std::span<const StateVector> prior, std::size_t d, RngHandle &rng) {
    if (prior.size() >= d) {
        throw std::invalid_argument("nullspace_init: prior vectors span the whole space");
    }
    std::vector<StateVector> basis;
    for (const auto &p : prior) {
        const CVector r = detail::project_out(p.amplitudes(), basis);
        if (r.squaredNorm() > kIndependenceThreshold) basis.push_back(StateVector::normalized(r));
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        const CVector r = detail::project_out(random_raw_vector(d, rng).entries(), basis);
        if (r.norm() >= 1e-8) return StateVector::normalized(r);
    }
    throw std::runtime_error("nullspace_init: could not draw a vector outside the prior span");
}

/// Final eigenvalues for the orthonormal learned basis.
///
/// Full rank: the learned values normalized to sum one. Rank r < d: each
/// basis vector is re-measured, sharing 2NK(d - r) copies evenly (remainder to
/// the lowest indices), then normalized. NoiseAware keeps the first value
/// as measured, divides the rest by their total S, truncates after the longest
/// prefix with sum <= 1 and renormalizes what is kept.
///
/// The returned spectrum is sorted descending and contains only retained pairs.
inline Spectrum finalize_eigenvalues(MeasurementDevice &dev, std::span<const StateVector> basis,
                                     std::span<const double> raw_values, std::size_t r_hat,
                                     const LearnerConfig &cfg) {
    if (r_hat != basis.size() || raw_values.size() != basis.size() || basis.empty()) {
        throw std::invalid_argument("finalize_eigenvalues: r_hat must equal the basis size");
    }
    detail::require_orthonormal(basis, "finalize_eigenvalues");
    const std::size_t d = dev.dim();

    std::vector<double> values(raw_values.begin(), raw_values.end());
    if (r_hat < d) {
        const std::uint64_t total = 2 * dev.shots() * cfg.iterations * (d - r_hat);
        const std::uint64_t each = total / r_hat;
        const std::uint64_t extra = total % r_hat;
        for (std::size_t i = 0; i < r_hat; ++i) {
            const std::uint64_t copies = each + (i < extra ? 1 : 0);
            if (copies > 0) values[i] = dev.noisy_expectation(basis[i], copies);
        }
    }
    for (double &v : values) v = std::max(v, 0.0);

    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("finalize_eigenvalues: all eigenvalue estimates are zero");

    std::size_t keep = values.size();
    if (cfg.normalization == Normalization::NoiseAware) {
        for (std::size_t i = 1; i < values.size(); ++i) values[i] /= total;
        double cumulative = 0.0;
        keep = 0;
        for (double v : values) {
            if (cumulative + v > 1.0 + 1e-12) break;
            cumulative += v;
            ++keep;
        }
        if (keep == 0) keep = 1;
        values.resize(keep);
    }
    const double kept = std::accumulate(values.begin(), values.end(), 0.0);
    if (!(kept > 0.0)) throw std::invalid_argument("finalize_eigenvalues: retained eigenvalues sum to zero");
    for (double &v : values) v /= kept;

    std::vector<std::size_t> order(keep);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    Spectrum s;
    for (auto i : order) {
        s.values.push_back(values[i]);
        s.vectors.push_back(basis[i]);
    }
    return s;
}

/// State of the learner after one SPSA iteration, for instrumentation.
struct IterationSnapshot {
    std::size_t phase;           // 1-based eigenvector index
    std::uint64_t k;             // iteration within the phase
    std::uint64_t cumulative;    // iterations across all phases
    const StateVector &current;  // phi_k
    double current_value;        // q_k / 2k
    std::span<const StateVector> prior_vectors;  // orthonormalized
    std::span<const double> prior_values;
};

using LearnObserver = std::function<void(const IterationSnapshot &)>;

/// Density matrix implied by a mid-run snapshot: the known eigenpairs plus the
/// current iterate, with any missing weight spread uniformly over the
/// orthogonal complement (or the weights normalized if they exceed one).
inline DensityMatrix provisional_estimate(const IterationSnapshot &snap) {
    const std::size_t d = snap.current.dim();
    std::vector<StateVector> vectors(snap.prior_vectors.begin(), snap.prior_vectors.end());
    std::vector<double> values(snap.prior_values.begin(), snap.prior_values.end());
    const CVector r = detail::project_out(snap.current.amplitudes(), vectors);
    if (r.squaredNorm() > kIndependenceThreshold) {
        vectors.push_back(StateVector::normalized(r));
        values.push_back(snap.current_value);
    }
    for (double &v : values) v = std::max(v, 0.0);
    double total = std::accumulate(values.begin(), values.end(), 0.0);

    const auto n = static_cast<Eigen::Index>(d);
    CMatrix m = CMatrix::Zero(n, n);
    CMatrix span = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const CMatrix p = vectors[i].projector();
        span += p;
        m += values[i] * p;
    }
    const std::size_t rest = d - vectors.size();
    if (total < 1.0 && rest > 0) {
        m += ((1.0 - total) / static_cast<double>(rest)) * (CMatrix::Identity(n, n) - span);
    } else if (total > 0.0) {
        m /= total;
    } else {
        return DensityMatrix::maximally_mixed(d);
    }
    return DensityMatrix::from_matrix(m);
}

struct TomographyResult {
    DensityMatrix rho_hat;
    /// Retained eigenpairs of rho_hat, descending.
    Spectrum spectrum;
    /// Number of retained eigenpairs.
    std::size_t r_hat = 0;
    /// Number of eigenvectors learned before the stopping rule fired.
    std::size_t learned_rank = 0;
    /// Per-phase estimates in learning order, before orthonormalization.
    std::vector<EigenpairEstimate> learned;
    std::uint64_t copies_used = 0;
    std::uint64_t total_iterations = 0;
    LearnerConfig config;
    BasisKind initializer_kind = BasisKind::CompleteMub;
    std::size_t initializer_basis = 0;
    std::size_t initializer_vector = 0;
    /// Learned vectors that collapsed onto earlier ones and were replaced.
    std::size_t replaced_vectors = 0;
};

/// Runs the complete learner against `dev`.
inline TomographyResult learn_state(MeasurementDevice &dev, const LearnerConfig &cfg, RngHandle &rng,
                                    const LearnObserver &observer = {}) {
    cfg.validate();
    if (dev.dim() != cfg.d) throw DimensionError("learn_state: device dimension does not match config");
    if (dev.shots() != cfg.shots) throw std::invalid_argument("learn_state: device N does not match config");
    const std::size_t d = cfg.d;

    const BasisSet bases = build_initializer_bases(d);
    const InitialVector init = select_initial_vector(dev, bases);

    std::vector<EigenpairEstimate> learned;
    std::vector<StateVector> ortho;  // Gram-Schmidt of the learned vectors, in order
    std::vector<double> values;
    std::size_t replaced = 0;
    std::uint64_t cumulative = 0;

    for (std::size_t phase = 1; phase <= d; ++phase) {
        const StateVector phi0 = phase == 1 ? init.vector : nullspace_init(ortho, d, rng);
        EigenvectorObserver inner;
        if (observer) {
            inner = [&](std::uint64_t k, const StateVector &phi, double value) {
                observer(IterationSnapshot{phase, k, cumulative + k, phi, value, ortho, values});
            };
        }
        EigenpairEstimate est = learn_eigenvector(dev, phi0, ortho, cfg, rng, inner);
        cumulative += cfg.iterations;

        const CVector r = detail::project_out(est.vector.amplitudes(), ortho);
        if (r.squaredNorm() > kIndependenceThreshold) {
            ortho.push_back(StateVector::normalized(r));
        } else {
            ++replaced;
            ortho.push_back(nullspace_init(ortho, d, rng));
        }
        values.push_back(est.value);
        learned.push_back(std::move(est));

        const double sum = std::accumulate(values.begin(), values.end(), 0.0);
        if (sum > 1.0 - cfg.epsilon) break;
    }

    const std::size_t learned_rank = learned.size();
    // `ortho` is the QR of the learned vectors (replacements aside); redo it
    // from scratch so the basis is exactly what orthonormalize() returns.
    std::vector<StateVector> columns;
    for (std::size_t i = 0; i < learned_rank; ++i) {
        const CVector r = detail::project_out(learned[i].vector.amplitudes(), std::span(ortho).first(i));
        columns.push_back(r.squaredNorm() > kIndependenceThreshold ? learned[i].vector : ortho[i]);
    }
    const std::vector<StateVector> basis = orthonormalize(columns);

    Spectrum spectrum = finalize_eigenvalues(dev, basis, values, learned_rank, cfg);
    DensityMatrix rho_hat = DensityMatrix::from_matrix(spectrum.reconstruct(d));

    TomographyResult result{std::move(rho_hat), std::move(spectrum), 0, learned_rank, std::move(learned),
                            budget(dev), cumulative, cfg, bases.kind, init.basis_index, init.vector_index,
                            replaced};
    result.r_hat = result.spectrum.size();
    return result;
}

/// Convenience overload drawing the learner's randomness from cfg.seed.
inline TomographyResult learn_state(MeasurementDevice &dev, const LearnerConfig &cfg) {
    RngHandle rng(cfg.seed, 0);
    return learn_state(dev, cfg, rng);
}

} // namespace sgqst
