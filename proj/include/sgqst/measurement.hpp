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

/// \file measurement.hpp
/// Simulated measurement device: a hidden density matrix answering rank-1
/// projector and full-basis queries, exactly or from finite shots, through a
/// uniform readout-noise model, while counting consumed copies.

#include "sgqst/core.hpp"
#include "sgqst/random.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgqst {

/// Readout noise with strength lambda: outcome probabilities are mixed with the
/// uniform distribution, p -> (1 - lambda) p + lambda / d.
struct NoiseModel {
    double lambda = 0.0;
    std::size_t d = 2;

    NoiseModel(double lambda_, std::size_t d_) : lambda(lambda_), d(d_) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw std::invalid_argument("NoiseModel: lambda must lie in [0, 1]");
        }
        if (d < 2) throw DimensionError("NoiseModel: dimension must be at least 2");
    }

    [[nodiscard]] double apply(double p) const {
        return (1.0 - lambda) * p + lambda / static_cast<double>(d);
    }
};

/// The doubly stochastic readout matrix: 1 - lambda + lambda/d on the diagonal,
/// lambda/d elsewhere.
inline Eigen::MatrixXd stochastic_matrix(const NoiseModel &model) {
    const auto n = static_cast<Eigen::Index>(model.d);
    const double off = model.lambda / static_cast<double>(model.d);
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, off);
    m.diagonal().setConstant(1.0 - model.lambda + off);
    return m;
}

/// (1 - lambda) rho + lambda I / d
inline DensityMatrix depolarize(const DensityMatrix &rho, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("depolarize: lambda must lie in [0, 1]");
    }
    const auto n = static_cast<Eigen::Index>(rho.dim());
    const CMatrix m = (1.0 - lambda) * rho.matrix() +
                      (lambda / static_cast<double>(rho.dim())) * CMatrix::Identity(n, n);
    return DensityMatrix::from_matrix(m);
}

enum class ModeKind { Exact, Shots };

inline const char *to_string(ModeKind k) { return k == ModeKind::Exact ? "exact" : "shots"; }

inline ModeKind parse_mode(const std::string &s) {
    if (s == "exact") return ModeKind::Exact;
    if (s == "shots") return ModeKind::Shots;
    throw std::invalid_argument("unknown measurement mode '" + s + "' (expected exact|shots)");
}

/// Exact probabilities or N-shot frequencies. Exact mode keeps a nominal N
/// so its copy ledger matches a shots run of the same configuration.
struct MeasurementMode {
    ModeKind kind = ModeKind::Exact;
    std::uint64_t shots = 1;

    static MeasurementMode exact(std::uint64_t nominal_shots) { return {ModeKind::Exact, nominal_shots}; }
    static MeasurementMode sampled(std::uint64_t n) { return {ModeKind::Shots, n}; }
};

class MeasurementDevice {
public:
    MeasurementDevice(DensityMatrix rho, MeasurementMode mode, double lambda, RngHandle rng)
        : rho_(std::move(rho)), mode_(mode), noise_(lambda, rho_.dim()), rng_(std::move(rng)) {
        if (mode_.shots < 1) throw std::invalid_argument("MeasurementDevice: shots must be >= 1");
    }

    [[nodiscard]] std::size_t dim() const { return rho_.dim(); }
    [[nodiscard]] const MeasurementMode &mode() const { return mode_; }
    [[nodiscard]] std::uint64_t shots() const { return mode_.shots; }
    [[nodiscard]] const NoiseModel &noise() const { return noise_; }
    [[nodiscard]] std::uint64_t copies_used() const { return ledger_; }

    /// Two-outcome measurement {|phi><phi|, I - |phi><phi|} on the configured
    /// number of copies; returns the (noisy) frequency of the first outcome.
    double noisy_expectation(const StateVector &phi) { return noisy_expectation(phi, mode_.shots); }

    /// As above but on an explicit number of copies.
    double noisy_expectation(const StateVector &phi, std::uint64_t copies) {
        if (copies == 0) throw std::invalid_argument("noisy_expectation: zero copies");
        const double p = std::clamp(noise_.apply(expectation(rho_, phi)), 0.0, 1.0);
        ledger_ += copies;
        if (mode_.kind == ModeKind::Exact) return p;
        return static_cast<double>(sample_binomial(copies, p, rng_)) / static_cast<double>(copies);
    }

    /// d-outcome measurement in an orthonormal basis on N copies. Outcome
    /// probabilities pass through the readout matrix before sampling.
    std::vector<double> measure_basis(const std::vector<StateVector> &basis) {
        if (basis.size() != dim()) {
            throw DimensionError("measure_basis: basis must contain d vectors");
        }
        const auto n = static_cast<Eigen::Index>(dim());
        Eigen::VectorXd ideal(n);
        for (Eigen::Index j = 0; j < n; ++j) ideal[j] = expectation(rho_, basis[static_cast<std::size_t>(j)]);
        const Eigen::VectorXd noisy = stochastic_matrix(noise_) * ideal;
        std::vector<double> probs(noisy.data(), noisy.data() + n);
        for (double &p : probs) p = std::clamp(p, 0.0, 1.0);
        ledger_ += mode_.shots;
        if (mode_.kind == ModeKind::Exact) return probs;
        const auto counts = sample_multinomial(mode_.shots, probs, rng_);
        std::vector<double> freq(counts.size());
        for (std::size_t j = 0; j < counts.size(); ++j) {
            freq[j] = static_cast<double>(counts[j]) / static_cast<double>(mode_.shots);
        }
        return freq;
    }

private:
    DensityMatrix rho_;
    MeasurementMode mode_;
    NoiseModel noise_;
    RngHandle rng_;
    std::uint64_t ledger_ = 0;
};

inline std::uint64_t budget(const MeasurementDevice &dev) { return dev.copies_used(); }

/// Copy count of a complete run: N(d(2K+1)+1).
inline std::uint64_t nominal_budget(std::uint64_t n, std::uint64_t d, std::uint64_t k) {
    return n * (d * (2 * k + 1) + 1);
}

} // namespace sgqst
