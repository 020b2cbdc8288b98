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

/// \file mub.hpp
/// Mutually unbiased bases for the starting-point search.
///
/// Prime d gets the complete Wootters-Fields set (computational basis plus d
/// quadratic-phase bases). Composite d gets the unbiased tensor products of
/// its prime factors' sets, padded with fixed-seed Haar-random bases so that
/// there are always d + 1 bases. The padded bases are orthonormal but not
/// unbiased; `BasisSet::exact_count` says how many leading bases are.

#include "sgqst/core.hpp"
#include "sgqst/measurement.hpp"
#include "sgqst/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sgqst {

using Basis = std::vector<StateVector>;

enum class BasisKind { CompleteMub, TensorPadded };

inline const char *to_string(BasisKind k) {
    return k == BasisKind::CompleteMub ? "complete-mub" : "tensor-mub-padded";
}

struct BasisSet {
    std::vector<Basis> bases;
    /// Number of leading bases that are pairwise mutually unbiased.
    std::size_t exact_count = 0;
    BasisKind kind = BasisKind::CompleteMub;

    [[nodiscard]] std::size_t count() const { return bases.size(); }
    [[nodiscard]] std::size_t dim() const { return bases.empty() ? 0 : bases.front().size(); }
};

namespace detail {

inline bool is_prime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

inline std::vector<std::size_t> prime_factors(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t f = 2; f * f <= n; ++f) {
        while (n % f == 0) {
            out.push_back(f);
            n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// The p + 1 MUBs of a prime dimension as raw column vectors.
inline std::vector<std::vector<CVector>> prime_mub_vectors(std::size_t p) {
    const auto n = static_cast<Eigen::Index>(p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    std::vector<std::vector<CVector>> sets;

    std::vector<CVector> computational;
    for (Eigen::Index b = 0; b < n; ++b) computational.push_back(CVector::Unit(n, b));
    sets.push_back(std::move(computational));

    if (p == 2) {
        // X and Y eigenbases.
        const Complex phases[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
        for (const Complex ph : phases) {
            std::vector<CVector> basis;
            for (int b = 0; b < 2; ++b) {
                CVector v(2);
                v << scale, (b == 0 ? 1.0 : -1.0) * ph * scale;
                basis.push_back(v);
            }
            sets.push_back(std::move(basis));
        }
        return sets;
    }

    const double w = 2.0 * std::numbers::pi / static_cast<double>(p);
    for (std::size_t a = 0; a < p; ++a) {
        std::vector<CVector> basis;
        for (std::size_t b = 0; b < p; ++b) {
            CVector v(n);
            for (std::size_t j = 0; j < p; ++j) {
                const std::size_t e = (a * j % p * j + b * j) % p;
                v[static_cast<Eigen::Index>(j)] = std::polar(scale, w * static_cast<double>(e));
            }
            basis.push_back(v);
        }
        sets.push_back(std::move(basis));
    }
    return sets;
}

inline CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

} // namespace detail

/// d + 1 orthonormal bases used for the starting-point search.
inline BasisSet build_initializer_bases(std::size_t d) {
    if (d < 2) throw DimensionError("build_initializer_bases: dimension must be at least 2");
    BasisSet set;
    if (detail::is_prime(d)) {
        for (auto &raw : detail::prime_mub_vectors(d)) {
            Basis basis;
            for (auto &v : raw) basis.push_back(StateVector::normalized(v));
            set.bases.push_back(std::move(basis));
        }
        set.exact_count = set.bases.size();
        set.kind = BasisKind::CompleteMub;
        return set;
    }

    const auto factors = detail::prime_factors(d);
    std::vector<std::vector<std::vector<CVector>>> factor_sets;
    for (auto p : factors) factor_sets.push_back(detail::prime_mub_vectors(p));
    const std::size_t shared = *std::min_element(factors.begin(), factors.end()) + 1;

    // Basis l is the tensor product of basis l of every factor; any two such
    // products are unbiased because every factor pair is.
    for (std::size_t l = 0; l < shared; ++l) {
        std::vector<CVector> vectors{CVector::Ones(1)};
        for (const auto &fs : factor_sets) {
            std::vector<CVector> next;
            for (const auto &left : vectors)
                for (const auto &right : fs[l]) next.push_back(detail::kron(left, right));
            vectors = std::move(next);
        }
        Basis basis;
        for (auto &v : vectors) basis.push_back(StateVector::normalized(v));
        set.bases.push_back(std::move(basis));
    }
    set.exact_count = set.bases.size();

    RngHandle rng(0x4D55422D50414444ULL, d);
    while (set.bases.size() < d + 1) {
        const CMatrix u = haar_unitary(d, rng);
        Basis basis;
        for (Eigen::Index c = 0; c < u.cols(); ++c) basis.push_back(StateVector::normalized(u.col(c)));
        set.bases.push_back(std::move(basis));
    }
    set.kind = BasisKind::TensorPadded;
    return set;
}

struct InitialVector {
    StateVector vector;
    std::uint64_t copies_used = 0;
    std::size_t basis_index = 0;
    std::size_t vector_index = 0;
    double probability = 0.0;
};

/// Probabilities within this distance of the maximum count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// Measures every basis of `bases` on the device (N copies per basis) and
/// returns the basis state with the highest observed frequency. Ties go to the
/// lowest (basis, vector) index.
inline InitialVector select_initial_vector(MeasurementDevice &dev, const BasisSet &bases) {
    if (bases.dim() != dev.dim()) {
        throw DimensionError("select_initial_vector: basis dimension does not match device");
    }
    const std::uint64_t before = dev.copies_used();
    std::vector<std::vector<double>> probs;
    probs.reserve(bases.count());
    double best = -1.0;
    for (const auto &basis : bases.bases) {
        probs.push_back(dev.measure_basis(basis));
        for (double p : probs.back()) best = std::max(best, p);
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        for (std::size_t j = 0; j < probs[i].size(); ++j) {
            if (probs[i][j] >= best - kTieTolerance) {
                return {bases.bases[i][j], dev.copies_used() - before, i, j, probs[i][j]};
            }
        }
    }
    throw std::logic_error("select_initial_vector: no maximum found");
}

} // namespace sgqst
