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

/// \file random.hpp
/// Seeded random sources. Every distribution here is built from raw 64-bit
/// engine output with fixed arithmetic, so a (seed, stream) pair reproduces
/// the same draws with any standard library.

#include "sgqst/core.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace sgqst {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Reproducible random stream identified by (seed, stream id).
///
/// Handles are cheap to derive: `split(k)` yields an independent child stream
/// that depends only on this handle's identity and `k`, never on how many
/// values were drawn from the parent.
class RngHandle {
public:
    RngHandle(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        const std::array<std::uint32_t, 4> words{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        std::seed_seq seq(words.begin(), words.end());
        engine_.seed(seq);
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }

    [[nodiscard]] RngHandle split(std::uint64_t child) const {
        return RngHandle(detail::splitmix64(seed_ ^ detail::splitmix64(stream_ + 0x632BE59BD9B4E019ULL)),
                         child);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open0() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Complex Gaussian with independent N(0,1) real and imaginary parts.
    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Binomial(n, p) sample by table-free inversion walking outward from the mode.
inline std::uint64_t sample_binomial(std::uint64_t n, double p, RngHandle &rng) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_binomial: p outside [0, 1]");
    }
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);

    const double nd = static_cast<double>(n);
    const double ratio = p / (1.0 - p);
    auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
    if (mode > n) mode = n;
    const double md = static_cast<double>(mode);
    const double pmf_mode = std::exp(std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                                     std::lgamma(nd - md + 1.0) + md * std::log(p) +
                                     (nd - md) * std::log1p(-p));

    double u = rng.uniform();
    u -= pmf_mode;
    if (u < 0.0) return mode;

    double pmf_lo = pmf_mode;
    double pmf_hi = pmf_mode;
    std::uint64_t lo = mode;
    std::uint64_t hi = mode;
    while (lo > 0 || hi < n) {
        if (lo > 0) {
            pmf_lo *= static_cast<double>(lo) / (static_cast<double>(n - lo + 1) * ratio);
            --lo;
            u -= pmf_lo;
            if (u < 0.0) return lo;
        }
        if (hi < n) {
            pmf_hi *= static_cast<double>(n - hi) / static_cast<double>(hi + 1) * ratio;
            ++hi;
            u -= pmf_hi;
            if (u < 0.0) return hi;
        }
        if (pmf_lo < 1e-300 && pmf_hi < 1e-300) break;
    }
    // Rounding left a sliver of mass unassigned.
    return mode;
}

/// Multinomial counts over `probs` (need not sum exactly to one; the last
/// category takes the remainder) via conditional binomials.
inline std::vector<std::uint64_t> sample_multinomial(std::uint64_t n, const std::vector<double> &probs,
                                                     RngHandle &rng) {
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::uint64_t left = n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size() && left > 0; ++i) {
        const double q = mass_left > 0.0 ? std::clamp(probs[i] / mass_left, 0.0, 1.0) : 0.0;
        counts[i] = sample_binomial(left, q, rng);
        left -= counts[i];
        mass_left -= probs[i];
    }
    if (!probs.empty()) counts.back() += left;
    return counts;
}

/// Vector of i.i.d. standard complex Gaussians.
inline RawVector random_raw_vector(std::size_t d, RngHandle &rng) {
    if (d < 2) throw DimensionError("random_raw_vector: dimension must be at least 2");
    CVector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
    return RawVector(std::move(v));
}

/// SPSA perturbation: entries uniform over {+-1 +- i}.
inline RawVector perturbation_vector(std::size_t d, RngHandle &rng) {
    if (d < 2) throw DimensionError("perturbation_vector: dimension must be at least 2");
    CVector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const std::uint64_t bits = rng.next_u64();
        const double re = (bits >> 63) ? 1.0 : -1.0;
        const double im = ((bits >> 62) & 1U) ? 1.0 : -1.0;
        v[i] = Complex(re, im);
    }
    return RawVector(std::move(v));
}

/// Haar-random pure state.
inline StateVector haar_random_pure(std::size_t d, RngHandle &rng) {
    for (;;) {
        auto s = StateVector::try_normalized(random_raw_vector(d, rng).entries());
        if (s) return *s;
    }
}

/// Haar-random unitary: QR of a Ginibre matrix with R's diagonal phases
/// folded back into Q.
inline CMatrix haar_unitary(std::size_t d, RngHandle &rng) {
    const auto n = static_cast<Eigen::Index>(d);
    CMatrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0.0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

/// Hilbert-Schmidt-type mixed state GG^dagger / tr(GG^dagger) with G a d x rank
/// Ginibre matrix. rank == d gives the full-rank Hilbert-Schmidt ensemble.
inline DensityMatrix ginibre_mixed_state(std::size_t d, std::size_t rank, RngHandle &rng) {
    if (d < 2) throw DimensionError("ginibre_mixed_state: dimension must be at least 2");
    if (rank < 1 || rank > d) {
        throw std::invalid_argument("ginibre_mixed_state: rank must be in 1..d");
    }
    const auto n = static_cast<Eigen::Index>(d);
    const auto k = static_cast<Eigen::Index>(rank);
    CMatrix g(n, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
    CMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::from_matrix(m);
}

} // namespace sgqst
