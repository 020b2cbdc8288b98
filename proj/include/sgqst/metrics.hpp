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

#include "sgqst/core.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgqst {

/// 1 - (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
inline double infidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    detail::require_same_dim(static_cast<std::ptrdiff_t>(rho.dim()),
                             static_cast<std::ptrdiff_t>(sigma.dim()), "infidelity");
    const CMatrix root = psd_sqrt(rho);
    const CMatrix inner = detail::hermitian_part(root * sigma.matrix() * root);
    const double root_fidelity = psd_sqrt(inner).trace().real();
    return std::clamp(1.0 - root_fidelity * root_fidelity, 0.0, 1.0);
}

/// Median; the mean of the middle two for even sizes.
inline double median(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Quantiles by linear interpolation between order statistics at position
/// q (n - 1).
inline std::vector<double> quantiles(std::span<const double> values, std::span<const double> qs) {
    if (values.empty()) throw std::invalid_argument("quantiles: empty input");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    out.reserve(qs.size());
    for (double q : qs) {
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantiles: q outside [0, 1]");
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        out.push_back(frac == 0.0 ? v[lo] : v[lo] + frac * (v[hi] - v[lo]));
    }
    return out;
}

} // namespace sgqst
