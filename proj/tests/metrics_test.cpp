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

#include "sgqst/metrics.hpp"
#include "sgqst/random.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace sgqst;
using sgqst::testing::diag_state;
using sgqst::testing::ket;

TEST(Infidelity, Examples) {
    EXPECT_NEAR(infidelity(diag_state({1.0, 0.0}), diag_state({0.0, 1.0})), 1.0, 1e-12);
    EXPECT_NEAR(infidelity(diag_state({1.0, 0.0}), DensityMatrix::maximally_mixed(2)), 0.5, 1e-12);
    EXPECT_NEAR(infidelity(DensityMatrix::maximally_mixed(3), DensityMatrix::maximally_mixed(3)), 0.0, 1e-12);
    // Commuting states: F = (sum sqrt(p_i q_i))^2.
    const double root = std::sqrt(0.7 * 0.4) + std::sqrt(0.3 * 0.6);
    EXPECT_NEAR(infidelity(diag_state({0.7, 0.3}), diag_state({0.4, 0.6})), 1.0 - root * root, 1e-12);
}

TEST(Infidelity, DimensionMismatchThrows) {
    EXPECT_THROW(infidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST(Infidelity, SymmetricAndBounded) {
    RngHandle rng(1, 0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = 2 + t % 5;
        const auto a = ginibre_mixed_state(d, 1 + t % d, rng);
        const auto b = ginibre_mixed_state(d, 1 + (t / 3) % d, rng);
        const double ab = infidelity(a, b);
        ASSERT_GE(ab, 0.0);
        ASSERT_LE(ab, 1.0);
        ASSERT_NEAR(ab, infidelity(b, a), 1e-6);
    }
}

TEST(Infidelity, ZeroOnlyForEqualStates) {
    RngHandle rng(2, 0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = 2 + t % 4;
        const auto a = ginibre_mixed_state(d, d, rng);
        ASSERT_NEAR(infidelity(a, a), 0.0, 1e-8);
        const auto b = ginibre_mixed_state(d, d, rng);
        ASSERT_GT(infidelity(a, b), 1e-6);
    }
}

TEST(Infidelity, PureStatesReduceToOverlap) {
    RngHandle rng(3, 0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t d = 2 + t % 6;
        const auto psi = haar_random_pure(d, rng);
        const auto phi = haar_random_pure(d, rng);
        ASSERT_NEAR(infidelity(DensityMatrix::pure(psi), DensityMatrix::pure(phi)), 1.0 - overlap(psi, phi), 1e-6);
    }
}

TEST(Median, Examples) {
    const std::vector<double> odd{3.0, 1.0, 2.0};
    const std::vector<double> even{4.0, 1.0, 3.0, 2.0};
    const std::vector<double> one{7.5};
    EXPECT_DOUBLE_EQ(median(odd), 2.0);
    EXPECT_DOUBLE_EQ(median(even), 2.5);
    EXPECT_DOUBLE_EQ(median(one), 7.5);
    EXPECT_THROW(median(std::vector<double>{}), std::invalid_argument);
}

TEST(Quantiles, Examples) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> qs{0.0, 0.25, 0.5, 0.75, 1.0, 0.1};
    const auto out = quantiles(v, qs);
    EXPECT_DOUBLE_EQ(out[0], 1.0);
    EXPECT_DOUBLE_EQ(out[1], 2.0);
    EXPECT_DOUBLE_EQ(out[2], 3.0);
    EXPECT_DOUBLE_EQ(out[3], 4.0);
    EXPECT_DOUBLE_EQ(out[4], 5.0);
    EXPECT_NEAR(out[5], 1.4, 1e-15);
    const std::vector<double> bad{1.5};
    EXPECT_THROW(quantiles(v, bad), std::invalid_argument);
}

TEST(MedianAndQuantiles, PermutationInvariantAndBounded) {
    RngHandle rng(4, 0);
    const std::vector<double> qs{0.25, 0.5, 0.75};
    for (int t = 0; t < 200; ++t) {
        std::vector<double> v(1 + t % 37);
        for (auto &x : v) x = rng.normal();
        const double m = median(v);
        const auto q = quantiles(v, qs);
        ASSERT_NEAR(q[1], m, 1e-12);
        ASSERT_LE(q[0], m);
        ASSERT_LE(m, q[2]);
        ASSERT_GE(q[0], *std::min_element(v.begin(), v.end()));
        ASSERT_LE(q[2], *std::max_element(v.begin(), v.end()));
        std::reverse(v.begin(), v.end());
        std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
        ASSERT_DOUBLE_EQ(median(v), m);
        const auto q2 = quantiles(v, qs);
        ASSERT_DOUBLE_EQ(q2[0], q[0]);
        ASSERT_DOUBLE_EQ(q2[2], q[2]);
    }
}
