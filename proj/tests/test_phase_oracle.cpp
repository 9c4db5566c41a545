// Copyright 2026 The sdesign Authors
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

#include "sdesign/phase_oracle.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <unordered_set>

using namespace sdesign;

namespace {

// Joint outcome counts of (f(x_0), ..., f(x_{r-1})) over every coefficient
// vector of the degree < 2t family.
std::vector<int> family_joint_counts(int k, int t, const std::vector<std::uint64_t>& xs) {
    const std::uint64_t q = std::uint64_t{1} << k;
    const std::size_t ncoef = 2 * static_cast<std::size_t>(t);
    std::vector<int> counts(std::size_t{1} << xs.size(), 0);
    std::vector<std::uint64_t> coeffs(ncoef, 0);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (k * ncoef)); ++code) {
        for (std::size_t i = 0; i < ncoef; ++i) {
            coeffs[i] = (code >> (k * i)) & (q - 1);
        }
        auto f = PhaseOracle::from_poly(k, t, coeffs);
        std::size_t outcome = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            outcome |= static_cast<std::size_t>(f(xs[i])) << i;
        }
        ++counts[outcome];
    }
    return counts;
}

}  // namespace

TEST(PhaseOracle, ZeroIsZero) {
    auto f = PhaseOracle::zero(5);
    for (std::uint64_t b = 0; b < 32; ++b) {
        EXPECT_FALSE(f(b));
    }
    EXPECT_THROW(f(32), std::invalid_argument);
}

TEST(PhaseOracle, TableLookup) {
    auto f = PhaseOracle::from_table(2, {0, 1, 1, 0});
    EXPECT_FALSE(f(0));
    EXPECT_TRUE(f(1));
    EXPECT_TRUE(oracle_eval(f, BitString::from_string("01")));
    EXPECT_FALSE(oracle_eval(f, BitString::from_string("11")));
    EXPECT_THROW(oracle_eval(f, BitString::from_string("011")), std::invalid_argument);
    EXPECT_THROW(PhaseOracle::from_table(2, {0, 1, 1}), std::invalid_argument);
    EXPECT_THROW(PhaseOracle::from_table(2, {0, 1, 2, 0}), std::invalid_argument);
    EXPECT_THROW(PhaseOracle::from_table(13, {}), std::invalid_argument);
}

TEST(PhaseOracle, ConstantPolynomial) {
    auto one = PhaseOracle::from_poly(6, 1, {1, 0});
    auto two = PhaseOracle::from_poly(6, 1, {2, 0});
    for (std::uint64_t b = 0; b < 64; ++b) {
        EXPECT_TRUE(one(b));
        EXPECT_FALSE(two(b));
    }
    EXPECT_THROW(PhaseOracle::from_poly(6, 2, {1, 0}), std::invalid_argument);
    EXPECT_THROW(PhaseOracle::from_poly(3, 1, {8, 0}), std::invalid_argument);
    EXPECT_THROW(PhaseOracle::from_poly(33, 1, {0, 0}), std::invalid_argument);
}

TEST(PhaseOracle, SeededDeterminism) {
    EXPECT_EQ(poly_oracle(20, 3, 9), poly_oracle(20, 3, 9));
    EXPECT_FALSE(poly_oracle(20, 3, 9) == poly_oracle(20, 3, 10));
    EXPECT_EQ(true_random_oracle(10, 4), true_random_oracle(10, 4));
    EXPECT_THROW(true_random_oracle(13, 0), std::invalid_argument);
}

TEST(PhaseOracle, PairwiseUniformExhaustive) {
    for (std::uint64_t a = 0; a < 4; ++a) {
        for (std::uint64_t b = 0; b < a; ++b) {
            auto counts = family_joint_counts(2, 1, {a, b});
            for (int c : counts) {
                EXPECT_EQ(c, 4);
            }
        }
    }
}

TEST(PhaseOracle, FourWiseUniformExhaustive) {
    std::vector<std::uint64_t> xs;
    for (std::uint64_t a = 0; a < 8; ++a) {
        for (std::uint64_t b = a + 1; b < 8; ++b) {
            for (std::uint64_t c = b + 1; c < 8; ++c) {
                for (std::uint64_t d = c + 1; d < 8; ++d) {
                    auto counts = family_joint_counts(3, 2, {a, b, c, d});
                    for (int n : counts) {
                        ASSERT_EQ(n, 256);
                    }
                }
            }
        }
    }
}

TEST(PhaseOracle, FourWiseUniformSampled) {
    const int trials = 100000;
    const std::array<std::uint64_t, 4> xs{3, 77, 128, 255};
    std::array<int, 16> counts{};
    for (int i = 0; i < trials; ++i) {
        auto f = poly_oracle(8, 2, static_cast<std::uint64_t>(i));
        std::size_t outcome = 0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            outcome |= static_cast<std::size_t>(f(xs[j])) << j;
        }
        ++counts[outcome];
    }
    double p = 1.0 / 16;
    double se = std::sqrt(p * (1 - p) / trials);
    for (int c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / trials, p, 4 * se);
    }
}

TEST(PhaseOracle, EnumerationCountsAndDistinct) {
    EXPECT_EQ(function_count(1), 4u);
    EXPECT_EQ(function_count(2), 16u);
    EXPECT_EQ(function_count(4), 65536u);
    EXPECT_THROW(function_count(5), std::invalid_argument);
    EXPECT_THROW(enumerate_functions(5), std::invalid_argument);
    for (int k : {1, 2, 4}) {
        std::unordered_set<std::string> seen;
        std::size_t n = 0;
        for (const auto& f : enumerate_functions(k)) {
            seen.insert(to_text(f));
            ++n;
        }
        EXPECT_EQ(n, function_count(k));
        EXPECT_EQ(seen.size(), n);
    }
}

TEST(PhaseOracle, TextRoundTrip) {
    for (const auto& f : {PhaseOracle::zero(4), true_random_oracle(6, 1), poly_oracle(17, 3, 2)}) {
        auto text = to_text(f);
        auto back = parse_oracle(text);
        EXPECT_EQ(back, f);
        EXPECT_EQ(to_text(back), text);
    }
    EXPECT_THROW(parse_oracle("ORACLE poly 3 1 13 1,2\n"), std::invalid_argument);
    EXPECT_THROW(parse_oracle("ORACLE table 2 01x0\n"), std::invalid_argument);
    EXPECT_THROW(parse_oracle("ORACLE magic 2\n"), std::invalid_argument);
    EXPECT_THROW(parse_oracle("CIRCUIT zero 2\n"), std::invalid_argument);
}
