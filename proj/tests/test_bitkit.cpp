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

#include "sdesign/bitkit.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

#include "sdesign/rng.hpp"

using namespace sdesign;

namespace {

// Rank as log2 of the number of distinct vectors in the row span.
std::size_t span_rank(const Gf2Matrix& m) {
    std::set<BitString> span;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.rows()); ++mask) {
        BitString acc(m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if ((mask >> r) & 1) {
                acc ^= m.row(r);
            }
        }
        span.insert(acc);
    }
    return static_cast<std::size_t>(std::countr_zero(span.size()));
}

Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
    Gf2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, rng.bit());
        }
    }
    return m;
}

// Irreducible iff no polynomial of degree 1..k/2 divides it.
bool irreducible_by_division(std::uint64_t f, int k) {
    for (int d = 1; d <= k / 2; ++d) {
        for (std::uint64_t g = std::uint64_t{1} << d; g < (std::uint64_t{1} << (d + 1)); ++g) {
            if (detail::poly_mod(f, g) == 0) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST(BitString, WidthLimits) {
    EXPECT_THROW(BitString(0), std::invalid_argument);
    EXPECT_THROW(BitString(4097), std::invalid_argument);
    EXPECT_NO_THROW(BitString(4096));
    EXPECT_EQ(BitString(130).words().size(), 3u);
}

TEST(BitString, StringRoundTripAndIndexing) {
    auto b = BitString::from_string("1011000");
    EXPECT_EQ(b.width(), 7u);
    EXPECT_TRUE(b[0]);
    EXPECT_FALSE(b[1]);
    EXPECT_TRUE(b[2]);
    EXPECT_EQ(b.to_u64(), 0b1101u);
    EXPECT_EQ(b.to_string(), "1011000");
    EXPECT_EQ(b.popcount(), 3u);
    EXPECT_THROW(b.get(7), std::out_of_range);
    EXPECT_THROW(BitString::from_string("10x"), std::invalid_argument);
}

TEST(BitString, HighBitsStayClear) {
    auto b = BitString::from_u64(5, ~std::uint64_t{0});
    EXPECT_EQ(b.to_u64(), 31u);
    EXPECT_EQ(b.words()[0], 31u);
}

TEST(BitString, XorWithSelfIsZero) {
    CounterRng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        BitString b(1 + rng.below(300));
        for (std::size_t i = 0; i < b.width(); ++i) {
            b.set(i, rng.bit());
        }
        EXPECT_TRUE((b ^ b).none());
    }
}

TEST(BitString, MismatchedWidthsRejected) {
    BitString a(8);
    BitString b(9);
    EXPECT_THROW(a ^= b, std::invalid_argument);
    EXPECT_THROW(a &= b, std::invalid_argument);
}

TEST(BitString, RestrictTo) {
    auto b = BitString::from_string("0110101");
    std::vector<std::uint32_t> pos{6, 1, 3};
    EXPECT_EQ(b.restrict_to(pos).to_string(), "110");
    EXPECT_EQ(hamming_distance(BitString::from_string("0011"), BitString::from_string("0101")), 2u);
}

TEST(Gf2Rank, Examples) {
    Gf2Matrix id(5, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        id.set(i, i, true);
    }
    EXPECT_EQ(gf2_rank(id), 5u);
    EXPECT_EQ(gf2_rank(Gf2Matrix(3, 5)), 0u);
    Gf2Matrix ones(2, 2);
    ones.set(0, 0, true);
    ones.set(0, 1, true);
    ones.set(1, 0, true);
    ones.set(1, 1, true);
    EXPECT_EQ(span_rank(ones), 1u);
    EXPECT_EQ(gf2_rank(ones), 1u);
    EXPECT_THROW(Gf2Matrix(0, 3), std::invalid_argument);
}

TEST(Gf2Rank, MatchesSpanEnumeration) {
    CounterRng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        auto rows = 1 + rng.below(8);
        auto cols = 1 + rng.below(80);
        auto m = random_matrix(rows, cols, rng);
        ASSERT_EQ(gf2_rank(m), span_rank(m));
    }
}

TEST(Gf2Rank, InputUnchangedAndPermutationInvariant) {
    CounterRng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(6, 9, rng);
        Gf2Matrix copy = m;
        auto r = gf2_rank(m);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            ASSERT_EQ(m.row(i), copy.row(i));
        }
        Gf2Matrix permuted(6, 9);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 9; ++j) {
                permuted.set((i + 2) % 6, (j * 4) % 9, m.get(i, j));
            }
        }
        ASSERT_EQ(gf2_rank(permuted), r);
        ASSERT_LE(r, 6u);
    }
}

TEST(Gf2Rank, RandomSquareFullRankFrequency) {
    const int trials = 100000;
    for (std::size_t t = 1; t <= 8; ++t) {
        CounterRng rng(derive_key(4, {t}));
        int full = 0;
        for (int i = 0; i < trials; ++i) {
            full += gf2_rank(random_matrix(t, t, rng)) == t ? 1 : 0;
        }
        double expected = 1;
        for (std::size_t i = 1; i <= t; ++i) {
            expected *= 1 - std::ldexp(1.0, -static_cast<int>(i));
        }
        double se = std::sqrt(expected * (1 - expected) / trials);
        EXPECT_NEAR(static_cast<double>(full) / trials, expected, 3 * se) << "t = " << t;
    }
}

TEST(GfField, IrreducibleTable) {
    EXPECT_EQ(find_irreducible(1), 0b11u);
    EXPECT_EQ(find_irreducible(2), 0b111u);
    EXPECT_EQ(find_irreducible(3), 0b1011u);
    EXPECT_THROW(find_irreducible(0), std::invalid_argument);
    EXPECT_THROW(find_irreducible(33), std::invalid_argument);
    for (int k = 1; k <= 16; ++k) {
        std::uint64_t smallest = 0;
        for (std::uint64_t f = (std::uint64_t{1} << k) | 1; f < (std::uint64_t{1} << (k + 1)); f += 2) {
            if (irreducible_by_division(f, k)) {
                smallest = f;
                break;
            }
        }
        EXPECT_EQ(find_irreducible(k), smallest) << "k = " << k;
    }
    for (int k = 17; k <= 32; ++k) {
        EXPECT_TRUE(is_irreducible(find_irreducible(k), k));
    }
}

TEST(GfField, RejectsReducibleModulus) {
    EXPECT_THROW(GfExtField(2, 0b101), std::invalid_argument);  // (x + 1)^2
    EXPECT_THROW(GfExtField(3, 0b111), std::invalid_argument);  // wrong degree
    EXPECT_NO_THROW(GfExtField(3, 0b1101));
}

TEST(GfField, MulExamples) {
    GfExtField f(3);
    EXPECT_EQ(gf_mul(0b010, 0b100, f), 0b011u);
    for (std::uint64_t a = 0; a < 8; ++a) {
        EXPECT_EQ(gf_mul(a, 1, f), a);
        EXPECT_EQ(gf_mul(a, 0, f), 0u);
    }
}

TEST(GfField, RingAxiomsOnSamples) {
    for (int k = 2; k <= 16; ++k) {
        GfExtField f(k);
        CounterRng rng(derive_key(5, {static_cast<std::uint64_t>(k)}));
        for (int i = 0; i < 10000; ++i) {
            auto a = rng.below(f.order());
            auto b = rng.below(f.order());
            auto c = rng.below(f.order());
            ASSERT_EQ(gf_mul(a, b ^ c, f), gf_mul(a, b, f) ^ gf_mul(a, c, f));
            ASSERT_EQ(gf_mul(a, b, f), gf_mul(b, a, f));
            ASSERT_EQ(gf_mul(gf_mul(a, b, f), c, f), gf_mul(a, gf_mul(b, c, f), f));
            ASSERT_LT(gf_mul(a, b, f), f.order());
        }
    }
}

TEST(GfField, NonzeroElementsInvertible) {
    GfExtField f(5);
    for (std::uint64_t a = 1; a < f.order(); ++a) {
        int hits = 0;
        for (std::uint64_t b = 1; b < f.order(); ++b) {
            hits += gf_mul(a, b, f) == 1 ? 1 : 0;
        }
        EXPECT_EQ(hits, 1);
    }
}

TEST(PolyEval, Examples) {
    GfExtField f(3);
    std::vector<std::uint64_t> constant{5};
    std::vector<std::uint64_t> ident{0, 1};
    std::vector<std::uint64_t> ones{1, 1, 1};
    for (std::uint64_t x = 0; x < 8; ++x) {
        EXPECT_EQ(poly_eval(constant, x, f), 5u);
        EXPECT_EQ(poly_eval(ident, x, f), x);
    }
    EXPECT_EQ(poly_eval(ones, 0b010, f), 0b111u);
    EXPECT_THROW(poly_eval(std::vector<std::uint64_t>{}, 1, f), std::invalid_argument);
}

TEST(PolyEval, MatchesPowerSum) {
    for (int k : {4, 9, 20, 32}) {
        GfExtField f(k);
        CounterRng rng(derive_key(6, {static_cast<std::uint64_t>(k)}));
        for (int i = 0; i < 1000; ++i) {
            std::vector<std::uint64_t> c(1 + rng.below(8));
            for (auto& v : c) {
                v = rng.below(f.order());
            }
            auto x = rng.below(f.order());
            std::uint64_t sum = 0;
            std::uint64_t power = 1;
            for (auto coeff : c) {
                sum ^= gf_mul(coeff, power, f);
                power = gf_mul(power, x, f);
            }
            ASSERT_EQ(poly_eval(c, x, f), sum);
        }
    }
}
