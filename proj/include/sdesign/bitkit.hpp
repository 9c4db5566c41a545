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

#ifndef SDESIGN_BITKIT_HPP
#define SDESIGN_BITKIT_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdesign {

inline constexpr std::size_t kMaxBitWidth = 4096;

/// Packed fixed-width bit vector. Bit 0 is the least significant bit of word 0
/// and is printed first by to_string(). Bits beyond width() are always zero.
class BitString {
   public:
    BitString() = default;

    explicit BitString(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {
        if (width == 0 || width > kMaxBitWidth) {
            throw std::invalid_argument("BitString width must be in [1, 4096], got " + std::to_string(width));
        }
    }

    /// Low `width` bits of `value`; width must be at most 64.
    static BitString from_u64(std::size_t width, std::uint64_t value) {
        if (width > 64) {
            throw std::invalid_argument("from_u64 needs width <= 64");
        }
        BitString b(width);
        b.words_[0] = width == 64 ? value : (value & ((std::uint64_t{1} << width) - 1));
        return b;
    }

    /// Parses a string of '0'/'1' characters, character i giving bit i.
    static BitString from_string(std::string_view text) {
        BitString b(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                b.set(i, true);
            } else if (text[i] != '0') {
                throw std::invalid_argument("BitString text must contain only '0' and '1'");
            }
        }
        return b;
    }

    std::size_t width() const noexcept { return width_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool get(std::size_t i) const {
        check_index(i);
        return ((words_[i >> 6] >> (i & 63)) & 1) != 0;
    }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool v) {
        check_index(i);
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void flip(std::size_t i) {
        check_index(i);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    std::uint64_t to_u64() const {
        if (width_ > 64) {
            throw std::domain_error("to_u64 needs width <= 64");
        }
        return words_[0];
    }

    std::size_t popcount() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool none() const noexcept {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    BitString& operator^=(const BitString& other) {
        require_same_width(other);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] ^= other.words_[i];
        }
        return *this;
    }
    friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

    BitString& operator&=(const BitString& other) {
        require_same_width(other);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= other.words_[i];
        }
        return *this;
    }
    friend BitString operator&(BitString a, const BitString& b) { return a &= b; }

    /// Bits at `positions`, in the given order, as a new string.
    BitString restrict_to(std::span<const std::uint32_t> positions) const {
        BitString out(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) {
            out.set(i, get(positions[i]));
        }
        return out;
    }

    std::string to_string() const {
        std::string s(width_, '0');
        for (std::size_t i = 0; i < width_; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend auto operator<=>(const BitString& a, const BitString& b) {
        if (auto c = a.width_ <=> b.width_; c != 0) {
            return c;
        }
        for (std::size_t i = a.words_.size(); i-- > 0;) {
            if (auto c = a.words_[i] <=> b.words_[i]; c != 0) {
                return c;
            }
        }
        return std::strong_ordering::equal;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ width_;
        for (auto w : words_) {
            h = (h ^ w) * 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }

   private:
    void check_index(std::size_t i) const {
        if (i >= width_) {
            throw std::out_of_range("bit index " + std::to_string(i) + " outside width " + std::to_string(width_));
        }
    }
    void require_same_width(const BitString& other) const {
        if (other.width_ != width_) {
            throw std::invalid_argument("BitString width mismatch: " + std::to_string(width_) + " vs " +
                                        std::to_string(other.width_));
        }
    }

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitStringHash {
    std::size_t operator()(const BitString& b) const noexcept { return b.hash(); }
};

inline std::size_t hamming_distance(const BitString& a, const BitString& b) { return (a ^ b).popcount(); }

/// Dense matrix over GF(2), stored as one BitString per row.
class Gf2Matrix {
   public:
    Gf2Matrix(std::size_t rows, std::size_t cols) : cols_(cols) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("Gf2Matrix must be nonempty");
        }
        rows_.assign(rows, BitString(cols));
    }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return rows_.at(r).get(c); }
    void set(std::size_t r, std::size_t c, bool v) { rows_.at(r).set(c, v); }
    const BitString& row(std::size_t r) const { return rows_.at(r); }

   private:
    std::size_t cols_;
    std::vector<BitString> rows_;
};

/// Rank over GF(2) by Gaussian elimination on a copy of the rows.
inline std::size_t gf2_rank(const Gf2Matrix& m) {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto w = m.row(r).words();
        rows.emplace_back(w.begin(), w.end());
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < rows.size(); ++c) {
        std::size_t word = c >> 6;
        std::uint64_t mask = std::uint64_t{1} << (c & 63);
        std::size_t pivot = rank;
        while (pivot < rows.size() && (rows[pivot][word] & mask) == 0) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r][word] & mask) != 0) {
                for (std::size_t w = word; w < rows[r].size(); ++w) {
                    rows[r][w] ^= rows[rank][w];
                }
            }
        }
        ++rank;
    }
    return rank;
}

namespace detail {

/// Carry-less product of two polynomials of degree < 32.
constexpr std::uint64_t clmul32(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t r = 0;
    while (b != 0) {
        if ((b & 1) != 0) {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    return r;
}

constexpr int poly_degree(std::uint64_t p) noexcept { return p == 0 ? -1 : 63 - std::countl_zero(p); }

constexpr std::uint64_t poly_mod(std::uint64_t a, std::uint64_t modulus) noexcept {
    int dm = poly_degree(modulus);
    for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) {
        a ^= modulus << (d - dm);
    }
    return a;
}

constexpr std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) noexcept {
    while (b != 0) {
        a = poly_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

constexpr std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) noexcept {
    return poly_mod(clmul32(a, b), modulus);
}

/// x^(2^d) mod modulus by repeated squaring.
constexpr std::uint64_t x_pow_two_pow(int d, std::uint64_t modulus) noexcept {
    std::uint64_t r = poly_mod(2, modulus);
    for (int i = 0; i < d; ++i) {
        r = poly_mulmod(r, r, modulus);
    }
    return r;
}

}  // namespace detail

/// True iff `modulus` (bit i = coefficient of x^i) is an irreducible polynomial
/// of degree k with nonzero constant term.
inline bool is_irreducible(std::uint64_t modulus, int k) {
    if (k < 1 || k > 32 || detail::poly_degree(modulus) != k || (modulus & 1) == 0) {
        return false;
    }
    // x^(2^k) == x (mod f), and gcd(x^(2^d) - x, f) == 1 for every proper divisor d.
    if (detail::x_pow_two_pow(k, modulus) != detail::poly_mod(2, modulus)) {
        return false;
    }
    for (int d = 1; d < k; ++d) {
        if (k % d != 0) {
            continue;
        }
        std::uint64_t g = detail::poly_gcd(modulus, detail::x_pow_two_pow(d, modulus) ^ 2);
        if (g != 1) {
            return false;
        }
    }
    return true;
}

/// Lexicographically smallest irreducible degree-k modulus. Computed once for
/// all k in [1, 32] on first use and cached.
inline std::uint64_t find_irreducible(int k) {
    if (k < 1 || k > 32) {
        throw std::invalid_argument("find_irreducible: k must be in [1, 32], got " + std::to_string(k));
    }
    static const std::array<std::uint64_t, 33> table = [] {
        std::array<std::uint64_t, 33> t{};
        for (int d = 1; d <= 32; ++d) {
            for (std::uint64_t p = (std::uint64_t{1} << d) | 1; p < (std::uint64_t{1} << (d + 1)); p += 2) {
                if (is_irreducible(p, d)) {
                    t[static_cast<std::size_t>(d)] = p;
                    break;
                }
            }
        }
        return t;
    }();
    return table[static_cast<std::size_t>(k)];
}

/// GF(2^k) as polynomials modulo an irreducible `modulus`.
class GfExtField {
   public:
    explicit GfExtField(int k) : GfExtField(k, find_irreducible(k)) {}

    GfExtField(int k, std::uint64_t modulus) : k_(k), modulus_(modulus) {
        if (!is_irreducible(modulus, k)) {
            throw std::invalid_argument("GfExtField: modulus is not an irreducible degree-" + std::to_string(k) +
                                        " polynomial");
        }
    }

    int k() const noexcept { return k_; }
    std::uint64_t modulus() const noexcept { return modulus_; }
    std::uint64_t order() const noexcept { return std::uint64_t{1} << k_; }

   private:
    int k_;
    std::uint64_t modulus_;
};

inline std::uint64_t gf_mul(std::uint64_t a, std::uint64_t b, const GfExtField& f) {
    return detail::poly_mulmod(a, b, f.modulus());
}

/// Horner evaluation of sum_i coeffs[i] * x^i.
inline std::uint64_t poly_eval(std::span<const std::uint64_t> coeffs, std::uint64_t x, const GfExtField& f) {
    if (coeffs.empty()) {
        throw std::invalid_argument("poly_eval needs at least one coefficient");
    }
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = gf_mul(acc, x, f) ^ coeffs[i];
    }
    return acc;
}

}  // namespace sdesign

template <>
struct std::hash<sdesign::BitString> {
    std::size_t operator()(const sdesign::BitString& b) const noexcept { return b.hash(); }
};

#endif  // SDESIGN_BITKIT_HPP
