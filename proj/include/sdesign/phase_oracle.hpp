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

#ifndef SDESIGN_PHASE_ORACLE_HPP
#define SDESIGN_PHASE_ORACLE_HPP

// Boolean functions f : {0,1}^k -> {0,1} that supply the phases (-1)^f(b).

#include <cstdint>
#include <optional>
#include <ranges>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdesign/bitkit.hpp"
#include "sdesign/rng.hpp"

namespace sdesign {

inline constexpr int kMaxTableOracleK = 12;
inline constexpr int kMaxEnumerateK = 4;

class PhaseOracle {
   public:
    enum class Kind { kZero, kTrueRandom, kPoly2tWise };

    static PhaseOracle zero(int k) {
        check_k(k);
        PhaseOracle o;
        o.kind_ = Kind::kZero;
        o.k_ = k;
        return o;
    }

    /// table[b] is f(b); must hold exactly 2^k entries of 0 or 1.
    static PhaseOracle from_table(int k, std::vector<std::uint8_t> table) {
        if (k < 1 || k > kMaxTableOracleK) {
            throw std::invalid_argument("tabulated oracle needs 1 <= k <= 12, got " + std::to_string(k));
        }
        if (table.size() != (std::size_t{1} << k)) {
            throw std::invalid_argument("oracle table must have 2^k entries");
        }
        for (auto v : table) {
            if (v > 1) {
                throw std::invalid_argument("oracle table entries must be bits");
            }
        }
        PhaseOracle o;
        o.kind_ = Kind::kTrueRandom;
        o.k_ = k;
        o.table_ = std::move(table);
        return o;
    }

    /// f(b) = lowest bit of sum_i coeffs[i] b^i over GF(2^k); coeffs.size() == 2t.
    static PhaseOracle from_poly(int k, int t, std::vector<std::uint64_t> coeffs) {
        check_k(k);
        if (t < 1) {
            throw std::invalid_argument("poly oracle needs t >= 1");
        }
        if (coeffs.size() != 2 * static_cast<std::size_t>(t)) {
            throw std::invalid_argument("poly oracle needs exactly 2t coefficients");
        }
        PhaseOracle o;
        o.kind_ = Kind::kPoly2tWise;
        o.k_ = k;
        o.t_ = t;
        o.field_.emplace(k);
        for (auto c : coeffs) {
            if (c >= o.field_->order()) {
                throw std::invalid_argument("poly oracle coefficient outside GF(2^k)");
            }
        }
        o.coeffs_ = std::move(coeffs);
        return o;
    }

    Kind kind() const noexcept { return kind_; }
    int k() const noexcept { return k_; }
    int t() const noexcept { return t_; }
    const std::vector<std::uint8_t>& table() const noexcept { return table_; }
    const std::vector<std::uint64_t>& coeffs() const noexcept { return coeffs_; }
    const GfExtField& field() const { return field_.value(); }

    /// f(b) for b given as an integer, bit i of b being string bit i.
    bool operator()(std::uint64_t b) const {
        if (k_ < 64 && (b >> k_) != 0) {
            throw std::invalid_argument("oracle input outside {0,1}^k");
        }
        switch (kind_) {
            case Kind::kZero:
                return false;
            case Kind::kTrueRandom:
                return table_[b] != 0;
            case Kind::kPoly2tWise:
                break;
        }
        return (poly_eval(coeffs_, b, *field_) & 1) != 0;
    }

    friend bool operator==(const PhaseOracle& a, const PhaseOracle& b) {
        return a.kind_ == b.kind_ && a.k_ == b.k_ && a.t_ == b.t_ && a.table_ == b.table_ && a.coeffs_ == b.coeffs_;
    }

   private:
    PhaseOracle() = default;

    static void check_k(int k) {
        if (k < 1 || k > 32) {
            throw std::invalid_argument("oracle needs 1 <= k <= 32, got " + std::to_string(k));
        }
    }

    Kind kind_ = Kind::kZero;
    int k_ = 1;
    int t_ = 0;
    std::vector<std::uint8_t> table_;
    std::optional<GfExtField> field_;
    std::vector<std::uint64_t> coeffs_;
};

/// Uniformly random member of the degree < 2t polynomial family.
inline PhaseOracle poly_oracle(int k, int t, std::uint64_t seed) {
    if (k < 1 || k > 32) {
        throw std::invalid_argument("poly_oracle: k must be in [1, 32], got " + std::to_string(k));
    }
    if (t < 1) {
        throw std::invalid_argument("poly_oracle: t must be >= 1");
    }
    CounterRng rng(derive_key(seed, Stream::kOracle, {}));
    std::vector<std::uint64_t> coeffs(2 * static_cast<std::size_t>(t));
    for (auto& c : coeffs) {
        c = rng.below(std::uint64_t{1} << k);
    }
    return PhaseOracle::from_poly(k, t, std::move(coeffs));
}

/// Fully tabulated uniformly random function.
inline PhaseOracle true_random_oracle(int k, std::uint64_t seed) {
    if (k < 1 || k > kMaxTableOracleK) {
        throw std::invalid_argument("true_random_oracle: k must be in [1, 12], got " + std::to_string(k));
    }
    CounterRng rng(derive_key(seed, Stream::kOracle, {1}));
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (auto& v : table) {
        v = rng.bit() ? 1 : 0;
    }
    return PhaseOracle::from_table(k, std::move(table));
}

inline bool oracle_eval(const PhaseOracle& o, const BitString& b) {
    if (b.width() != static_cast<std::size_t>(o.k())) {
        throw std::invalid_argument("oracle_eval: input width " + std::to_string(b.width()) + " != k = " +
                                    std::to_string(o.k()));
    }
    return o(b.to_u64());
}

/// Function number `index` of {0,1}^k -> {0,1}: f(b) = bit b of index.
inline PhaseOracle function_from_index(int k, std::uint64_t index) {
    if (k < 1 || k > kMaxEnumerateK) {
        throw std::invalid_argument("function_from_index: k must be in [1, 4]");
    }
    std::vector<std::uint8_t> table(std::size_t{1} << k);
    for (std::size_t b = 0; b < table.size(); ++b) {
        table[b] = static_cast<std::uint8_t>((index >> b) & 1);
    }
    return PhaseOracle::from_table(k, std::move(table));
}

inline std::uint64_t function_count(int k) {
    if (k < 1 || k > kMaxEnumerateK) {
        throw std::invalid_argument("enumerate_functions: k = " + std::to_string(k) +
                                    " refused, 2^(2^k) functions would be enumerated (k <= 4 allowed)");
    }
    return std::uint64_t{1} << (std::uint64_t{1} << k);
}

/// Lazy range over every Boolean function on k bits, each exactly once.
inline auto enumerate_functions(int k) {
    return std::views::iota(std::uint64_t{0}, function_count(k)) |
           std::views::transform([k](std::uint64_t i) { return function_from_index(k, i); });
}

// Text form, one line:
//   ORACLE zero k
//   ORACLE table k 0110...          (character b is f(b))
//   ORACLE poly k t modulus c0,c1,...

inline std::string to_text(const PhaseOracle& o) {
    std::ostringstream out;
    switch (o.kind()) {
        case PhaseOracle::Kind::kZero:
            out << "ORACLE zero " << o.k();
            break;
        case PhaseOracle::Kind::kTrueRandom:
            out << "ORACLE table " << o.k() << ' ';
            for (auto v : o.table()) {
                out << int{v};
            }
            break;
        case PhaseOracle::Kind::kPoly2tWise:
            out << "ORACLE poly " << o.k() << ' ' << o.t() << ' ' << o.field().modulus() << ' ';
            for (std::size_t i = 0; i < o.coeffs().size(); ++i) {
                out << (i ? "," : "") << o.coeffs()[i];
            }
            break;
    }
    out << '\n';
    return out.str();
}

inline PhaseOracle parse_oracle(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string tag;
    std::string kind;
    int k = 0;
    if (!(in >> tag >> kind >> k) || tag != "ORACLE") {
        throw std::invalid_argument("malformed ORACLE line");
    }
    if (kind == "zero") {
        return PhaseOracle::zero(k);
    }
    if (kind == "table") {
        std::string bits;
        in >> bits;
        std::vector<std::uint8_t> table;
        for (char ch : bits) {
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("ORACLE table must be a 0/1 string");
            }
            table.push_back(ch == '1' ? 1 : 0);
        }
        return PhaseOracle::from_table(k, std::move(table));
    }
    if (kind == "poly") {
        int t = 0;
        std::uint64_t modulus = 0;
        std::string items;
        if (!(in >> t >> modulus >> items)) {
            throw std::invalid_argument("malformed ORACLE poly line");
        }
        if (modulus != find_irreducible(k)) {
            throw std::invalid_argument("ORACLE poly modulus does not match the canonical field");
        }
        std::vector<std::uint64_t> coeffs;
        std::istringstream items_in(items);
        std::string item;
        while (std::getline(items_in, item, ',')) {
            coeffs.push_back(std::stoull(item));
        }
        return PhaseOracle::from_poly(k, t, std::move(coeffs));
    }
    throw std::invalid_argument("unknown ORACLE kind '" + kind + "'");
}

}  // namespace sdesign

#endif  // SDESIGN_PHASE_ORACLE_HPP
