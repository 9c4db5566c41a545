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

#ifndef SDESIGN_RANDOMIZER_HPP
#define SDESIGN_RANDOMIZER_HPP

// Shallow bits randomizer: a classical reversible circuit on n-bit strings made
// of a CNOT copy tree followed by coin-gated multi-controlled X gates whose
// control sets and conditions come from one random multi-control table.
//
// Layout: the n bits form n/k registers of k bits; register r holds bit
// positions [r*k, (r+1)*k). Levels are numbered 1..L with L = log2(n/k); at
// level i the source registers are [0, 2^(i-1)) and the targets are
// [2^(i-1), 2^i). All indices are 0-based.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdesign/bitkit.hpp"
#include "sdesign/rng.hpp"

namespace sdesign {

/// X on `target` iff the bits at `controls` equal `conditions`.
struct McxGate {
    std::vector<std::uint32_t> controls;
    std::vector<std::uint8_t> conditions;
    std::uint32_t target = 0;

    static McxGate cnot(std::uint32_t control, std::uint32_t target) { return McxGate{{control}, {1}, target}; }

    std::size_t arity() const noexcept { return controls.size(); }

    void validate(std::size_t n) const {
        if (controls.size() != conditions.size() || controls.empty()) {
            throw std::invalid_argument("McxGate: need as many conditions as controls (and at least one)");
        }
        if (target >= n) {
            throw std::invalid_argument("McxGate: target outside register");
        }
        for (std::size_t i = 0; i < controls.size(); ++i) {
            if (controls[i] >= n) {
                throw std::invalid_argument("McxGate: control outside register");
            }
            if (controls[i] == target) {
                throw std::invalid_argument("McxGate: target coincides with a control");
            }
            if (conditions[i] > 1) {
                throw std::invalid_argument("McxGate: conditions must be bits");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (controls[j] == controls[i]) {
                    throw std::invalid_argument("McxGate: duplicate control");
                }
            }
        }
    }

    friend bool operator==(const McxGate&, const McxGate&) = default;
};

inline bool gate_fires(const McxGate& g, const BitString& x) {
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
        if (x.get(g.controls[i]) != (g.conditions[i] != 0)) {
            return false;
        }
    }
    return true;
}

inline BitString apply_gate(const McxGate& g, BitString x) {
    if (g.target >= x.width()) {
        throw std::invalid_argument("apply_gate: gate does not fit the bit string");
    }
    if (gate_fires(g, x)) {
        x.flip(g.target);
    }
    return x;
}

/// Random multi-control table: alpha draws of (m distinct positions in the
/// window [lo, hi], m condition bits). Positions within a draw are sorted and
/// conditions[j][i] belongs to positions[j][i].
struct RmccTables {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::vector<std::vector<std::uint32_t>> positions;
    std::vector<std::vector<std::uint8_t>> conditions;

    std::size_t size() const noexcept { return positions.size(); }
    friend bool operator==(const RmccTables&, const RmccTables&) = default;
};

inline RmccTables rmcc(std::uint32_t lo, std::uint32_t hi, int m, int alpha, CounterRng& rng) {
    if (hi < lo || m < 1 || static_cast<std::uint64_t>(hi - lo) + 1 < static_cast<std::uint64_t>(m)) {
        throw std::invalid_argument("rmcc: window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] cannot hold " + std::to_string(m) + " distinct positions");
    }
    if (alpha < 1) {
        throw std::invalid_argument("rmcc: alpha must be >= 1");
    }
    RmccTables t;
    t.lo = lo;
    t.hi = hi;
    std::vector<std::uint32_t> window(hi - lo + 1);
    for (std::uint32_t i = 0; i < window.size(); ++i) {
        window[i] = lo + i;
    }
    for (int j = 0; j < alpha; ++j) {
        // Partial Fisher-Yates: the first m slots become a uniform m-subset.
        for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
            std::size_t pick = i + rng.below(window.size() - i);
            std::swap(window[i], window[pick]);
        }
        std::vector<std::uint32_t> s(window.begin(), window.begin() + m);
        std::sort(s.begin(), s.end());
        std::vector<std::uint8_t> c(static_cast<std::size_t>(m));
        for (auto& bit : c) {
            bit = rng.bit() ? 1 : 0;
        }
        t.positions.push_back(std::move(s));
        t.conditions.push_back(std::move(c));
    }
    return t;
}

enum class CoinMode {
    /// One coin per (level, source register, gate), shared by all k targets.
    kPerRegister,
    /// Independent coin per (level, source register, gate, target bit).
    kPerTargetBit,
};

inline std::string_view to_string(CoinMode mode) {
    return mode == CoinMode::kPerRegister ? "per-register" : "per-target-bit";
}

inline CoinMode parse_coin_mode(std::string_view text) {
    if (text == "per-register") {
        return CoinMode::kPerRegister;
    }
    if (text == "per-target-bit") {
        return CoinMode::kPerTargetBit;
    }
    throw std::invalid_argument("unknown coin mode '" + std::string(text) + "'");
}

struct RandomizerParams {
    int n = 0;
    int k = 0;
    int m = 1;
    int alpha = 1;
    CoinMode coin_mode = CoinMode::kPerTargetBit;
    std::uint64_t seed = 0;

    /// L with n = k * 2^L.
    int levels() const { return std::countr_zero(static_cast<unsigned>(n / k)); }
    int registers() const { return n / k; }

    void validate() const {
        if (k < 1 || n < 1 || n > static_cast<int>(kMaxBitWidth)) {
            throw std::invalid_argument("randomizer: need 1 <= k and 1 <= n <= 4096");
        }
        if (n % k != 0 || !std::has_single_bit(static_cast<unsigned>(n / k)) || n / k < 2) {
            throw std::invalid_argument("randomizer: n = " + std::to_string(n) + " is not k * 2^L with k = " +
                                        std::to_string(k) + " and L >= 1");
        }
        if (m < 1 || m > k) {
            throw std::invalid_argument("randomizer: m = " + std::to_string(m) + " must satisfy 1 <= m <= k = " +
                                        std::to_string(k));
        }
        if (alpha < 1) {
            throw std::invalid_argument("randomizer: alpha must be >= 1");
        }
    }

    friend bool operator==(const RandomizerParams&, const RandomizerParams&) = default;
};

/// Test and variant hooks. Neither is part of the serialized form; the
/// resulting gate list is.
struct RandomizerOptions {
    /// Overrides every coin with this value.
    std::optional<bool> forced_coin;
    /// Replaces the random conditions of the table (one m-bit row per gate).
    std::optional<std::vector<std::vector<std::uint8_t>>> fixed_conditions;
};

enum class StageKind { kCopy, kRandomize, kFinal };

struct CircuitStage {
    StageKind kind = StageKind::kCopy;
    int level = 0;  // 1..L for copy and randomize stages, 0 for the final stage
    std::vector<McxGate> gates;

    friend bool operator==(const CircuitStage&, const CircuitStage&) = default;
};

struct RandomizerCircuit {
    RandomizerParams params;
    RmccTables tables;
    std::vector<CircuitStage> stages;

    std::size_t gate_count() const {
        std::size_t c = 0;
        for (const auto& s : stages) {
            c += s.gates.size();
        }
        return c;
    }

    friend bool operator==(const RandomizerCircuit&, const RandomizerCircuit&) = default;
};

inline RmccTables draw_randomizer_tables(const RandomizerParams& p, const RandomizerOptions& opt = {}) {
    CounterRng rng(derive_key(p.seed, Stream::kRmcc, {}));
    RmccTables t = rmcc(0, static_cast<std::uint32_t>(p.k - 1), p.m, p.alpha, rng);
    if (opt.fixed_conditions) {
        const auto& fc = *opt.fixed_conditions;
        if (fc.size() != static_cast<std::size_t>(p.alpha)) {
            throw std::invalid_argument("fixed_conditions needs one row per gate");
        }
        for (std::size_t j = 0; j < fc.size(); ++j) {
            if (fc[j].size() != static_cast<std::size_t>(p.m)) {
                throw std::invalid_argument("fixed_conditions rows must have m bits");
            }
            t.conditions[j] = fc[j];
        }
    }
    return t;
}

/// Coin for gate j of source register `reg` at `level` (level 0 = final stage)
/// targeting in-register bit q.
inline bool randomizer_coin(const RandomizerParams& p, const RandomizerOptions& opt, int level, int reg, int j, int q) {
    if (opt.forced_coin) {
        return *opt.forced_coin;
    }
    auto lv = static_cast<std::uint64_t>(level);
    auto r = static_cast<std::uint64_t>(reg);
    auto g = static_cast<std::uint64_t>(j);
    if (p.coin_mode == CoinMode::kPerRegister) {
        return keyed_coin(p.seed, Stream::kCoin, {lv, r, g});
    }
    return keyed_coin(p.seed, Stream::kCoin, {lv, r, g, static_cast<std::uint64_t>(q)});
}

/// Walks the gate program in circuit order, calling
/// visit(StageKind, level, controls, conditions, target) for every gate that is
/// present (coin = 1). Copy gates are reported with one control and condition 1.
template <typename Visit>
void for_each_randomizer_gate(const RandomizerParams& p, const RandomizerOptions& opt, const RmccTables& tables,
                              Visit&& visit) {
    const int k = p.k;
    const int levels = p.levels();
    std::uint32_t control_buf[1];
    const std::uint8_t one[1] = {1};
    for (int i = 1; i <= levels; ++i) {
        const int half = 1 << (i - 1);
        for (int j = 0; j < k; ++j) {
            for (int l = 0; l < half; ++l) {
                control_buf[0] = static_cast<std::uint32_t>(l * k + j);
                visit(StageKind::kCopy, i, std::span<const std::uint32_t>(control_buf, 1),
                      std::span<const std::uint8_t>(one, 1), static_cast<std::uint32_t>((half + l) * k + j));
            }
        }
    }
    std::vector<std::uint32_t> controls(static_cast<std::size_t>(p.m));
    for (int i = levels; i >= 1; --i) {
        const int half = 1 << (i - 1);
        for (int j = 0; j < p.alpha; ++j) {
            const auto& s = tables.positions[static_cast<std::size_t>(j)];
            const auto& c = tables.conditions[static_cast<std::size_t>(j)];
            for (int q = 0; q < k; ++q) {
                for (int l = 0; l < half; ++l) {
                    if (!randomizer_coin(p, opt, i, l, j, q)) {
                        continue;
                    }
                    for (std::size_t a = 0; a < s.size(); ++a) {
                        controls[a] = static_cast<std::uint32_t>(l * k) + s[a];
                    }
                    visit(StageKind::kRandomize, i, std::span<const std::uint32_t>(controls), std::span(c),
                          static_cast<std::uint32_t>((l + half) * k + q));
                }
            }
        }
    }
    for (int j = 0; j < p.alpha; ++j) {
        const auto& s = tables.positions[static_cast<std::size_t>(j)];
        const auto& c = tables.conditions[static_cast<std::size_t>(j)];
        for (int q = 0; q < k; ++q) {
            if (!randomizer_coin(p, opt, 0, 0, j, q)) {
                continue;
            }
            for (std::size_t a = 0; a < s.size(); ++a) {
                controls[a] = static_cast<std::uint32_t>(k) + s[a];
            }
            visit(StageKind::kFinal, 0, std::span<const std::uint32_t>(controls), std::span(c),
                  static_cast<std::uint32_t>(q));
        }
    }
}

inline RandomizerCircuit build_randomizer(const RandomizerParams& p, const RandomizerOptions& opt = {}) {
    p.validate();
    RandomizerCircuit circuit;
    circuit.params = p;
    circuit.tables = draw_randomizer_tables(p, opt);
    const int levels = p.levels();
    for (int i = 1; i <= levels; ++i) {
        circuit.stages.push_back({StageKind::kCopy, i, {}});
    }
    for (int i = levels; i >= 1; --i) {
        circuit.stages.push_back({StageKind::kRandomize, i, {}});
    }
    circuit.stages.push_back({StageKind::kFinal, 0, {}});
    auto stage_index = [levels](StageKind kind, int level) -> std::size_t {
        switch (kind) {
            case StageKind::kCopy:
                return static_cast<std::size_t>(level - 1);
            case StageKind::kRandomize:
                return static_cast<std::size_t>(levels + (levels - level));
            case StageKind::kFinal:
                break;
        }
        return static_cast<std::size_t>(2 * levels);
    };
    for_each_randomizer_gate(p, opt, circuit.tables,
                             [&](StageKind kind, int level, std::span<const std::uint32_t> controls,
                                 std::span<const std::uint8_t> conditions, std::uint32_t target) {
                                 circuit.stages[stage_index(kind, level)].gates.push_back(
                                     McxGate{{controls.begin(), controls.end()},
                                             {conditions.begin(), conditions.end()},
                                             target});
                             });
    return circuit;
}

inline BitString apply_circuit(const RandomizerCircuit& c, BitString x) {
    if (x.width() != static_cast<std::size_t>(c.params.n)) {
        throw std::invalid_argument("apply_circuit: input width " + std::to_string(x.width()) +
                                    " does not match n = " + std::to_string(c.params.n));
    }
    for (const auto& stage : c.stages) {
        for (const auto& g : stage.gates) {
            if (gate_fires(g, x)) {
                x.flip(g.target);
            }
        }
    }
    return x;
}

/// Bit-parallel form of a gate list for n <= 64: a gate fires iff
/// (x & mask) == value and then xors `flip` into x.
class CompiledCircuit {
   public:
    struct Op {
        std::uint64_t mask;
        std::uint64_t value;
        std::uint64_t flip;
    };

    explicit CompiledCircuit(int n) : n_(n) {
        if (n < 1 || n > 64) {
            throw std::invalid_argument("CompiledCircuit needs 1 <= n <= 64");
        }
    }

    void push(std::span<const std::uint32_t> controls, std::span<const std::uint8_t> conditions, std::uint32_t target) {
        Op op{0, 0, std::uint64_t{1} << target};
        for (std::size_t a = 0; a < controls.size(); ++a) {
            op.mask |= std::uint64_t{1} << controls[a];
            if (conditions[a] != 0) {
                op.value |= std::uint64_t{1} << controls[a];
            }
        }
        ops_.push_back(op);
    }

    std::uint64_t apply(std::uint64_t x) const noexcept {
        for (const auto& op : ops_) {
            if ((x & op.mask) == op.value) {
                x ^= op.flip;
            }
        }
        return x;
    }

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return ops_.size(); }

   private:
    int n_;
    std::vector<Op> ops_;
};

inline CompiledCircuit compile(const RandomizerCircuit& c) {
    CompiledCircuit out(c.params.n);
    for (const auto& stage : c.stages) {
        for (const auto& g : stage.gates) {
            out.push(g.controls, g.conditions, g.target);
        }
    }
    return out;
}

/// Same gate program as build_randomizer(p, opt), emitted straight into the
/// bit-parallel form. Used on hot paths that draw one circuit per sample.
inline CompiledCircuit compile_randomizer(const RandomizerParams& p, const RandomizerOptions& opt = {}) {
    p.validate();
    CompiledCircuit out(p.n);
    RmccTables tables = draw_randomizer_tables(p, opt);
    for_each_randomizer_gate(p, opt, tables,
                             [&](StageKind, int, std::span<const std::uint32_t> controls,
                                 std::span<const std::uint8_t> conditions,
                                 std::uint32_t target) { out.push(controls, conditions, target); });
    return out;
}

// Text format:
//   RANDOMIZER n k m alpha coin_mode seed
//   TABLE j p1:c1,...,pm:cm          (alpha lines, the multi-control table)
//   CNOT c t                         (copy stage)
//   MCX m c1:v1,...,cm:vm t          (randomize and final stages)
// Stage membership is recovered from the target register on parse.

inline std::string to_text(const RandomizerCircuit& c) {
    std::ostringstream out;
    const auto& p = c.params;
    out << "RANDOMIZER " << p.n << ' ' << p.k << ' ' << p.m << ' ' << p.alpha << ' ' << to_string(p.coin_mode) << ' '
        << p.seed << '\n';
    for (std::size_t j = 0; j < c.tables.size(); ++j) {
        out << "TABLE " << j << ' ';
        for (std::size_t a = 0; a < c.tables.positions[j].size(); ++a) {
            out << (a ? "," : "") << c.tables.positions[j][a] << ':' << int{c.tables.conditions[j][a]};
        }
        out << '\n';
    }
    for (const auto& stage : c.stages) {
        for (const auto& g : stage.gates) {
            if (stage.kind == StageKind::kCopy) {
                out << "CNOT " << g.controls[0] << ' ' << g.target << '\n';
                continue;
            }
            out << "MCX " << g.controls.size() << ' ';
            for (std::size_t a = 0; a < g.controls.size(); ++a) {
                out << (a ? "," : "") << g.controls[a] << ':' << int{g.conditions[a]};
            }
            out << ' ' << g.target << '\n';
        }
    }
    return out.str();
}

namespace detail {

inline void parse_pairs(std::string_view text, std::vector<std::uint32_t>& pos, std::vector<std::uint8_t>& val) {
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("malformed position:value item '" + std::string(item) + "'");
        }
        pos.push_back(static_cast<std::uint32_t>(std::stoul(std::string(item.substr(0, colon)))));
        int v = std::stoi(std::string(item.substr(colon + 1)));
        if (v != 0 && v != 1) {
            throw std::invalid_argument("condition values must be 0 or 1");
        }
        val.push_back(static_cast<std::uint8_t>(v));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
}

inline int level_of_register(int reg) { return reg == 0 ? 0 : std::bit_width(static_cast<unsigned>(reg)); }

}  // namespace detail

inline RandomizerCircuit parse_randomizer(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    RandomizerCircuit c;
    bool have_header = false;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("randomizer text line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "RANDOMIZER") {
            std::string mode;
            auto& p = c.params;
            if (!(ls >> p.n >> p.k >> p.m >> p.alpha >> mode >> p.seed)) {
                fail("malformed header");
            }
            p.coin_mode = parse_coin_mode(mode);
            p.validate();
            const int levels = p.levels();
            for (int i = 1; i <= levels; ++i) {
                c.stages.push_back({StageKind::kCopy, i, {}});
            }
            for (int i = levels; i >= 1; --i) {
                c.stages.push_back({StageKind::kRandomize, i, {}});
            }
            c.stages.push_back({StageKind::kFinal, 0, {}});
            c.tables.lo = 0;
            c.tables.hi = static_cast<std::uint32_t>(p.k - 1);
            have_header = true;
            continue;
        }
        if (!have_header) {
            fail("missing RANDOMIZER header");
        }
        const auto& p = c.params;
        const int levels = p.levels();
        if (word == "TABLE") {
            std::size_t j = 0;
            std::string items;
            if (!(ls >> j >> items) || j != c.tables.size()) {
                fail("malformed or out-of-order TABLE line");
            }
            std::vector<std::uint32_t> pos;
            std::vector<std::uint8_t> val;
            detail::parse_pairs(items, pos, val);
            c.tables.positions.push_back(std::move(pos));
            c.tables.conditions.push_back(std::move(val));
        } else if (word == "CNOT") {
            std::uint32_t ctl = 0;
            std::uint32_t tgt = 0;
            if (!(ls >> ctl >> tgt)) {
                fail("malformed CNOT");
            }
            McxGate g = McxGate::cnot(ctl, tgt);
            g.validate(static_cast<std::size_t>(p.n));
            int level = detail::level_of_register(static_cast<int>(tgt) / p.k);
            if (level < 1) {
                fail("CNOT targets register 0");
            }
            c.stages[static_cast<std::size_t>(level - 1)].gates.push_back(std::move(g));
        } else if (word == "MCX") {
            std::size_t m = 0;
            std::string items;
            std::uint32_t tgt = 0;
            if (!(ls >> m >> items >> tgt)) {
                fail("malformed MCX");
            }
            McxGate g;
            detail::parse_pairs(items, g.controls, g.conditions);
            g.target = tgt;
            if (g.controls.size() != m) {
                fail("MCX arity does not match its control list");
            }
            g.validate(static_cast<std::size_t>(p.n));
            int level = detail::level_of_register(static_cast<int>(tgt) / p.k);
            std::size_t idx = level == 0 ? static_cast<std::size_t>(2 * levels)
                                         : static_cast<std::size_t>(levels + (levels - level));
            c.stages[idx].gates.push_back(std::move(g));
        } else {
            fail("unknown record '" + word + "'");
        }
    }
    if (!have_header) {
        throw std::invalid_argument("randomizer text: missing RANDOMIZER header");
    }
    return c;
}

}  // namespace sdesign

#endif  // SDESIGN_RANDOMIZER_HPP
