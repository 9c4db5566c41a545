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

#ifndef SDESIGN_SCHEDULE_HPP
#define SDESIGN_SCHEDULE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sdesign/randomizer.hpp"

namespace sdesign {

enum class AncillaMode { kNone, kOnePerRegister };

inline std::string_view to_string(AncillaMode mode) {
    return mode == AncillaMode::kNone ? "none" : "one-ancilla-per-register";
}

struct DepthReport {
    std::size_t logical_layers = 0;
    std::size_t mcx_count = 0;
    AncillaMode ancilla_mode = AncillaMode::kNone;
    double elementary_depth = 0;
    /// Largest number of gates sharing one bit, over the scheduled gate lists.
    std::size_t hypergraph_max_degree = 0;
    /// Largest control count seen.
    std::size_t m = 0;
    /// Largest m * (degree - 1) + 1 over the scheduled gate lists, and whether
    /// every list met its own bound.
    std::size_t greedy_bound = 0;
    bool greedy_bound_ok = true;
    /// (m + 1) * (degree - 1) + 1: the first-fit guarantee when supports have
    /// m + 1 bits.
    std::size_t support_bound = 0;
    bool support_bound_ok = true;
    /// First-fit on control sets alone (targets ignored), with its own maximum
    /// degree and the m * (degree - 1) + 1 bound.
    std::size_t control_layers = 0;
    std::size_t control_max_degree = 0;
    bool control_bound_ok = true;
    /// Layer index per gate, in input order (single-list scheduling only).
    std::vector<std::uint32_t> layer_of;
};

struct CostModel {
    double c0 = 1.0;
    double c1 = 1.0;
    /// Adds k * t to the depth for the phase oracle when t > 0.
    int oracle_t = 0;

    double mcx_cost(std::size_t m, AncillaMode mode) const {
        if (mode == AncillaMode::kNone) {
            return c0 * static_cast<double>(m);
        }
        double lg = m <= 1 ? 1.0 : std::max(1.0, std::ceil(std::log2(static_cast<double>(m))));
        return c1 * lg * lg * lg;
    }
};

namespace detail {

struct FirstFit {
    std::uint32_t layers = 0;
    std::size_t max_degree = 0;
    std::vector<std::uint32_t> layer_of;
};

/// First-fit coloring in input order; a gate's vertices are its controls plus,
/// when `with_target`, its target.
inline FirstFit first_fit(std::span<const McxGate> gates, bool with_target) {
    std::uint32_t width = 0;
    for (const auto& g : gates) {
        width = std::max(width, g.target + 1);
        for (auto c : g.controls) {
            width = std::max(width, c + 1);
        }
    }
    FirstFit out;
    std::vector<std::vector<std::uint32_t>> colors_at(width);
    std::vector<char> taken;
    std::vector<std::uint32_t> vertices;
    out.layer_of.reserve(gates.size());
    for (const auto& g : gates) {
        vertices.assign(g.controls.begin(), g.controls.end());
        if (with_target) {
            vertices.push_back(g.target);
        }
        taken.assign(out.layers + 1, 0);
        for (auto v : vertices) {
            for (auto c : colors_at[v]) {
                taken[c] = 1;
            }
        }
        std::uint32_t color = 0;
        while (taken[color]) {
            ++color;
        }
        out.layers = std::max(out.layers, color + 1);
        out.layer_of.push_back(color);
        for (auto v : vertices) {
            colors_at[v].push_back(color);
            out.max_degree = std::max(out.max_degree, colors_at[v].size());
        }
    }
    return out;
}

}  // namespace detail

/// First-fit coloring of the conflict graph in input order. Two gates conflict
/// iff their supports (controls and target) share a bit.
inline DepthReport schedule_mcx_layers(std::span<const McxGate> gates) {
    DepthReport r;
    r.mcx_count = gates.size();
    for (const auto& g : gates) {
        r.m = std::max(r.m, g.controls.size());
    }
    auto support = detail::first_fit(gates, true);
    r.logical_layers = support.layers;
    r.hypergraph_max_degree = support.max_degree;
    r.layer_of = std::move(support.layer_of);
    if (!gates.empty()) {
        r.greedy_bound = r.m * (r.hypergraph_max_degree - 1) + 1;
        r.greedy_bound_ok = r.logical_layers <= r.greedy_bound;
        r.support_bound = (r.m + 1) * (r.hypergraph_max_degree - 1) + 1;
        r.support_bound_ok = r.logical_layers <= r.support_bound;
        auto control = detail::first_fit(gates, false);
        r.control_layers = control.layers;
        r.control_max_degree = control.max_degree;
        r.control_bound_ok = control.layers <= r.m * (control.max_degree - 1) + 1;
    }
    return r;
}

/// Per-stage layering of a randomizer circuit. Stages do not commute with each
/// other, so each is scheduled on its own; each copy level is one CNOT layer.
inline DepthReport depth_report(const RandomizerCircuit& c, AncillaMode mode, const CostModel& cost = {}) {
    DepthReport total;
    total.ancilla_mode = mode;
    for (const auto& stage : c.stages) {
        if (stage.kind == StageKind::kCopy) {
            total.logical_layers += 1;
            total.elementary_depth += 1;
            continue;
        }
        if (stage.gates.empty()) {
            continue;
        }
        DepthReport s = schedule_mcx_layers(stage.gates);
        total.logical_layers += s.logical_layers;
        total.mcx_count += s.mcx_count;
        total.hypergraph_max_degree = std::max(total.hypergraph_max_degree, s.hypergraph_max_degree);
        total.m = std::max(total.m, s.m);
        total.greedy_bound = std::max(total.greedy_bound, s.greedy_bound);
        total.greedy_bound_ok = total.greedy_bound_ok && s.greedy_bound_ok;
        total.support_bound = std::max(total.support_bound, s.support_bound);
        total.support_bound_ok = total.support_bound_ok && s.support_bound_ok;
        total.control_layers += s.control_layers;
        total.control_max_degree = std::max(total.control_max_degree, s.control_max_degree);
        total.control_bound_ok = total.control_bound_ok && s.control_bound_ok;
        total.elementary_depth += static_cast<double>(s.logical_layers) * cost.mcx_cost(s.m, mode);
    }
    if (cost.oracle_t > 0) {
        total.elementary_depth += static_cast<double>(c.params.k) * cost.oracle_t;
    }
    return total;
}

}  // namespace sdesign

#endif  // SDESIGN_SCHEDULE_HPP
