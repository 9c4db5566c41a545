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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// CSVs for the plotting side go to $SDESIGN_OUT_DIR (default acceptance_out/).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sdesign/sdesign.hpp"

using namespace sdesign;

namespace {

// Pinned tolerances.
constexpr double kTdTol = 1e-10;              // criterion 1
constexpr double kScalingFactor = 2.0;        // criterion 2
constexpr double kTriangleSlack = 1e-9;       // criterion 3
constexpr double kMaxDeficiency = 0.1;        // criterion 4
constexpr double kX2Sigmas = 3.0;             // criterion 5
constexpr double kResourceTol = 1e-9;         // criterion 7
constexpr double kCollisionTol = 1e-12;       // criterion 7
constexpr double kUnbiasedSigmas = 4.0;       // criterion 8
constexpr double kSlopeTarget = -0.5;         // criterion 9
constexpr double kSlopeTol = 0.1;             // criterion 9
constexpr double kFidelitySigmas = 3.0;       // criterion 10
constexpr std::uint64_t kSeed = 20260101;

std::filesystem::path out_dir() {
    const char* env = std::getenv("SDESIGN_OUT_DIR");
    std::filesystem::path dir = env != nullptr && *env != '\0' ? env : "acceptance_out";
    std::filesystem::create_directories(dir);
    return dir;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << id << " " << name << " | " << o.detail << " ["
              << std::fixed << std::setprecision(1) << secs << " s]" << std::defaultfloat << std::endl;
}

std::string fmt(double v, int digits = 6) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome function_vs_unique() {
    struct Case {
        int k, t;
        double expected;
    };
    Outcome o{true, ""};
    for (auto c : {Case{2, 2, 0.25}, Case{3, 2, 0.125}, Case{2, 3, 0.625}}) {
        double td = trace_distance(enumerated_function_moment(c.k, c.t), unique_moment(c.k, c.t));
        bool ok = std::abs(td - c.expected) <= kTdTol;
        o.pass = o.pass && ok;
        o.detail += "(k=" + std::to_string(c.k) + ",t=" + std::to_string(c.t) + ") " + fmt(td, 12) + "; ";
    }
    return o;
}

Outcome unique_to_haar() {
    const int t = 2;
    double lo = INFINITY;
    double hi = 0;
    Outcome o{true, ""};
    for (int n = 2; n <= 5; ++n) {
        double td = trace_distance(unique_moment(n, t), haar_moment(n, t));
        double scaled = td * std::ldexp(1.0, n) / (t * t);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
        o.detail += "n=" + std::to_string(n) + " " + fmt(scaled) + "; ";
    }
    o.pass = hi / lo < kScalingFactor;
    o.detail += "max/min " + fmt(hi / lo);
    return o;
}

Outcome pipeline_triangle() {
    auto pipe = exact_pipeline_moment(2, 2, 2);
    auto unique = unique_moment(2, 2);
    auto haar = haar_moment(2, 2);
    double td = trace_distance(pipe, haar);
    double td1 = trace_distance(pipe, unique);
    double td2 = trace_distance(unique, haar);
    return {td <= td1 + td2 + kTriangleSlack,
            "TD " + fmt(td) + " <= TD1 " + fmt(td1) + " + TD2 " + fmt(td2)};
}

Outcome full_rank_bound() {
    Outcome o{true, ""};
    const double eps = 0.1;
    for (int t : {2, 4, 8}) {
        RankExperimentConfig cfg;
        cfg.t = t;
        cfg.k = static_cast<int>(std::ceil(8 * std::log2(t * t / eps)));
        cfg.m = std::max(1, static_cast<int>(std::ceil(std::log2(t))));
        cfg.alpha = alpha_bound(t, eps);
        cfg.trials = 10000;
        cfg.seed = derive_key(kSeed, Stream::kTrial, {static_cast<std::uint64_t>(t)});
        auto r = full_rank_mc(cfg);
        bool ok = r.deficiency_ci.hi <= kMaxDeficiency;
        o.pass = o.pass && ok;
        o.detail += "t=" + std::to_string(t) + " k=" + std::to_string(cfg.k) + " m=" + std::to_string(cfg.m) +
                    " alpha=" + std::to_string(cfg.alpha) + " deficiency " + fmt(r.deficiency_rate) + " (upper " +
                    fmt(r.deficiency_ci.hi) + "); ";
    }
    return o;
}

Outcome x2_consistency() {
    auto p = X2ModelParams::from_scale(4, 2, 59);
    const std::uint64_t trials = 100000;
    auto mc = x2_model_mc(p, trials, kSeed);
    double bound = static_cast<double>(x2_union_bound(p));
    double q = std::min(bound, 1.0);
    double se = std::sqrt(q * (1 - q) / static_cast<double>(trials));
    return {mc.rate <= bound + kX2Sigmas * se,
            "MC " + fmt(mc.rate) + " (" + std::to_string(mc.deficient) + "/" + std::to_string(trials) +
                ") vs union bound " + fmt(bound) + " + 3 SE " + fmt(se)};
}

Outcome scheduling_bound() {
    // Grid over t in {2, 4, 8}: alpha from the rank bound, m = ceil(log2 t),
    // k the register width, n = 4k.
    const double eps = 0.1;
    std::size_t instances = 0;
    std::size_t stages = 0;
    std::size_t greedy_fail = 0;
    std::size_t support_fail = 0;
    std::size_t control_fail = 0;
    std::size_t worst_excess = 0;
    double ratio_sum = 0;
    std::ofstream csv(out_dir() / "schedule.csv");
    csv << "# acceptance criterion 6\n";
    csv << "circuit_id,t,n,k,m,alpha,stage,layers,max_degree,greedy_bound,support_bound,control_layers,"
           "control_bound\n";
    for (int i = 0; i < 100; ++i) {
        int t = 2 << (i % 3);
        int m = std::max(1, static_cast<int>(std::ceil(std::log2(t))));
        int alpha = alpha_bound(t, eps);
        int k = register_width(t, eps);
        RandomizerParams p{4 * k, k, m, alpha, CoinMode::kPerTargetBit,
                           derive_key(kSeed, Stream::kRmcc, {static_cast<std::uint64_t>(i)})};
        auto c = build_randomizer(p);
        bool bad = false;
        int stage_id = 0;
        for (const auto& s : c.stages) {
            if (s.kind == StageKind::kCopy || s.gates.empty()) {
                continue;
            }
            auto r = schedule_mcx_layers(s.gates);
            ++stages;
            ratio_sum += static_cast<double>(r.logical_layers) / (alpha * m);
            if (!r.greedy_bound_ok) {
                bad = true;
                worst_excess = std::max(worst_excess, r.logical_layers - r.greedy_bound);
            }
            support_fail += r.support_bound_ok ? 0 : 1;
            control_fail += r.control_bound_ok ? 0 : 1;
            csv << i << "," << t << "," << p.n << "," << k << "," << m << "," << alpha << "," << stage_id++ << ","
                << r.logical_layers << "," << r.hypergraph_max_degree << "," << r.greedy_bound << ","
                << r.support_bound << "," << r.control_layers << ","
                << r.m * (r.control_max_degree - 1) + 1 << "\n";
        }
        greedy_fail += bad ? 1 : 0;
        ++instances;
    }
    // H has one m-uniform hyperedge per gate on its control set; targets are
    // separate. The full-support schedule (controls and target) is reported
    // next to it with both bounds.
    return {control_fail == 0,
            std::to_string(instances) + " circuits, " + std::to_string(stages) +
                " stages; control hypergraph m(D-1)+1 violated in " + std::to_string(control_fail) +
                " stages; full-support schedule: m(D-1)+1 exceeded in " + std::to_string(greedy_fail) +
                " circuits (worst excess " + std::to_string(worst_excess) + "), (m+1)(D-1)+1 exceeded in " +
                std::to_string(support_fail) + " stages; mean layers/(alpha m) " +
                fmt(ratio_sum / static_cast<double>(stages))};
}

Outcome resource_ceilings() {
    const int n = 8;
    Outcome o{true, ""};
    for (int k : {1, 2, 3}) {
        // n = 8 is not k * 2^L for k = 3: the randomizer acts on 6 qubits and
        // the last two stay |0>.
        int width = k == 3 ? 6 : n;
        double max_ent = 0;
        double max_m0 = 0;
        double max_coh_err = 0;
        double max_col_err = 0;
        for (int i = 0; i < 50; ++i) {
            std::uint64_t key = derive_key(kSeed, Stream::kState, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i)});
            RandomizerParams p{width, k, std::min(k, 2), 4, CoinMode::kPerTargetBit, key};
            auto circuit = build_randomizer(p);
            auto s = prepare_with_map(n, k, poly_oracle(k, 2, derive_key(key, Stream::kOracle, {})), [&](BitString x) {
                auto y = apply_circuit(circuit, BitString::from_u64(static_cast<std::size_t>(width), x.to_u64()));
                return BitString::from_u64(static_cast<std::size_t>(n), y.to_u64());
            });
            for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
                std::vector<std::uint32_t> region;
                for (std::uint32_t q = 0; q < static_cast<std::uint32_t>(n); ++q) {
                    if ((mask >> q) & 1) {
                        region.push_back(q);
                    }
                }
                max_ent = std::max(max_ent, entanglement_entropy(s, region).entropy);
            }
            max_coh_err = std::max(max_coh_err, std::abs(coherence(s) - k));
            max_col_err = std::max(max_col_err, std::abs(collision_prob(s) - std::ldexp(1.0, -k)));
            max_m0 = std::max(max_m0, stabilizer_renyi(s, 0));
        }
        bool ok = max_coh_err <= kResourceTol && max_ent <= k + kResourceTol && max_m0 <= 2 * k + kResourceTol &&
                  max_col_err <= kCollisionTol;
        o.pass = o.pass && ok;
        o.detail += "k=" + std::to_string(k) + ": max S " + fmt(max_ent) + ", max M0 " + fmt(max_m0) +
                    ", |coh-k| " + fmt(max_coh_err, 3) + ", |col-2^-k| " + fmt(max_col_err, 3) + "; ";
    }
    o.detail += "all 127 bipartitions";
    return o;
}

Outcome shadow_unbiased() {
    const int n = 4;
    const Eigen::Index dim = Eigen::Index{1} << n;
    CounterRng rng(derive_key(kSeed, Stream::kHaar, {}));
    Eigen::VectorXcd psi = haar_state(n, rng);
    Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i + 1; j < dim; ++j) {
            o(i, j) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
            o(j, i) = std::conj(o(i, j));
        }
    }
    double truth = psi.dot(o * psi).real();
    auto hook = [&o](std::uint64_t x, std::uint64_t y) {
        return o(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    };
    auto r = shadow_estimate(psi, 1, UpMode::exact_permutation(), hook, 1000000, kSeed);
    double z = (r.mean - truth) / r.std_error;
    return {std::abs(z) <= kUnbiasedSigmas,
            "mean " + fmt(r.mean) + " vs tr(rho O) " + fmt(truth) + ", SE " + fmt(r.std_error) + ", z " + fmt(z, 3)};
}

Outcome pair_slope() {
    const std::vector<std::uint64_t> grid{1000, 10000, 100000, 1000000};
    double slope_sum = 0;
    double trimmed_sum = 0;
    double identity_sum = 0;
    std::vector<double> mean_norm(grid.size(), 0);
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        std::uint64_t seed = derive_key(kSeed, Stream::kPairs, {static_cast<std::uint64_t>(s)});
        auto pts = pair_uniformity(8, UpMode::circuit(1, 2), grid, seed);
        slope_sum += loglog_slope(pts);
        trimmed_sum += loglog_slope({pts.begin() + 1, pts.end()});
        for (std::size_t i = 0; i < pts.size(); ++i) {
            mean_norm[i] += pts[i].max_norm / seeds;
        }
        identity_sum += loglog_slope(pair_uniformity(8, UpMode::identity(), grid, seed));
    }
    std::ofstream csv(out_dir() / "pairs.csv");
    csv << "# acceptance criterion 9, mean over " << seeds << " seeds\n";
    csv << "n,alpha,Ns,max_norm\n" << std::setprecision(10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << 8 << "," << 2 << "," << grid[i] << "," << mean_norm[i] << "\n";
    }
    double slope = slope_sum / seeds;
    return {std::abs(slope - kSlopeTarget) <= kSlopeTol,
            "mean slope " + fmt(slope, 4) + " (without 1e3 point " + fmt(trimmed_sum / seeds, 4) +
                "; identity U_p " + fmt(identity_sum / seeds, 4) + ")"};
}

Outcome fidelity() {
    const int n = 8;
    const int states = 100;
    const std::uint64_t shots = 10000;
    std::vector<Eigen::VectorXcd> targets;
    for (int i = 0; i < states; ++i) {
        CounterRng rng(derive_key(kSeed, Stream::kState, {static_cast<std::uint64_t>(i)}));
        targets.push_back(haar_state(n, rng));
    }
    std::ofstream csv(out_dir() / "fidelity.csv");
    csv << "# acceptance criterion 10\n";
    csv << "state_id,alpha,shots,mean,std,bias\n" << std::setprecision(10);
    Outcome o{true, ""};
    for (std::string label : {"2", "4", "inf", "haar"}) {
        double sum = 0;
        double var = 0;
        for (int i = 0; i < states; ++i) {
            const auto& psi = targets[static_cast<std::size_t>(i)];
            std::uint64_t seed = derive_key(kSeed, Stream::kShot, {static_cast<std::uint64_t>(i)});
            EstimatorResult r;
            if (label == "haar") {
                r = haar_shadow_fidelity(psi, shots, seed);
            } else {
                UpMode mode = label == "inf" ? UpMode::exact_permutation() : UpMode::circuit(1, std::stoi(label));
                r = shadow_estimate(psi, 1, mode, offdiagonal_projector(psi), shots, seed);
            }
            double bias = diagonal_bias(psi);
            csv << i << "," << label << "," << shots << "," << r.mean << "," << r.std_error << "," << bias << "\n";
            sum += r.mean + bias;
            var += r.std_error * r.std_error;
        }
        double mean = sum / states;
        double se = std::sqrt(var) / states;
        double z = (mean - 1) / se;
        if (label != "haar") {
            o.pass = o.pass && std::abs(z) <= kFidelitySigmas;
        }
        o.detail += "alpha=" + label + " " + fmt(mean, 5) + " (z " + fmt(z, 3) + "); ";
    }
    return o;
}

Outcome exact_pairs() {
    using boost::multiprecision::cpp_rational;
    auto fixed = exact_pair_check(2, PairVariant::kFixedConditions, 2);
    bool stable = fixed.pair_deviation == exact_pair_check(2, PairVariant::kFixedConditions, 2).pair_deviation;
    bool monotone = true;
    cpp_rational prev = 1;
    std::string detail = "fixed-conditions " + fixed.pair_deviation.str() + "; literal";
    for (int alpha : {2, 4, 8}) {
        auto r = exact_pair_check(2, PairVariant::kLiteral, alpha);
        stable = stable && r.pair_deviation == exact_pair_check(2, PairVariant::kLiteral, alpha).pair_deviation;
        stable = stable && r.outputs_distinct;
        monotone = monotone && r.pair_deviation <= prev;
        prev = r.pair_deviation;
        detail += " a=" + std::to_string(alpha) + ":" + r.pair_deviation.str();
    }
    detail += std::string("; stable ") + (stable ? "yes" : "no") + ", non-increasing " + (monotone ? "yes" : "no");
    return {stable && monotone, detail};
}

}  // namespace

int main() {
    double residual = eigensolver_self_check(kSeed);
    std::cout << "eigensolver residual " << residual << std::endl;
    if (!(residual <= 1e-10)) {
        std::cout << "eigensolver self-check failed" << std::endl;
        return 1;
    }
    criterion(1, "function moment vs unique moment", function_vs_unique);
    criterion(2, "unique-to-Haar scaling", unique_to_haar);
    criterion(3, "pipeline triangle inequality", pipeline_triangle);
    criterion(4, "full-rank deficiency", full_rank_bound);
    criterion(5, "X2 union bound", x2_consistency);
    criterion(6, "scheduling bound", scheduling_bound);
    criterion(7, "resource ceilings", resource_ceilings);
    criterion(8, "shadow unbiasedness", shadow_unbiased);
    criterion(9, "pair uniformity slope", pair_slope);
    criterion(10, "Haar fidelity estimation", fidelity);
    criterion(11, "exact pair enumeration", exact_pairs);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
