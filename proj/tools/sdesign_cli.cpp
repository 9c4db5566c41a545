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

// Command line front end. Every command writes a CSV (or circuit text) whose
// leading `#` lines echo the resolved config and master seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>

#include "sdesign/sdesign.hpp"

namespace {

using namespace sdesign;
using nlohmann::json;

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    int workers = 1;
    std::string config;
    std::vector<std::string> asserts;
};

struct RandomizeArgs {
    int n = 8, k = 2, m = 1, alpha = 4;
    std::string coin_mode = "per-target-bit";
    std::string ancilla = "none";
    int oracle_t = 0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RandomizeArgs, n, k, m, alpha, coin_mode, ancilla, oracle_t)

struct DesignArgs {
    int n_max = 5;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DesignArgs, n_max)

struct RankArgs {
    std::vector<int> t{2, 4, 8};
    double eps = 0.1;
    int k = 0;
    int m = 0;
    std::vector<int> alpha;
    std::uint64_t trials = 10000;
    double log_base = 2.0;
    double max_deficiency = 0.1;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RankArgs, t, eps, k, m, alpha, trials, log_base, max_deficiency)

struct FidelityArgs {
    int n = 8, k = 1, m = 1;
    int states = 100;
    std::uint64_t shots = 10000;
    std::vector<std::string> alpha{"1", "2", "4", "8", "inf", "haar"};
    double z = 3.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FidelityArgs, n, k, m, states, shots, alpha, z)

struct PairsArgs {
    int n = 8, k = 1, m = 1;
    std::vector<std::string> alpha{"2"};
    std::vector<std::uint64_t> grid{1000, 10000, 100000, 1000000};
    int repeats = 1;
    double slope = -0.5, slope_tol = 0.1;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PairsArgs, n, k, m, alpha, grid, repeats, slope, slope_tol)

struct ResourcesArgs {
    int n = 8, k = 2, m = 1, alpha = 4, t = 2;
    int states = 50;
    bool magic = true;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ResourcesArgs, n, k, m, alpha, t, states, magic)

struct ScheduleArgs {
    int n = 16, k = 4, m = 2, alpha = 8;
    int circuits = 100;
    std::string coin_mode = "per-target-bit";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScheduleArgs, n, k, m, alpha, circuits, coin_mode)

struct ParamsArgs {
    std::vector<int> t{2};
    std::vector<double> eps{0.1};
    double log_base = 2.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ParamsArgs, t, eps, log_base)

class Failures {
  public:
    void check(bool ok, const std::string& name, const std::string& detail) {
        if (!ok) {
            names_.push_back(name + " (" + detail + ")");
        }
    }
    int report() const {
        for (const auto& n : names_) {
            std::cerr << "assertion failed: " << n << "\n";
        }
        return names_.empty() ? 0 : 1;
    }

  private:
    std::vector<std::string> names_;
};

bool wants(const Common& c, std::string_view name) {
    return std::find(c.asserts.begin(), c.asserts.end(), name) != c.asserts.end();
}

/// Output sink: --out, else $SDESIGN_OUT_DIR/<command>.<ext>, else stdout.
class Output {
  public:
    Output(const Common& c, const std::string& command, const json& resolved, const std::string& ext = "csv") {
        std::string path = c.out;
        if (path.empty()) {
            if (const char* dir = std::getenv("SDESIGN_OUT_DIR"); dir != nullptr && *dir != '\0') {
                path = (std::filesystem::path(dir) / (command + "." + ext)).string();
            }
        }
        if (!path.empty()) {
            auto parent = std::filesystem::path(path).parent_path();
            if (!parent.empty()) {
                std::filesystem::create_directories(parent);
            }
            file_.open(path);
            if (!file_) {
                throw std::runtime_error("cannot open output file " + path);
            }
        }
        os() << "# sdesign " << command << "\n";
        os() << "# config " << resolved.dump() << "\n";
        os() << "# seed " << c.seed << "\n";
        os() << std::setprecision(10);
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  private:
    std::ofstream file_;
};

json resolved_config(const json& args, const Common& c) {
    json j = args;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    return j;
}

/// Parses an alpha column label: an integer, "inf" (exact permutation),
/// "identity" or "haar".
UpMode up_mode(const std::string& label, int m) {
    if (label == "inf") {
        return UpMode::exact_permutation();
    }
    if (label == "identity") {
        return UpMode::identity();
    }
    std::size_t used = 0;
    int alpha = 0;
    try {
        alpha = std::stoi(label, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != label.size() || alpha < 1) {
        throw std::invalid_argument("alpha: expected a positive integer, inf, identity or haar, got '" + label + "'");
    }
    return UpMode::circuit(m, alpha);
}

AncillaMode parse_ancilla(const std::string& s) {
    if (s == "none") {
        return AncillaMode::kNone;
    }
    if (s == "per-register") {
        return AncillaMode::kOnePerRegister;
    }
    throw std::invalid_argument("ancilla: expected none or per-register, got '" + s + "'");
}

// ---------------------------------------------------------------------------

int run_randomize(const RandomizeArgs& a, const Common& c) {
    RandomizerParams p{a.n, a.k, a.m, a.alpha, parse_coin_mode(a.coin_mode), c.seed};
    auto circuit = build_randomizer(p);
    CostModel cost;
    cost.oracle_t = a.oracle_t;
    auto report = depth_report(circuit, parse_ancilla(a.ancilla), cost);
    {
        Output out(c, "randomize", resolved_config(json(a), c), "txt");
        out.os() << to_text(circuit);
    }
    json r{{"logical_layers", report.logical_layers},
           {"mcx_count", report.mcx_count},
           {"ancilla_mode", std::string(to_string(report.ancilla_mode))},
           {"elementary_depth", report.elementary_depth},
           {"hypergraph_max_degree", report.hypergraph_max_degree},
           {"greedy_bound", report.greedy_bound},
           {"greedy_bound_ok", report.greedy_bound_ok},
           {"support_bound", report.support_bound},
           {"support_bound_ok", report.support_bound_ok},
           {"control_layers", report.control_layers},
           {"control_bound_ok", report.control_bound_ok}};
    std::cerr << r.dump() << "\n";
    Failures f;
    if (wants(c, "support_bound")) {
        f.check(report.support_bound_ok, "support_bound", std::to_string(report.logical_layers) + " layers");
    }
    if (wants(c, "greedy_bound")) {
        f.check(report.greedy_bound_ok, "greedy_bound", std::to_string(report.logical_layers) + " layers");
    }
    return f.report();
}

int run_design_check(const DesignArgs& a, const Common& c) {
    if (a.n_max < 2 || a.n_max > 6) {
        throw std::invalid_argument("n_max: must be in [2, 6] (moment dimension 2^(2 n_max) <= 4096)");
    }
    Output out(c, "design-check", resolved_config(json(a), c));
    out.os() << "check,n,k,t,value,bound,pass\n";
    Failures f;
    auto row = [&](const std::string& name, int n, int k, int t, double value, double bound, bool ok) {
        out.os() << name << "," << n << "," << k << "," << t << "," << value << "," << bound << "," << (ok ? 1 : 0)
                 << "\n";
        f.check(ok, name, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " t=" + std::to_string(t));
    };
    for (auto [k, t] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
        auto fm = enumerated_function_moment(k, t);
        double td = trace_distance(fm, unique_moment(k, t));
        double collision = 1;
        for (int i = 1; i < t; ++i) {
            collision *= 1 - static_cast<double>(i) / (1 << k);
        }
        collision = 1 - collision;
        row("function_vs_unique", k, k, t, td, collision, std::abs(td - collision) < 1e-10);
        double closed = trace_distance(fm, function_moment_closed_form(k, t));
        row("function_closed_form", k, k, t, closed, 1e-10, closed < 1e-10);
    }
    double base = 0;
    for (int n = 2; n <= a.n_max; ++n) {
        double td = trace_distance(unique_moment(n, 2), haar_moment(n, 2));
        double scaled = td * std::ldexp(1.0, n) / 4;
        if (n == 2) {
            base = scaled;
        }
        row("unique_vs_haar", n, n, 2, td, 2 * base, scaled < 2 * base && scaled > base / 2);
    }
    {
        auto pipe = exact_pipeline_moment(2, 2, 2);
        auto haar = haar_moment(2, 2);
        double td = trace_distance(pipe, haar);
        double td1 = trace_distance(pipe, unique_moment(2, 2));
        double td2 = trace_distance(unique_moment(2, 2), haar);
        row("pipeline_triangle", 2, 2, 2, td, td1 + td2 + 1e-9, td <= td1 + td2 + 1e-9);
        auto mc = check_moment(pipe);
        row("pipeline_valid", 2, 2, 2, mc.symmetry_error, 1e-10, mc.ok);
    }
    double eig = eigensolver_self_check(c.seed);
    row("eigensolver_residual", 0, 0, 0, eig, 1e-10, eig < 1e-10);
    return f.report();
}

int run_rank_mc(const RankArgs& a, const Common& c) {
    Output out(c, "rank-mc", resolved_config(json(a), c));
    out.os() << "t,k,m,alpha,trials,full_rank_rate,ci_lo,ci_hi,mean_min_distance\n";
    Failures f;
    for (int t : a.t) {
        RankExperimentConfig cfg;
        cfg.t = t;
        cfg.k = a.k > 0 ? a.k : register_width(t, a.eps, a.log_base);
        cfg.m = a.m > 0 ? a.m : std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(t)))));
        cfg.trials = a.trials;
        cfg.workers = c.workers;
        std::vector<int> alphas = a.alpha;
        if (alphas.empty()) {
            alphas.push_back(alpha_bound(t, a.eps, a.log_base));
        }
        for (int alpha : alphas) {
            cfg.alpha = alpha;
            cfg.seed = derive_key(c.seed, Stream::kTrial,
                                  {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(alpha)});
            auto r = full_rank_mc(cfg);
            out.os() << t << "," << cfg.k << "," << cfg.m << "," << alpha << "," << r.trials << ","
                     << r.full_rank_rate << "," << r.full_rank_ci.lo << "," << r.full_rank_ci.hi << ","
                     << r.mean_min_distance << "\n";
            if (wants(c, "deficiency")) {
                f.check(r.deficiency_ci.hi <= a.max_deficiency, "deficiency",
                        "t=" + std::to_string(t) + " alpha=" + std::to_string(alpha) +
                            " upper=" + std::to_string(r.deficiency_ci.hi));
            }
        }
    }
    return f.report();
}

int run_shadow_fidelity(const FidelityArgs& a, const Common& c) {
    if (a.n < 1 || a.n > kMaxShadowQubits) {
        throw std::invalid_argument("n: must be in [1, " + std::to_string(kMaxShadowQubits) + "] for dense states");
    }
    Output out(c, "shadow-fidelity", resolved_config(json(a), c));
    out.os() << "state_id,alpha,shots,mean,std,bias\n";
    Failures f;
    std::vector<Eigen::VectorXcd> states;
    for (int i = 0; i < a.states; ++i) {
        CounterRng rng(derive_key(c.seed, Stream::kState, {static_cast<std::uint64_t>(i)}));
        states.push_back(haar_state(a.n, rng));
    }
    for (const auto& label : a.alpha) {
        double sum = 0;
        double var = 0;
        for (int i = 0; i < a.states; ++i) {
            const auto& psi = states[static_cast<std::size_t>(i)];
            double bias = diagonal_bias(psi);
            std::uint64_t shot_seed = derive_key(c.seed, Stream::kShot, {static_cast<std::uint64_t>(i)});
            EstimatorResult r;
            if (label == "haar") {
                r = haar_shadow_fidelity(psi, a.shots, shot_seed);
            } else {
                r = shadow_estimate(psi, a.k, up_mode(label, a.m), offdiagonal_projector(psi), a.shots, shot_seed,
                                    c.workers);
            }
            out.os() << i << "," << label << "," << a.shots << "," << r.mean << "," << r.std_error << "," << bias
                     << "\n";
            sum += r.mean + bias;
            var += r.std_error * r.std_error;
        }
        if (wants(c, "unbiased") && a.states > 0) {
            double mean = sum / a.states;
            double se = std::sqrt(var) / a.states;
            f.check(std::abs(mean - 1) <= a.z * se, "unbiased",
                    "alpha=" + label + " mean=" + std::to_string(mean) + " se=" + std::to_string(se));
        }
    }
    return f.report();
}

int run_shadow_pairs(const PairsArgs& a, const Common& c) {
    Output out(c, "shadow-pairs", resolved_config(json(a), c));
    out.os() << "n,alpha,Ns,max_norm\n";
    Failures f;
    for (const auto& label : a.alpha) {
        UpMode mode = up_mode(label, a.m);
        std::vector<PairUniformityPoint> mean(a.grid.size());
        for (int rep = 0; rep < a.repeats; ++rep) {
            auto pts = pair_uniformity(a.n, mode, a.grid, derive_key(c.seed, Stream::kPairs, {static_cast<std::uint64_t>(rep)}));
            for (std::size_t i = 0; i < pts.size(); ++i) {
                mean[i].samples = pts[i].samples;
                mean[i].max_norm += pts[i].max_norm / a.repeats;
            }
        }
        for (const auto& p : mean) {
            out.os() << a.n << "," << label << "," << p.samples << "," << p.max_norm << "\n";
        }
        if (wants(c, "slope")) {
            double s = loglog_slope(mean);
            f.check(std::abs(s - a.slope) <= a.slope_tol, "slope", "alpha=" + label + " slope=" + std::to_string(s));
        }
    }
    return f.report();
}

int run_resources(const ResourcesArgs& a, const Common& c) {
    if (a.magic && a.n > kMaxMagicQubits) {
        throw std::invalid_argument("n: magic needs n <= " + std::to_string(kMaxMagicQubits) + " (pass --magic=false)");
    }
    Output out(c, "resources", resolved_config(json(a), c));
    out.os() << "state_id,n,k,entanglement,purity,coherence,collision,magic_m0\n";
    Failures f;
    std::vector<std::uint32_t> half(static_cast<std::size_t>(a.n / 2));
    std::iota(half.begin(), half.end(), 0u);
    for (int i = 0; i < a.states; ++i) {
        std::uint64_t key = derive_key(c.seed, Stream::kState, {static_cast<std::uint64_t>(i)});
        RandomizerParams p{a.n, a.k, a.m, a.alpha, CoinMode::kPerTargetBit, key};
        auto s = prepare(a.n, a.k, poly_oracle(a.k, a.t, derive_key(key, Stream::kOracle, {})), build_randomizer(p));
        auto ent = entanglement_entropy(s, half);
        double coh = coherence(s);
        double col = collision_prob(s);
        out.os() << i << "," << a.n << "," << a.k << "," << ent.entropy << "," << ent.purity << "," << coh << "," << col
                 << ",";
        double m0 = 0;
        if (a.magic) {
            m0 = stabilizer_renyi(s, 0);
            out.os() << m0;
        }
        out.os() << "\n";
        if (wants(c, "resources")) {
            std::string id = "state=" + std::to_string(i);
            f.check(std::abs(coh - a.k) < 1e-9, "coherence", id);
            f.check(ent.entropy <= a.k + 1e-9, "entanglement", id);
            f.check(std::abs(col - std::ldexp(1.0, -a.k)) < 1e-12, "collision", id);
            f.check(!a.magic || m0 <= 2 * a.k + 1e-9, "magic_m0", id);
        }
    }
    return f.report();
}

int run_schedule(const ScheduleArgs& a, const Common& c) {
    Output out(c, "schedule", resolved_config(json(a), c));
    out.os() << "circuit_id,layers,max_degree,greedy_bound,greedy_ok,support_bound,support_ok,control_layers,"
                "control_max_degree,control_ok\n";
    Failures f;
    for (int i = 0; i < a.circuits; ++i) {
        RandomizerParams p{a.n, a.k, a.m, a.alpha, parse_coin_mode(a.coin_mode),
                           derive_key(c.seed, Stream::kRmcc, {static_cast<std::uint64_t>(i)})};
        auto r = depth_report(build_randomizer(p), AncillaMode::kNone);
        out.os() << i << "," << r.logical_layers << "," << r.hypergraph_max_degree << "," << r.greedy_bound << ","
                 << r.greedy_bound_ok << "," << r.support_bound << "," << r.support_bound_ok << "," << r.control_layers
                 << "," << r.control_max_degree << "," << r.control_bound_ok << "\n";
        std::string id = "circuit=" + std::to_string(i);
        if (wants(c, "greedy_bound")) {
            f.check(r.greedy_bound_ok, "greedy_bound", id);
        }
        if (wants(c, "support_bound")) {
            f.check(r.support_bound_ok, "support_bound", id);
        }
        if (wants(c, "control_bound")) {
            f.check(r.control_bound_ok, "control_bound", id);
        }
    }
    return f.report();
}

int run_params(const ParamsArgs& a, const Common& c) {
    Output out(c, "params", resolved_config(json(a), c));
    out.os() << "t,eps,k,m,alpha_bound,alpha_clamped\n";
    for (int t : a.t) {
        for (double eps : a.eps) {
            bool clamped = false;
            int alpha = t >= 2 ? alpha_bound(t, eps, a.log_base, &clamped) : 0;
            int m = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(t)))));
            out.os() << t << "," << eps << "," << register_width(t, eps, a.log_base) << "," << m << "," << alpha << ","
                     << (clamped ? 1 : 0) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

/// Fills options not given on the command line from a JSON object. Top-level
/// scalars apply to every command; an object keyed by the command name holds
/// command-specific values.
void apply_config(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot read " + path);
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    if (!root.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    json merged = json::object();
    for (auto& [key, value] : root.items()) {
        if (!value.is_object()) {
            merged[key] = value;
        }
    }
    if (root.contains(sub.get_name())) {
        for (auto& [key, value] : root[sub.get_name()].items()) {
            merged[key] = value;
        }
    }
    for (auto& [key, value] : merged.items()) {
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw std::invalid_argument("config: unknown field '" + key + "' for " + sub.get_name());
        }
        if (opt->count() > 0) {
            continue;
        }
        std::vector<std::string> inputs;
        auto as_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) {
            for (const auto& v : value) {
                inputs.push_back(as_text(v));
            }
        } else {
            inputs.push_back(as_text(value));
        }
        try {
            opt->add_result(inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw std::invalid_argument("config: field '" + key + "': " + e.what());
        }
    }
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--out", c.out, "Output path (default $SDESIGN_OUT_DIR/<command>.csv or stdout)");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--config", c.config, "JSON config file; flags override it");
    sub->add_option("--assert", c.asserts, "Named assertions to enforce");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shallow subset-state design toolkit"};
    app.require_subcommand(1);
    Common common;

    RandomizeArgs randomize;
    auto* s_rand = app.add_subcommand("randomize", "Build and serialize a randomizer circuit; depth report on stderr");
    s_rand->add_option("--n", randomize.n);
    s_rand->add_option("--k", randomize.k);
    s_rand->add_option("--m", randomize.m);
    s_rand->add_option("--alpha", randomize.alpha);
    s_rand->add_option("--coin_mode", randomize.coin_mode);
    s_rand->add_option("--ancilla", randomize.ancilla);
    s_rand->add_option("--oracle_t", randomize.oracle_t);

    DesignArgs design;
    auto* s_design = app.add_subcommand("design-check", "Moment trace-distance checks");
    s_design->add_option("--n_max", design.n_max);

    RankArgs rank;
    auto* s_rank = app.add_subcommand("rank-mc", "Full-rank Monte Carlo over (t, alpha) cells");
    s_rank->add_option("--t", rank.t);
    s_rank->add_option("--eps", rank.eps);
    s_rank->add_option("--k", rank.k, "0 picks ceil(log(2t^2/eps))");
    s_rank->add_option("--m", rank.m, "0 picks max(1, ceil(log2 t))");
    s_rank->add_option("--alpha", rank.alpha, "Empty picks the alpha bound");
    s_rank->add_option("--trials", rank.trials);
    s_rank->add_option("--log_base", rank.log_base);
    s_rank->add_option("--max_deficiency", rank.max_deficiency);

    FidelityArgs fid;
    auto* s_fid = app.add_subcommand("shadow-fidelity", "Fidelity of Haar states from shadow snapshots");
    s_fid->add_option("--n", fid.n);
    s_fid->add_option("--k", fid.k);
    s_fid->add_option("--m", fid.m);
    s_fid->add_option("--states", fid.states);
    s_fid->add_option("--shots", fid.shots);
    s_fid->add_option("--alpha", fid.alpha, "Integers, inf, identity or haar");
    s_fid->add_option("--z", fid.z);

    PairsArgs pairs;
    auto* s_pairs = app.add_subcommand("shadow-pairs", "Pair-uniformity max norm against sample count");
    s_pairs->add_option("--n", pairs.n);
    s_pairs->add_option("--k", pairs.k);
    s_pairs->add_option("--m", pairs.m);
    s_pairs->add_option("--alpha", pairs.alpha, "Integers, inf or identity");
    s_pairs->add_option("--grid", pairs.grid);
    s_pairs->add_option("--repeats", pairs.repeats)->check(CLI::PositiveNumber);
    s_pairs->add_option("--slope", pairs.slope);
    s_pairs->add_option("--slope_tol", pairs.slope_tol);

    ResourcesArgs res;
    auto* s_res = app.add_subcommand("resources", "Entanglement, coherence and magic of sampled states");
    s_res->add_option("--n", res.n);
    s_res->add_option("--k", res.k);
    s_res->add_option("--m", res.m);
    s_res->add_option("--alpha", res.alpha);
    s_res->add_option("--t", res.t);
    s_res->add_option("--states", res.states);
    s_res->add_option("--magic", res.magic);

    ScheduleArgs sched;
    auto* s_sched = app.add_subcommand("schedule", "Layering report over sampled circuits");
    s_sched->add_option("--n", sched.n);
    s_sched->add_option("--k", sched.k);
    s_sched->add_option("--m", sched.m);
    s_sched->add_option("--alpha", sched.alpha);
    s_sched->add_option("--circuits", sched.circuits);
    s_sched->add_option("--coin_mode", sched.coin_mode);

    ParamsArgs params;
    auto* s_params = app.add_subcommand("params", "Register width and alpha bound");
    s_params->add_option("--t", params.t);
    s_params->add_option("--eps", params.eps);
    s_params->add_option("--log_base", params.log_base);

    for (auto* sub : app.get_subcommands({})) {
        add_common(sub, common);
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!common.config.empty()) {
            apply_config(*sub, common.config);
        }
        const std::string name = sub->get_name();
        if (name == "randomize") {
            return run_randomize(randomize, common);
        }
        if (name == "design-check") {
            return run_design_check(design, common);
        }
        if (name == "rank-mc") {
            return run_rank_mc(rank, common);
        }
        if (name == "shadow-fidelity") {
            return run_shadow_fidelity(fid, common);
        }
        if (name == "shadow-pairs") {
            return run_shadow_pairs(pairs, common);
        }
        if (name == "resources") {
            return run_resources(res, common);
        }
        if (name == "schedule") {
            return run_schedule(sched, common);
        }
        return run_params(params, common);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
