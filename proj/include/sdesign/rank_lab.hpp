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

#ifndef SDESIGN_RANK_LAB_HPP
#define SDESIGN_RANK_LAB_HPP

// The t x alpha matrix X over GF(2): X[i][j] = 1 iff copy x_i matches the
// conditions of multi-control draw j. Full rank means the t copies receive
// independent flips of a target bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sdesign/bitkit.hpp"
#include "sdesign/parallel.hpp"
#include "sdesign/randomizer.hpp"
#include "sdesign/rng.hpp"

namespace sdesign {

inline Gf2Matrix build_x_matrix(std::span<const BitString> xs, const RmccTables& tables) {
    if (xs.empty() || tables.size() == 0) {
        throw std::invalid_argument("build_x_matrix: need at least one copy and one column");
    }
    std::unordered_set<BitString> seen;
    for (const auto& x : xs) {
        if (!seen.insert(x).second) {
            throw std::invalid_argument("build_x_matrix: duplicate copy " + x.to_string());
        }
        if (x.width() <= tables.hi) {
            throw std::invalid_argument("build_x_matrix: copy narrower than the table window");
        }
    }
    Gf2Matrix m(xs.size(), tables.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < tables.size(); ++j) {
            bool match = true;
            for (std::size_t a = 0; a < tables.positions[j].size() && match; ++a) {
                match = xs[i].get(tables.positions[j][a]) == (tables.conditions[j][a] != 0);
            }
            m.set(i, j, match);
        }
    }
    return m;
}

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
    if (trials == 0) {
        return {};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct RankExperimentConfig {
    int t = 2;
    int k = 8;
    int m = 1;
    int alpha = 1;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    int workers = 1;

    void validate() const {
        if (t < 1 || k < 1 || k > static_cast<int>(kMaxBitWidth)) {
            throw std::invalid_argument("rank experiment: need t >= 1 and 1 <= k <= 4096");
        }
        if (k < 63 && static_cast<std::uint64_t>(t) > (std::uint64_t{1} << k)) {
            throw std::invalid_argument("rank experiment: t = " + std::to_string(t) + " exceeds 2^k distinct copies");
        }
        if (m < 1 || m > k) {
            throw std::invalid_argument("rank experiment: need 1 <= m <= k");
        }
        if (alpha < 1) {
            throw std::invalid_argument("rank experiment: alpha must be >= 1");
        }
    }
};

struct RankExperimentResult {
    std::uint64_t trials = 0;
    std::uint64_t full_rank = 0;
    double full_rank_rate = 0;
    WilsonInterval full_rank_ci;
    double deficiency_rate = 0;
    WilsonInterval deficiency_ci;
    /// Per-trial minimum of d(x_i, x_i') averaged over trials.
    double mean_min_distance = 0;
    std::size_t min_distance_seen = 0;
    /// Pairs with |d - k/2| > k/4, against 2 exp(-2 delta^2 / k).
    std::uint64_t pairs = 0;
    std::uint64_t atypical_pairs = 0;
    double chernoff_bound = 0;
    double mean_column_weight = 0;
    /// Fraction of X entries equal to 1; 2^-m in expectation.
    double entry_one_rate = 0;
};

namespace detail {

inline BitString random_bits(std::size_t width, CounterRng& rng) {
    BitString b(width);
    for (std::size_t i = 0; i < width; ++i) {
        b.set(i, rng.bit());
    }
    return b;
}

/// t distinct uniform strings by rejection.
inline std::vector<BitString> distinct_copies(int t, int k, CounterRng& rng) {
    std::vector<BitString> xs;
    std::unordered_set<BitString> seen;
    while (xs.size() < static_cast<std::size_t>(t)) {
        BitString x = random_bits(static_cast<std::size_t>(k), rng);
        if (seen.insert(x).second) {
            xs.push_back(std::move(x));
        }
    }
    return xs;
}

struct RankTally {
    std::uint64_t trials = 0;
    std::uint64_t full_rank = 0;
    std::uint64_t min_distance_sum = 0;
    std::size_t min_distance_seen = std::numeric_limits<std::size_t>::max();
    std::uint64_t pairs = 0;
    std::uint64_t atypical = 0;
    std::uint64_t ones = 0;
};

}  // namespace detail

inline RankExperimentResult full_rank_mc(const RankExperimentConfig& cfg) {
    cfg.validate();
    const double delta = cfg.k / 4.0;
    auto blocks = run_blocks(cfg.trials, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
        detail::RankTally tally;
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            CounterRng rng(derive_key(cfg.seed, Stream::kTrial, {trial}));
            auto xs = detail::distinct_copies(cfg.t, cfg.k, rng);
            auto tables = rmcc(0, static_cast<std::uint32_t>(cfg.k - 1), cfg.m, cfg.alpha, rng);
            Gf2Matrix x = build_x_matrix(xs, tables);
            ++tally.trials;
            if (gf2_rank(x) == static_cast<std::size_t>(cfg.t)) {
                ++tally.full_rank;
            }
            for (std::size_t r = 0; r < x.rows(); ++r) {
                tally.ones += x.row(r).popcount();
            }
            std::size_t min_d = static_cast<std::size_t>(cfg.k);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t j = i + 1; j < xs.size(); ++j) {
                    std::size_t d = hamming_distance(xs[i], xs[j]);
                    min_d = std::min(min_d, d);
                    ++tally.pairs;
                    if (std::abs(static_cast<double>(d) - cfg.k / 2.0) > delta) {
                        ++tally.atypical;
                    }
                }
            }
            if (xs.size() > 1) {
                tally.min_distance_sum += min_d;
                tally.min_distance_seen = std::min(tally.min_distance_seen, min_d);
            }
        }
        return tally;
    });
    detail::RankTally total;
    for (const auto& b : blocks) {
        total.trials += b.trials;
        total.full_rank += b.full_rank;
        total.min_distance_sum += b.min_distance_sum;
        total.min_distance_seen = std::min(total.min_distance_seen, b.min_distance_seen);
        total.pairs += b.pairs;
        total.atypical += b.atypical;
        total.ones += b.ones;
    }
    RankExperimentResult r;
    r.trials = total.trials;
    r.full_rank = total.full_rank;
    if (r.trials > 0) {
        r.full_rank_rate = static_cast<double>(r.full_rank) / static_cast<double>(r.trials);
        r.deficiency_rate = 1 - r.full_rank_rate;
        r.mean_min_distance = cfg.t > 1 ? static_cast<double>(total.min_distance_sum) / static_cast<double>(r.trials) : 0;
        double entries = static_cast<double>(r.trials) * cfg.t * cfg.alpha;
        r.entry_one_rate = static_cast<double>(total.ones) / entries;
        r.mean_column_weight = static_cast<double>(total.ones) / (static_cast<double>(r.trials) * cfg.alpha);
    }
    r.full_rank_ci = wilson_interval(r.full_rank, r.trials);
    r.deficiency_ci = wilson_interval(r.trials - r.full_rank, r.trials);
    r.min_distance_seen = cfg.t > 1 ? total.min_distance_seen : 0;
    r.pairs = total.pairs;
    r.atypical_pairs = total.atypical;
    r.chernoff_bound = 2 * std::exp(-2 * delta * delta / cfg.k);
    return r;
}

/// ceil(2t log(t^2 / eps)) in the given log base; a nonpositive value is
/// clamped to 0 and reported through `clamped`.
inline int alpha_bound(int t, double eps, double log_base = 2.0, bool* clamped = nullptr) {
    if (t < 2) {
        throw std::invalid_argument("alpha_bound: t must be >= 2");
    }
    if (!(eps > 0)) {
        throw std::invalid_argument("alpha_bound: eps must be > 0");
    }
    if (!(log_base > 1)) {
        throw std::invalid_argument("alpha_bound: log base must be > 1");
    }
    double v = 2.0 * t * std::log(static_cast<double>(t) * t / eps) / std::log(log_base);
    if (clamped != nullptr) {
        *clamped = v <= 0;
    }
    return v <= 0 ? 0 : static_cast<int>(std::ceil(v - 1e-12));
}

/// ceil(log_base(2 t^2 / eps)): register width that makes the phase-state stage
/// eps-close.
inline int register_width(int t, double eps, double log_base = 2.0) {
    if (t < 1 || !(eps > 0)) {
        throw std::invalid_argument("register_width: need t >= 1 and eps > 0");
    }
    double v = std::log(2.0 * t * t / eps) / std::log(log_base);
    return std::max(1, static_cast<int>(std::ceil(v - 1e-12)));
}

/// Surrogate column model: a column is zero with probability p0, a single
/// uniform row with probability t * p1, a uniform pair of rows with
/// probability C(t, 2) * p2.
struct X2ModelParams {
    int t = 2;
    double a = 2;
    int alpha = 1;
    double p0 = 0;
    double p1 = 0;
    double p2 = 0;

    static X2ModelParams from_scale(int t, double a, int alpha) {
        if (t < 2 || !(a >= 1) || alpha < 0) {
            throw std::invalid_argument("X2 model: need t >= 2, a >= 1, alpha >= 0");
        }
        X2ModelParams p;
        p.t = t;
        p.a = a;
        p.alpha = alpha;
        p.p1 = (1 - 1 / (a * a)) / t;
        p.p2 = 1 / ((a * t) * (a * t));
        p.p0 = 1 - t * p.p1 - t * (t - 1) / 2.0 * p.p2;
        p.validate();
        return p;
    }

    void validate() const {
        double total = p0 + t * p1 + t * (t - 1) / 2.0 * p2;
        if (std::abs(total - 1) > 1e-12 || p0 < -1e-15 || p1 < 0 || p2 < 0) {
            throw std::invalid_argument("X2 model: p0 + t p1 + C(t,2) p2 must equal 1 with nonnegative terms");
        }
    }
};

/// Probability that one surrogate column is orthogonal to a fixed weight-w
/// vector: zero columns always are, single-row columns when the row is outside
/// the support, pair columns when both rows fall on the same side.
inline long double x2_orthogonal_prob(const X2ModelParams& p, int w) {
    long double t = p.t;
    long double pairs_same = static_cast<long double>(w) * (w - 1) / 2 + (t - w) * (t - w - 1) / 2;
    return static_cast<long double>(p.p0) + static_cast<long double>(p.p1) * (t - w) +
           static_cast<long double>(p.p2) * pairs_same;
}

/// sum_{w=1}^{t} C(t, w) p(w)^alpha, accumulated in log space.
inline long double x2_union_bound(const X2ModelParams& p) {
    p.validate();
    long double sum = 0;
    for (int w = 1; w <= p.t; ++w) {
        long double pw = x2_orthogonal_prob(p, w);
        long double log_binom = std::lgamma(p.t + 1.0L) - std::lgamma(w + 1.0L) - std::lgamma(p.t - w + 1.0L);
        if (p.alpha == 0) {
            sum += std::exp(log_binom);
        } else if (pw > 0) {
            sum += std::exp(log_binom + p.alpha * std::log(pw));
        }
    }
    return sum;
}

struct X2McResult {
    std::uint64_t trials = 0;
    std::uint64_t deficient = 0;
    double rate = 0;
    double std_error = 0;
};

inline X2McResult x2_model_mc(const X2ModelParams& p, std::uint64_t trials, std::uint64_t seed, int workers = 1) {
    p.validate();
    if (p.t > 64) {
        throw std::invalid_argument("x2_model_mc: t <= 64");
    }
    auto blocks = run_blocks(trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t deficient = 0;
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            CounterRng rng(derive_key(seed, Stream::kTrial, {trial, 2}));
            if (p.alpha == 0) {
                ++deficient;
                continue;
            }
            Gf2Matrix x(static_cast<std::size_t>(p.t), static_cast<std::size_t>(p.alpha));
            for (int j = 0; j < p.alpha; ++j) {
                double u = rng.uniform();
                if (u < p.p0) {
                    continue;
                }
                if (u < p.p0 + p.t * p.p1) {
                    x.set(rng.below(static_cast<std::uint64_t>(p.t)), static_cast<std::size_t>(j), true);
                    continue;
                }
                auto r0 = rng.below(static_cast<std::uint64_t>(p.t));
                auto r1 = rng.below(static_cast<std::uint64_t>(p.t - 1));
                if (r1 >= r0) {
                    ++r1;
                }
                x.set(r0, static_cast<std::size_t>(j), true);
                x.set(r1, static_cast<std::size_t>(j), true);
            }
            if (gf2_rank(x) < static_cast<std::size_t>(p.t)) {
                ++deficient;
            }
        }
        return deficient;
    });
    X2McResult r;
    r.trials = trials;
    for (auto b : blocks) {
        r.deficient += b;
    }
    if (trials > 0) {
        r.rate = static_cast<double>(r.deficient) / static_cast<double>(trials);
        r.std_error = std::sqrt(r.rate * (1 - r.rate) / static_cast<double>(trials));
    }
    return r;
}

}  // namespace sdesign

#endif  // SDESIGN_RANK_LAB_HPP
