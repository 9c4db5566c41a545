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

#ifndef SDESIGN_SHADOW_HPP
#define SDESIGN_SHADOW_HPP

// Classical shadows with measurement unitary U = (V (x) I) U_p^dag: V acts on
// the low k qubits (register 0) and U_p permutes basis states. The snapshot
// U^dag |z> is a superposition of only 2^k basis states.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdesign/parallel.hpp"
#include "sdesign/randomizer.hpp"
#include "sdesign/rng.hpp"

namespace sdesign {

inline constexpr int kMaxShadowQubits = 20;
inline constexpr int kMaxLocalQubits = 3;

using Complex = std::complex<double>;
/// Supplies <x|O|y>; O is assumed Hermitian.
using ObservableHook = std::function<Complex(std::uint64_t x, std::uint64_t y)>;

inline Eigen::VectorXcd haar_state(int n, CounterRng& rng) {
    if (n < 1 || n > kMaxShadowQubits) {
        throw std::invalid_argument("haar_state: n must be in [1, 20]");
    }
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& a : v) {
        a = {gauss(rng), gauss(rng)};
    }
    return v / v.norm();
}

/// Haar unitary on `dim` levels: QR of a complex Ginibre matrix with the
/// phases of diag(R) divided out.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index dim, CounterRng& rng) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            g(r, c) = {gauss(rng), gauss(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        double mag = std::abs(r(i, i));
        Complex phase = mag > 0 ? r(i, i) / mag : Complex(1, 0);
        q.col(i) *= phase;
    }
    return q;
}

enum class PermutationKind { kIdentity, kCircuit, kExactPermutation };

/// How U_p is drawn for each shot.
struct UpMode {
    PermutationKind kind = PermutationKind::kCircuit;
    int m = 1;
    int alpha = 2;
    CoinMode coin_mode = CoinMode::kPerTargetBit;
    RandomizerOptions options;

    static UpMode identity() { return {PermutationKind::kIdentity, 1, 1, CoinMode::kPerTargetBit, {}}; }
    static UpMode exact_permutation() { return {PermutationKind::kExactPermutation, 1, 1, CoinMode::kPerTargetBit, {}}; }
    static UpMode circuit(int m, int alpha, CoinMode coin = CoinMode::kPerTargetBit) {
        return {PermutationKind::kCircuit, m, alpha, coin, {}};
    }
};

/// A drawn basis permutation p on [0, 2^n).
class BasisPermutation {
   public:
    static BasisPermutation draw(int n, int k, const UpMode& mode, std::uint64_t seed) {
        BasisPermutation p;
        p.n_ = n;
        switch (mode.kind) {
            case PermutationKind::kIdentity:
                break;
            case PermutationKind::kCircuit: {
                RandomizerParams params{n, k, mode.m, mode.alpha, mode.coin_mode, seed};
                p.circuit_.emplace(compile_randomizer(params, mode.options));
                break;
            }
            case PermutationKind::kExactPermutation: {
                p.table_.resize(std::size_t{1} << n);
                std::iota(p.table_.begin(), p.table_.end(), 0);
                CounterRng rng(derive_key(seed, Stream::kPermutation, {}));
                for (std::size_t i = p.table_.size(); i > 1; --i) {
                    std::swap(p.table_[i - 1], p.table_[rng.below(i)]);
                }
                break;
            }
        }
        p.kind_ = mode.kind;
        return p;
    }

    std::uint64_t operator()(std::uint64_t x) const {
        switch (kind_) {
            case PermutationKind::kIdentity:
                return x;
            case PermutationKind::kCircuit:
                return circuit_->apply(x);
            case PermutationKind::kExactPermutation:
                break;
        }
        return table_[x];
    }

   private:
    int n_ = 0;
    PermutationKind kind_ = PermutationKind::kIdentity;
    std::optional<CompiledCircuit> circuit_;
    std::vector<std::uint32_t> table_;
};

/// One measurement record. The snapshot U^dag |z> equals
/// sum_b amplitudes[b] |support[b]>.
struct ShadowSample {
    Eigen::MatrixXcd v;
    std::uint64_t perm_seed = 0;
    std::uint64_t z = 0;
    std::vector<std::uint64_t> support;
    std::vector<Complex> amplitudes;
};

struct ShadowHooks {
    /// Replaces the Haar draw of V with the identity.
    bool identity_v = false;
    /// Draws V and U_p from this key instead of the shot seed; z still comes
    /// from the shot seed.
    std::optional<std::uint64_t> unitary_seed;
};

/// Draws V and U_p from `shot_seed`, applies U to psi and samples z from the
/// Born distribution.
inline ShadowSample sample_shadow(const Eigen::VectorXcd& psi, int k, const UpMode& mode, std::uint64_t shot_seed,
                                  const ShadowHooks& hooks = {}) {
    const Eigen::Index dim = psi.size();
    if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
        throw std::invalid_argument("sample_shadow: state length must be a power of two >= 2");
    }
    const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
    if (n > kMaxShadowQubits) {
        throw std::invalid_argument("sample_shadow: n = " + std::to_string(n) + " exceeds the dense limit of 20");
    }
    if (k < 1 || k > kMaxLocalQubits || k > n) {
        throw std::invalid_argument("sample_shadow: need 1 <= k <= min(3, n)");
    }
    const Eigen::Index kdim = Eigen::Index{1} << k;
    ShadowSample s;
    const std::uint64_t unitary_key = hooks.unitary_seed.value_or(shot_seed);
    s.perm_seed = derive_key(unitary_key, Stream::kPermutation, {});
    CounterRng v_rng(derive_key(unitary_key, Stream::kHaar, {}));
    s.v = hooks.identity_v ? Eigen::MatrixXcd::Identity(kdim, kdim) : haar_unitary(kdim, v_rng);
    BasisPermutation p = BasisPermutation::draw(n, k, mode, s.perm_seed);

    // (U_p^dag psi)(x) = psi(p(x)); then V on the low k bits of every block.
    std::vector<std::uint64_t> image(static_cast<std::size_t>(dim));
    Eigen::VectorXcd chi(dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        image[static_cast<std::size_t>(x)] = p(static_cast<std::uint64_t>(x));
        chi[x] = psi[static_cast<Eigen::Index>(image[static_cast<std::size_t>(x)])];
    }
    Eigen::VectorXcd out(dim);
    for (Eigen::Index a = 0; a < dim; a += kdim) {
        out.segment(a, kdim).noalias() = s.v * chi.segment(a, kdim);
    }
    CounterRng z_rng(derive_key(shot_seed, Stream::kShot, {}));
    double u = z_rng.uniform() * out.squaredNorm();
    double acc = 0;
    Eigen::Index z = dim - 1;
    for (Eigen::Index x = 0; x < dim; ++x) {
        acc += std::norm(out[x]);
        if (u < acc) {
            z = x;
            break;
        }
    }
    s.z = static_cast<std::uint64_t>(z);
    const auto z_a = static_cast<Eigen::Index>(s.z & static_cast<std::uint64_t>(kdim - 1));
    const std::uint64_t z_b = s.z & ~static_cast<std::uint64_t>(kdim - 1);
    for (Eigen::Index b = 0; b < kdim; ++b) {
        s.support.push_back(image[static_cast<std::size_t>(z_b | static_cast<std::uint64_t>(b))]);
        s.amplitudes.push_back(std::conj(s.v(z_a, b)));
    }
    return s;
}

/// (2^k + 1)(2^n - 1) / (2^k - 1).
inline double shadow_coefficient(int n, int k) {
    if (k < 1 || k > n) {
        throw std::invalid_argument("shadow_coefficient: need 1 <= k <= n");
    }
    double big_k = std::ldexp(1.0, k);
    double big_n = std::ldexp(1.0, n);
    return (big_k + 1) * (big_n - 1) / (big_k - 1);
}

/// coeff * <phi|O|phi> for one snapshot, querying the hook once per unordered
/// pair (b, b') with b <= b'.
inline double shadow_value(const ShadowSample& s, const ObservableHook& hook, double coeff) {
    double diag = 0;
    Complex off = 0;
    for (std::size_t b = 0; b < s.support.size(); ++b) {
        diag += std::norm(s.amplitudes[b]) * hook(s.support[b], s.support[b]).real();
        for (std::size_t c = b + 1; c < s.support.size(); ++c) {
            off += std::conj(s.amplitudes[b]) * s.amplitudes[c] * hook(s.support[b], s.support[c]);
        }
    }
    return coeff * (diag + 2 * off.real());
}

struct EstimatorResult {
    double mean = 0;
    double std_error = 0;
    double per_shot_variance = 0;
    std::uint64_t shots = 0;
};

struct MomentSums {
    double sum = 0;
    double sum_sq = 0;
    std::uint64_t count = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    void merge(const MomentSums& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    EstimatorResult result() const {
        EstimatorResult r;
        r.shots = count;
        if (count == 0) {
            return r;
        }
        const double n = static_cast<double>(count);
        r.mean = sum / n;
        r.per_shot_variance = count > 1 ? std::max(0.0, (sum_sq - n * r.mean * r.mean) / (n - 1)) : 0;
        r.std_error = std::sqrt(r.per_shot_variance / n);
        return r;
    }
};

inline EstimatorResult estimate(const std::vector<ShadowSample>& samples, const ObservableHook& hook, int n, int k) {
    const double coeff = shadow_coefficient(n, k);
    MomentSums acc;
    for (const auto& s : samples) {
        acc.add(shadow_value(s, hook, coeff));
    }
    return acc.result();
}

/// Streams `shots` snapshots of psi and returns the estimate of tr(rho O).
/// Shot i uses key (seed, i); blocks merge in order, so the result does not
/// depend on `workers`.
inline EstimatorResult shadow_estimate(const Eigen::VectorXcd& psi, int k, const UpMode& mode,
                                       const ObservableHook& hook, std::uint64_t shots, std::uint64_t seed,
                                       int workers = 1) {
    const int n = std::countr_zero(static_cast<std::uint64_t>(psi.size()));
    const double coeff = shadow_coefficient(n, k);
    auto blocks = run_blocks(shots, workers, [&](std::uint64_t begin, std::uint64_t end) {
        MomentSums acc;
        for (std::uint64_t i = begin; i < end; ++i) {
            acc.add(shadow_value(sample_shadow(psi, k, mode, derive_key(seed, Stream::kShot, {i})), hook, coeff));
        }
        return acc;
    });
    MomentSums total;
    for (const auto& b : blocks) {
        total.merge(b);
    }
    return total.result();
}

/// Hook for O = |psi><psi| - diag(|psi><psi|).
inline ObservableHook offdiagonal_projector(const Eigen::VectorXcd& psi) {
    return [&psi](std::uint64_t x, std::uint64_t y) -> Complex {
        if (x == y) {
            return 0;
        }
        return psi[static_cast<Eigen::Index>(x)] * std::conj(psi[static_cast<Eigen::Index>(y)]);
    };
}

/// sum_z |<z|psi>|^4, the part of the fidelity removed by dropping the diagonal.
inline double diagonal_bias(const Eigen::VectorXcd& psi) {
    double s = 0;
    for (const auto& a : psi) {
        s += std::norm(a) * std::norm(a);
    }
    return s;
}

/// Global-Haar shadow of the fidelity observable: estimator (N + 1) <phi|O|phi>
/// - tr O with phi = U^dag |z>. The snapshot is drawn exactly from its law:
/// |<psi|phi>|^2 ~ Beta(2, N - 1) and the rest Haar on the complement of psi.
inline EstimatorResult haar_shadow_fidelity(const Eigen::VectorXcd& psi, std::uint64_t shots, std::uint64_t seed) {
    const double big_n = static_cast<double>(psi.size());
    MomentSums acc;
    for (std::uint64_t i = 0; i < shots; ++i) {
        CounterRng rng(derive_key(seed, Stream::kHaar, {i, 1}));
        std::gamma_distribution<double> g2(2.0, 1.0);
        std::gamma_distribution<double> gn(big_n - 1, 1.0);
        double x = g2(rng);
        double y = gn(rng);
        double c2 = x / (x + y);
        std::normal_distribution<double> gauss;
        Eigen::VectorXcd chi(psi.size());
        for (auto& a : chi) {
            a = {gauss(rng), gauss(rng)};
        }
        chi -= psi * psi.dot(chi);
        chi.normalize();
        Eigen::VectorXcd phi = std::sqrt(c2) * psi + std::sqrt(1 - c2) * chi;
        double overlap = std::norm(psi.dot(phi));
        double diag = 0;
        for (Eigen::Index z = 0; z < psi.size(); ++z) {
            diag += std::norm(psi[z]) * std::norm(phi[z]);
        }
        acc.add((big_n + 1) * (overlap - diag));
    }
    return acc.result();
}

// ---------------------------------------------------------------------------
// Pair uniformity of the k = 1 randomizer.

struct PairUniformityPoint {
    std::uint64_t samples = 0;
    double max_norm = 0;
};

/// Samples ordered distinct pairs uniformly, pushes both through a freshly
/// drawn U_p per sample and reports max |empirical - 1/(N(N-1))| over ordered
/// distinct output pairs at each checkpoint of `grid` (ascending).
inline std::vector<PairUniformityPoint> pair_uniformity(int n, const UpMode& mode,
                                                        const std::vector<std::uint64_t>& grid, std::uint64_t seed) {
    if (n < 2 || n > 10) {
        throw std::invalid_argument("pair_uniformity: n must be in [2, 10]");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) || grid.empty()) {
        throw std::invalid_argument("pair_uniformity: grid must be nonempty and ascending");
    }
    const std::uint64_t big_n = std::uint64_t{1} << n;
    const double uniform = 1.0 / static_cast<double>(big_n * (big_n - 1));
    std::vector<std::uint32_t> counts(big_n * big_n, 0);
    std::vector<PairUniformityPoint> out;
    std::uint64_t done = 0;
    for (auto target : grid) {
        for (; done < target; ++done) {
            CounterRng rng(derive_key(seed, Stream::kPairs, {done}));
            std::uint64_t x = rng.below(big_n);
            std::uint64_t y = rng.below(big_n - 1);
            if (y >= x) {
                ++y;
            }
            BasisPermutation p = BasisPermutation::draw(n, 1, mode, rng());
            ++counts[p(x) * big_n + p(y)];
        }
        double worst = 0;
        for (std::uint64_t a = 0; a < big_n; ++a) {
            for (std::uint64_t b = 0; b < big_n; ++b) {
                if (a != b) {
                    double f = static_cast<double>(counts[a * big_n + b]) / static_cast<double>(target);
                    worst = std::max(worst, std::abs(f - uniform));
                }
            }
        }
        out.push_back({target, worst});
    }
    return out;
}

/// Least-squares slope of log(max_norm) against log(samples).
inline double loglog_slope(const std::vector<PairUniformityPoint>& pts) {
    if (pts.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        double x = std::log(static_cast<double>(p.samples));
        double y = std::log(p.max_norm);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Exact pair statistics of the k = m = 1 randomizer.

enum class PairVariant {
    /// Conditions fixed to [0, 1]; requires alpha = 2.
    kFixedConditions,
    /// Conditions drawn as usual.
    kLiteral,
};

struct ExactPairReport {
    int n = 0;
    int alpha = 0;
    PairVariant variant = PairVariant::kLiteral;
    /// log2 of the common denominator of all enumerated probabilities.
    int random_bits = 0;
    /// max over distinct inputs and distinct ordered outputs of |P - 1/(N(N-1))|.
    boost::multiprecision::cpp_rational pair_deviation;
    /// max of pair_deviation and the single-point deviation |P(p(x) = z) - 1/N|.
    boost::multiprecision::cpp_rational twirl_deviation;
    bool outputs_distinct = true;
};

/// Enumerates every coin and condition setting exactly. Stages use
/// independent coins and their gates commute, so the law of each stage's map
/// is built gate by gate and the pair law is pushed through stage by stage
/// with integer counts over a power-of-two denominator.
inline ExactPairReport exact_pair_check(int n, PairVariant variant, int alpha) {
    if (n != 2 && n != 4) {
        throw std::invalid_argument("exact_pair_check: n must be 2 or 4");
    }
    if (variant == PairVariant::kFixedConditions && alpha != 2) {
        throw std::invalid_argument("exact_pair_check: the fixed-condition variant uses alpha = 2");
    }
    RandomizerParams params{n, 1, 1, alpha, CoinMode::kPerTargetBit, 0};
    params.validate();
    const int levels = params.levels();
    const int coins = alpha * ((1 << levels) - 1) + alpha;
    const int table_bits = variant == PairVariant::kLiteral ? alpha : 0;
    const int bits = coins + table_bits;
    if (bits > 62) {
        throw std::invalid_argument("exact_pair_check: " + std::to_string(bits) +
                                    " random bits exceed the exact-count limit of 62");
    }
    const std::uint64_t big_n = std::uint64_t{1} << n;
    using Map = std::uint64_t;  // 4-bit image per basis state
    auto image = [](Map m, std::uint64_t x) { return (m >> (4 * x)) & 0xF; };
    Map identity = 0;
    for (std::uint64_t x = 0; x < big_n; ++x) {
        identity |= x << (4 * x);
    }
    auto then_gate = [&](Map m, std::uint64_t mask, std::uint64_t value, std::uint64_t flip) {
        Map out = 0;
        for (std::uint64_t x = 0; x < big_n; ++x) {
            std::uint64_t y = image(m, x);
            if ((y & mask) == value) {
                y ^= flip;
            }
            out |= y << (4 * x);
        }
        return out;
    };

    // total[x1][x2][z1][z2] numerators over 2^bits.
    std::vector<std::uint64_t> total(big_n * big_n * big_n * big_n, 0);
    const std::uint64_t tables = std::uint64_t{1} << table_bits;
    for (std::uint64_t tbl = 0; tbl < tables; ++tbl) {
        RandomizerOptions opt;
        opt.forced_coin = true;
        std::vector<std::vector<std::uint8_t>> cond(static_cast<std::size_t>(alpha));
        for (int j = 0; j < alpha; ++j) {
            std::uint8_t c = variant == PairVariant::kFixedConditions ? static_cast<std::uint8_t>(j)
                                                                      : static_cast<std::uint8_t>((tbl >> j) & 1);
            cond[static_cast<std::size_t>(j)] = {c};
        }
        opt.fixed_conditions = cond;
        RmccTables t = draw_randomizer_tables(params, opt);

        // Law of each stage's map: counts over 2^(coins in stage).
        std::vector<std::unordered_map<Map, std::uint64_t>> stage_laws;
        StageKind last_kind = StageKind::kCopy;
        int last_level = -1;
        for_each_randomizer_gate(params, opt, t,
                                 [&](StageKind kind, int level, std::span<const std::uint32_t> controls,
                                     std::span<const std::uint8_t> conditions, std::uint32_t target) {
                                     if (kind != last_kind || level != last_level) {
                                         stage_laws.push_back({{identity, 1}});
                                         last_kind = kind;
                                         last_level = level;
                                     }
                                     std::uint64_t mask = std::uint64_t{1} << controls[0];
                                     std::uint64_t value = conditions[0] ? mask : 0;
                                     std::uint64_t flip = std::uint64_t{1} << target;
                                     auto& law = stage_laws.back();
                                     std::unordered_map<Map, std::uint64_t> next;
                                     for (const auto& [m, c] : law) {
                                         Map fired = then_gate(m, mask, value, flip);
                                         if (kind == StageKind::kCopy) {
                                             next[fired] += c;
                                         } else {
                                             next[m] += c;
                                             next[fired] += c;
                                         }
                                     }
                                     law = std::move(next);
                                 });
        for (std::uint64_t x1 = 0; x1 < big_n; ++x1) {
            for (std::uint64_t x2 = 0; x2 < big_n; ++x2) {
                if (x1 == x2) {
                    continue;
                }
                std::unordered_map<std::uint64_t, std::uint64_t> dist{{x1 * big_n + x2, 1}};
                for (const auto& law : stage_laws) {
                    std::unordered_map<std::uint64_t, std::uint64_t> next;
                    for (const auto& [pair, c] : dist) {
                        for (const auto& [m, w] : law) {
                            next[image(m, pair / big_n) * big_n + image(m, pair % big_n)] += c * w;
                        }
                    }
                    dist = std::move(next);
                }
                for (const auto& [pair, c] : dist) {
                    total[(x1 * big_n + x2) * big_n * big_n + pair] += c;
                }
            }
        }
    }

    using boost::multiprecision::cpp_rational;
    ExactPairReport r;
    r.n = n;
    r.alpha = alpha;
    r.variant = variant;
    r.random_bits = bits;
    const cpp_rational denom = cpp_rational(boost::multiprecision::cpp_int(1) << bits);
    const cpp_rational uniform_pair(1, static_cast<long long>(big_n * (big_n - 1)));
    const cpp_rational uniform_point(1, static_cast<long long>(big_n));
    cpp_rational worst_pair = 0;
    cpp_rational worst_point = 0;
    for (std::uint64_t x1 = 0; x1 < big_n; ++x1) {
        for (std::uint64_t x2 = 0; x2 < big_n; ++x2) {
            if (x1 == x2) {
                continue;
            }
            std::vector<std::uint64_t> marginal(big_n, 0);
            for (std::uint64_t z1 = 0; z1 < big_n; ++z1) {
                for (std::uint64_t z2 = 0; z2 < big_n; ++z2) {
                    std::uint64_t c = total[((x1 * big_n + x2) * big_n + z1) * big_n + z2];
                    marginal[z1] += c;
                    if (z1 == z2) {
                        r.outputs_distinct = r.outputs_distinct && c == 0;
                        continue;
                    }
                    cpp_rational d = abs(cpp_rational(c) / denom - uniform_pair);
                    worst_pair = std::max(worst_pair, d);
                }
            }
            for (std::uint64_t z = 0; z < big_n; ++z) {
                worst_point = std::max(worst_point, cpp_rational(abs(cpp_rational(marginal[z]) / denom - uniform_point)));
            }
        }
    }
    r.pair_deviation = worst_pair;
    r.twirl_deviation = std::max(worst_pair, worst_point);
    return r;
}

}  // namespace sdesign

#endif  // SDESIGN_SHADOW_HPP
