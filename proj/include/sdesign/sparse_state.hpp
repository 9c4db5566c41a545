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

#ifndef SDESIGN_SPARSE_STATE_HPP
#define SDESIGN_SPARSE_STATE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sdesign/bitkit.hpp"
#include "sdesign/phase_oracle.hpp"
#include "sdesign/randomizer.hpp"

namespace sdesign {

inline constexpr double kEigenClamp = 1e-12;
inline constexpr int kMaxMagicQubits = 10;
inline constexpr int kMaxDenseQubits = 24;

/// Equal-magnitude real state: amplitude sign / sqrt(size()) on each listed
/// basis string, zero elsewhere.
class SubsetPhaseState {
   public:
    struct Entry {
        BitString x;
        int sign;
    };

    SubsetPhaseState(int n, std::vector<Entry> entries) : n_(n), entries_(std::move(entries)) {
        if (n < 1 || n > static_cast<int>(kMaxBitWidth)) {
            throw std::invalid_argument("SubsetPhaseState: n out of range");
        }
        if (entries_.empty()) {
            throw std::invalid_argument("SubsetPhaseState: need at least one entry");
        }
        std::unordered_set<BitString> seen;
        for (const auto& e : entries_) {
            if (e.x.width() != static_cast<std::size_t>(n)) {
                throw std::invalid_argument("SubsetPhaseState: entry width does not match n");
            }
            if (e.sign != 1 && e.sign != -1) {
                throw std::invalid_argument("SubsetPhaseState: signs must be +1 or -1");
            }
            if (!seen.insert(e.x).second) {
                throw std::invalid_argument("SubsetPhaseState: duplicate basis string " + e.x.to_string());
            }
        }
    }

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    double amplitude_magnitude() const noexcept { return 1.0 / std::sqrt(static_cast<double>(entries_.size())); }

    /// log2 of the entry count when it is a power of two, else -1.
    int k() const noexcept {
        return std::has_single_bit(entries_.size()) ? std::countr_zero(entries_.size()) : -1;
    }

    /// Dense amplitudes indexed by x = sum_i bit_i 2^i.
    Eigen::VectorXd to_dense() const {
        if (n_ > kMaxDenseQubits) {
            throw std::invalid_argument("to_dense: n = " + std::to_string(n_) + " exceeds 24 qubits");
        }
        Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index{1} << n_);
        double a = amplitude_magnitude();
        for (const auto& e : entries_) {
            v[static_cast<Eigen::Index>(e.x.to_u64())] = e.sign * a;
        }
        return v;
    }

   private:
    int n_;
    std::vector<Entry> entries_;
};

/// |psi> = 2^{-k/2} sum_b (-1)^f(b) |map(b, 0^{n-k})>, with b in bits [0, k).
template <typename Map>
SubsetPhaseState prepare_with_map(int n, int k, const PhaseOracle& f, Map&& map) {
    if (k < 1 || k > 20 || k > n) {
        throw std::invalid_argument("prepare: need 1 <= k <= min(n, 20)");
    }
    if (f.k() != k) {
        throw std::invalid_argument("prepare: oracle k = " + std::to_string(f.k()) + " but k = " + std::to_string(k));
    }
    std::vector<SubsetPhaseState::Entry> entries;
    entries.reserve(std::size_t{1} << k);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
        BitString x(static_cast<std::size_t>(n));
        for (int i = 0; i < k; ++i) {
            x.set(static_cast<std::size_t>(i), ((b >> i) & 1) != 0);
        }
        entries.push_back({map(std::move(x)), f(b) ? -1 : 1});
    }
    return SubsetPhaseState(n, std::move(entries));
}

inline SubsetPhaseState prepare(int n, int k, const PhaseOracle& f, const RandomizerCircuit& c) {
    if (c.params.n != n || c.params.k != k) {
        throw std::invalid_argument("prepare: circuit (n, k) = (" + std::to_string(c.params.n) + ", " +
                                    std::to_string(c.params.k) + ") does not match (" + std::to_string(n) + ", " +
                                    std::to_string(k) + ")");
    }
    return prepare_with_map(n, k, f, [&c](BitString x) { return apply_circuit(c, std::move(x)); });
}

struct EntropyResult {
    double entropy = 0;  // von Neumann, bits
    double purity = 1;   // tr(rho_A^2)
};

inline double entropy_bits(const Eigen::VectorXd& eigenvalues) {
    double s = 0;
    for (double p : eigenvalues) {
        if (p > kEigenClamp) {
            s -= p * std::log2(p);
        }
    }
    return s;
}

/// Reduced-state entropy of `region`. Entries are grouped by their restriction
/// to the region and to its complement; rho_A = M M^T where M is the amplitude
/// table over (region pattern, complement pattern), so at most size() x size().
inline EntropyResult entanglement_entropy(const SubsetPhaseState& s, std::span<const std::uint32_t> region) {
    const auto n = static_cast<std::size_t>(s.n());
    std::vector<char> in_region(n, 0);
    for (auto q : region) {
        if (q >= n) {
            throw std::invalid_argument("entanglement_entropy: region position " + std::to_string(q) +
                                        " outside [0, n)");
        }
        in_region[q] = 1;
    }
    std::vector<std::uint32_t> a_pos;
    std::vector<std::uint32_t> b_pos;
    for (std::uint32_t q = 0; q < n; ++q) {
        (in_region[q] ? a_pos : b_pos).push_back(q);
    }
    if (a_pos.empty() || b_pos.empty()) {
        return {};
    }
    std::unordered_map<BitString, Eigen::Index> a_index;
    std::unordered_map<BitString, Eigen::Index> b_index;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
    cells.reserve(s.size());
    for (const auto& e : s.entries()) {
        auto ai = a_index.try_emplace(e.x.restrict_to(a_pos), static_cast<Eigen::Index>(a_index.size())).first->second;
        auto bi = b_index.try_emplace(e.x.restrict_to(b_pos), static_cast<Eigen::Index>(b_index.size())).first->second;
        cells.emplace_back(ai, bi);
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a_index.size()),
                                              static_cast<Eigen::Index>(b_index.size()));
    double amp = s.amplitude_magnitude();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        m(cells[i].first, cells[i].second) = s.entries()[i].sign * amp;
    }
    Eigen::MatrixXd gram = m.rows() <= m.cols() ? Eigen::MatrixXd(m * m.transpose()) : Eigen::MatrixXd(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd lambda = es.eigenvalues();
    EntropyResult r;
    r.entropy = entropy_bits(lambda);
    r.purity = (gram.array() * gram.array()).sum();
    return r;
}

/// Relative entropy of coherence of a pure state: Shannon entropy of the
/// computational-basis distribution, in bits.
inline double coherence(const SubsetPhaseState& s) {
    double p = 1.0 / static_cast<double>(s.size());
    return -static_cast<double>(s.size()) * p * std::log2(p);
}

inline double collision_prob(const SubsetPhaseState& s) {
    double p = 1.0 / static_cast<double>(s.size());
    return static_cast<double>(s.size()) * p * p;
}

/// Pauli expectations <psi|X^x Z^z|psi> scaled by size(), which makes them
/// integers. Index x * 2^n + z, i.e. lexicographic in (x-mask, z-mask).
inline std::vector<std::int64_t> pauli_spectrum_scaled(const SubsetPhaseState& s) {
    const int n = s.n();
    if (n > kMaxMagicQubits) {
        throw std::invalid_argument("stabilizer_renyi: n = " + std::to_string(n) +
                                    " needs a 4^n Pauli table; limit is n <= 10");
    }
    const std::size_t dim = std::size_t{1} << n;
    std::vector<int> psi(dim, 0);
    for (const auto& e : s.entries()) {
        psi[e.x.to_u64()] = e.sign;
    }
    std::vector<std::int64_t> out(dim * dim, 0);
    std::vector<std::int64_t> g(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        // <psi|X^x Z^z|psi> = sum_e psi(e ^ x) psi(e) (-1)^{z.e}: a Walsh-Hadamard transform of g.
        for (std::size_t e = 0; e < dim; ++e) {
            g[e] = psi[e ^ x] * psi[e];
        }
        for (std::size_t h = 1; h < dim; h <<= 1) {
            for (std::size_t i = 0; i < dim; i += h << 1) {
                for (std::size_t j = i; j < i + h; ++j) {
                    std::int64_t u = g[j];
                    std::int64_t v = g[j + h];
                    g[j] = u + v;
                    g[j + h] = u - v;
                }
            }
        }
        std::copy(g.begin(), g.end(), out.begin() + static_cast<std::ptrdiff_t>(x * dim));
    }
    return out;
}

/// Xi_P = 2^{-n} <psi|P|psi>^2 over all 4^n Paulis, lexicographic in (x, z).
inline std::vector<double> pauli_spectrum(const SubsetPhaseState& s) {
    auto scaled = pauli_spectrum_scaled(s);
    double norm = 1.0 / static_cast<double>(s.size());
    double inv_dim = std::ldexp(1.0, -s.n());
    std::vector<double> xi(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        double e = static_cast<double>(scaled[i]) * norm;
        xi[i] = inv_dim * e * e;
    }
    return xi;
}

/// Stabilizer Renyi entropy M_alpha in bits; alpha = 1 is the Shannon limit and
/// alpha = 0 counts nonzero Pauli expectations.
inline double stabilizer_renyi(const SubsetPhaseState& s, double alpha) {
    if (!(alpha >= 0)) {
        throw std::invalid_argument("stabilizer_renyi: alpha must be >= 0");
    }
    auto scaled = pauli_spectrum_scaled(s);
    const double n = s.n();
    if (alpha == 0) {
        std::size_t nonzero = 0;
        for (auto v : scaled) {
            nonzero += v != 0 ? 1 : 0;
        }
        return std::log2(static_cast<double>(nonzero)) - n;
    }
    auto xi = pauli_spectrum(s);
    if (alpha == 1) {
        double h = 0;
        for (double p : xi) {
            if (p > 0) {
                h -= p * std::log2(p);
            }
        }
        return h - n;
    }
    double sum = 0;
    for (double p : xi) {
        if (p > 0) {
            sum += std::pow(p, alpha);
        }
    }
    return std::log2(sum) / (1 - alpha) - n;
}

// Dump format: header `SUBSETSTATE n k`, then one `bitstring sign` line per
// entry with sign in {+1, -1}.

inline std::string to_text(const SubsetPhaseState& s) {
    std::ostringstream out;
    out << "SUBSETSTATE " << s.n() << ' ' << s.k() << '\n';
    for (const auto& e : s.entries()) {
        out << e.x.to_string() << ' ' << (e.sign > 0 ? "+1" : "-1") << '\n';
    }
    return out.str();
}

inline SubsetPhaseState parse_subset_state(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tag;
    int n = 0;
    int k = 0;
    if (!(in >> tag >> n >> k) || tag != "SUBSETSTATE") {
        throw std::invalid_argument("missing SUBSETSTATE header");
    }
    std::vector<SubsetPhaseState::Entry> entries;
    std::string bits;
    int sign = 0;
    while (in >> bits >> sign) {
        entries.push_back({BitString::from_string(bits), sign});
    }
    SubsetPhaseState s(n, std::move(entries));
    if (s.k() != k) {
        throw std::invalid_argument("SUBSETSTATE header k does not match the entry count");
    }
    return s;
}

}  // namespace sdesign

#endif  // SDESIGN_SPARSE_STATE_HPP
