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

#ifndef SDESIGN_MOMENTS_HPP
#define SDESIGN_MOMENTS_HPP

// Dense t-th moment operators E[|psi><psi|^{(x)t}] and trace distances between
// them. A t-copy basis index is sum_c x_c N^{t-1-c}: copy 0 is the most
// significant digit (Kronecker order).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdesign/phase_oracle.hpp"
#include "sdesign/rng.hpp"
#include "sdesign/sparse_state.hpp"

namespace sdesign {

inline constexpr Eigen::Index kMaxMomentDim = 4096;

struct DensityMoment {
    int n = 0;
    int t = 0;
    Eigen::MatrixXcd matrix;

    Eigen::Index dim() const noexcept { return matrix.rows(); }
};

namespace detail {

inline Eigen::Index moment_dim(int n, int t) {
    if (n < 1 || t < 1 || n * t > 12) {
        throw std::invalid_argument("moment dimension 2^(n t) with n = " + std::to_string(n) + ", t = " +
                                    std::to_string(t) + " exceeds 4096");
    }
    return Eigen::Index{1} << (n * t);
}

/// Splits a t-copy index into its per-copy digits (copy 0 first).
inline void split_index(Eigen::Index index, Eigen::Index base, int t, std::vector<Eigen::Index>& digits) {
    digits.resize(static_cast<std::size_t>(t));
    for (int c = t - 1; c >= 0; --c) {
        digits[static_cast<std::size_t>(c)] = index % base;
        index /= base;
    }
}

inline Eigen::Index join_index(const std::vector<Eigen::Index>& digits, Eigen::Index base) {
    Eigen::Index index = 0;
    for (auto d : digits) {
        index = index * base + d;
    }
    return index;
}

inline double binomial(double n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

inline Eigen::VectorXcd tensor_power(const Eigen::VectorXcd& v, int t) {
    Eigen::VectorXcd out = v;
    for (int c = 1; c < t; ++c) {
        Eigen::VectorXcd next(out.size() * v.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next.segment(i * v.size(), v.size()) = out[i] * v;
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace detail

/// Haar moment: projector onto the symmetric subspace over its dimension.
inline DensityMoment haar_moment(int n, int t) {
    const Eigen::Index dim = detail::moment_dim(n, t);
    const Eigen::Index base = Eigen::Index{1} << n;
    DensityMoment m{n, t, Eigen::MatrixXcd::Zero(dim, dim)};
    std::vector<int> perm(static_cast<std::size_t>(t));
    double t_fact = 1;
    for (int i = 2; i <= t; ++i) {
        t_fact *= i;
    }
    const double norm = 1.0 / (t_fact * detail::binomial(static_cast<double>(base) + t - 1, t));
    std::vector<Eigen::Index> digits;
    std::vector<Eigen::Index> permuted(static_cast<std::size_t>(t));
    for (Eigen::Index col = 0; col < dim; ++col) {
        detail::split_index(col, base, t, digits);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (int c = 0; c < t; ++c) {
                permuted[static_cast<std::size_t>(c)] = digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])];
            }
            m.matrix(detail::join_index(permuted, base), col) += norm;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return m;
}

/// Uniform mixture over all t-subsets T of [2^l] of |T><T|, where |T> is the
/// normalized equal superposition of the t! orderings of T.
inline DensityMoment unique_moment(int l, int t) {
    const Eigen::Index dim = detail::moment_dim(l, t);
    const Eigen::Index base = Eigen::Index{1} << l;
    if (t > base) {
        throw std::invalid_argument("unique_moment: t = " + std::to_string(t) + " exceeds the alphabet size 2^l = " +
                                    std::to_string(base));
    }
    DensityMoment m{l, t, Eigen::MatrixXcd::Zero(dim, dim)};
    const double subsets = detail::binomial(static_cast<double>(base), t);
    double t_fact = 1;
    for (int i = 2; i <= t; ++i) {
        t_fact *= i;
    }
    const double w = 1.0 / (subsets * t_fact);
    std::vector<Eigen::Index> symbols(static_cast<std::size_t>(t));
    std::iota(symbols.begin(), symbols.end(), 0);
    std::vector<Eigen::Index> orderings;
    while (true) {
        orderings.clear();
        std::vector<Eigen::Index> perm = symbols;
        do {
            orderings.push_back(detail::join_index(perm, base));
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (auto r : orderings) {
            for (auto c : orderings) {
                m.matrix(r, c) += w;
            }
        }
        // Next t-subset in lexicographic order.
        int i = t - 1;
        while (i >= 0 && symbols[static_cast<std::size_t>(i)] == base - t + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++symbols[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < t; ++j) {
            symbols[static_cast<std::size_t>(j)] = symbols[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return m;
}

/// Eigenvalues of a Hermitian matrix; uses the real solver when the imaginary
/// part vanishes.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    if (h.imag().cwiseAbs().maxCoeff() <= 1e-14) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real(), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("trace_distance: dimension mismatch " + std::to_string(a.rows()) + " vs " +
                                    std::to_string(b.rows()));
    }
    return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

inline double trace_distance(const DensityMoment& a, const DensityMoment& b) {
    return trace_distance(a.matrix, b.matrix);
}

/// E over all Boolean functions f on k bits of (|psi_f><psi_f|)^{(x)t}, with
/// |psi_f> = 2^{-k/2} sum_b (-1)^f(b) |b>, by explicit enumeration.
inline DensityMoment enumerated_function_moment(int k, int t) {
    if (k > 3) {
        throw std::invalid_argument("enumerated_function_moment: enumeration limited to k <= 3; use "
                                    "function_moment_closed_form for k = 4");
    }
    const Eigen::Index dim = detail::moment_dim(k, t);
    const Eigen::Index base = Eigen::Index{1} << k;
    DensityMoment m{k, t, Eigen::MatrixXcd::Zero(dim, dim)};
    const double amp = 1.0 / std::sqrt(static_cast<double>(base));
    std::uint64_t count = 0;
    Eigen::VectorXcd psi(base);
    for (const auto& f : enumerate_functions(k)) {
        for (Eigen::Index b = 0; b < base; ++b) {
            psi[b] = f(static_cast<std::uint64_t>(b)) ? -amp : amp;
        }
        Eigen::VectorXcd v = detail::tensor_power(psi, t);
        m.matrix.noalias() += v * v.adjoint();
        ++count;
    }
    m.matrix /= static_cast<double>(count);
    return m;
}

/// Same object from the parity rule: averaging the signs over all f leaves
/// K^{-t} on (v, v') iff every symbol occurs an even number of times in v v'.
inline DensityMoment function_moment_closed_form(int k, int t) {
    const Eigen::Index dim = detail::moment_dim(k, t);
    const Eigen::Index base = Eigen::Index{1} << k;
    if (base > 64) {
        throw std::invalid_argument("function_moment_closed_form: k <= 6");
    }
    DensityMoment m{k, t, Eigen::MatrixXcd::Zero(dim, dim)};
    const double w = std::pow(static_cast<double>(base), -t);
    std::vector<std::uint64_t> parity(static_cast<std::size_t>(dim), 0);
    std::vector<Eigen::Index> digits;
    for (Eigen::Index i = 0; i < dim; ++i) {
        detail::split_index(i, base, t, digits);
        for (auto d : digits) {
            parity[static_cast<std::size_t>(i)] ^= std::uint64_t{1} << d;
        }
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (parity[static_cast<std::size_t>(r)] == parity[static_cast<std::size_t>(c)]) {
                m.matrix(r, c) = w;
            }
        }
    }
    return m;
}

/// Sample mean of t-fold projectors.
template <typename States>
DensityMoment empirical_moment(const States& states, int t) {
    DensityMoment m;
    std::size_t count = 0;
    for (const auto& s : states) {
        Eigen::VectorXcd psi;
        int n = 0;
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SubsetPhaseState>) {
            n = s.n();
            detail::moment_dim(n, t);
            psi = s.to_dense().template cast<std::complex<double>>();
        } else {
            psi = s;
            n = std::countr_zero(static_cast<std::uint64_t>(psi.size()));
        }
        if (count == 0) {
            const Eigen::Index dim = detail::moment_dim(n, t);
            m = DensityMoment{n, t, Eigen::MatrixXcd::Zero(dim, dim)};
        } else if (n != m.n) {
            throw std::invalid_argument("empirical_moment: states must share n");
        }
        Eigen::VectorXcd v = detail::tensor_power(psi, t);
        m.matrix.noalias() += v * v.adjoint();
        ++count;
    }
    if (count == 0) {
        throw std::invalid_argument("empirical_moment: no states");
    }
    m.matrix /= static_cast<double>(count);
    return m;
}

/// Exact ensemble moment over all Boolean functions on k bits and all (2^n)!
/// permutations of the basis, for 2^n <= 4.
inline DensityMoment exact_pipeline_moment(int n, int k, int t) {
    if (n < 1 || n > 2 || k < 1 || k > n) {
        throw std::invalid_argument("exact_pipeline_moment: need 1 <= k <= n <= 2");
    }
    const Eigen::Index dim = detail::moment_dim(n, t);
    const int big_n = 1 << n;
    DensityMoment m{n, t, Eigen::MatrixXcd::Zero(dim, dim)};
    std::vector<int> perm(static_cast<std::size_t>(big_n));
    std::iota(perm.begin(), perm.end(), 0);
    const double amp = 1.0 / std::sqrt(static_cast<double>(1 << k));
    std::uint64_t count = 0;
    do {
        for (const auto& f : enumerate_functions(k)) {
            Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(big_n);
            for (int b = 0; b < (1 << k); ++b) {
                psi[perm[static_cast<std::size_t>(b)]] = f(static_cast<std::uint64_t>(b)) ? -amp : amp;
            }
            Eigen::VectorXcd v = detail::tensor_power(psi, t);
            m.matrix.noalias() += v * v.adjoint();
            ++count;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    m.matrix /= static_cast<double>(count);
    return m;
}

/// Mean of |<psi_i|psi_j>|^{2t} over ordered pairs i != j.
inline double frame_potential(const std::vector<Eigen::VectorXcd>& states, int t) {
    if (states.size() < 2) {
        throw std::invalid_argument("frame_potential needs at least 2 states");
    }
    double sum = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            if (i != j) {
                sum += std::pow(std::norm(states[i].dot(states[j])), t);
            }
        }
    }
    return sum / static_cast<double>(states.size() * (states.size() - 1));
}

struct MomentCheck {
    double hermitian_error = 0;
    double trace_error = 0;
    double min_eigenvalue = 0;
    double symmetry_error = 0;
    bool ok = true;
    std::vector<std::string> failures;
};

/// Hermiticity (1e-12), unit trace (1e-10), PSD (min eigenvalue >= -1e-10) and
/// invariance under every adjacent copy swap (1e-10).
inline MomentCheck check_moment(const DensityMoment& m) {
    MomentCheck r;
    r.hermitian_error = (m.matrix - m.matrix.adjoint()).cwiseAbs().maxCoeff();
    r.trace_error = std::abs(m.matrix.trace() - std::complex<double>(1, 0));
    r.min_eigenvalue = hermitian_eigenvalues(m.matrix).minCoeff();
    const Eigen::Index base = Eigen::Index{1} << m.n;
    std::vector<Eigen::Index> digits;
    std::vector<Eigen::Index> swapped_of(static_cast<std::size_t>(m.dim()));
    for (int c = 0; c + 1 < m.t; ++c) {
        for (Eigen::Index i = 0; i < m.dim(); ++i) {
            detail::split_index(i, base, m.t, digits);
            std::swap(digits[static_cast<std::size_t>(c)], digits[static_cast<std::size_t>(c + 1)]);
            swapped_of[static_cast<std::size_t>(i)] = detail::join_index(digits, base);
        }
        for (Eigen::Index r0 = 0; r0 < m.dim(); ++r0) {
            for (Eigen::Index c0 = 0; c0 < m.dim(); ++c0) {
                double e = std::abs(m.matrix(r0, c0) -
                                    m.matrix(swapped_of[static_cast<std::size_t>(r0)], swapped_of[static_cast<std::size_t>(c0)]));
                r.symmetry_error = std::max(r.symmetry_error, e);
            }
        }
    }
    auto require = [&r](bool cond, const char* name) {
        if (!cond) {
            r.ok = false;
            r.failures.emplace_back(name);
        }
    };
    require(r.hermitian_error <= 1e-12, "hermitian");
    require(r.trace_error <= 1e-10, "unit_trace");
    require(r.min_eigenvalue >= -1e-10, "positive_semidefinite");
    require(r.symmetry_error <= 1e-10, "copy_permutation_invariant");
    return r;
}

/// Residual check of the Hermitian eigensolver on random instances:
/// max over instances of ||A v - lambda v|| / ||A||.
inline double eigensolver_self_check(std::uint64_t seed, int instances = 8, Eigen::Index dim = 24) {
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
        CounterRng rng(derive_key(seed, Stream::kState, {static_cast<std::uint64_t>(i)}));
        Eigen::MatrixXcd a(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                a(r, c) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
            }
        }
        a = (a + a.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
        double norm = a.norm();
        for (Eigen::Index j = 0; j < dim; ++j) {
            double res = (a * es.eigenvectors().col(j) - es.eigenvalues()[j] * es.eigenvectors().col(j)).norm();
            worst = std::max(worst, res / norm);
        }
    }
    return worst;
}

// Binary dump: uint64 rows, uint64 cols (little-endian), then row-major
// (re, im) double pairs.

inline void write_moment(std::ostream& out, const DensityMoment& m) {
    auto put_u64 = [&out](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    };
    auto put_f64 = [&put_u64](double d) { put_u64(std::bit_cast<std::uint64_t>(d)); };
    put_u64(static_cast<std::uint64_t>(m.matrix.rows()));
    put_u64(static_cast<std::uint64_t>(m.matrix.cols()));
    for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) {
            put_f64(m.matrix(r, c).real());
            put_f64(m.matrix(r, c).imag());
        }
    }
}

inline Eigen::MatrixXcd read_moment_matrix(std::istream& in) {
    auto get_u64 = [&in]() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            int ch = in.get();
            if (ch == std::char_traits<char>::eof()) {
                throw std::runtime_error("read_moment_matrix: truncated input");
            }
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
        }
        return v;
    };
    std::uint64_t rows = get_u64();
    std::uint64_t cols = get_u64();
    if (rows > static_cast<std::uint64_t>(kMaxMomentDim) || cols > static_cast<std::uint64_t>(kMaxMomentDim)) {
        throw std::runtime_error("read_moment_matrix: dimensions exceed 4096");
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double re = std::bit_cast<double>(get_u64());
            double im = std::bit_cast<double>(get_u64());
            m(r, c) = {re, im};
        }
    }
    return m;
}

}  // namespace sdesign

#endif  // SDESIGN_MOMENTS_HPP
