// Copyright 2026 The lhvkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lhvkit/complex_matrix.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/tolerances.hpp"

namespace lhvkit {

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c)
            if (r != c)
                s += std::norm(a.at(r, c));
    return std::sqrt(s);
}

// One cyclic-Jacobi diagonalization pass over a Hermitian matrix. Each
// rotation U zeroes A[p][q]:
//   U[p][p] = c, U[p][q] = -s e^{i phi}, U[q][p] = s e^{-i phi}, U[q][q] = c
// with A[p][q] = |g| e^{i phi} and theta = atan2(2|g|, A[p][p]-A[q][q]) / 2.
inline EigenSystem jacobi_hermitian(ComplexMatrix a, bool want_vectors) {
    const int n = a.dim();
    // Symmetrize floating-point noise away.
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
            const Complex avg = 0.5 * (a.at(r, c) + std::conj(a.at(c, r)));
            a.at(r, c) = avg;
            a.at(c, r) = std::conj(avg);
        }

    ComplexMatrix v = ComplexMatrix::identity(want_vectors ? n : 1);
    const double scale = std::max(1.0, a.frobenius_norm());

    for (int sweep = 0; sweep < tol::jacobi_max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol::jacobi_off_diagonal * scale)
            break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const Complex g = a.at(p, q);
                const double ag = std::abs(g);
                if (ag <= 1e-300)
                    continue;
                const Complex phase = g / ag;
                const double theta =
                    0.5 * std::atan2(2.0 * ag, std::real(a.at(p, p)) - std::real(a.at(q, q)));
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // B = A U  (columns p and q change)
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p);
                    const Complex akq = a.at(k, q);
                    a.at(k, p) = c * akp + s * std::conj(phase) * akq;
                    a.at(k, q) = -s * phase * akp + c * akq;
                }
                // A' = U^dag B  (rows p and q change)
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a.at(p, k);
                    const Complex aqk = a.at(q, k);
                    a.at(p, k) = c * apk + s * phase * aqk;
                    a.at(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                a.at(p, p) = Complex(std::real(a.at(p, p)), 0.0);
                a.at(q, q) = Complex(std::real(a.at(q, q)), 0.0);

                if (want_vectors)
                    for (int k = 0; k < n; ++k) {
                        const Complex vkp = v.at(k, p);
                        const Complex vkq = v.at(k, q);
                        v.at(k, p) = c * vkp + s * std::conj(phase) * vkq;
                        v.at(k, q) = -s * phase * vkp + c * vkq;
                    }
            }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return std::real(a.at(i, i)) < std::real(a.at(j, j)); });

    EigenSystem out{std::vector<double>(n), ComplexMatrix(want_vectors ? n : 1)};
    for (int k = 0; k < n; ++k) {
        out.values[k] = std::real(a.at(order[k], order[k]));
        if (want_vectors)
            for (int r = 0; r < n; ++r)
                out.vectors.at(r, k) = v.at(r, order[k]);
    }
    return out;
}

inline void require_hermitian(const ComplexMatrix &m, const char *who) {
    if (!m.is_hermitian(tol::hermitian))
        throw InvariantError(std::string(who) + ": matrix is not Hermitian within " +
                             std::to_string(tol::hermitian));
}

} // namespace detail

/// Eigenvalues of a Hermitian matrix, ascending. Rejects non-Hermitian input.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m) {
    detail::require_hermitian(m, "hermitian_eigenvalues");
    return detail::jacobi_hermitian(m, false).values;
}

/// Full eigensystem of a Hermitian matrix, eigenvalues ascending.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix &m) {
    detail::require_hermitian(m, "hermitian_eigensystem");
    return detail::jacobi_hermitian(m, true);
}

/// Operator (spectral) norm of a Hermitian matrix: max |eigenvalue|.
inline double operator_norm(const ComplexMatrix &m) {
    const auto ev = hermitian_eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

/// Minimum-norm solution of H x = b for Hermitian H via eigendecomposition,
/// dropping eigenvalues below rel_cut * max|eigenvalue|.
inline std::vector<Complex> pinv_solve(const ComplexMatrix &h, const std::vector<Complex> &b,
                                       double rel_cut = 1e-12) {
    const int n = h.dim();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("pinv_solve: rhs length mismatch");
    const EigenSystem es = hermitian_eigensystem(h);
    double emax = 0.0;
    for (double v : es.values)
        emax = std::max(emax, std::abs(v));
    std::vector<Complex> x(n, 0.0);
    for (int k = 0; k < n; ++k) {
        if (std::abs(es.values[k]) <= rel_cut * emax || es.values[k] == 0.0)
            continue;
        Complex proj = 0.0;
        for (int r = 0; r < n; ++r)
            proj += std::conj(es.vectors.at(r, k)) * b[r];
        proj /= es.values[k];
        for (int r = 0; r < n; ++r)
            x[r] += proj * es.vectors.at(r, k);
    }
    return x;
}

} // namespace lhvkit
