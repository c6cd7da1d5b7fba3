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

#include <string>
#include <utility>

#include "lhvkit/complex_matrix.hpp"
#include "lhvkit/eigen.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/tolerances.hpp"

namespace lhvkit {

/**
 * @brief Positive unit-trace Hermitian matrix tagged with bipartite
 * dimensions (d1, d2), d1*d2 = matrix dim. d2 = 1 for a single subsystem.
 *
 * The constructor validates Hermiticity, unit trace and positivity; a
 * violation raises InvariantError naming the failed invariant.
 */
class DensityOperator {
  public:
    DensityOperator(ComplexMatrix matrix, int d1, int d2)
        : matrix_(std::move(matrix)), d1_(d1), d2_(d2) {
        if (d1 < 1 || d2 < 1 || d1 * d2 != matrix_.dim())
            throw InvariantError("DensityOperator: dims (d1, d2) must multiply to the matrix dim");
        const double hd = matrix_.hermiticity_defect();
        if (hd > tol::hermitian)
            throw InvariantError("DensityOperator: not Hermitian (defect " + std::to_string(hd) +
                                 ")");
        const Complex tr = matrix_.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol::trace_one)
            throw InvariantError("DensityOperator: trace is not 1 (got " +
                                 std::to_string(std::real(tr)) + ")");
        const double min_eig = hermitian_eigenvalues(matrix_).front();
        if (min_eig < -tol::positivity)
            throw InvariantError("DensityOperator: not positive semidefinite (min eigenvalue " +
                                 std::to_string(min_eig) + ")");
    }

    static DensityOperator maximally_mixed(int d1, int d2 = 1) {
        ComplexMatrix m = ComplexMatrix::identity(d1 * d2);
        m *= Complex(1.0 / (d1 * d2), 0.0);
        return {std::move(m), d1, d2};
    }

    const ComplexMatrix &matrix() const { return matrix_; }
    int dim() const { return matrix_.dim(); }
    int d1() const { return d1_; }
    int d2() const { return d2_; }

    bool operator==(const DensityOperator &) const = default;

  private:
    ComplexMatrix matrix_;
    int d1_;
    int d2_;
};

/// Transpose applied to one tensor factor. Hermiticity and trace are
/// preserved; positivity generally is not, which is the point.
inline ComplexMatrix partial_transpose(const DensityOperator &rho, int subsystem) {
    if (subsystem != 1 && subsystem != 2)
        throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
    if (rho.d1() < 2 || rho.d2() < 2)
        throw std::invalid_argument("partial_transpose: both subsystem dims must be >= 2");
    const int d1 = rho.d1(), d2 = rho.d2();
    const ComplexMatrix &m = rho.matrix();
    ComplexMatrix out(d1 * d2);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int i2 = 0; i2 < d2; ++i2)
            for (int j1 = 0; j1 < d1; ++j1)
                for (int j2 = 0; j2 < d2; ++j2) {
                    const Complex v = (subsystem == 1) ? m.at(j1 * d2 + i2, i1 * d2 + j2)
                                                       : m.at(i1 * d2 + j2, j1 * d2 + i2);
                    out.at(i1 * d2 + i2, j1 * d2 + j2) = v;
                }
    return out;
}

/// Reduced density operator of the kept subsystem.
inline DensityOperator partial_trace(const DensityOperator &rho, int keep) {
    if (keep != 1 && keep != 2)
        throw std::invalid_argument("partial_trace: keep must be 1 or 2");
    const int d1 = rho.d1(), d2 = rho.d2();
    const ComplexMatrix &m = rho.matrix();
    const int dk = (keep == 1) ? d1 : d2;
    const int dt = (keep == 1) ? d2 : d1;
    ComplexMatrix out(dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            Complex s = 0.0;
            for (int t = 0; t < dt; ++t)
                s += (keep == 1) ? m.at(i * d2 + t, j * d2 + t) : m.at(t * d2 + i, t * d2 + j);
            out.at(i, j) = s;
        }
    return {std::move(out), dk, 1};
}

} // namespace lhvkit
