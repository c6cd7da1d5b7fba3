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
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "lhvkit/vec3.hpp"

namespace lhvkit {

using Complex = std::complex<double>;

/**
 * @brief Dense square complex matrix, row-major.
 *
 * The substrate for all operators and states in the library. Target sizes
 * are Hilbert-space dimensions 2..9, so everything is dense and no sparse
 * paths exist.
 */
class ComplexMatrix {
  public:
    explicit ComplexMatrix(int dim)
        : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim) {
        if (dim <= 0)
            throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }

    ComplexMatrix(int dim, std::vector<Complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim <= 0 || entries_.size() != static_cast<std::size_t>(dim) * dim)
            throw std::invalid_argument("ComplexMatrix: entries length must be dim^2");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            m.at(i, i) = 1.0;
        return m;
    }

    /// Row-wise construction, e.g. from_rows({{1, 0}, {0, 1}}).
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
        const int dim = static_cast<int>(rows.size());
        ComplexMatrix m(dim);
        int r = 0;
        for (const auto &row : rows) {
            if (static_cast<int>(row.size()) != dim)
                throw std::invalid_argument("ComplexMatrix: ragged rows");
            int c = 0;
            for (const auto &v : row)
                m.at(r, c++) = v;
            ++r;
        }
        return m;
    }

    int dim() const { return dim_; }

    Complex &at(int r, int c) { return entries_[static_cast<std::size_t>(r) * dim_ + c]; }
    const Complex &at(int r, int c) const {
        return entries_[static_cast<std::size_t>(r) * dim_ + c];
    }

    const std::vector<Complex> &entries() const { return entries_; }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] += o.entries_[i];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] -= o.entries_[i];
        return *this;
    }

    ComplexMatrix &operator*=(Complex s) {
        for (auto &e : entries_)
            e *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        a.check_same_dim(b);
        const int n = a.dim_;
        ComplexMatrix c(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Complex aik = a.at(i, k);
                if (aik == Complex{})
                    continue;
                for (int j = 0; j < n; ++j)
                    c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    bool operator==(const ComplexMatrix &) const = default;

    ComplexMatrix adjoint() const {
        ComplexMatrix m(dim_);
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                m.at(r, c) = std::conj(at(c, r));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(dim_);
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                m.at(r, c) = at(c, r);
        return m;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix m(dim_);
        for (std::size_t i = 0; i < entries_.size(); ++i)
            m.entries_[i] = std::conj(entries_[i]);
        return m;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < dim_; ++i)
            t += at(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto &e : entries_)
            s += std::norm(e);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto &e : entries_)
            m = std::max(m, std::abs(e));
        return m;
    }

    /// max |M - M^dag| over entries; zero for exactly Hermitian input.
    double hermiticity_defect() const {
        double d = 0.0;
        for (int r = 0; r < dim_; ++r)
            for (int c = r; c < dim_; ++c)
                d = std::max(d, std::abs(at(r, c) - std::conj(at(c, r))));
        return d;
    }

    bool is_hermitian(double tolerance) const { return hermiticity_defect() <= tolerance; }

  private:
    void check_same_dim(const ComplexMatrix &o) const {
        if (dim_ != o.dim_)
            throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }

    int dim_;
    std::vector<Complex> entries_;
};

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double d = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c)
            d = std::max(d, std::abs(a.at(r, c) - b.at(r, c)));
    return d;
}

/// Kronecker product with subsystem 1 as the slow index and subsystem 2 as
/// the fast index: (a ox b)[(i1 i2),(j1 j2)] = a[i1,j1] b[i2,j2].
inline ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    const int da = a.dim(), db = b.dim();
    ComplexMatrix c(da * db);
    for (int i1 = 0; i1 < da; ++i1)
        for (int j1 = 0; j1 < da; ++j1) {
            const Complex aij = a.at(i1, j1);
            if (aij == Complex{})
                continue;
            for (int i2 = 0; i2 < db; ++i2)
                for (int j2 = 0; j2 < db; ++j2)
                    c.at(i1 * db + i2, j1 * db + j2) = aij * b.at(i2, j2);
        }
    return c;
}

inline ComplexMatrix pauli_x() {
    return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

inline ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}

inline ComplexMatrix pauli_z() {
    return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

/// m . sigma
inline ComplexMatrix pauli_dot(Vec3 m) {
    ComplexMatrix s(2);
    s.at(0, 0) = Complex(m.z, 0.0);
    s.at(0, 1) = Complex(m.x, -m.y);
    s.at(1, 0) = Complex(m.x, m.y);
    s.at(1, 1) = Complex(-m.z, 0.0);
    return s;
}

/// Bloch components of a qubit operator: b_i = Re tr(sigma_i A).
inline Vec3 bloch_direction(const ComplexMatrix &a) {
    if (a.dim() != 2)
        throw std::invalid_argument("bloch_direction: qubit operator required");
    return {std::real(a.at(0, 1) + a.at(1, 0)),
            std::real(Complex(0.0, 1.0) * (a.at(0, 1) - a.at(1, 0))),
            std::real(a.at(0, 0) - a.at(1, 1))};
}

} // namespace lhvkit
