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

#include <catch2/catch_amalgamated.hpp>

#include "lhvkit/complex_matrix.hpp"
#include "lhvkit/density_operator.hpp"
#include "lhvkit/eigen.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/fixtures.hpp"
#include "lhvkit/rng.hpp"
#include "lhvkit/vec3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace lhvkit;

namespace {

ComplexMatrix random_hermitian(int dim, SplitMix64 &rng) {
    ComplexMatrix h(dim);
    for (int r = 0; r < dim; ++r) {
        h.at(r, r) = Complex(rng.next_normal(), 0.0);
        for (int c = r + 1; c < dim; ++c) {
            const Complex z(rng.next_normal(), rng.next_normal());
            h.at(r, c) = z;
            h.at(c, r) = std::conj(z);
        }
    }
    return h;
}

// Closed-form spectrum of a 2x2 Hermitian matrix, the independent oracle for
// the iterative solver: m +/- sqrt(d^2 + |b|^2) with m the mean of the
// diagonal, d half the diagonal gap, b the off-diagonal entry.
std::pair<double, double> two_by_two_spectrum(const ComplexMatrix &h) {
    const double m = 0.5 * std::real(h.at(0, 0) + h.at(1, 1));
    const double d = 0.5 * std::real(h.at(0, 0) - h.at(1, 1));
    const double b = std::abs(h.at(0, 1));
    const double r = std::sqrt(d * d + b * b);
    return {m - r, m + r};
}

} // namespace

TEST_CASE("Vec3 arithmetic and norms", "[vec3]") {
    const Vec3 a{1.0, 2.0, 3.0};
    const Vec3 b{-1.0, 0.5, 2.0};
    REQUIRE(dot(a, b) == Catch::Approx(1.0 * -1.0 + 2.0 * 0.5 + 3.0 * 2.0));
    REQUIRE(norm(Vec3{3.0, 4.0, 0.0}) == Catch::Approx(5.0));
    const Vec3 s = a - b;
    REQUIRE(s.x == Catch::Approx(2.0));
    REQUIRE(s.y == Catch::Approx(1.5));
    REQUIRE(s.z == Catch::Approx(1.0));
    REQUIRE(max_component_diff(a, a) == 0.0);
    REQUIRE(max_component_diff(a, b) == Catch::Approx(2.0));
}

TEST_CASE("Pauli algebra", "[matrix]") {
    const ComplexMatrix sx = pauli_x();
    const ComplexMatrix sy = pauli_y();
    const ComplexMatrix sz = pauli_z();
    const Complex i(0.0, 1.0);

    SECTION("multiplication table") {
        REQUIRE(max_abs_diff(sx * sy, i * sz) < 1e-15);
        REQUIRE(max_abs_diff(sy * sz, i * sx) < 1e-15);
        REQUIRE(max_abs_diff(sz * sx, i * sy) < 1e-15);
        REQUIRE(max_abs_diff(sx * sx, ComplexMatrix::identity(2)) < 1e-15);
    }

    SECTION("pauli_dot matches component expansion") {
        SplitMix64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec3 m = random_in_unit_ball(rng);
            ComplexMatrix expanded = Complex(m.x, 0.0) * sx;
            expanded += Complex(m.y, 0.0) * sy;
            expanded += Complex(m.z, 0.0) * sz;
            REQUIRE(max_abs_diff(pauli_dot(m), expanded) < 1e-15);
        }
    }

    SECTION("bloch_direction reads doubled Pauli components") {
        // bloch_direction(rho) recovers s from rho = (I + s.sigma)/2, so on a
        // bare Pauli combination m.sigma it reports 2m.
        SplitMix64 rng(8);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec3 m = random_in_unit_ball(rng);
            const Vec3 back = bloch_direction(pauli_dot(m));
            REQUIRE(max_component_diff(back, 2.0 * m) < 1e-14);
        }
    }

    SECTION("bloch_direction recovers the vector of a Bloch state") {
        SplitMix64 rng(9);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec3 m = random_in_unit_ball(rng);
            ComplexMatrix rho = ComplexMatrix::identity(2);
            rho += pauli_dot(m);
            rho = Complex(0.5, 0.0) * rho;
            REQUIRE(max_component_diff(bloch_direction(rho), m) < 1e-14);
        }
    }
}

TEST_CASE("Tensor product structure", "[matrix]") {
    SECTION("entries follow the block layout") {
        SplitMix64 rng(11);
        const ComplexMatrix a = random_hermitian(2, rng);
        const ComplexMatrix b = random_hermitian(3, rng);
        const ComplexMatrix t = tensor(a, b);
        REQUIRE(t.dim() == 6);
        for (int i1 = 0; i1 < 2; ++i1)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int i2 = 0; i2 < 3; ++i2)
                    for (int j2 = 0; j2 < 3; ++j2)
                        REQUIRE(std::abs(t.at(i1 * 3 + i2, j1 * 3 + j2) -
                                         a.at(i1, j1) * b.at(i2, j2)) < 1e-15);
    }

    SECTION("trace and product are multiplicative") {
        SplitMix64 rng(12);
        const ComplexMatrix a = random_hermitian(2, rng);
        const ComplexMatrix b = random_hermitian(2, rng);
        const ComplexMatrix c = random_hermitian(2, rng);
        const ComplexMatrix d = random_hermitian(2, rng);
        REQUIRE(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-12);
        REQUIRE(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-12);
    }
}

TEST_CASE("Hermitian eigensolver", "[eigen]") {
    SECTION("2x2 matches the closed-form spectrum") {
        SplitMix64 rng(21);
        for (int trial = 0; trial < 50; ++trial) {
            const ComplexMatrix h = random_hermitian(2, rng);
            const auto [lo, hi] = two_by_two_spectrum(h);
            const std::vector<double> ev = hermitian_eigenvalues(h);
            REQUIRE(ev.size() == 2);
            REQUIRE(ev[0] == Catch::Approx(lo).margin(1e-12));
            REQUIRE(ev[1] == Catch::Approx(hi).margin(1e-12));
        }
    }

    SECTION("trace and Frobenius invariants at dim 4") {
        SplitMix64 rng(22);
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix h = random_hermitian(4, rng);
            const std::vector<double> ev = hermitian_eigenvalues(h);
            double sum = 0.0, sum_sq = 0.0;
            for (double v : ev) {
                sum += v;
                sum_sq += v * v;
            }
            REQUIRE(sum == Catch::Approx(std::real(h.trace())).margin(1e-10));
            REQUIRE(sum_sq == Catch::Approx(std::real((h * h).trace())).margin(1e-9));
            REQUIRE(std::is_sorted(ev.begin(), ev.end()));
        }
    }

    SECTION("eigenvectors satisfy H v = lambda v") {
        SplitMix64 rng(23);
        const ComplexMatrix h = random_hermitian(4, rng);
        const EigenSystem es = hermitian_eigensystem(h);
        for (int k = 0; k < 4; ++k) {
            double residual = 0.0;
            double vnorm = 0.0;
            for (int r = 0; r < 4; ++r) {
                Complex hv(0.0, 0.0);
                for (int c = 0; c < 4; ++c)
                    hv += h.at(r, c) * es.vectors.at(c, k);
                residual = std::max(residual, std::abs(hv - es.values[k] * es.vectors.at(r, k)));
                vnorm += std::norm(es.vectors.at(r, k));
            }
            REQUIRE(residual < 1e-10);
            REQUIRE(vnorm == Catch::Approx(1.0).margin(1e-12));
        }
    }

    SECTION("rejects non-Hermitian input") {
        ComplexMatrix m(2);
        m.at(0, 1) = Complex(1.0, 0.0);
        REQUIRE_THROWS_AS(hermitian_eigenvalues(m), InvariantError);
    }

    SECTION("operator norm of a projector is 1") {
        const ComplexMatrix p = 0.5 * (ComplexMatrix::identity(2) + pauli_z());
        REQUIRE(operator_norm(p) == Catch::Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("Minimum-norm linear solver", "[eigen]") {
    SECTION("full-rank systems solve exactly") {
        SplitMix64 rng(31);
        const ComplexMatrix h = [&] {
            ComplexMatrix g = random_hermitian(3, rng);
            // Shift well into positive definiteness.
            return g * g + ComplexMatrix::identity(3);
        }();
        const std::vector<Complex> x_true{Complex(1.0, 0.5), Complex(-2.0, 0.0),
                                          Complex(0.25, -1.0)};
        std::vector<Complex> b(3, Complex(0.0, 0.0));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                b[r] += h.at(r, c) * x_true[c];
        const std::vector<Complex> x = pinv_solve(h, b);
        for (int r = 0; r < 3; ++r)
            REQUIRE(std::abs(x[r] - x_true[r]) < 1e-10);
    }

    SECTION("singular systems return the least-squares solution") {
        // Projector onto the z axis: the y component of the right-hand side
        // is unreachable and must be dropped, not amplified.
        ComplexMatrix h(2);
        h.at(0, 0) = 1.0;
        const std::vector<Complex> b{Complex(3.0, 0.0), Complex(5.0, 0.0)};
        const std::vector<Complex> x = pinv_solve(h, b);
        REQUIRE(std::abs(x[0] - Complex(3.0, 0.0)) < 1e-12);
        REQUIRE(std::abs(x[1]) < 1e-12);
    }
}

TEST_CASE("Density operator invariants", "[state]") {
    SECTION("accepts the maximally mixed state") {
        const DensityOperator rho = DensityOperator::maximally_mixed(2, 2);
        REQUIRE(rho.dim() == 4);
        REQUIRE(std::real(rho.matrix().trace()) == Catch::Approx(1.0));
    }

    SECTION("rejects non-unit trace") {
        REQUIRE_THROWS_AS(DensityOperator(ComplexMatrix::identity(2), 2, 1), InvariantError);
    }

    SECTION("rejects non-Hermitian matrices") {
        ComplexMatrix m(2);
        m.at(0, 0) = 1.0;
        m.at(0, 1) = Complex(0.5, 0.0);
        REQUIRE_THROWS_AS(DensityOperator(m, 2, 1), InvariantError);
    }

    SECTION("rejects negative matrices") {
        ComplexMatrix m(2);
        m.at(0, 0) = 1.5;
        m.at(1, 1) = -0.5;
        REQUIRE_THROWS_AS(DensityOperator(m, 2, 1), InvariantError);
    }

    SECTION("rejects inconsistent subsystem dims") {
        REQUIRE_THROWS_AS(DensityOperator(ComplexMatrix::identity(4) * Complex(0.25, 0.0), 3, 2),
                          InvariantError);
    }
}

TEST_CASE("Partial transpose", "[state]") {
    SECTION("spectrum of the transposed singlet") {
        const std::vector<double> ev = hermitian_eigenvalues(partial_transpose(singlet_state(), 2));
        REQUIRE(ev.size() == 4);
        REQUIRE(ev[0] == Catch::Approx(-0.5).margin(1e-12));
        REQUIRE(ev[1] == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(ev[2] == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(ev[3] == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("product states stay positive") {
        SplitMix64 rng(41);
        for (int trial = 0; trial < 10; ++trial) {
            const DensityOperator r1(random_density_matrix(2, rng), 2, 1);
            const DensityOperator r2(random_density_matrix(2, rng), 2, 1);
            const DensityOperator prod(tensor(r1.matrix(), r2.matrix()), 2, 2);
            REQUIRE(hermitian_eigenvalues(partial_transpose(prod, 2)).front() > -1e-12);
        }
    }

    SECTION("applying the map twice restores the state") {
        SplitMix64 rng(42);
        const DensityOperator rho = random_state(2, 2, rng);
        const DensityOperator once(partial_transpose(rho, 2), 2, 2);
        REQUIRE(max_abs_diff(partial_transpose(once, 2), rho.matrix()) < 1e-15);
    }

    SECTION("transposing either side gives transposed results") {
        SplitMix64 rng(43);
        const DensityOperator rho = random_state(2, 2, rng);
        const ComplexMatrix t2 = partial_transpose(rho, 2);
        const ComplexMatrix t1 = partial_transpose(rho, 1);
        REQUIRE(max_abs_diff(t1, t2.transpose()) < 1e-15);
    }
}

TEST_CASE("Partial trace", "[state]") {
    SECTION("singlet marginals are maximally mixed") {
        const DensityOperator left = partial_trace(singlet_state(), 1);
        const DensityOperator right = partial_trace(singlet_state(), 2);
        const ComplexMatrix half = ComplexMatrix::identity(2) * Complex(0.5, 0.0);
        REQUIRE(max_abs_diff(left.matrix(), half) < 1e-15);
        REQUIRE(max_abs_diff(right.matrix(), half) < 1e-15);
    }

    SECTION("product states reduce to their factors") {
        SplitMix64 rng(51);
        const ComplexMatrix r1 = random_density_matrix(2, rng);
        const ComplexMatrix r2 = random_density_matrix(2, rng);
        const DensityOperator prod(tensor(r1, r2), 2, 2);
        REQUIRE(max_abs_diff(partial_trace(prod, 1).matrix(), r1) < 1e-14);
        REQUIRE(max_abs_diff(partial_trace(prod, 2).matrix(), r2) < 1e-14);
    }

    SECTION("explicit index contraction oracle") {
        SplitMix64 rng(52);
        const DensityOperator rho = random_state(2, 2, rng);
        ComplexMatrix keep1(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    keep1.at(i, j) += rho.matrix().at(i * 2 + k, j * 2 + k);
        REQUIRE(max_abs_diff(partial_trace(rho, 1).matrix(), keep1) < 1e-15);
    }
}

TEST_CASE("Random state fixtures are valid states", "[fixtures]") {
    SplitMix64 rng(61);
    SECTION("pure states are normalized") {
        const std::vector<Complex> psi = random_pure_state(4, rng);
        double n = 0.0;
        for (const Complex &z : psi)
            n += std::norm(z);
        REQUIRE(n == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("density matrices pass the constructor checks") {
        for (int trial = 0; trial < 10; ++trial)
            REQUIRE_NOTHROW(DensityOperator(random_density_matrix(3, rng), 3, 1));
    }

    SECTION("werner family endpoints") {
        REQUIRE(max_abs_diff(werner_state(0.0).matrix(),
                             DensityOperator::maximally_mixed(2, 2).matrix()) < 1e-15);
        REQUIRE(max_abs_diff(werner_state(1.0).matrix(), singlet_state().matrix()) < 1e-15);
        REQUIRE_THROWS_AS(werner_state(1.5), std::invalid_argument);
        REQUIRE_THROWS_AS(werner_state(-0.1), std::invalid_argument);
    }

    SECTION("ball samples stay inside the ball") {
        for (int trial = 0; trial < 50; ++trial)
            REQUIRE(norm(random_in_unit_ball(rng)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("Deterministic stream derivation", "[rng]") {
    SECTION("same inputs, same stream") {
        REQUIRE(derive_stream(42, "tag") == derive_stream(42, "tag"));
        REQUIRE(derive_stream(42, "tag", 7) == derive_stream(42, "tag", 7));
    }

    SECTION("different tags or indices decorrelate") {
        REQUIRE(derive_stream(42, "tag") != derive_stream(42, "other"));
        REQUIRE(derive_stream(42, "tag", 1) != derive_stream(42, "tag", 2));
        REQUIRE(derive_stream(42, "tag", 1, 2) != derive_stream(42, "tag", 2, 1));
        REQUIRE(derive_stream(1, "tag") != derive_stream(2, "tag"));
    }

    SECTION("doubles land in the unit interval") {
        SplitMix64 rng(99);
        for (int i = 0; i < 1000; ++i) {
            const double u = rng.next_double();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
        }
    }
}
