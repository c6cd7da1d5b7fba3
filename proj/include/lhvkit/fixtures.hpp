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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lhvkit/density_operator.hpp"
#include "lhvkit/reconstruction.hpp"
#include "lhvkit/rng.hpp"

namespace lhvkit {

/// Projector onto (|01> - |10>)/sqrt(2), the maximally entangled two-qubit
/// reference state.
inline DensityOperator singlet_state() {
    ComplexMatrix m(4);
    m.at(1, 1) = 0.5;
    m.at(2, 2) = 0.5;
    m.at(1, 2) = -0.5;
    m.at(2, 1) = -0.5;
    return {std::move(m), 2, 2};
}

/// p * singlet + (1 - p) * I/4, the standard one-parameter family straddling
/// the separable/entangled boundary.
inline DensityOperator werner_state(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("werner_state: mixing parameter must lie in [0, 1]");
    ComplexMatrix m = singlet_state().matrix();
    m *= Complex(p, 0.0);
    ComplexMatrix background = ComplexMatrix::identity(4);
    background *= Complex((1.0 - p) / 4.0, 0.0);
    m += background;
    return {std::move(m), 2, 2};
}

/// Normalized complex Gaussian vector: Haar-random pure state.
inline std::vector<Complex> random_pure_state(int dim, SplitMix64 &rng) {
    std::vector<Complex> v(dim);
    double norm_sq = 0.0;
    for (auto &z : v) {
        z = Complex(rng.next_normal(), rng.next_normal());
        norm_sq += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &z : v)
        z *= inv;
    return v;
}

/// Full-rank random density matrix G G^dag / tr(G G^dag) with i.i.d. complex
/// Gaussian G (Hilbert-Schmidt ensemble).
inline ComplexMatrix random_density_matrix(int dim, SplitMix64 &rng) {
    ComplexMatrix g(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            g.at(r, c) = Complex(rng.next_normal(), rng.next_normal());
    ComplexMatrix m = g * g.adjoint();
    m *= Complex(1.0 / std::real(m.trace()), 0.0);
    return m;
}

/// Random bipartite state on d1 x d2.
inline DensityOperator random_state(int d1, int d2, SplitMix64 &rng) {
    return {random_density_matrix(d1 * d2, rng), d1, d2};
}

/// Uniform direction on the unit sphere (Gaussian trick).
inline Vec3 random_unit_vec3(SplitMix64 &rng) {
    while (true) {
        const Vec3 v{rng.next_normal(), rng.next_normal(), rng.next_normal()};
        const double n = norm(v);
        if (n > 1e-12)
            return (1.0 / n) * v;
    }
}

/// Uniform point of the closed unit ball (direction times cbrt-distributed
/// radius).
inline Vec3 random_in_unit_ball(SplitMix64 &rng) {
    return std::cbrt(rng.next_double()) * random_unit_vec3(rng);
}

/// Random product ensemble of k terms over d1 x d2: exponential weights
/// normalized to a probability vector, independent random density matrices
/// for each factor.
inline ProductEnsemble random_product_ensemble(int k, int d1, int d2, SplitMix64 &rng) {
    if (k < 1)
        throw std::invalid_argument("random_product_ensemble: at least one term required");
    std::vector<double> weights(k);
    double total = 0.0;
    for (auto &w : weights) {
        w = -std::log(1.0 - rng.next_double());
        total += w;
    }
    std::vector<ProductEnsemble::Term> terms;
    terms.reserve(k);
    for (int i = 0; i < k; ++i)
        terms.push_back({weights[i] / total,
                         DensityOperator(random_density_matrix(d1, rng), d1, 1),
                         DensityOperator(random_density_matrix(d2, rng), d2, 1)});
    // Rounding can leave the sum a few ulp off 1; pin it on the largest term.
    double sum = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        sum += terms[i].p;
        if (terms[i].p > terms[largest].p)
            largest = i;
    }
    terms[largest].p += 1.0 - sum;
    return ProductEnsemble(std::move(terms));
}

/// Two-qubit random product ensemble, the common case in tests.
inline ProductEnsemble random_product_ensemble(int k, SplitMix64 &rng) {
    return random_product_ensemble(k, 2, 2, rng);
}

} // namespace lhvkit
