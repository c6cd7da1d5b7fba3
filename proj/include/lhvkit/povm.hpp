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
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lhvkit/complex_matrix.hpp"
#include "lhvkit/eigen.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/tolerances.hpp"
#include "lhvkit/vec3.hpp"

namespace lhvkit {

/// One POVM element, stored as measure weight times a non-negative Hermitian
/// operator. Completeness is over the weighted operators.
struct Effect {
    double weight = 1.0;
    ComplexMatrix op{1};
    std::string label;

    bool operator==(const Effect &) const = default;
};

namespace detail {

inline void validate_effect(const Effect &e) {
    if (!(e.weight > 0.0))
        throw InvariantError("Effect '" + e.label + "': weight must be positive");
    if (!e.op.is_hermitian(tol::hermitian))
        throw InvariantError("Effect '" + e.label + "': operator is not Hermitian");
    const double min_eig = hermitian_eigenvalues(e.op).front();
    if (min_eig < -tol::positivity)
        throw InvariantError("Effect '" + e.label + "': operator is not non-negative (min eigenvalue " +
                             std::to_string(min_eig) + ")");
}

inline std::string format_matrix(const ComplexMatrix &m) {
    std::string s;
    char buf[64];
    for (int r = 0; r < m.dim(); ++r) {
        s += "  [";
        for (int c = 0; c < m.dim(); ++c) {
            std::snprintf(buf, sizeof(buf), " %+.3e%+.3ei", std::real(m.at(r, c)),
                          std::imag(m.at(r, c)));
            s += buf;
        }
        s += " ]\n";
    }
    return s;
}

} // namespace detail

/**
 * @brief Finite weighted POVM: effects whose weighted sum is the identity.
 *
 * The completeness residual is checked entrywise at construction; an
 * unbalanced family is rejected with the residual matrix in the message.
 */
class Povm {
  public:
    Povm(int dim, std::vector<Effect> effects) : dim_(dim), effects_(std::move(effects)) {
        if (effects_.empty())
            throw InvariantError("Povm: at least one effect required");
        ComplexMatrix sum(dim_);
        for (const auto &e : effects_) {
            if (e.op.dim() != dim_)
                throw InvariantError("Povm: effect '" + e.label + "' has wrong dimension");
            detail::validate_effect(e);
            sum += Complex(e.weight, 0.0) * e.op;
        }
        const ComplexMatrix residual = sum - ComplexMatrix::identity(dim_);
        if (residual.max_abs() > tol::completeness)
            throw InvariantError("Povm: completeness failure, weighted effects do not sum to the "
                                 "identity; residual\n" +
                                 detail::format_matrix(residual));
    }

    int dim() const { return dim_; }
    const std::vector<Effect> &effects() const { return effects_; }
    int size() const { return static_cast<int>(effects_.size()); }
    const Effect &effect(int mu) const { return effects_.at(mu); }

    bool operator==(const Povm &) const = default;

  private:
    int dim_;
    std::vector<Effect> effects_;
};

/// Real coefficient vectors f with sum_mu f_mu (w_mu A_mu) = 0. Coefficients
/// act on the weighted effects, matching the completeness convention.
struct ConstraintSet {
    std::vector<std::vector<double>> coefficients;

    int count() const { return static_cast<int>(coefficients.size()); }

    bool operator==(const ConstraintSet &) const = default;
};

/// A_m = (1/2)(1 + m.sigma): the rank-1 projector onto the +1 eigenstate of
/// m.sigma. Requires |m| = 1.
inline ComplexMatrix bloch_projector(Vec3 m) {
    if (std::abs(norm(m) - 1.0) > tol::unit_vector)
        throw std::invalid_argument("bloch_projector: |m| must be 1, got " +
                                    std::to_string(norm(m)));
    ComplexMatrix p = pauli_dot(m);
    p += ComplexMatrix::identity(2);
    p *= Complex(0.5, 0.0);
    return p;
}

inline std::string direction_label(Vec3 m) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "m(%+.6f,%+.6f,%+.6f)", m.x, m.y, m.z);
    return buf;
}

/**
 * @brief Qubit POVM of Bloch projectors over a finite direction set.
 *
 * Completeness of the weighted projectors holds analytically whenever the
 * total weight is 2 and the weighted directions balance:
 *   sum w (1/2)(1 + m.sigma) = (sum w / 2) 1 + (1/2)(sum w m).sigma.
 * Both preconditions are enforced here; a set that passes them can only fail
 * the identity check through rounding, which the Povm constructor reports
 * with the residual matrix.
 */
inline Povm sphere_povm(const std::vector<Vec3> &directions, const std::vector<double> &weights) {
    if (directions.size() != weights.size() || directions.empty())
        throw std::invalid_argument("sphere_povm: need matching non-empty directions and weights");
    double total = 0.0;
    Vec3 balance{};
    for (std::size_t i = 0; i < directions.size(); ++i) {
        if (std::abs(norm(directions[i]) - 1.0) > tol::unit_vector)
            throw std::invalid_argument("sphere_povm: direction " + std::to_string(i) +
                                        " is not a unit vector");
        if (!(weights[i] > 0.0))
            throw std::invalid_argument("sphere_povm: weights must be positive");
        total += weights[i];
        balance = balance + weights[i] * directions[i];
    }
    if (std::abs(total - 2.0) > tol::unit_vector)
        throw InvariantError("sphere_povm: total weight must be 2, got " + std::to_string(total));
    if (norm(balance) > tol::unit_vector)
        throw InvariantError("sphere_povm: weighted directions must balance (antipodal), residual |" +
                             std::to_string(balance.x) + ", " + std::to_string(balance.y) + ", " +
                             std::to_string(balance.z) + "|");
    std::vector<Effect> effects;
    effects.reserve(directions.size());
    for (std::size_t i = 0; i < directions.size(); ++i)
        effects.push_back({weights[i], bloch_projector(directions[i]), direction_label(directions[i])});
    return Povm(2, std::move(effects));
}

inline std::vector<Vec3> axis_directions() {
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

inline std::vector<Vec3> cube_directions() {
    const double c = 1.0 / std::sqrt(3.0);
    std::vector<Vec3> dirs;
    for (int sx : {1, -1})
        for (int sy : {1, -1})
            for (int sz : {1, -1})
                dirs.push_back({sx * c, sy * c, sz * c});
    return dirs;
}

/// Six axis directions, weight 1/3 each.
inline Povm axes6_povm() {
    return sphere_povm(axis_directions(), std::vector<double>(6, 1.0 / 3.0));
}

/// Eight cube-diagonal directions, weight 1/4 each.
inline Povm cube8_povm() {
    return sphere_povm(cube_directions(), std::vector<double>(8, 0.25));
}

/// Axis and cube-diagonal directions together, axis weights twice the cube
/// weights (1/5 and 1/10), totalling 2. The mix exercises constraints whose
/// directions sit off the axes.
inline Povm default14_povm() {
    std::vector<Vec3> dirs = axis_directions();
    const auto cube = cube_directions();
    dirs.insert(dirs.end(), cube.begin(), cube.end());
    std::vector<double> w(6, 0.2);
    w.insert(w.end(), 8, 0.1);
    return sphere_povm(dirs, w);
}

/// The ideal sigma_z measurement written as a two-effect POVM.
inline Povm ideal_z_povm() {
    return sphere_povm({{0, 0, 1}, {0, 0, -1}}, {1.0, 1.0});
}

/// Index of the effect whose operator is the Bloch projector along m.
inline std::optional<int> find_direction(const Povm &p, Vec3 m) {
    for (int mu = 0; mu < p.size(); ++mu) {
        if (p.dim() != 2)
            break;
        const Vec3 b = bloch_direction(p.effect(mu).op);
        if (max_component_diff(b, m) <= tol::direction_match &&
            std::abs(std::real(p.effect(mu).op.trace()) - 1.0) <= tol::direction_match)
            return mu;
    }
    return std::nullopt;
}

/**
 * @brief Orthonormal basis of the linear constraints among the weighted
 * effects.
 *
 * Null space of the Gram matrix G[mu][nu] = Re tr((w_mu A_mu)(w_nu A_nu)),
 * cut at eigenvalues below null_space_rel * max eigenvalue. Every returned
 * vector f satisfies sum_mu f_mu w_mu A_mu = 0 entrywise.
 */
inline ConstraintSet discover_constraints(const Povm &p) {
    const int n = p.size();
    ComplexMatrix gram(n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = mu; nu < n; ++nu) {
            const ComplexMatrix prod = p.effect(mu).op * p.effect(nu).op;
            const double g =
                p.effect(mu).weight * p.effect(nu).weight * std::real(prod.trace());
            gram.at(mu, nu) = g;
            gram.at(nu, mu) = g;
        }
    const EigenSystem es = hermitian_eigensystem(gram);
    const double cut = tol::null_space_rel * std::max(std::abs(es.values.back()), 1e-300);
    ConstraintSet set;
    for (int k = 0; k < n; ++k) {
        if (std::abs(es.values[k]) >= cut)
            continue;
        std::vector<double> f(n);
        for (int mu = 0; mu < n; ++mu)
            f[mu] = std::real(es.vectors.at(mu, k));
        set.coefficients.push_back(std::move(f));
    }
    return set;
}

/// Residual matrix of one constraint vector: sum_mu f_mu (w_mu A_mu).
inline ComplexMatrix constraint_residual(const Povm &p, const std::vector<double> &f) {
    if (static_cast<int>(f.size()) != p.size())
        throw std::invalid_argument("constraint_residual: coefficient length mismatch");
    ComplexMatrix sum(p.dim());
    for (int mu = 0; mu < p.size(); ++mu)
        sum += Complex(f[mu] * p.effect(mu).weight, 0.0) * p.effect(mu).op;
    return sum;
}

/**
 * @brief Coefficient vector expressing the expansion of one Bloch projector
 * over the axis projectors and the weighted identity.
 *
 * Every Bloch projector obeys
 *   A_m - sum_i m_i A_{e_i} - (1/2)(1 - sum_i m_i) 1 = 0,
 * and substituting 1 = sum_mu w_mu A_mu turns it into a constraint on the
 * weighted effects. The POVM must contain the direction m and all six signed
 * axis directions is not required — only +e1, +e2, +e3 and m itself.
 */
inline std::vector<double> axis_expansion_constraint(Vec3 m, const Povm &p) {
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto target = find_direction(p, m);
    if (!target)
        throw std::invalid_argument("axis_expansion_constraint: direction " + direction_label(m) +
                                    " missing from POVM");
    int axis_index[3];
    for (int i = 0; i < 3; ++i) {
        const auto idx = find_direction(p, axes[i]);
        if (!idx)
            throw std::invalid_argument("axis_expansion_constraint: axis direction " +
                                        std::to_string(i + 1) + " missing from POVM");
        axis_index[i] = *idx;
    }
    const double mc[3] = {m.x, m.y, m.z};
    std::vector<double> f(p.size(), 0.0);
    f[*target] += 1.0 / p.effect(*target).weight;
    for (int i = 0; i < 3; ++i)
        f[axis_index[i]] -= mc[i] / p.effect(axis_index[i]).weight;
    const double identity_coeff = 0.5 * (1.0 - (m.x + m.y + m.z));
    for (int mu = 0; mu < p.size(); ++mu)
        f[mu] -= identity_coeff;
    return f;
}

} // namespace lhvkit
