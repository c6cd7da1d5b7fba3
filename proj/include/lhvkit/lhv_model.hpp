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
#include <string>
#include <utility>
#include <vector>

#include "lhvkit/density_operator.hpp"
#include "lhvkit/povm.hpp"
#include "lhvkit/tolerances.hpp"

namespace lhvkit {

/// One hidden-variable value: its probability mass and the conditional
/// response tables for the two POVMs. responses_a[mu] is the conditional
/// expectation of the bare effect operator A_mu given this lambda.
struct LambdaEntry {
    double p = 0.0;
    std::vector<double> responses_a;
    std::vector<double> responses_b;

    bool operator==(const LambdaEntry &) const = default;
};

/// Finite local-hidden-variable model over a pair of POVMs.
struct LhvModel {
    Povm povm_a;
    Povm povm_b;
    std::vector<LambdaEntry> entries;

    bool operator==(const LhvModel &) const = default;
};

/// One admissibility or consistency violation. Violations are data, never
/// exceptions: callers display all of them at once.
struct Violation {
    std::string kind;   // "probability", "probability-sum", "range", "normalization",
                        // "consistency", "born-extension"
    char side = '-';    // 'A', 'B', or '-' when not side-specific
    int lambda = -1;    // hidden-variable index, -1 when global
    int index = -1;     // effect or constraint index, -1 when global
    double value = 0.0;
    double bound = 0.0;

    std::string to_string() const {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s side=%c lambda=%d index=%d value=%.12g bound=%.12g",
                      kind.c_str(), side, lambda, index, value, bound);
        return buf;
    }
};

struct Report {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    std::string to_string() const {
        if (ok())
            return "no violations\n";
        std::string s;
        for (const auto &v : violations) {
            s += v.to_string();
            s += '\n';
        }
        return s;
    }
};

/// Born-rule correlation tr(rho A ox B) of two bare effect operators.
/// Weights are excluded; they belong to outcome probabilities, not to the
/// operator expectation.
inline double born_correlation(const DensityOperator &rho, const Effect &eff_a,
                               const Effect &eff_b) {
    if (eff_a.op.dim() != rho.d1() || eff_b.op.dim() != rho.d2())
        throw InvariantError("born_correlation: effect dimensions do not match the state");
    const ComplexMatrix ab = tensor(eff_a.op, eff_b.op);
    Complex t = 0.0;
    const int n = rho.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t += rho.matrix().at(i, j) * ab.at(j, i);
    if (std::abs(std::imag(t)) > tol::hermitian)
        throw InvariantError("born_correlation: expectation has imaginary residual " +
                             std::to_string(std::imag(t)));
    return std::real(t);
}

/// Model-predicted correlation sum_lambda p E_A(mu) E_B(nu).
inline double model_correlation(const LhvModel &model, int mu, int nu) {
    if (mu < 0 || mu >= model.povm_a.size() || nu < 0 || nu >= model.povm_b.size())
        throw std::out_of_range("model_correlation: effect index out of range");
    double s = 0.0;
    for (const auto &e : model.entries)
        s += e.p * e.responses_a[mu] * e.responses_b[nu];
    return s;
}

namespace detail {

inline std::vector<double> effect_norms(const Povm &p) {
    std::vector<double> norms;
    norms.reserve(p.size());
    for (const auto &e : p.effects())
        norms.push_back(operator_norm(e.op));
    return norms;
}

inline void check_side_admissible(const std::vector<double> &responses, const Povm &povm,
                                  const std::vector<double> &norms, char side, int lambda,
                                  Report &report) {
    for (int mu = 0; mu < povm.size(); ++mu) {
        const double r = responses[mu];
        if (r < -tol::response_range)
            report.violations.push_back({"range", side, lambda, mu, r, 0.0});
        if (r > norms[mu] + tol::response_range)
            report.violations.push_back({"range", side, lambda, mu, r, norms[mu]});
    }
    double weighted = 0.0;
    for (int mu = 0; mu < povm.size(); ++mu)
        weighted += povm.effect(mu).weight * responses[mu];
    if (std::abs(weighted - 1.0) > tol::response_normalization)
        report.violations.push_back({"normalization", side, lambda, -1, weighted, 1.0});
}

} // namespace detail

/**
 * @brief Range, normalization and probability-simplex checks.
 *
 * Per lambda: 0 <= E(A_mu) <= ||A_mu|| and sum_mu w_mu E(A_mu) = 1, both
 * sides; globally: p_lambda >= 0 and sum p_lambda = 1. Violations are
 * collected, not thrown. Empty report iff the model is admissible.
 */
inline Report check_admissible(const LhvModel &model) {
    Report report;
    const auto norms_a = detail::effect_norms(model.povm_a);
    const auto norms_b = detail::effect_norms(model.povm_b);
    double total_p = 0.0;
    for (int l = 0; l < static_cast<int>(model.entries.size()); ++l) {
        const auto &e = model.entries[l];
        if (e.p < 0.0)
            report.violations.push_back({"probability", '-', l, -1, e.p, 0.0});
        total_p += e.p;
        if (static_cast<int>(e.responses_a.size()) != model.povm_a.size() ||
            static_cast<int>(e.responses_b.size()) != model.povm_b.size())
            throw InvariantError("check_admissible: response table length mismatch at lambda " +
                                 std::to_string(l));
        detail::check_side_admissible(e.responses_a, model.povm_a, norms_a, 'A', l, report);
        detail::check_side_admissible(e.responses_b, model.povm_b, norms_b, 'B', l, report);
    }
    if (std::abs(total_p - 1.0) > tol::probability_sum)
        report.violations.push_back({"probability-sum", '-', -1, -1, total_p, 1.0});
    return report;
}

/**
 * @brief Per-lambda consistency with the operator constraints.
 *
 * For every lambda and every constraint vector f over the weighted effects,
 * |sum_mu f_mu w_mu E(A_mu|lambda)| must stay below the consistency
 * tolerance; same on the B side. The tolerance is looser than the algebraic
 * ones because the constraint vectors come out of an eigensolver.
 */
inline Report check_consistency(const LhvModel &model, const ConstraintSet &constraints_a,
                                const ConstraintSet &constraints_b) {
    for (const auto &f : constraints_a.coefficients)
        if (static_cast<int>(f.size()) != model.povm_a.size())
            throw std::invalid_argument("check_consistency: constraint length mismatch (side A)");
    for (const auto &g : constraints_b.coefficients)
        if (static_cast<int>(g.size()) != model.povm_b.size())
            throw std::invalid_argument("check_consistency: constraint length mismatch (side B)");
    Report report;
    for (int l = 0; l < static_cast<int>(model.entries.size()); ++l) {
        const auto &e = model.entries[l];
        for (int k = 0; k < constraints_a.count(); ++k) {
            double r = 0.0;
            for (int mu = 0; mu < model.povm_a.size(); ++mu)
                r += constraints_a.coefficients[k][mu] * model.povm_a.effect(mu).weight *
                     e.responses_a[mu];
            if (std::abs(r) > tol::consistency)
                report.violations.push_back({"consistency", 'A', l, k, r, tol::consistency});
        }
        for (int k = 0; k < constraints_b.count(); ++k) {
            double r = 0.0;
            for (int nu = 0; nu < model.povm_b.size(); ++nu)
                r += constraints_b.coefficients[k][nu] * model.povm_b.effect(nu).weight *
                     e.responses_b[nu];
            if (std::abs(r) > tol::consistency)
                report.violations.push_back({"consistency", 'B', l, k, r, tol::consistency});
        }
    }
    return report;
}

} // namespace lhvkit
