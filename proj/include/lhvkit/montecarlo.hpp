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
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lhvkit/density_operator.hpp"
#include "lhvkit/lhv_model.hpp"
#include "lhvkit/povm.hpp"
#include "lhvkit/rng.hpp"
#include "lhvkit/tolerances.hpp"

namespace lhvkit {

/// Joint outcome counts of n measurement rounds on an (A-effect, B-effect)
/// grid.
struct OutcomeRecord {
    std::vector<std::vector<std::int64_t>> counts; // counts[mu][nu]
    std::int64_t n = 0;
    std::uint64_t seed = 0;

    bool operator==(const OutcomeRecord &) const = default;
};

/// Enforces the record's bookkeeping invariant: nonnegative cells summing
/// to n over a rectangular grid.
inline void validate_record(const OutcomeRecord &record) {
    if (record.counts.empty() || record.counts.front().empty())
        throw InvariantError("OutcomeRecord: empty cell grid");
    const std::size_t width = record.counts.front().size();
    std::int64_t total = 0;
    for (const auto &row : record.counts) {
        if (row.size() != width)
            throw InvariantError("OutcomeRecord: ragged cell grid");
        for (const std::int64_t c : row) {
            if (c < 0)
                throw InvariantError("OutcomeRecord: negative count");
            total += c;
        }
    }
    if (total != record.n)
        throw InvariantError("OutcomeRecord: counts sum to " + std::to_string(total) +
                             ", n = " + std::to_string(record.n));
}

/// Exact joint outcome probabilities q(mu, nu) = w_mu v_nu tr(rho A ox B).
/// Completeness of both effect sets makes this a probability distribution;
/// the sum is verified to 1e-12 and sampling-harmless negative rounding tails
/// are clamped to zero.
inline std::vector<std::vector<double>> joint_distribution(const DensityOperator &rho,
                                                           const Povm &pa, const Povm &pb) {
    if (rho.d1() != pa.dim() || rho.d2() != pb.dim())
        throw std::invalid_argument("joint_distribution: dimension mismatch");
    std::vector<std::vector<double>> q(pa.size(), std::vector<double>(pb.size()));
    double total = 0.0;
    for (int mu = 0; mu < pa.size(); ++mu)
        for (int nu = 0; nu < pb.size(); ++nu) {
            double cell = pa.effect(mu).weight * pb.effect(nu).weight *
                          born_correlation(rho, pa.effect(mu), pb.effect(nu));
            if (cell < 0.0) {
                if (cell < -1e-12)
                    throw InvariantError("joint_distribution: negative cell probability " +
                                         std::to_string(cell));
                cell = 0.0;
            }
            q[mu][nu] = cell;
            total += cell;
        }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvariantError("joint_distribution: cell probabilities sum to " +
                             std::to_string(total));
    return q;
}

/// Exact joint cell distribution of an LHV model: q(mu, nu) =
/// sum_lambda p (w_mu E_A)(v_nu E_B). For admissible models this is a
/// probability distribution; the sum is verified like joint_distribution's.
inline std::vector<std::vector<double>> lhv_distribution(const LhvModel &model) {
    const Report admissible = check_admissible(model);
    if (!admissible.ok())
        throw InvariantError("lhv_distribution: model not admissible\n" + admissible.to_string());
    std::vector<std::vector<double>> q(model.povm_a.size(),
                                       std::vector<double>(model.povm_b.size(), 0.0));
    double total = 0.0;
    for (int mu = 0; mu < model.povm_a.size(); ++mu)
        for (int nu = 0; nu < model.povm_b.size(); ++nu) {
            double cell = model.povm_a.effect(mu).weight * model.povm_b.effect(nu).weight *
                          model_correlation(model, mu, nu);
            if (cell < 0.0)
                cell = 0.0; // admissibility bounds the undershoot at rounding size
            q[mu][nu] = cell;
            total += cell;
        }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvariantError("lhv_distribution: cell probabilities sum to " +
                             std::to_string(total));
    return q;
}

namespace detail {

/// Inverse-CDF draw: index of the first cumulative bin exceeding u.
inline int draw_index(const std::vector<double> &cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const int idx = static_cast<int>(it - cumulative.begin());
    return std::min(idx, static_cast<int>(cumulative.size()) - 1);
}

inline std::vector<double> cumulative_sums(const std::vector<double> &probs) {
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    if (!cum.empty())
        cum.back() = std::max(cum.back(), 1.0); // guard the u ~ 1 edge
    return cum;
}

} // namespace detail

/**
 * @brief n Born-rule draws from the joint distribution of rho under two
 * weighted effect sets.
 *
 * Each draw i consumes its own stream derived from (seed, purpose, i), so a
 * sharded implementation merging per-draw results reproduces the
 * single-threaded record exactly.
 */
inline OutcomeRecord sample_quantum(const DensityOperator &rho, const Povm &pa, const Povm &pb,
                                    std::int64_t n, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("sample_quantum: n must be >= 1");
    const auto q = joint_distribution(rho, pa, pb);
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(pa.size()) * pb.size());
    for (const auto &row : q)
        flat.insert(flat.end(), row.begin(), row.end());
    const std::vector<double> cum = detail::cumulative_sums(flat);

    OutcomeRecord record;
    record.counts.assign(pa.size(), std::vector<std::int64_t>(pb.size(), 0));
    record.n = n;
    record.seed = seed;
    for (std::int64_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_stream(seed, "sample-quantum", static_cast<std::uint64_t>(i)));
        const int cell = detail::draw_index(cum, rng.next_double());
        ++record.counts[cell / pb.size()][cell % pb.size()];
    }
    return record;
}

/**
 * @brief n draws from an LHV model, operationally: sample lambda from p,
 * then the two outcomes independently from the per-lambda weighted response
 * distributions.
 *
 * Admissibility is what makes those per-lambda rows probability
 * distributions, so it is checked up front. Per-draw derived streams keep
 * the record shard-independent, as with sample_quantum.
 */
inline OutcomeRecord sample_lhv(const LhvModel &model, std::int64_t n, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("sample_lhv: n must be >= 1");
    const Report admissible = check_admissible(model);
    if (!admissible.ok())
        throw InvariantError("sample_lhv: model not admissible\n" + admissible.to_string());

    const int lambdas = static_cast<int>(model.entries.size());
    std::vector<double> p_lambda(lambdas);
    std::vector<std::vector<double>> cum_a(lambdas), cum_b(lambdas);
    for (int l = 0; l < lambdas; ++l) {
        p_lambda[l] = model.entries[l].p;
        std::vector<double> rows_a(model.povm_a.size()), rows_b(model.povm_b.size());
        for (int mu = 0; mu < model.povm_a.size(); ++mu)
            rows_a[mu] = std::max(0.0, model.povm_a.effect(mu).weight *
                                           model.entries[l].responses_a[mu]);
        for (int nu = 0; nu < model.povm_b.size(); ++nu)
            rows_b[nu] = std::max(0.0, model.povm_b.effect(nu).weight *
                                           model.entries[l].responses_b[nu]);
        cum_a[l] = detail::cumulative_sums(rows_a);
        cum_b[l] = detail::cumulative_sums(rows_b);
    }
    const std::vector<double> cum_lambda = detail::cumulative_sums(p_lambda);

    OutcomeRecord record;
    record.counts.assign(model.povm_a.size(),
                         std::vector<std::int64_t>(model.povm_b.size(), 0));
    record.n = n;
    record.seed = seed;
    for (std::int64_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_stream(seed, "sample-lhv", static_cast<std::uint64_t>(i)));
        const int l = detail::draw_index(cum_lambda, rng.next_double());
        const int mu = detail::draw_index(cum_a[l], rng.next_double());
        const int nu = detail::draw_index(cum_b[l], rng.next_double());
        ++record.counts[mu][nu];
    }
    return record;
}

/// Chi-square goodness-of-fit verdict for an outcome record against an
/// expected cell distribution.
struct ChiSquareReport {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double significance = tol::chi_square_significance;
    bool pass = false;
    int merged_cells = 0;
    // Cell with zero expected probability but nonzero observed count, if any:
    // an immediate failure regardless of the statistic.
    std::optional<std::pair<int, int>> impossible_cell;

    std::string to_string() const {
        std::ostringstream out;
        out << "chi-square " << statistic << ", dof " << dof << ", p " << p_value << " vs "
            << significance << " -> " << (pass ? "pass" : "FAIL");
        if (merged_cells > 0)
            out << " (" << merged_cells << " low-expectation cells merged)";
        if (impossible_cell)
            out << " (observed counts in zero-probability cell (" << impossible_cell->first
                << ", " << impossible_cell->second << "))";
        return out.str();
    }
};

namespace detail {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a):
/// series for P in the x < a+1 regime, continued fraction for Q otherwise.
inline double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0)
        return 1.0;
    constexpr int max_terms = 500;
    constexpr double eps = 1e-14;
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int i = 1; i < max_terms; ++i) {
            term *= x / (a + i);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps)
                break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    constexpr double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_terms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin)
            d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace detail

/**
 * @brief Pearson chi-square test of an outcome record against expected cell
 * probabilities.
 *
 * Cells with expected count below 5 are pooled (the pool folds into the
 * smallest surviving cell if it stays below 5 itself); zero-probability
 * cells fail outright when observed and are dropped otherwise. Significance
 * defaults to 0.003, roughly a three-sigma bar.
 */
inline ChiSquareReport compare_statistics(const OutcomeRecord &record,
                                          const std::vector<std::vector<double>> &expected,
                                          double significance = tol::chi_square_significance) {
    validate_record(record);
    if (record.n < 1)
        throw std::invalid_argument("compare_statistics: record with n = 0 carries no statistics");
    if (expected.size() != record.counts.size())
        throw std::invalid_argument("compare_statistics: cell structure mismatch");
    double total_q = 0.0;
    for (std::size_t mu = 0; mu < expected.size(); ++mu) {
        if (expected[mu].size() != record.counts[mu].size())
            throw std::invalid_argument("compare_statistics: cell structure mismatch");
        for (const double q : expected[mu]) {
            if (q < 0.0)
                throw std::invalid_argument("compare_statistics: negative expected probability");
            total_q += q;
        }
    }
    if (std::abs(total_q - 1.0) > 1e-9)
        throw std::invalid_argument("compare_statistics: expected probabilities sum to " +
                                    std::to_string(total_q));

    ChiSquareReport report;
    report.significance = significance;

    const double n = static_cast<double>(record.n);
    std::vector<std::pair<double, double>> cells; // (expected count, observed count)
    double pool_expected = 0.0;
    double pool_observed = 0.0;
    int pooled = 0;
    for (std::size_t mu = 0; mu < expected.size(); ++mu)
        for (std::size_t nu = 0; nu < expected[mu].size(); ++nu) {
            const double e = expected[mu][nu] * n;
            const double o = static_cast<double>(record.counts[mu][nu]);
            if (expected[mu][nu] == 0.0) {
                if (o > 0.0 && !report.impossible_cell)
                    report.impossible_cell = {static_cast<int>(mu), static_cast<int>(nu)};
                continue;
            }
            if (e < 5.0) {
                pool_expected += e;
                pool_observed += o;
                ++pooled;
            } else {
                cells.emplace_back(e, o);
            }
        }
    if (pooled > 0) {
        report.merged_cells = pooled;
        if (pool_expected >= 5.0 || cells.empty()) {
            cells.emplace_back(pool_expected, pool_observed);
        } else {
            auto smallest = std::min_element(cells.begin(), cells.end());
            smallest->first += pool_expected;
            smallest->second += pool_observed;
        }
    }

    if (report.impossible_cell) {
        report.statistic = std::numeric_limits<double>::infinity();
        report.p_value = 0.0;
        report.pass = false;
        return report;
    }

    for (const auto &[e, o] : cells)
        report.statistic += (o - e) * (o - e) / e;
    report.dof = static_cast<int>(cells.size()) - 1;
    if (report.dof < 1) {
        // A single aggregated cell has no testable structure left.
        report.p_value = 1.0;
        report.pass = true;
        return report;
    }
    report.p_value = detail::regularized_gamma_q(report.dof / 2.0, report.statistic / 2.0);
    report.pass = report.p_value >= significance;
    return report;
}

/**
 * @brief Two-sample chi-square homogeneity test: were the two records drawn
 * from the same (unknown) cell distribution?
 *
 * Pooled expectations E_a = (a + b) n_a / (n_a + n_b) per cell, statistic
 * summed over both samples, dof = cells - 1. Cells whose pooled expectation
 * under the smaller sample is below 5 are pooled, as in the one-sample
 * test.
 */
inline ChiSquareReport compare_statistics(const OutcomeRecord &a, const OutcomeRecord &b,
                                          double significance = tol::chi_square_significance) {
    validate_record(a);
    validate_record(b);
    if (a.n < 1 || b.n < 1)
        throw std::invalid_argument("compare_statistics: record with n = 0 carries no statistics");
    if (a.counts.size() != b.counts.size())
        throw std::invalid_argument("compare_statistics: cell structure mismatch");
    for (std::size_t mu = 0; mu < a.counts.size(); ++mu)
        if (a.counts[mu].size() != b.counts[mu].size())
            throw std::invalid_argument("compare_statistics: cell structure mismatch");

    ChiSquareReport report;
    report.significance = significance;
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double fa = na / (na + nb);
    const double fb = nb / (na + nb);
    const double fmin = std::min(fa, fb);

    struct Cell {
        double pooled, oa, ob;
        bool operator<(const Cell &other) const { return pooled < other.pooled; }
    };
    std::vector<Cell> cells;
    Cell pool{0.0, 0.0, 0.0};
    int pooled_count = 0;
    for (std::size_t mu = 0; mu < a.counts.size(); ++mu)
        for (std::size_t nu = 0; nu < a.counts[mu].size(); ++nu) {
            const Cell cell{static_cast<double>(a.counts[mu][nu] + b.counts[mu][nu]),
                            static_cast<double>(a.counts[mu][nu]),
                            static_cast<double>(b.counts[mu][nu])};
            if (cell.pooled == 0.0)
                continue; // empty in both samples: no information
            if (cell.pooled * fmin < 5.0) {
                pool.pooled += cell.pooled;
                pool.oa += cell.oa;
                pool.ob += cell.ob;
                ++pooled_count;
            } else {
                cells.push_back(cell);
            }
        }
    if (pooled_count > 0) {
        report.merged_cells = pooled_count;
        if (pool.pooled * fmin >= 5.0 || cells.empty()) {
            cells.push_back(pool);
        } else {
            auto smallest = std::min_element(cells.begin(), cells.end());
            smallest->pooled += pool.pooled;
            smallest->oa += pool.oa;
            smallest->ob += pool.ob;
        }
    }

    for (const auto &cell : cells) {
        const double ea = cell.pooled * fa;
        const double eb = cell.pooled * fb;
        report.statistic += (cell.oa - ea) * (cell.oa - ea) / ea;
        report.statistic += (cell.ob - eb) * (cell.ob - eb) / eb;
    }
    report.dof = static_cast<int>(cells.size()) - 1;
    if (report.dof < 1) {
        report.p_value = 1.0;
        report.pass = true;
        return report;
    }
    report.p_value = detail::regularized_gamma_q(report.dof / 2.0, report.statistic / 2.0);
    report.pass = report.p_value >= significance;
    return report;
}

} // namespace lhvkit
