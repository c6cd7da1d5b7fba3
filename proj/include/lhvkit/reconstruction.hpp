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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lhvkit/density_operator.hpp"
#include "lhvkit/eigen.hpp"
#include "lhvkit/lhv_model.hpp"
#include "lhvkit/povm.hpp"
#include "lhvkit/tolerances.hpp"

namespace lhvkit {

/// Weighted list of product states: the separable-decomposition object.
class ProductEnsemble {
  public:
    struct Term {
        double p;
        DensityOperator rho1;
        DensityOperator rho2;

        bool operator==(const Term &) const = default;
    };

    explicit ProductEnsemble(std::vector<Term> terms) : terms_(std::move(terms)) {
        if (terms_.empty())
            throw InvariantError("ProductEnsemble: at least one term required");
        double total = 0.0;
        for (const auto &t : terms_) {
            if (t.p < 0.0)
                throw InvariantError("ProductEnsemble: negative probability " +
                                     std::to_string(t.p));
            total += t.p;
            if (t.rho1.d1() != terms_.front().rho1.d1() || t.rho2.d1() != terms_.front().rho2.d1())
                throw InvariantError("ProductEnsemble: mixed subsystem dimensions");
        }
        if (std::abs(total - 1.0) > tol::probability_sum)
            throw InvariantError("ProductEnsemble: probabilities sum to " + std::to_string(total));
    }

    const std::vector<Term> &terms() const { return terms_; }
    int size() const { return static_cast<int>(terms_.size()); }
    int d1() const { return terms_.front().rho1.dim(); }
    int d2() const { return terms_.front().rho2.dim(); }

    bool operator==(const ProductEnsemble &) const = default;

  private:
    std::vector<Term> terms_;
};

/// Polarization (Bloch) vector of a response table: s_i = 2 E(A_{e_i}) - 1.
/// No positivity enforcement here; |s| <= 1 is checked where the conditional
/// density operator is built.
inline Vec3 polarization_vector(const std::vector<double> &responses, const Povm &p) {
    if (p.dim() != 2)
        throw std::invalid_argument("polarization_vector: qubit POVM required");
    if (static_cast<int>(responses.size()) != p.size())
        throw std::invalid_argument("polarization_vector: response length mismatch");
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double s[3];
    for (int i = 0; i < 3; ++i) {
        const auto idx = find_direction(p, axes[i]);
        if (!idx)
            throw std::invalid_argument("polarization_vector: POVM lacks axis direction " +
                                        std::to_string(i + 1));
        s[i] = 2.0 * responses[*idx] - 1.0;
    }
    return {s[0], s[1], s[2]};
}

/// Conditional density operator of a polarization vector: (1/2)(1 + s.sigma).
/// Fails when |s| > 1 + tolerance, reporting |s|.
inline DensityOperator conditional_density_qubit(Vec3 s) {
    const double ns = norm(s);
    if (ns > 1.0 + tol::polarization_norm)
        throw InvariantError("conditional_density_qubit: |s| = " + std::to_string(ns) +
                             " exceeds 1, no non-negative operator exists");
    ComplexMatrix m = pauli_dot(s);
    m += ComplexMatrix::identity(2);
    m *= Complex(0.5, 0.0);
    return {std::move(m), 2, 1};
}

/// Deviations |E(A_mu) - tr(A_mu rho_lambda)| above the Born-extension
/// tolerance, per effect. Empty report means the conditional state explains
/// every response.
inline Report verify_born_extension(const DensityOperator &rho_lambda,
                                    const std::vector<double> &responses, const Povm &p) {
    if (rho_lambda.dim() != p.dim())
        throw std::invalid_argument("verify_born_extension: dimension mismatch");
    if (static_cast<int>(responses.size()) != p.size())
        throw std::invalid_argument("verify_born_extension: response length mismatch");
    Report report;
    for (int mu = 0; mu < p.size(); ++mu) {
        const ComplexMatrix prod = p.effect(mu).op * rho_lambda.matrix();
        const double predicted = std::real(prod.trace());
        const double dev = std::abs(responses[mu] - predicted);
        if (dev > tol::born_extension)
            report.violations.push_back({"born-extension", '-', -1, mu, dev, tol::born_extension});
    }
    return report;
}

/**
 * @brief Turn an admissible, consistent model into a product ensemble.
 *
 * Runs the admissibility and consistency checks, then builds per-lambda
 * conditional density operators from the polarization vectors on both sides.
 * A polarization norm above 1 can only come from responses that no quantum
 * state reproduces, so the failure is reported as inconsistent input naming
 * the offending lambda.
 */
inline ProductEnsemble extract_ensemble(const LhvModel &model) {
    const Report adm = check_admissible(model);
    if (!adm.ok())
        throw InvariantError("extract_ensemble: model not admissible\n" + adm.to_string());
    const ConstraintSet ca = discover_constraints(model.povm_a);
    const ConstraintSet cb = discover_constraints(model.povm_b);
    const Report cons = check_consistency(model, ca, cb);
    if (!cons.ok())
        throw InvariantError("extract_ensemble: model not consistent\n" + cons.to_string());

    std::vector<ProductEnsemble::Term> terms;
    terms.reserve(model.entries.size());
    for (int l = 0; l < static_cast<int>(model.entries.size()); ++l) {
        const auto &e = model.entries[l];
        const Vec3 sa = polarization_vector(e.responses_a, model.povm_a);
        const Vec3 sb = polarization_vector(e.responses_b, model.povm_b);
        for (const auto &[side, s] : {std::pair<char, Vec3>{'A', sa}, {'B', sb}})
            if (norm(s) > 1.0 + tol::polarization_norm)
                throw InvariantError("extract_ensemble: input model not consistent, lambda " +
                                     std::to_string(l) + " side " + side + " has |s| = " +
                                     std::to_string(norm(s)));
        terms.push_back({e.p, conditional_density_qubit(sa), conditional_density_qubit(sb)});
    }
    return ProductEnsemble(std::move(terms));
}

/// sum_lambda p rho1 ox rho2. The result satisfies the density-operator
/// invariants by construction.
inline DensityOperator assemble_mixture(const ProductEnsemble &e) {
    ComplexMatrix sum(e.d1() * e.d2());
    for (const auto &t : e.terms())
        sum += Complex(t.p, 0.0) * tensor(t.rho1.matrix(), t.rho2.matrix());
    return {std::move(sum), e.d1(), e.d2()};
}

namespace detail {

// 4x4 inverse of a symmetric positive matrix through its eigensystem; throws
// when the relative spread marks the direction set as non-spanning.
inline ComplexMatrix spd_inverse(const ComplexMatrix &g, const char *who) {
    const EigenSystem es = hermitian_eigensystem(g);
    if (es.values.front() <= tol::null_space_rel * es.values.back())
        throw InvariantError(std::string(who) + ": direction set does not span, system underdetermined");
    const int n = g.dim();
    ComplexMatrix inv(n);
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                inv.at(r, c) += es.vectors.at(r, k) * std::conj(es.vectors.at(c, k)) /
                                es.values[k];
    return inv;
}

inline ComplexMatrix pauli_by_index(int k) {
    switch (k) {
    case 0:
        return ComplexMatrix::identity(2);
    case 1:
        return pauli_x();
    case 2:
        return pauli_y();
    default:
        return pauli_z();
    }
}

} // namespace detail

/**
 * @brief Linear inversion of product-projector correlations.
 *
 * Samples corr on every pair from the two direction lists, solves for the
 * Pauli-product components T_kl with tr(rho A_m ox B_n) = (1/4) mt.T.nt
 * (mt = (1, m)), and rebuilds rho = (1/4) sum T_kl sigma_k ox sigma_l. The
 * augmented direction vectors must span R^4 on each side. Residuals above
 * the tomography tolerance mean the correlations are not Born values of any
 * state and are rejected.
 */
inline DensityOperator
tomographic_state_from_correlations(const std::vector<Vec3> &dirs_a, const std::vector<Vec3> &dirs_b,
                                    const std::function<double(Vec3, Vec3)> &corr) {
    const int na = static_cast<int>(dirs_a.size());
    const int nb = static_cast<int>(dirs_b.size());
    if (na < 4 || nb < 4)
        throw InvariantError("tomographic_state_from_correlations: need at least 4 directions per "
                             "side, system underdetermined");

    const auto augmented = [](Vec3 m) { return std::array<double, 4>{1.0, m.x, m.y, m.z}; };

    std::vector<std::array<double, 4>> ma(na), mb(nb);
    for (int i = 0; i < na; ++i)
        ma[i] = augmented(dirs_a[i]);
    for (int j = 0; j < nb; ++j)
        mb[j] = augmented(dirs_b[j]);

    std::vector<std::vector<double>> c(na, std::vector<double>(nb));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            c[i][j] = corr(dirs_a[i], dirs_b[j]);

    const auto gram = [](const std::vector<std::array<double, 4>> &rows) {
        ComplexMatrix g(4);
        for (const auto &r : rows)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    g.at(k, l) += r[k] * r[l];
        return g;
    };
    const ComplexMatrix ga_inv =
        detail::spd_inverse(gram(ma), "tomographic_state_from_correlations (side A)");
    const ComplexMatrix gb_inv =
        detail::spd_inverse(gram(mb), "tomographic_state_from_correlations (side B)");

    // T = 4 Ga^-1 Ma^T C Mb Gb^-1
    double mac[4][4] = {};  // Ma^T C Mb
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    mac[k][l] += ma[i][k] * c[i][j] * mb[j][l];
    double t[4][4] = {};
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            double v = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    v += std::real(ga_inv.at(k, a)) * mac[a][b] * std::real(gb_inv.at(b, l));
            t[k][l] = 4.0 * v;
        }

    ComplexMatrix rho(4);
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            if (t[k][l] == 0.0)
                continue;
            ComplexMatrix term = tensor(detail::pauli_by_index(k), detail::pauli_by_index(l));
            term *= Complex(0.25 * t[k][l], 0.0);
            rho += term;
        }

    DensityOperator state(std::move(rho), 2, 2);
    double worst = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const Effect ea{1.0, bloch_projector(dirs_a[i]), ""};
            const Effect eb{1.0, bloch_projector(dirs_b[j]), ""};
            worst = std::max(worst, std::abs(c[i][j] - born_correlation(state, ea, eb)));
        }
    if (worst > tol::tomography_residual)
        throw InvariantError("tomographic_state_from_correlations: correlations are inconsistent, "
                             "residual " +
                             std::to_string(worst));
    return state;
}

/**
 * @brief Frame of rank-1 projectors plus the rank-2 sums of orthogonal
 * pairs, for reconstruction from projector responses at dim >= 3.
 *
 * rank2[k] must equal rank1[i] + rank1[j] for its index pair (i, j); both
 * idempotency and the pair identity are validated.
 */
class ProjectorFrame {
  public:
    ProjectorFrame(int dim, std::vector<ComplexMatrix> rank1, std::vector<ComplexMatrix> rank2,
                   std::vector<std::pair<int, int>> rank2_pairs)
        : dim_(dim), rank1_(std::move(rank1)), rank2_(std::move(rank2)),
          rank2_pairs_(std::move(rank2_pairs)) {
        if (dim_ < 3)
            throw InvariantError("ProjectorFrame: dim must be >= 3");
        if (rank2_.size() != rank2_pairs_.size())
            throw InvariantError("ProjectorFrame: rank-2 pair list length mismatch");
        for (const auto &p : rank1_)
            validate_projector(p);
        for (std::size_t k = 0; k < rank2_.size(); ++k) {
            validate_projector(rank2_[k]);
            const auto [i, j] = rank2_pairs_[k];
            if (i < 0 || j < 0 || i >= static_cast<int>(rank1_.size()) ||
                j >= static_cast<int>(rank1_.size()) || i == j)
                throw InvariantError("ProjectorFrame: bad rank-2 index pair");
            if (max_abs_diff(rank2_[k], rank1_[i] + rank1_[j]) > tol::hermitian)
                throw InvariantError("ProjectorFrame: rank-2 projector " + std::to_string(k) +
                                     " differs from the sum of its rank-1 constituents");
        }
    }

    int dim() const { return dim_; }
    const std::vector<ComplexMatrix> &rank1() const { return rank1_; }
    const std::vector<ComplexMatrix> &rank2() const { return rank2_; }
    const std::vector<std::pair<int, int>> &rank2_pairs() const { return rank2_pairs_; }

    bool operator==(const ProjectorFrame &) const = default;

  private:
    void validate_projector(const ComplexMatrix &p) const {
        if (p.dim() != dim_)
            throw InvariantError("ProjectorFrame: projector dimension mismatch");
        if (!p.is_hermitian(tol::hermitian))
            throw InvariantError("ProjectorFrame: projector not Hermitian");
        if (max_abs_diff(p * p, p) > tol::hermitian)
            throw InvariantError("ProjectorFrame: projector not idempotent");
    }

    int dim_;
    std::vector<ComplexMatrix> rank1_;
    std::vector<ComplexMatrix> rank2_;
    std::vector<std::pair<int, int>> rank2_pairs_;
};

/// Responses over a frame, rank-1 entries then rank-2 entries.
struct FrameResponses {
    std::vector<double> rank1;
    std::vector<double> rank2;

    bool operator==(const FrameResponses &) const = default;
};

/// Mutually unbiased bases of dimension 3 (up to four of them): the
/// computational basis, the Fourier basis, and the two quadratic-phase
/// bases with components omega^(a j^2 + k j) / sqrt(3).
inline std::vector<std::vector<std::vector<Complex>>> mub_bases_dim3(int n_bases) {
    if (n_bases < 1 || n_bases > 4)
        throw std::invalid_argument("mub_bases_dim3: n_bases must be 1..4");
    const double inv = 1.0 / std::sqrt(3.0);
    const auto omega_pow = [](int e) {
        const double arg = 2.0 * 3.14159265358979323846 * (((e % 3) + 3) % 3) / 3.0;
        return Complex(std::cos(arg), std::sin(arg));
    };
    std::vector<std::vector<std::vector<Complex>>> bases;
    std::vector<std::vector<Complex>> computational(3, std::vector<Complex>(3, 0.0));
    for (int k = 0; k < 3; ++k)
        computational[k][k] = 1.0;
    bases.push_back(computational);
    for (int a = 0; a < 3 && static_cast<int>(bases.size()) < n_bases; ++a) {
        std::vector<std::vector<Complex>> basis(3, std::vector<Complex>(3));
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                basis[k][j] = inv * omega_pow(a * j * j + k * j);
        bases.push_back(basis);
    }
    return bases;
}

/// Frame from n_bases mutually unbiased bases at dim 3, with every
/// within-basis orthogonal pair contributing its rank-2 projector. Four
/// bases (the default) make the rank-1 set informationally complete; three
/// do not — their projectors span only 7 of the 9 Hermitian dimensions.
inline ProjectorFrame mub_frame_dim3(int n_bases = 4) {
    const auto bases = mub_bases_dim3(n_bases);
    std::vector<ComplexMatrix> rank1;
    std::vector<ComplexMatrix> rank2;
    std::vector<std::pair<int, int>> pairs;
    for (const auto &basis : bases) {
        const int base_index = static_cast<int>(rank1.size());
        for (const auto &v : basis) {
            ComplexMatrix p(3);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    p.at(r, c) = v[r] * std::conj(v[c]);
            rank1.push_back(std::move(p));
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                rank2.push_back(rank1[base_index + i] + rank1[base_index + j]);
                pairs.emplace_back(base_index + i, base_index + j);
            }
    }
    return {3, std::move(rank1), std::move(rank2), std::move(pairs)};
}

/// Exact frame responses of a state: tr(P rho) for every frame element.
inline FrameResponses frame_responses(const ProjectorFrame &frame, const ComplexMatrix &rho) {
    FrameResponses r;
    const auto expectation = [&rho](const ComplexMatrix &p) {
        return std::real((p * rho).trace());
    };
    for (const auto &p : frame.rank1())
        r.rank1.push_back(expectation(p));
    for (const auto &p : frame.rank2())
        r.rank2.push_back(expectation(p));
    return r;
}

/// Result of a Gleason-style least-squares reconstruction. Positivity is
/// diagnosed, never enforced: exactly additive responses of a state come out
/// positive on their own, noisy inputs deserve the honest minimum.
struct GleasonFit {
    ComplexMatrix rho{1};
    double residual = 0.0;
    double min_eigenvalue = 0.0;
    bool positive = false;

    DensityOperator state(int d1, int d2) const { return {rho, d1, d2}; }
};

namespace detail {

/// Generalized Gell-Mann basis of traceless Hermitian matrices, dim^2 - 1
/// elements with tr(G_a G_b) = 2 delta_ab.
inline std::vector<ComplexMatrix> gell_mann_basis(int dim) {
    std::vector<ComplexMatrix> basis;
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
            ComplexMatrix sym(dim);
            sym.at(j, k) = 1.0;
            sym.at(k, j) = 1.0;
            basis.push_back(std::move(sym));
            ComplexMatrix asym(dim);
            asym.at(j, k) = Complex(0.0, -1.0);
            asym.at(k, j) = Complex(0.0, 1.0);
            basis.push_back(std::move(asym));
        }
    for (int l = 1; l < dim; ++l) {
        ComplexMatrix diag(dim);
        const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j)
            diag.at(j, j) = scale;
        diag.at(l, l) = -l * scale;
        basis.push_back(std::move(diag));
    }
    return basis;
}

} // namespace detail

/**
 * @brief Least-squares density operator from frame responses.
 *
 * First enforces the additivity identities E(P_i) + E(P_j) = E(P_ij) for
 * every listed orthogonal pair; a violation is rejected with the residual of
 * every offending pair. The fit itself parametrizes the unit-trace Hermitian
 * unknown in the traceless Gell-Mann basis and solves the normal equations;
 * a frame whose projectors do not span the Hermitian space is rejected as
 * underdetermined.
 */
inline GleasonFit gleason_fit(const ProjectorFrame &frame, const FrameResponses &responses) {
    const int n1 = static_cast<int>(frame.rank1().size());
    const int n2 = static_cast<int>(frame.rank2().size());
    if (static_cast<int>(responses.rank1.size()) != n1 ||
        static_cast<int>(responses.rank2.size()) != n2)
        throw std::invalid_argument("gleason_fit: response length mismatch");

    std::string additivity_failures;
    for (int k = 0; k < n2; ++k) {
        const auto [i, j] = frame.rank2_pairs()[k];
        const double res =
            std::abs(responses.rank1[i] + responses.rank1[j] - responses.rank2[k]);
        if (res > tol::additivity)
            additivity_failures += "  pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                   ") -> rank2 " + std::to_string(k) + ": residual " +
                                   std::to_string(res) + "\n";
    }
    if (!additivity_failures.empty())
        throw InvariantError("gleason_fit: additivity violated\n" + additivity_failures);

    const int dim = frame.dim();
    const auto basis = detail::gell_mann_basis(dim);
    const int nb = static_cast<int>(basis.size());
    const int rows = n1 + n2;

    std::vector<ComplexMatrix> elements;
    elements.reserve(rows);
    for (const auto &p : frame.rank1())
        elements.push_back(p);
    for (const auto &p : frame.rank2())
        elements.push_back(p);
    std::vector<double> rhs_full(rows);
    for (int i = 0; i < n1; ++i)
        rhs_full[i] = responses.rank1[i] - std::real(elements[i].trace()) / dim;
    for (int k = 0; k < n2; ++k)
        rhs_full[n1 + k] = responses.rank2[k] - std::real(elements[n1 + k].trace()) / dim;

    std::vector<std::vector<double>> design(rows, std::vector<double>(nb));
    for (int i = 0; i < rows; ++i)
        for (int a = 0; a < nb; ++a)
            design[i][a] = std::real((elements[i] * basis[a]).trace());

    ComplexMatrix gram(nb);
    std::vector<Complex> rhs(nb, 0.0);
    for (int a = 0; a < nb; ++a) {
        for (int b = 0; b < nb; ++b) {
            double g = 0.0;
            for (int i = 0; i < rows; ++i)
                g += design[i][a] * design[i][b];
            gram.at(a, b) = g;
        }
        double r = 0.0;
        for (int i = 0; i < rows; ++i)
            r += design[i][a] * rhs_full[i];
        rhs[a] = r;
    }

    const EigenSystem es = hermitian_eigensystem(gram);
    if (es.values.front() <= tol::null_space_rel * std::max(es.values.back(), 1e-300))
        throw InvariantError("gleason_fit: frame is not informationally complete, fit "
                             "underdetermined");
    const std::vector<Complex> coeffs = pinv_solve(gram, rhs);

    ComplexMatrix rho = ComplexMatrix::identity(dim);
    rho *= Complex(1.0 / dim, 0.0);
    for (int a = 0; a < nb; ++a) {
        ComplexMatrix term = basis[a];
        term *= Complex(std::real(coeffs[a]), 0.0);
        rho += term;
    }

    GleasonFit fit;
    fit.min_eigenvalue = hermitian_eigenvalues(rho).front();
    fit.positive = fit.min_eigenvalue >= -tol::positivity;
    double ss = 0.0;
    for (int i = 0; i < rows; ++i) {
        const double predicted = std::real((elements[i] * rho).trace());
        const double observed = (i < n1) ? responses.rank1[i] : responses.rank2[i - n1];
        ss += (observed - predicted) * (observed - predicted);
    }
    fit.residual = std::sqrt(ss);
    fit.rho = std::move(rho);
    return fit;
}

} // namespace lhvkit
