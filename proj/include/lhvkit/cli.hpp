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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lhvkit/fixtures.hpp"
#include "lhvkit/io.hpp"
#include "lhvkit/montecarlo.hpp"
#include "lhvkit/reconstruction.hpp"
#include "lhvkit/separability.hpp"

namespace lhvkit {

namespace cli_detail {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_invariant_violation = 2;
inline constexpr int exit_undetermined = 3;

inline void emit(const io::Document &doc, const std::optional<std::string> &out,
                 std::ostream &stdout_stream) {
    if (out)
        io::store_document(*out, doc);
    else
        stdout_stream << io::serialize_document(doc);
}

inline Povm named_povm(const std::string &name) {
    if (name == "axes6")
        return axes6_povm();
    if (name == "cube8")
        return cube8_povm();
    if (name == "default14")
        return default14_povm();
    if (name == "ideal-z")
        return ideal_z_povm();
    throw ParseError("unknown POVM fixture '" + name + "'");
}

} // namespace cli_detail

/**
 * @brief Full command-line surface; returns the process exit code.
 *
 * Exit codes: 0 success, 1 input or parse error, 2 invariant violation
 * (including failed checks and comparisons), 3 Undetermined verdict.
 * Streams are injectable for in-process testing.
 */
inline int run_cli(const std::vector<std::string> &args, std::ostream &out_stream = std::cout,
                   std::ostream &err_stream = std::cerr) {
    using cli_detail::emit;
    using cli_detail::exit_input_error;
    using cli_detail::exit_invariant_violation;
    using cli_detail::exit_ok;
    using cli_detail::exit_undetermined;

    CLI::App app{"Local-hidden-variable models, separability, and measurement statistics "
                 "for bipartite states"};
    app.require_subcommand(1);

    // ---- gen ----
    auto *gen = app.add_subcommand("gen", "Generate fixture documents");
    gen->require_subcommand(1);

    std::string state_fixture;
    double werner_p = 0.5;
    std::uint64_t gen_seed = 1;
    int gen_d1 = 2, gen_d2 = 2;
    std::string state_out;
    auto *gen_state = gen->add_subcommand("state", "Generate a state document");
    gen_state->add_option("fixture", state_fixture, "maximally-mixed | singlet | werner | random")
        ->required();
    gen_state->add_option("--p", werner_p, "Werner mixing parameter");
    gen_state->add_option("--seed", gen_seed, "random fixture seed");
    gen_state->add_option("--d1", gen_d1, "first subsystem dimension");
    gen_state->add_option("--d2", gen_d2, "second subsystem dimension");
    gen_state->add_option("--out", state_out, "output file (stdout when omitted)");

    std::string povm_name;
    std::string povm_out;
    auto *gen_povm = gen->add_subcommand("povm", "Generate a POVM document");
    gen_povm->add_option("name", povm_name, "axes6 | cube8 | default14 | ideal-z")->required();
    gen_povm->add_option("--out", povm_out, "output file (stdout when omitted)");

    std::string ensemble_fixture;
    int ensemble_terms = 3;
    std::uint64_t ensemble_seed = 1;
    std::string ensemble_out;
    auto *gen_ensemble = gen->add_subcommand("ensemble", "Generate a product-ensemble document");
    gen_ensemble->add_option("fixture", ensemble_fixture, "random")->required();
    gen_ensemble->add_option("--terms", ensemble_terms, "number of terms")
        ->check(CLI::Range(1, 64));
    gen_ensemble->add_option("--seed", ensemble_seed, "random fixture seed");
    gen_ensemble->add_option("--out", ensemble_out, "output file (stdout when omitted)");

    int frame_bases = 4;
    std::string frame_out;
    std::string frame_fixture;
    auto *gen_frame = gen->add_subcommand("frame", "Generate a dim-3 projector-frame document");
    gen_frame->add_option("fixture", frame_fixture, "mub3")->required();
    gen_frame->add_option("--bases", frame_bases, "number of mutually unbiased bases (1..4)")
        ->check(CLI::Range(1, 4));
    gen_frame->add_option("--out", frame_out, "output file (stdout when omitted)");

    std::string fr_frame_file, fr_state_file, fr_out;
    auto *gen_fr = gen->add_subcommand("frame-responses",
                                       "Exact frame responses of a state document");
    gen_fr->add_option("frame-file", fr_frame_file, "frame document")->required();
    gen_fr->add_option("state-file", fr_state_file, "state document")->required();
    gen_fr->add_option("--out", fr_out, "output file (stdout when omitted)");

    // ---- constraints ----
    std::string constraints_povm_file, constraints_out;
    auto *constraints_cmd =
        app.add_subcommand("constraints", "Discover the linear response constraints of a POVM");
    constraints_cmd->add_option("povm-file", constraints_povm_file, "povm document")->required();
    constraints_cmd->add_option("--out", constraints_out, "output file (stdout when omitted)");

    // ---- check-lhv ----
    std::string check_model_file;
    auto *check_cmd =
        app.add_subcommand("check-lhv", "Admissibility and consistency report for a model");
    check_cmd->add_option("model-file", check_model_file, "lhv-model document")->required();

    // ---- reconstruct ----
    std::string rec_model_file, rec_ensemble_out, rec_state_out;
    auto *rec_cmd = app.add_subcommand(
        "reconstruct", "Extract the product ensemble of a consistent model and assemble its state");
    rec_cmd->add_option("model-file", rec_model_file, "lhv-model document")->required();
    rec_cmd->add_option("--ensemble-out", rec_ensemble_out, "write the extracted ensemble here");
    rec_cmd->add_option("--state-out", rec_state_out, "write the assembled state here");

    // ---- build-lhv ----
    std::string build_ensemble_file, build_povm_a, build_povm_b, build_out;
    auto *build_cmd =
        app.add_subcommand("build-lhv", "Construct the local model of a product ensemble");
    build_cmd->add_option("ensemble-file", build_ensemble_file, "ensemble document")->required();
    build_cmd->add_option("povm-a", build_povm_a, "first-side povm document")->required();
    build_cmd->add_option("povm-b", build_povm_b, "second-side povm document")->required();
    build_cmd->add_option("--out", build_out, "output file (stdout when omitted)");

    // ---- verdict ----
    std::string verdict_state_file, verdict_out, verdict_ensemble_out;
    std::uint64_t verdict_seed = 1;
    int verdict_restarts = 32;
    double verdict_tol = tol::decomposition;
    auto *verdict_cmd = app.add_subcommand("verdict", "Separable / Entangled / Undetermined");
    verdict_cmd->add_option("state-file", verdict_state_file, "state document")->required();
    verdict_cmd->add_option("--seed", verdict_seed, "search seed");
    verdict_cmd->add_option("--restarts", verdict_restarts, "restarts per K")
        ->check(CLI::Range(1, 4096));
    verdict_cmd->add_option("--tol", verdict_tol, "decomposition residual tolerance");
    verdict_cmd->add_option("--out", verdict_out, "write the verdict document here");
    verdict_cmd->add_option("--ensemble-out", verdict_ensemble_out,
                            "write the separable ensemble here (when found)");

    // ---- simulate ----
    auto *simulate = app.add_subcommand("simulate", "Sample joint measurement outcomes");
    simulate->require_subcommand(1);

    std::string sq_state, sq_povm_a, sq_povm_b, sq_out, sq_exact_out;
    std::int64_t sq_n = 0;
    std::uint64_t sq_seed = 1;
    auto *sim_quantum = simulate->add_subcommand("quantum", "Born-rule sampling of a state");
    sim_quantum->add_option("state-file", sq_state, "state document")->required();
    sim_quantum->add_option("povm-a", sq_povm_a, "first-side povm document")->required();
    sim_quantum->add_option("povm-b", sq_povm_b, "second-side povm document")->required();
    sim_quantum->add_option("--n", sq_n, "number of draws")->required()->check(CLI::PositiveNumber);
    sim_quantum->add_option("--seed", sq_seed, "sampling seed");
    sim_quantum->add_option("--out", sq_out, "outcomes file (stdout when omitted)");
    sim_quantum->add_option("--exact-out", sq_exact_out,
                            "also write the exact cell distribution here");

    std::string sl_model, sl_out, sl_exact_out;
    std::int64_t sl_n = 0;
    std::uint64_t sl_seed = 1;
    auto *sim_lhv = simulate->add_subcommand("lhv", "Operational sampling of a local model");
    sim_lhv->add_option("model-file", sl_model, "lhv-model document")->required();
    sim_lhv->add_option("--n", sl_n, "number of draws")->required()->check(CLI::PositiveNumber);
    sim_lhv->add_option("--seed", sl_seed, "sampling seed");
    sim_lhv->add_option("--out", sl_out, "outcomes file (stdout when omitted)");
    sim_lhv->add_option("--exact-out", sl_exact_out,
                        "also write the exact cell distribution here");

    // ---- compare ----
    std::string cmp_outcomes, cmp_expected;
    double cmp_significance = tol::chi_square_significance;
    auto *cmp_cmd =
        app.add_subcommand("compare", "Chi-square test of outcomes against a distribution");
    cmp_cmd->add_option("outcomes-file", cmp_outcomes, "outcomes document")->required();
    cmp_cmd->add_option("expected-file", cmp_expected, "distribution document")->required();
    cmp_cmd->add_option("--significance", cmp_significance, "rejection threshold on the p-value");

    // ---- gleason-fit ----
    std::string gf_frame, gf_responses, gf_out;
    auto *gf_cmd = app.add_subcommand(
        "gleason-fit", "Least-squares state reconstruction from frame responses (dim >= 3)");
    gf_cmd->add_option("frame-file", gf_frame, "frame document")->required();
    gf_cmd->add_option("responses-file", gf_responses, "frame-responses document")->required();
    gf_cmd->add_option("--out", gf_out, "state file (stdout when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty())
            reversed.pop_back(); // program name
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out_stream, err_stream);
        return code == 0 ? exit_ok : exit_input_error;
    }

    const auto opt = [](const std::string &s) {
        return s.empty() ? std::optional<std::string>{} : std::optional<std::string>{s};
    };

    try {
        if (gen_state->parsed()) {
            DensityOperator rho = [&] {
                if (state_fixture == "maximally-mixed")
                    return DensityOperator::maximally_mixed(gen_d1, gen_d2);
                if (state_fixture == "singlet")
                    return singlet_state();
                if (state_fixture == "werner")
                    return werner_state(werner_p);
                if (state_fixture == "random") {
                    SplitMix64 rng(derive_stream(gen_seed, "gen-state"));
                    return random_state(gen_d1, gen_d2, rng);
                }
                throw ParseError("unknown state fixture '" + state_fixture + "'");
            }();
            emit(io::state_document(rho), opt(state_out), out_stream);
            return exit_ok;
        }
        if (gen_povm->parsed()) {
            emit(io::povm_document(cli_detail::named_povm(povm_name)), opt(povm_out), out_stream);
            return exit_ok;
        }
        if (gen_ensemble->parsed()) {
            if (ensemble_fixture != "random")
                throw ParseError("unknown ensemble fixture '" + ensemble_fixture + "'");
            SplitMix64 rng(derive_stream(ensemble_seed, "gen-ensemble"));
            emit(io::ensemble_document(random_product_ensemble(ensemble_terms, rng)),
                 opt(ensemble_out), out_stream);
            return exit_ok;
        }
        if (gen_frame->parsed()) {
            if (frame_fixture != "mub3")
                throw ParseError("unknown frame fixture '" + frame_fixture + "'");
            emit(io::frame_document(mub_frame_dim3(frame_bases)), opt(frame_out), out_stream);
            return exit_ok;
        }
        if (gen_fr->parsed()) {
            const ProjectorFrame frame =
                io::frame_from_document(io::load_document_of_kind(fr_frame_file, "frame"));
            const DensityOperator rho =
                io::state_from_document(io::load_document_of_kind(fr_state_file, "state"));
            if (rho.dim() != frame.dim())
                throw ParseError("state dimension does not match the frame");
            emit(io::frame_responses_document(frame_responses(frame, rho.matrix())), opt(fr_out),
                 out_stream);
            return exit_ok;
        }
        if (constraints_cmd->parsed()) {
            const Povm p =
                io::povm_from_document(io::load_document_of_kind(constraints_povm_file, "povm"));
            const ConstraintSet c = discover_constraints(p);
            emit(io::constraints_document(c, p.size()), opt(constraints_out), out_stream);
            return exit_ok;
        }
        if (check_cmd->parsed()) {
            const LhvModel model = io::load_model(check_model_file);
            const Report admissible = check_admissible(model);
            const Report consistent = check_consistency(model, discover_constraints(model.povm_a),
                                                        discover_constraints(model.povm_b));
            out_stream << "admissibility: "
                       << (admissible.ok() ? "OK" : "\n" + admissible.to_string());
            out_stream << "\nconsistency: "
                       << (consistent.ok() ? "OK" : "\n" + consistent.to_string()) << "\n";
            return admissible.ok() && consistent.ok() ? exit_ok : exit_invariant_violation;
        }
        if (rec_cmd->parsed()) {
            const LhvModel model = io::load_model(rec_model_file);
            const ProductEnsemble ensemble = extract_ensemble(model);
            const DensityOperator state = assemble_mixture(ensemble);
            out_stream << "extracted " << ensemble.size() << " product terms; assembled a "
                       << state.d1() << "x" << state.d2() << " state\n";
            if (!rec_ensemble_out.empty())
                io::store_document(rec_ensemble_out, io::ensemble_document(ensemble));
            if (!rec_state_out.empty())
                io::store_document(rec_state_out, io::state_document(state));
            if (rec_ensemble_out.empty() && rec_state_out.empty())
                out_stream << io::serialize_document(io::ensemble_document(ensemble));
            return exit_ok;
        }
        if (build_cmd->parsed()) {
            const ProductEnsemble ensemble = io::ensemble_from_document(
                io::load_document_of_kind(build_ensemble_file, "ensemble"));
            const Povm pa = io::povm_from_document(io::load_document_of_kind(build_povm_a, "povm"));
            const Povm pb = io::povm_from_document(io::load_document_of_kind(build_povm_b, "povm"));
            const LhvModel model = lhv_from_separable(ensemble, pa, pb);
            io::ModelDocument doc{build_povm_a, build_povm_b, model.entries};
            emit(io::model_document(doc), opt(build_out), out_stream);
            return exit_ok;
        }
        if (verdict_cmd->parsed()) {
            const DensityOperator rho =
                io::state_from_document(io::load_document_of_kind(verdict_state_file, "state"));
            SearchParams params;
            params.seed = verdict_seed;
            params.restarts = verdict_restarts;
            params.tol = verdict_tol;
            const LocalityVerdict verdict = locality_verdict(rho, params);

            io::VerdictDocument doc;
            doc.verdict = to_string(verdict.kind);
            doc.certificate = verdict.certificate;
            doc.restarts = verdict.diagnostics.restarts;
            doc.residual_per_k = verdict.diagnostics.residual_per_k;

            out_stream << doc.verdict;
            if (verdict.kind == VerdictKind::Entangled)
                out_stream << " (certificate eigenvalue " << verdict.certificate->eigenvalue
                           << ")";
            if (verdict.kind == VerdictKind::Separable) {
                out_stream << " (" << verdict.ensemble->size() << " terms, residual "
                           << ensemble_residual(rho, *verdict.ensemble) << ")";
                if (!verdict_ensemble_out.empty()) {
                    io::store_document(verdict_ensemble_out,
                                       io::ensemble_document(*verdict.ensemble));
                    doc.ensemble_ref = verdict_ensemble_out;
                }
            }
            out_stream << "\n";
            if (!verdict_out.empty())
                io::store_document(verdict_out, io::verdict_document(doc));
            return verdict.kind == VerdictKind::Undetermined ? exit_undetermined : exit_ok;
        }
        if (sim_quantum->parsed()) {
            const DensityOperator rho =
                io::state_from_document(io::load_document_of_kind(sq_state, "state"));
            const Povm pa = io::povm_from_document(io::load_document_of_kind(sq_povm_a, "povm"));
            const Povm pb = io::povm_from_document(io::load_document_of_kind(sq_povm_b, "povm"));
            if (!sq_exact_out.empty())
                io::store_document(sq_exact_out,
                                   io::distribution_document(joint_distribution(rho, pa, pb)));
            emit(io::outcomes_document(sample_quantum(rho, pa, pb, sq_n, sq_seed)), opt(sq_out),
                 out_stream);
            return exit_ok;
        }
        if (sim_lhv->parsed()) {
            const LhvModel model = io::load_model(sl_model);
            if (!sl_exact_out.empty())
                io::store_document(sl_exact_out,
                                   io::distribution_document(lhv_distribution(model)));
            emit(io::outcomes_document(sample_lhv(model, sl_n, sl_seed)), opt(sl_out), out_stream);
            return exit_ok;
        }
        if (cmp_cmd->parsed()) {
            const OutcomeRecord record =
                io::outcomes_from_document(io::load_document_of_kind(cmp_outcomes, "outcomes"));
            const auto expected = io::distribution_from_document(
                io::load_document_of_kind(cmp_expected, "distribution"));
            const ChiSquareReport report = compare_statistics(record, expected, cmp_significance);
            out_stream << report.to_string() << "\n";
            return report.pass ? exit_ok : exit_invariant_violation;
        }
        if (gf_cmd->parsed()) {
            const ProjectorFrame frame =
                io::frame_from_document(io::load_document_of_kind(gf_frame, "frame"));
            const FrameResponses responses = io::frame_responses_from_document(
                io::load_document_of_kind(gf_responses, "frame-responses"));
            const GleasonFit fit = gleason_fit(frame, responses);
            out_stream << "residual " << fit.residual << ", min eigenvalue " << fit.min_eigenvalue
                       << ", " << (fit.positive ? "positive" : "NOT positive") << "\n";
            if (!fit.positive) {
                err_stream << "error: fitted operator is not a state (min eigenvalue "
                           << fit.min_eigenvalue << ")\n";
                return exit_invariant_violation;
            }
            emit(io::state_document(fit.state(frame.dim(), 1)), opt(gf_out), out_stream);
            return exit_ok;
        }
        err_stream << "error: no subcommand\n";
        return exit_input_error;
    } catch (const ParseError &e) {
        err_stream << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument &e) {
        err_stream << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const InvariantError &e) {
        err_stream << "error: " << e.what() << "\n";
        return exit_invariant_violation;
    }
}

/// argv-style adapter for main().
inline int run_cli(int argc, const char *const *argv, std::ostream &out_stream = std::cout,
                   std::ostream &err_stream = std::cerr) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out_stream, err_stream);
}

} // namespace lhvkit
