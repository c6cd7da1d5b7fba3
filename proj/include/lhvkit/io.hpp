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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lhvkit/density_operator.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/lhv_model.hpp"
#include "lhvkit/montecarlo.hpp"
#include "lhvkit/povm.hpp"
#include "lhvkit/reconstruction.hpp"
#include "lhvkit/separability.hpp"

namespace lhvkit::io {

using json = nlohmann::ordered_json;

/// One file = one kind. All documents share the {kind, version, payload}
/// envelope; numbers are serialized with shortest-exact decimal
/// representations so parse(serialize(x)) is the identity on finite values.
struct Document {
    std::string kind;
    int version = 1;
    json payload;

    bool operator==(const Document &) const = default;
};

inline const std::vector<std::string> &document_kinds() {
    static const std::vector<std::string> kinds = {
        "state",        "povm",         "ensemble", "lhv-model", "constraints",
        "outcomes",     "distribution", "frame",    "frame-responses",
        "verdict"};
    return kinds;
}

inline std::string serialize_document(const Document &doc) {
    json root;
    root["kind"] = doc.kind;
    root["version"] = doc.version;
    root["payload"] = doc.payload;
    return root.dump(2) + "\n";
}

inline Document parse_document(const std::string &text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("document syntax error: ") + e.what());
    }
    if (!root.is_object() || !root.contains("kind") || !root.contains("version") ||
        !root.contains("payload"))
        throw ParseError("document must be an object with kind, version, payload");
    Document doc;
    if (!root["kind"].is_string())
        throw ParseError("document kind must be a string");
    doc.kind = root["kind"].get<std::string>();
    if (!root["version"].is_number_integer() || root["version"].get<int>() != 1)
        throw ParseError("unsupported document version");
    doc.version = 1;
    doc.payload = root["payload"];
    bool known = false;
    for (const auto &k : document_kinds())
        known = known || k == doc.kind;
    if (!known)
        throw ParseError("unknown document kind '" + doc.kind + "'");
    return doc;
}

inline void store_document(const std::filesystem::path &path, const Document &doc) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path.string() + "' for writing");
    out << serialize_document(doc);
    if (!out)
        throw ParseError("write to '" + path.string() + "' failed");
}

inline Document load_document(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_document(buffer.str());
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline Document load_document_of_kind(const std::filesystem::path &path, const std::string &kind) {
    Document doc = load_document(path);
    if (doc.kind != kind)
        throw ParseError(path.string() + ": expected a " + kind + " document, found " + doc.kind);
    return doc;
}

namespace detail {

inline void require_finite(double v, const char *what) {
    if (!std::isfinite(v))
        throw InvariantError(std::string("serialize: non-finite ") + what);
}

inline json complex_to_json(const Complex &z) {
    require_finite(z.real(), "complex component");
    require_finite(z.imag(), "complex component");
    return json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const json &j, const char *where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string(where) + ": complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.dim(); ++c)
            row.push_back(complex_to_json(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json &j, const char *where) {
    if (!j.is_array() || j.empty())
        throw ParseError(std::string(where) + ": matrix must be a nonempty nested list");
    const int dim = static_cast<int>(j.size());
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
            throw ParseError(std::string(where) + ": matrix rows must all have length " +
                             std::to_string(dim));
        for (int c = 0; c < dim; ++c)
            m.at(r, c) = complex_from_json(j[r][c], where);
    }
    return m;
}

inline json real_vector_to_json(const std::vector<double> &v, const char *what) {
    json out = json::array();
    for (const double x : v) {
        require_finite(x, what);
        out.push_back(x);
    }
    return out;
}

inline std::vector<double> real_vector_from_json(const json &j, const char *where) {
    if (!j.is_array())
        throw ParseError(std::string(where) + ": expected a list of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto &x : j) {
        if (!x.is_number())
            throw ParseError(std::string(where) + ": expected a list of numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

inline const json &field(const json &payload, const char *name, const char *kind) {
    if (!payload.is_object() || !payload.contains(name))
        throw ParseError(std::string(kind) + " payload: missing field '" + name + "'");
    return payload.at(name);
}

inline int int_field(const json &payload, const char *name, const char *kind) {
    const json &j = field(payload, name, kind);
    if (!j.is_number_integer())
        throw ParseError(std::string(kind) + " payload: field '" + name + "' must be an integer");
    return j.get<int>();
}

} // namespace detail

// --- state ---------------------------------------------------------------

inline Document state_document(const DensityOperator &rho) {
    Document doc{"state", 1, json::object()};
    doc.payload["d1"] = rho.d1();
    doc.payload["d2"] = rho.d2();
    doc.payload["matrix"] = detail::matrix_to_json(rho.matrix());
    return doc;
}

inline DensityOperator state_from_document(const Document &doc) {
    const int d1 = detail::int_field(doc.payload, "d1", "state");
    const int d2 = detail::int_field(doc.payload, "d2", "state");
    ComplexMatrix m = detail::matrix_from_json(detail::field(doc.payload, "matrix", "state"),
                                               "state matrix");
    return {std::move(m), d1, d2};
}

// --- povm ----------------------------------------------------------------

inline Document povm_document(const Povm &p) {
    Document doc{"povm", 1, json::object()};
    doc.payload["dim"] = p.dim();
    json effects = json::array();
    for (int mu = 0; mu < p.size(); ++mu) {
        json e;
        detail::require_finite(p.effect(mu).weight, "effect weight");
        e["weight"] = p.effect(mu).weight;
        e["matrix"] = detail::matrix_to_json(p.effect(mu).op);
        e["label"] = p.effect(mu).label;
        effects.push_back(std::move(e));
    }
    doc.payload["effects"] = std::move(effects);
    return doc;
}

inline Povm povm_from_document(const Document &doc) {
    const int dim = detail::int_field(doc.payload, "dim", "povm");
    const json &effects = detail::field(doc.payload, "effects", "povm");
    if (!effects.is_array() || effects.empty())
        throw ParseError("povm payload: effects must be a nonempty list");
    std::vector<Effect> parsed;
    for (const auto &e : effects) {
        if (!e.is_object() || !e.contains("weight") || !e.contains("matrix") ||
            !e.contains("label") || !e["weight"].is_number() || !e["label"].is_string())
            throw ParseError("povm payload: effects are {weight, matrix, label} objects");
        parsed.push_back({e["weight"].get<double>(),
                          detail::matrix_from_json(e["matrix"], "povm effect matrix"),
                          e["label"].get<std::string>()});
    }
    return {dim, std::move(parsed)};
}

// --- ensemble ------------------------------------------------------------

inline Document ensemble_document(const ProductEnsemble &e) {
    Document doc{"ensemble", 1, json::object()};
    doc.payload["d1"] = e.d1();
    doc.payload["d2"] = e.d2();
    json terms = json::array();
    for (const auto &t : e.terms()) {
        json term;
        detail::require_finite(t.p, "term probability");
        term["p"] = t.p;
        term["rho1"] = detail::matrix_to_json(t.rho1.matrix());
        term["rho2"] = detail::matrix_to_json(t.rho2.matrix());
        terms.push_back(std::move(term));
    }
    doc.payload["terms"] = std::move(terms);
    return doc;
}

inline ProductEnsemble ensemble_from_document(const Document &doc) {
    const int d1 = detail::int_field(doc.payload, "d1", "ensemble");
    const int d2 = detail::int_field(doc.payload, "d2", "ensemble");
    const json &terms = detail::field(doc.payload, "terms", "ensemble");
    if (!terms.is_array() || terms.empty())
        throw ParseError("ensemble payload: terms must be a nonempty list");
    std::vector<ProductEnsemble::Term> parsed;
    for (const auto &t : terms) {
        if (!t.is_object() || !t.contains("p") || !t.contains("rho1") || !t.contains("rho2") ||
            !t["p"].is_number())
            throw ParseError("ensemble payload: terms are {p, rho1, rho2} objects");
        parsed.push_back({t["p"].get<double>(),
                          DensityOperator(detail::matrix_from_json(t["rho1"], "ensemble rho1"), d1, 1),
                          DensityOperator(detail::matrix_from_json(t["rho2"], "ensemble rho2"), d2, 1)});
    }
    return ProductEnsemble(std::move(parsed));
}

// --- lhv-model -----------------------------------------------------------

/// A model document carries its POVMs by file reference, never embedded.
struct ModelDocument {
    std::string povm_a_ref;
    std::string povm_b_ref;
    std::vector<LambdaEntry> entries;

    bool operator==(const ModelDocument &) const = default;
};

inline Document model_document(const ModelDocument &m) {
    Document doc{"lhv-model", 1, json::object()};
    doc.payload["povmA-ref"] = m.povm_a_ref;
    doc.payload["povmB-ref"] = m.povm_b_ref;
    json entries = json::array();
    for (const auto &e : m.entries) {
        json entry;
        detail::require_finite(e.p, "lambda probability");
        entry["p"] = e.p;
        entry["responsesA"] = detail::real_vector_to_json(e.responses_a, "response");
        entry["responsesB"] = detail::real_vector_to_json(e.responses_b, "response");
        entries.push_back(std::move(entry));
    }
    doc.payload["entries"] = std::move(entries);
    return doc;
}

inline ModelDocument model_from_document(const Document &doc) {
    ModelDocument m;
    const json &ra = detail::field(doc.payload, "povmA-ref", "lhv-model");
    const json &rb = detail::field(doc.payload, "povmB-ref", "lhv-model");
    if (!ra.is_string() || !rb.is_string())
        throw ParseError("lhv-model payload: POVM references must be path strings");
    m.povm_a_ref = ra.get<std::string>();
    m.povm_b_ref = rb.get<std::string>();
    const json &entries = detail::field(doc.payload, "entries", "lhv-model");
    if (!entries.is_array() || entries.empty())
        throw ParseError("lhv-model payload: entries must be a nonempty list");
    for (const auto &e : entries) {
        if (!e.is_object() || !e.contains("p") || !e.contains("responsesA") ||
            !e.contains("responsesB") || !e["p"].is_number())
            throw ParseError("lhv-model payload: entries are {p, responsesA, responsesB} objects");
        m.entries.push_back({e["p"].get<double>(),
                             detail::real_vector_from_json(e["responsesA"], "lhv-model responsesA"),
                             detail::real_vector_from_json(e["responsesB"], "lhv-model responsesB")});
    }
    return m;
}

/// Resolve a reference: absolute paths load directly, relative paths are
/// tried against the referring document's directory first, then the working
/// directory.
inline std::filesystem::path resolve_reference(const std::string &ref,
                                               const std::filesystem::path &base_dir) {
    const std::filesystem::path p(ref);
    if (p.is_absolute())
        return p;
    const std::filesystem::path beside = base_dir / p;
    if (std::filesystem::exists(beside))
        return beside;
    return p;
}

/// Load a model file and its referenced POVM files into a live LhvModel.
inline LhvModel load_model(const std::filesystem::path &path) {
    const ModelDocument m = model_from_document(load_document_of_kind(path, "lhv-model"));
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");
    const Povm pa =
        povm_from_document(load_document_of_kind(resolve_reference(m.povm_a_ref, base), "povm"));
    const Povm pb =
        povm_from_document(load_document_of_kind(resolve_reference(m.povm_b_ref, base), "povm"));
    for (const auto &e : m.entries)
        if (static_cast<int>(e.responses_a.size()) != pa.size() ||
            static_cast<int>(e.responses_b.size()) != pb.size())
            throw ParseError(path.string() + ": response lengths do not match POVM sizes");
    return {pa, pb, m.entries};
}

// --- constraints ---------------------------------------------------------

inline Document constraints_document(const ConstraintSet &c, int effects) {
    Document doc{"constraints", 1, json::object()};
    doc.payload["effects"] = effects;
    json rows = json::array();
    for (const auto &f : c.coefficients)
        rows.push_back(detail::real_vector_to_json(f, "constraint coefficient"));
    doc.payload["coefficients"] = std::move(rows);
    return doc;
}

inline std::pair<ConstraintSet, int> constraints_from_document(const Document &doc) {
    const int effects = detail::int_field(doc.payload, "effects", "constraints");
    const json &rows = detail::field(doc.payload, "coefficients", "constraints");
    if (!rows.is_array())
        throw ParseError("constraints payload: coefficients must be a list of rows");
    ConstraintSet c;
    for (const auto &row : rows) {
        c.coefficients.push_back(detail::real_vector_from_json(row, "constraints coefficients"));
        if (static_cast<int>(c.coefficients.back().size()) != effects)
            throw ParseError("constraints payload: row length does not match effect count");
    }
    return {std::move(c), effects};
}

// --- outcomes ------------------------------------------------------------

inline Document outcomes_document(const OutcomeRecord &record) {
    validate_record(record);
    Document doc{"outcomes", 1, json::object()};
    doc.payload["na"] = static_cast<int>(record.counts.size());
    doc.payload["nb"] = static_cast<int>(record.counts.front().size());
    doc.payload["n"] = record.n;
    doc.payload["seed"] = record.seed;
    json cells = json::array();
    for (std::size_t mu = 0; mu < record.counts.size(); ++mu)
        for (std::size_t nu = 0; nu < record.counts[mu].size(); ++nu)
            if (record.counts[mu][nu] != 0)
                cells.push_back(json::array({mu, nu, record.counts[mu][nu]}));
    doc.payload["counts"] = std::move(cells);
    return doc;
}

inline OutcomeRecord outcomes_from_document(const Document &doc) {
    OutcomeRecord record;
    const int na = detail::int_field(doc.payload, "na", "outcomes");
    const int nb = detail::int_field(doc.payload, "nb", "outcomes");
    if (na < 1 || nb < 1)
        throw ParseError("outcomes payload: grid dimensions must be positive");
    const json &nj = detail::field(doc.payload, "n", "outcomes");
    const json &seedj = detail::field(doc.payload, "seed", "outcomes");
    if (!nj.is_number_integer() || !seedj.is_number_integer())
        throw ParseError("outcomes payload: n and seed must be integers");
    record.n = nj.get<std::int64_t>();
    record.seed = seedj.get<std::uint64_t>();
    record.counts.assign(na, std::vector<std::int64_t>(nb, 0));
    const json &cells = detail::field(doc.payload, "counts", "outcomes");
    if (!cells.is_array())
        throw ParseError("outcomes payload: counts must be a list of [mu, nu, count] triples");
    for (const auto &cell : cells) {
        if (!cell.is_array() || cell.size() != 3 || !cell[0].is_number_integer() ||
            !cell[1].is_number_integer() || !cell[2].is_number_integer())
            throw ParseError("outcomes payload: counts must be a list of [mu, nu, count] triples");
        const int mu = cell[0].get<int>();
        const int nu = cell[1].get<int>();
        if (mu < 0 || mu >= na || nu < 0 || nu >= nb)
            throw ParseError("outcomes payload: cell index out of range");
        record.counts[mu][nu] = cell[2].get<std::int64_t>();
    }
    validate_record(record);
    return record;
}

// --- distribution --------------------------------------------------------

inline Document distribution_document(const std::vector<std::vector<double>> &probs) {
    if (probs.empty() || probs.front().empty())
        throw InvariantError("distribution document: empty grid");
    Document doc{"distribution", 1, json::object()};
    doc.payload["na"] = static_cast<int>(probs.size());
    doc.payload["nb"] = static_cast<int>(probs.front().size());
    json rows = json::array();
    for (const auto &row : probs) {
        if (row.size() != probs.front().size())
            throw InvariantError("distribution document: ragged grid");
        rows.push_back(detail::real_vector_to_json(row, "cell probability"));
    }
    doc.payload["probs"] = std::move(rows);
    return doc;
}

inline std::vector<std::vector<double>> distribution_from_document(const Document &doc) {
    const int na = detail::int_field(doc.payload, "na", "distribution");
    const int nb = detail::int_field(doc.payload, "nb", "distribution");
    const json &rows = detail::field(doc.payload, "probs", "distribution");
    if (!rows.is_array() || static_cast<int>(rows.size()) != na)
        throw ParseError("distribution payload: probs must have na rows");
    std::vector<std::vector<double>> probs;
    for (const auto &row : rows) {
        probs.push_back(detail::real_vector_from_json(row, "distribution probs"));
        if (static_cast<int>(probs.back().size()) != nb)
            throw ParseError("distribution payload: row length does not match nb");
    }
    return probs;
}

// --- frame ---------------------------------------------------------------

inline Document frame_document(const ProjectorFrame &frame) {
    Document doc{"frame", 1, json::object()};
    doc.payload["dim"] = frame.dim();
    json rank1 = json::array();
    for (const auto &p : frame.rank1())
        rank1.push_back(detail::matrix_to_json(p));
    doc.payload["rank1"] = std::move(rank1);
    json rank2 = json::array();
    for (std::size_t k = 0; k < frame.rank2().size(); ++k) {
        json entry;
        entry["i"] = frame.rank2_pairs()[k].first;
        entry["j"] = frame.rank2_pairs()[k].second;
        entry["matrix"] = detail::matrix_to_json(frame.rank2()[k]);
        rank2.push_back(std::move(entry));
    }
    doc.payload["rank2"] = std::move(rank2);
    return doc;
}

inline ProjectorFrame frame_from_document(const Document &doc) {
    const int dim = detail::int_field(doc.payload, "dim", "frame");
    const json &r1 = detail::field(doc.payload, "rank1", "frame");
    const json &r2 = detail::field(doc.payload, "rank2", "frame");
    if (!r1.is_array() || !r2.is_array())
        throw ParseError("frame payload: rank1 and rank2 must be lists");
    std::vector<ComplexMatrix> rank1;
    for (const auto &p : r1)
        rank1.push_back(detail::matrix_from_json(p, "frame rank1"));
    std::vector<ComplexMatrix> rank2;
    std::vector<std::pair<int, int>> pairs;
    for (const auto &e : r2) {
        if (!e.is_object() || !e.contains("i") || !e.contains("j") || !e.contains("matrix") ||
            !e["i"].is_number_integer() || !e["j"].is_number_integer())
            throw ParseError("frame payload: rank2 entries are {i, j, matrix} objects");
        pairs.emplace_back(e["i"].get<int>(), e["j"].get<int>());
        rank2.push_back(detail::matrix_from_json(e["matrix"], "frame rank2"));
    }
    return {dim, std::move(rank1), std::move(rank2), std::move(pairs)};
}

// --- frame-responses -----------------------------------------------------

inline Document frame_responses_document(const FrameResponses &r) {
    Document doc{"frame-responses", 1, json::object()};
    doc.payload["rank1"] = detail::real_vector_to_json(r.rank1, "frame response");
    doc.payload["rank2"] = detail::real_vector_to_json(r.rank2, "frame response");
    return doc;
}

inline FrameResponses frame_responses_from_document(const Document &doc) {
    FrameResponses r;
    r.rank1 = detail::real_vector_from_json(detail::field(doc.payload, "rank1", "frame-responses"),
                                            "frame-responses rank1");
    r.rank2 = detail::real_vector_from_json(detail::field(doc.payload, "rank2", "frame-responses"),
                                            "frame-responses rank2");
    return r;
}

// --- verdict -------------------------------------------------------------

/// Serializable verdict: the ensemble travels by reference (one kind per
/// file), so a Separable verdict names the ensemble file written beside it.
struct VerdictDocument {
    std::string verdict;
    std::optional<EntanglementCertificate> certificate;
    std::optional<std::string> ensemble_ref;
    int restarts = 0;
    std::vector<std::pair<int, double>> residual_per_k;

    bool operator==(const VerdictDocument &other) const {
        const auto cert_eq = [](const std::optional<EntanglementCertificate> &a,
                                const std::optional<EntanglementCertificate> &b) {
            if (a.has_value() != b.has_value())
                return false;
            return !a || (a->eigenvalue == b->eigenvalue && a->eigenvector == b->eigenvector);
        };
        return verdict == other.verdict && cert_eq(certificate, other.certificate) &&
               ensemble_ref == other.ensemble_ref && restarts == other.restarts &&
               residual_per_k == other.residual_per_k;
    }
};

inline Document verdict_document(const VerdictDocument &v) {
    Document doc{"verdict", 1, json::object()};
    doc.payload["verdict"] = v.verdict;
    if (v.certificate) {
        json cert;
        detail::require_finite(v.certificate->eigenvalue, "certificate eigenvalue");
        cert["eigenvalue"] = v.certificate->eigenvalue;
        json vec = json::array();
        for (const auto &z : v.certificate->eigenvector)
            vec.push_back(detail::complex_to_json(z));
        cert["eigenvector"] = std::move(vec);
        doc.payload["certificate"] = std::move(cert);
    } else {
        doc.payload["certificate"] = nullptr;
    }
    doc.payload["ensemble-ref"] = v.ensemble_ref ? json(*v.ensemble_ref) : json(nullptr);
    doc.payload["restarts"] = v.restarts;
    json residuals = json::array();
    for (const auto &[k, res] : v.residual_per_k) {
        detail::require_finite(res, "search residual");
        residuals.push_back(json::array({k, res}));
    }
    doc.payload["residual-per-k"] = std::move(residuals);
    return doc;
}

inline VerdictDocument verdict_from_document(const Document &doc) {
    VerdictDocument v;
    const json &kind = detail::field(doc.payload, "verdict", "verdict");
    if (!kind.is_string())
        throw ParseError("verdict payload: verdict must be a string");
    v.verdict = kind.get<std::string>();
    if (v.verdict != "Separable" && v.verdict != "Entangled" && v.verdict != "Undetermined")
        throw ParseError("verdict payload: unknown verdict '" + v.verdict + "'");
    const json &cert = detail::field(doc.payload, "certificate", "verdict");
    if (!cert.is_null()) {
        if (!cert.is_object() || !cert.contains("eigenvalue") || !cert.contains("eigenvector") ||
            !cert["eigenvalue"].is_number() || !cert["eigenvector"].is_array())
            throw ParseError("verdict payload: certificate is {eigenvalue, eigenvector}");
        EntanglementCertificate c;
        c.eigenvalue = cert["eigenvalue"].get<double>();
        for (const auto &z : cert["eigenvector"])
            c.eigenvector.push_back(detail::complex_from_json(z, "certificate eigenvector"));
        v.certificate = std::move(c);
    }
    const json &ref = detail::field(doc.payload, "ensemble-ref", "verdict");
    if (!ref.is_null()) {
        if (!ref.is_string())
            throw ParseError("verdict payload: ensemble-ref must be a path string");
        v.ensemble_ref = ref.get<std::string>();
    }
    v.restarts = detail::int_field(doc.payload, "restarts", "verdict");
    const json &residuals = detail::field(doc.payload, "residual-per-k", "verdict");
    if (!residuals.is_array())
        throw ParseError("verdict payload: residual-per-k must be a list of [K, residual] pairs");
    for (const auto &pair : residuals) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number())
            throw ParseError("verdict payload: residual-per-k must be a list of [K, residual] pairs");
        v.residual_per_k.emplace_back(pair[0].get<int>(), pair[1].get<double>());
    }
    return v;
}

} // namespace lhvkit::io
