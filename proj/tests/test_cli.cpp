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

#include "lhvkit/cli.hpp"
#include "lhvkit/io.hpp"
#include "lhvkit/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace lhvkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lhvkit-cli-" + std::to_string(SplitMix64::mix(
                                    static_cast<std::uint64_t>(std::rand()) * 2654435761ull)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char *name) const { return (path / name).string(); }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::initializer_list<std::string> args) {
    std::vector<std::string> argv{"lhvkit"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = run_cli(argv, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("Argument handling", "[cli]") {
    SECTION("no subcommand is an input error") {
        REQUIRE(run({}).code == 1);
    }

    SECTION("unknown subcommands are input errors") {
        const CliResult r = run({"frobnicate"});
        REQUIRE(r.code == 1);
    }

    SECTION("help exits cleanly") {
        const CliResult r = run({"--help"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("gen") != std::string::npos);
        REQUIRE(r.out.find("verdict") != std::string::npos);
    }

    SECTION("missing files are input errors") {
        const CliResult r = run({"verdict", "/nonexistent/state.json"});
        REQUIRE(r.code == 1);
        REQUIRE(r.err.find("error") != std::string::npos);
    }

    SECTION("unknown fixtures are input errors") {
        REQUIRE(run({"gen", "state", "ghz"}).code == 1);
        REQUIRE(run({"gen", "povm", "tetra"}).code == 1);
    }
}

TEST_CASE("Document generation", "[cli]") {
    TempDir dir;

    SECTION("state fixtures write valid documents") {
        const CliResult r =
            run({"gen", "state", "singlet", "--out", dir.file("s.json")});
        REQUIRE(r.code == 0);
        const DensityOperator rho =
            io::state_from_document(io::load_document_of_kind(dir.file("s.json"), "state"));
        REQUIRE(std::abs(rho.matrix().at(1, 1) - Complex(0.5, 0.0)) < 1e-14);
    }

    SECTION("stdout emission when --out is omitted") {
        const CliResult r = run({"gen", "povm", "axes6"});
        REQUIRE(r.code == 0);
        const io::Document doc = io::parse_document(r.out);
        REQUIRE(doc.kind == "povm");
        REQUIRE(io::povm_from_document(doc).size() == 6);
    }

    SECTION("random fixtures are seed-reproducible") {
        const CliResult a = run({"gen", "state", "random", "--seed", "9"});
        const CliResult b = run({"gen", "state", "random", "--seed", "9"});
        const CliResult c = run({"gen", "state", "random", "--seed", "10"});
        REQUIRE(a.out == b.out);
        REQUIRE(a.out != c.out);
    }

    SECTION("werner parameter is honoured") {
        const CliResult r = run({"gen", "state", "werner", "--p", "0.25"});
        REQUIRE(r.code == 0);
        const DensityOperator rho = io::state_from_document(io::parse_document(r.out));
        // Off-diagonal singlet coherence scales with p.
        REQUIRE(std::abs(rho.matrix().at(1, 2) + Complex(0.125, 0.0)) < 1e-14);
    }

    SECTION("constraint discovery through files") {
        REQUIRE(run({"gen", "povm", "default14", "--out", dir.file("p.json")}).code == 0);
        const CliResult r = run({"constraints", dir.file("p.json")});
        REQUIRE(r.code == 0);
        const auto [c, effects] =
            io::constraints_from_document(io::parse_document(r.out));
        REQUIRE(effects == 14);
        REQUIRE(c.count() == 10);
    }
}

TEST_CASE("Model pipeline round trip", "[cli][pipeline]") {
    TempDir dir;

    // gen ensemble -> build-lhv -> check-lhv -> reconstruct -> verdict
    REQUIRE(run({"gen", "ensemble", "random", "--terms", "3", "--seed", "4",
                 "--out", dir.file("e.json")})
                .code == 0);
    REQUIRE(run({"gen", "povm", "default14", "--out", dir.file("pa.json")}).code == 0);
    REQUIRE(run({"gen", "povm", "axes6", "--out", dir.file("pb.json")}).code == 0);
    REQUIRE(run({"build-lhv", dir.file("e.json"), dir.file("pa.json"), dir.file("pb.json"),
                 "--out", dir.file("m.json")})
                .code == 0);

    SECTION("the generated model checks out") {
        const CliResult r = run({"check-lhv", dir.file("m.json")});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("admissibility: OK") != std::string::npos);
        REQUIRE(r.out.find("consistency: OK") != std::string::npos);
    }

    SECTION("reconstruction reproduces the originating state") {
        REQUIRE(run({"reconstruct", dir.file("m.json"), "--state-out", dir.file("rho.json"),
                     "--ensemble-out", dir.file("back.json")})
                    .code == 0);
        const DensityOperator rebuilt =
            io::state_from_document(io::load_document_of_kind(dir.file("rho.json"), "state"));
        const ProductEnsemble original = io::ensemble_from_document(
            io::load_document_of_kind(dir.file("e.json"), "ensemble"));
        const DensityOperator assembled = assemble_mixture(original);
        REQUIRE(max_abs_diff(rebuilt.matrix(), assembled.matrix()) < 1e-7);

        // And the verdict on the assembled state is Separable.
        const CliResult v =
            run({"verdict", dir.file("rho.json"), "--seed", "6", "--restarts", "16"});
        REQUIRE(v.code == 0);
        REQUIRE(v.out.find("Separable") != std::string::npos);
    }

    SECTION("a corrupted model is an invariant violation") {
        io::Document doc = io::load_document(dir.file("m.json"));
        // Shift the two x-axis responses in opposite directions. Both effects
        // carry the same weight, so the per-branch normalization survives and
        // the defect is purely a consistency violation. The responses of an
        // opposite-direction pair sum to 1, so exactly one of the two shift
        // orientations keeps both inside [0, 1].
        const double r0 = doc.payload["entries"][0]["responsesA"][0].get<double>();
        const double r1 = doc.payload["entries"][0]["responsesA"][1].get<double>();
        const double shift = r0 <= 0.9 ? 0.1 : -0.1;
        doc.payload["entries"][0]["responsesA"][0] = r0 + shift;
        doc.payload["entries"][0]["responsesA"][1] = r1 - shift;
        io::store_document(dir.file("bad.json"), doc);

        const CliResult check = run({"check-lhv", dir.file("bad.json")});
        REQUIRE(check.code == 2);
        REQUIRE(check.out.find("admissibility: OK") != std::string::npos);
        REQUIRE(check.out.find("consistency") != std::string::npos);

        const CliResult rec = run({"reconstruct", dir.file("bad.json")});
        REQUIRE(rec.code == 2);
        REQUIRE(rec.err.find("not consistent") != std::string::npos);
    }
}

TEST_CASE("Verdict subcommand", "[cli][verdict]") {
    TempDir dir;

    SECTION("the singlet is entangled with its certificate recorded") {
        REQUIRE(run({"gen", "state", "singlet", "--out", dir.file("s.json")}).code == 0);
        const CliResult r =
            run({"verdict", dir.file("s.json"), "--out", dir.file("v.json")});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("Entangled") != std::string::npos);
        REQUIRE(r.out.find("-0.5") != std::string::npos);
        const io::VerdictDocument doc =
            io::verdict_from_document(io::load_document_of_kind(dir.file("v.json"), "verdict"));
        REQUIRE(doc.verdict == "Entangled");
        REQUIRE(doc.certificate.has_value());
        REQUIRE(doc.certificate->eigenvalue == Catch::Approx(-0.5).margin(1e-9));
    }

    SECTION("a mildly mixed state is separable and stores its ensemble") {
        REQUIRE(run({"gen", "state", "werner", "--p", "0.25", "--out", dir.file("w.json")})
                    .code == 0);
        const CliResult r = run({"verdict", dir.file("w.json"), "--seed", "2", "--restarts",
                                 "16", "--out", dir.file("v.json"), "--ensemble-out",
                                 dir.file("e.json")});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("Separable") != std::string::npos);
        const io::VerdictDocument doc =
            io::verdict_from_document(io::load_document_of_kind(dir.file("v.json"), "verdict"));
        REQUIRE(doc.verdict == "Separable");
        REQUIRE(doc.ensemble_ref.has_value());
        const ProductEnsemble e = io::ensemble_from_document(
            io::load_document_of_kind(dir.file("e.json"), "ensemble"));
        REQUIRE(ensemble_residual(werner_state(0.25), e) < 1e-7);
    }

    SECTION("an unreachable tolerance reports undetermined with exit 3") {
        REQUIRE(run({"gen", "state", "maximally-mixed", "--out", dir.file("mm.json")})
                    .code == 0);
        const CliResult r = run({"verdict", dir.file("mm.json"), "--restarts", "2", "--tol",
                                 "1e-18", "--out", dir.file("v.json")});
        REQUIRE(r.code == 3);
        REQUIRE(r.out.find("Undetermined") != std::string::npos);
        const io::VerdictDocument doc =
            io::verdict_from_document(io::load_document_of_kind(dir.file("v.json"), "verdict"));
        REQUIRE(doc.verdict == "Undetermined");
        REQUIRE_FALSE(doc.residual_per_k.empty());
    }
}

TEST_CASE("Sampling and comparison subcommands", "[cli][sampling]") {
    TempDir dir;
    REQUIRE(run({"gen", "state", "werner", "--p", "0.25", "--out", dir.file("w.json")})
                .code == 0);
    REQUIRE(run({"gen", "povm", "axes6", "--out", dir.file("p.json")}).code == 0);

    SECTION("quantum samples pass against their own exact distribution") {
        REQUIRE(run({"simulate", "quantum", dir.file("w.json"), dir.file("p.json"),
                     dir.file("p.json"), "--n", "20000", "--seed", "3", "--out",
                     dir.file("o.json"), "--exact-out", dir.file("q.json")})
                    .code == 0);
        const CliResult r = run({"compare", dir.file("o.json"), dir.file("q.json")});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("pass") != std::string::npos);
    }

    SECTION("hidden-variable samples pass against the model distribution") {
        REQUIRE(run({"gen", "ensemble", "random", "--terms", "2", "--seed", "8",
                     "--out", dir.file("e.json")})
                    .code == 0);
        REQUIRE(run({"build-lhv", dir.file("e.json"), dir.file("p.json"), dir.file("p.json"),
                     "--out", dir.file("m.json")})
                    .code == 0);
        REQUIRE(run({"simulate", "lhv", dir.file("m.json"), "--n", "20000", "--seed", "5",
                     "--out", dir.file("o.json"), "--exact-out", dir.file("q.json")})
                    .code == 0);
        REQUIRE(run({"compare", dir.file("o.json"), dir.file("q.json")}).code == 0);
    }

    SECTION("a mismatched distribution fails the comparison with exit 2") {
        REQUIRE(run({"simulate", "quantum", dir.file("w.json"), dir.file("p.json"),
                     dir.file("p.json"), "--n", "20000", "--seed", "3", "--out",
                     dir.file("o.json")})
                    .code == 0);
        // Exact distribution of a very different state.
        REQUIRE(run({"gen", "state", "singlet", "--out", dir.file("s.json")}).code == 0);
        REQUIRE(run({"simulate", "quantum", dir.file("s.json"), dir.file("p.json"),
                     dir.file("p.json"), "--n", "1", "--exact-out", dir.file("wrong.json"),
                     "--out", dir.file("scratch.json")})
                    .code == 0);
        const CliResult r = run({"compare", dir.file("o.json"), dir.file("wrong.json")});
        REQUIRE(r.code == 2);
        REQUIRE(r.out.find("FAIL") != std::string::npos);
    }

    SECTION("nonpositive sample counts are input errors") {
        REQUIRE(run({"simulate", "quantum", dir.file("w.json"), dir.file("p.json"),
                     dir.file("p.json"), "--n", "0"})
                    .code == 1);
    }
}

TEST_CASE("Frame fit subcommands", "[cli][frame]") {
    TempDir dir;
    REQUIRE(run({"gen", "frame", "mub3", "--out", dir.file("f.json")}).code == 0);
    REQUIRE(run({"gen", "state", "random", "--d1", "3", "--d2", "1", "--seed", "12",
                 "--out", dir.file("rho.json")})
                .code == 0);
    REQUIRE(run({"gen", "frame-responses", dir.file("f.json"), dir.file("rho.json"),
                 "--out", dir.file("r.json")})
                .code == 0);

    SECTION("the fit reproduces the sampled state") {
        const CliResult r = run({"gleason-fit", dir.file("f.json"), dir.file("r.json"),
                                 "--out", dir.file("fit.json")});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("positive") != std::string::npos);
        const DensityOperator fit =
            io::state_from_document(io::load_document_of_kind(dir.file("fit.json"), "state"));
        const DensityOperator original =
            io::state_from_document(io::load_document_of_kind(dir.file("rho.json"), "state"));
        REQUIRE(max_abs_diff(fit.matrix(), original.matrix()) < 1e-8);
    }

    SECTION("dimension mismatches are input errors") {
        REQUIRE(run({"gen", "state", "singlet", "--out", dir.file("s2.json")}).code == 0);
        REQUIRE(run({"gen", "frame-responses", dir.file("f.json"), dir.file("s2.json")})
                    .code == 1);
    }

    SECTION("an underdetermined frame is an invariant violation") {
        REQUIRE(run({"gen", "frame", "mub3", "--bases", "3", "--out", dir.file("f3.json")})
                    .code == 0);
        REQUIRE(run({"gen", "frame-responses", dir.file("f3.json"), dir.file("rho.json"),
                     "--out", dir.file("r3.json")})
                    .code == 0);
        const CliResult r = run({"gleason-fit", dir.file("f3.json"), dir.file("r3.json")});
        REQUIRE(r.code == 2);
        REQUIRE(r.err.find("informationally complete") != std::string::npos);
    }
}
