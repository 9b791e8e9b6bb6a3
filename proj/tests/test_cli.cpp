#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "planekit/cli_runner.hpp"
#include "planekit/serialization.hpp"

using namespace planekit;
namespace fs = std::filesystem;

namespace {

fs::path workspace() {
    fs::path dir = fs::temp_directory_path() / "planekit_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
    fs::path path = workspace() / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json read_json(const fs::path& path) { return json::parse(read_file(path)); }

const char* kC4Spec = R"({"scalar": "rational", "generators": [[[0, 1], [-1, 0]]]})";

cli::RunConfig base_config(const std::string& command) {
    cli::RunConfig cfg;
    cfg.command = command;
    return cfg;
}

} // namespace

TEST_CASE("synth with method=all produces a cross-checked certificate") {
    fs::path input = write_file("c4.json", kC4Spec);
    fs::path output = workspace() / "c4_cert.json";

    cli::RunConfig cfg = base_config("synth");
    cfg.method = "all";
    cfg.input_path = input.string();
    cfg.output_path = output.string();
    CHECK(cli::run(cfg) == cli::kExitOk);

    json cert = read_json(output);
    REQUIRE(cert.contains("methods"));
    for (const char* method : {"averaging", "contraction", "algebraic"}) {
        REQUIRE(cert["methods"].contains(method));
        CHECK(cert["methods"][method]["residual"] == "0/1");
        CHECK(cert["methods"][method]["positive_definite"] == true);
    }
    CHECK(cert["cross_check"]["irreducible"] == true);
    CHECK(cert["cross_check"]["pairwise_proportional"] == true);
    CHECK(cert["complex_structure"]["j"] == json::parse(R"([["0/1","1/1"],["-1/1","0/1"]])"));
}

TEST_CASE("identical configs produce byte-identical certificates") {
    fs::path input = write_file("c4_det.json", kC4Spec);
    fs::path out1 = workspace() / "det1.json";
    fs::path out2 = workspace() / "det2.json";

    cli::RunConfig cfg = base_config("synth");
    cfg.method = "all";
    cfg.input_path = input.string();
    cfg.output_path = out1.string();
    REQUIRE(cli::run(cfg) == cli::kExitOk);
    cfg.output_path = out2.string();
    REQUIRE(cli::run(cfg) == cli::kExitOk);

    CHECK(read_file(out1) == read_file(out2));
}

TEST_CASE("synth rejects screened-out groups with exit 2") {
    fs::path input = write_file(
        "shear.json",
        R"({"scalar": "rational", "generators": [[[1, 1], [0, 1]]], "closure_limit": 32})");
    cli::RunConfig cfg = base_config("synth");
    cfg.method = "contraction";
    cfg.input_path = input.string();
    CHECK(cli::run(cfg) == cli::kExitRejected);

    cfg.method = "algebraic";
    CHECK(cli::run(cfg) == cli::kExitRejected);
}

TEST_CASE("synth reports malformed input with exit 1") {
    fs::path input = write_file(
        "broken.json", R"({"scalar": "rational", "generators": [[[0, 1], [-1]]]})");
    cli::RunConfig cfg = base_config("synth");
    cfg.method = "averaging";
    cfg.input_path = input.string();
    CHECK(cli::run(cfg) == cli::kExitInputError);

    fs::path not_json = write_file("not_json.json", "{[");
    cfg.input_path = not_json.string();
    CHECK(cli::run(cfg) == cli::kExitInputError);

    cfg.input_path = (workspace() / "missing.json").string();
    CHECK(cli::run(cfg) == cli::kExitInputError);
}

TEST_CASE("float synth via contraction succeeds") {
    std::ostringstream spec;
    spec.precision(17);
    spec << R"({"scalar": "float", "generators": [[[)" << std::cos(1.0) << ", " << -std::sin(1.0)
         << "], [" << std::sin(1.0) << ", " << std::cos(1.0)
         << R"(]]], "closure_limit": 128})";
    fs::path input = write_file("rotation.json", spec.str());
    fs::path output = workspace() / "rotation_cert.json";

    cli::RunConfig cfg = base_config("synth");
    cfg.method = "contraction";
    cfg.input_path = input.string();
    cfg.output_path = output.string();
    REQUIRE(cli::run(cfg) == cli::kExitOk);

    json cert = read_json(output);
    CHECK(cert["method"] == "contraction");
    CHECK(cert["positive_definite"] == true);
    CHECK(cert["contraction_ratio"].get<double>() < 1.0);
}

TEST_CASE("check accepts a matching pair and flags mismatches") {
    fs::path pair = write_file(
        "check_ok.json",
        R"({"scalar": "rational",
            "group": {"generators": [[[0, 1], [-1, 0]]]},
            "gram": [[1, 0], [0, 1]]})");
    cli::RunConfig cfg = base_config("check");
    cfg.input_path = pair.string();
    CHECK(cli::run(cfg) == cli::kExitOk);

    fs::path bad = write_file(
        "check_bad.json",
        R"({"scalar": "rational",
            "group": {"generators": [[[0, 1], [-1, 0]]]},
            "gram": [[1, 0], [0, 2]]})");
    cfg.input_path = bad.string();
    CHECK(cli::run(cfg) == cli::kExitRejected);
}

TEST_CASE("check verifies certificates against the spec hash") {
    // Produce a genuine certificate for C4 first.
    fs::path input = write_file("c4_for_cert.json", kC4Spec);
    fs::path cert_path = workspace() / "c4_cert_for_check.json";
    cli::RunConfig synth_cfg = base_config("synth");
    synth_cfg.method = "averaging";
    synth_cfg.input_path = input.string();
    synth_cfg.output_path = cert_path.string();
    REQUIRE(cli::run(synth_cfg) == cli::kExitOk);
    json cert = read_json(cert_path);

    json pair;
    pair["scalar"] = "rational";
    pair["group"] = {{"generators", json::parse("[[[0, 1], [-1, 0]]]")}};
    pair["certificate"] = cert;
    fs::path pair_path = write_file("cert_pair.json", pair.dump());
    cli::RunConfig cfg = base_config("check");
    cfg.input_path = pair_path.string();
    CHECK(cli::run(cfg) == cli::kExitOk);

    // Same certificate replayed against a different group: hash mismatch.
    json mismatched = pair;
    mismatched["group"] = {{"generators", json::parse("[[[1, 0], [0, -1]]]")}};
    fs::path mismatch_path = write_file("cert_mismatch.json", mismatched.dump());
    cfg.input_path = mismatch_path.string();
    CHECK(cli::run(cfg) == cli::kExitInputError);
}

TEST_CASE("geom runs the ruler demo") {
    fs::path input = write_file(
        "geom.json",
        R"({"scalar": "rational",
            "ruler": {"a": [1, 1], "b": [0, 0], "k": 2, "l": 0, "n": 4},
            "line": {"a": [1, 0], "b": [0, 0], "num_bound": 1, "den_bound": 2},
            "parallelogram": [[0, 0], [1, 0], [1, 1], [0, 1]],
            "chart_check": {"anchor": [1, 0],
                             "samples": [[0, 0], [1, 0], [0, 1]],
                             "group": {"generators": [[[0, 1], [-1, 0]]]}}})");
    fs::path output = workspace() / "geom_report.json";
    cli::RunConfig cfg = base_config("geom");
    cfg.input_path = input.string();
    cfg.output_path = output.string();
    REQUIRE(cli::run(cfg) == cli::kExitOk);

    json report = read_json(output);
    REQUIRE(report.contains("ruler"));
    CHECK(report["ruler"]["points"].size() == 5);
    CHECK(report["ruler"]["valid"] == true);
    CHECK(report["line"]["count"] == 5);
    CHECK(report["parallelogram"]["is_parallelogram"] == true);
    CHECK(report["chart_check"]["passed"] == true);

    fs::path bad = write_file(
        "geom_bad.json",
        R"({"scalar": "rational", "ruler": {"a": [1, 1], "b": [0, 0], "k": 0, "l": 0, "n": 4}})");
    cfg.input_path = bad.string();
    cfg.output_path.clear();
    CHECK(cli::run(cfg) == cli::kExitInputError);
}

TEST_CASE("patch builtin quartic is rejected with the pinned witness") {
    fs::path output = workspace() / "quartic_report.json";
    cli::RunConfig cfg = base_config("patch");
    cfg.builtin = "quartic";
    cfg.dimension = 3;
    cfg.output_path = output.string();
    CHECK(cli::run(cfg) == cli::kExitRejected);

    json report = read_json(output);
    CHECK(report["status"] == "not_quadratic");
    CHECK(report["witness"]["kind"] == "parallelogram");
    CHECK(report["witness"]["a"] == json::parse(R"(["1/1","0/1","0/1"])"));
    CHECK(report["witness"]["b"] == json::parse(R"(["1/1","1/1","0/1"])"));
    CHECK(report["witness"]["violation"] == "12/1");
}

TEST_CASE("wire formats round trip and errors name the offending field") {
    CHECK(scalar_from_json<Rational>(json::parse(R"("3/2")"), "entry") ==
          fraction<Rational>(3, 2));
    CHECK(scalar_from_json<Rational>(json(5), "entry") == Rational(5));
    CHECK(scalar_from_json<double>(json(0.25), "entry") == 0.25);
    CHECK(scalar_from_json<double>(json::parse(R"("1/4")"), "entry") == 0.25);

    try {
        scalar_from_json<Rational>(json(0.5), "generators[0][0][1]");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("generators[0][0][1]") != std::string::npos);
    }

    Mat2<Rational> m{Rational(1), fraction<Rational>(-3, 7), Rational(0), Rational(2)};
    CHECK(mat2_from_json<Rational>(mat2_to_json(m), "m") == m);

    QuadraticForm<Rational> q{Rational(1), Rational(-1), Rational(2)};
    CHECK(form_from_json<Rational>(gram_to_json(q), "gram") == q);
    CHECK_THROWS_AS(form_from_json<Rational>(json::parse("[[1, 2], [3, 4]]"), "gram"),
                    parse_error);

    GroupSpec<Rational> spec = group_spec_from_json<Rational>(
        json::parse(kC4Spec), "input");
    CHECK(spec.generators.size() == 1);
    CHECK(spec.closure_limit == 4096);
    std::string h1 = group_spec_hash(spec);
    CHECK(h1 == group_spec_hash(spec));
    GroupSpec<Rational> other = spec;
    other.closure_limit = 64;
    CHECK(h1 != group_spec_hash(other));
}

TEST_CASE("patch builtin sphere and Gram-file inputs succeed") {
    fs::path output = workspace() / "sphere_report.json";
    cli::RunConfig cfg = base_config("patch");
    cfg.builtin = "sphere";
    cfg.dimension = 4;
    cfg.output_path = output.string();
    REQUIRE(cli::run(cfg) == cli::kExitOk);
    json sphere = read_json(output);
    CHECK(sphere["status"] == "ok");
    CHECK(sphere["gram"][0][0] == "1/1");
    CHECK(sphere["gram"][0][1] == "0/1");

    fs::path gram = write_file(
        "gram3.json",
        R"({"scalar": "rational", "gram": [[2, 1, 0], [1, 2, 1], [0, 1, 3]]})");
    fs::path gram_out = workspace() / "gram3_report.json";
    cli::RunConfig file_cfg = base_config("patch");
    file_cfg.input_path = gram.string();
    file_cfg.output_path = gram_out.string();
    REQUIRE(cli::run(file_cfg) == cli::kExitOk);
    json recovered = read_json(gram_out);
    CHECK(recovered["status"] == "ok");
    CHECK(recovered["gram"][1][0] == "1/1");
    CHECK(recovered["gram"][2][2] == "3/1");

    fs::path indefinite = write_file(
        "gram_indef.json",
        R"({"scalar": "rational", "gram": [[1, 0], [0, -1]]})");
    file_cfg.input_path = indefinite.string();
    file_cfg.output_path.clear();
    CHECK(cli::run(file_cfg) == cli::kExitRejected);
}
