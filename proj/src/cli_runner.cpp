#include "planekit/cli_runner.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "planekit/complex_structure.hpp"
#include "planekit/form_patch.hpp"
#include "planekit/geometry.hpp"
#include "planekit/serialization.hpp"
#include "planekit/synthesis.hpp"

namespace planekit::cli {
namespace {

constexpr std::size_t kDefaultMaxIterations = 200;
constexpr std::size_t kDefaultPatchTrials = 64;

json load_input(const std::string& path) {
    if (path.empty()) throw parse_error("no input file given (--input)");
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open input file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw parse_error("input file '" + path + "' is not valid JSON: " + e.what());
    }
}

void emit(const json& report, const RunConfig& cfg) {
    std::string payload = report.dump(2) + "\n";
    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw error("cannot write output file '" + cfg.output_path + "'");
        out << payload;
    } else {
        std::cout << payload;
    }
}

/// Translates library errors into the exit-code partition.
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const no_convergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const screen_failed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRejected;
    } catch (const incomplete_closure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRejected;
    } catch (const not_positive_definite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRejected;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kExitInputError;
    }
}

template <class S>
json report_to_json(const QuadraticForm<S>& form, const SynthesisReport<S>& report) {
    json out;
    out["method"] = synth_method_name(report.method);
    out["gram"] = gram_to_json(form);
    out["residual"] = scalar_to_json(report.residual);
    out["iterations"] = report.iterations;
    if (report.contraction_ratio) out["contraction_ratio"] = *report.contraction_ratio;
    out["positive_definite"] = is_positive_definite(form);
    return out;
}

template <class S>
json complex_structure_json(const QuadraticForm<S>& form, const WedgeForm<S>& wedge) {
    try {
        ComplexStructure<S> cs = derive_j(form, wedge);
        json out;
        out["j"] = mat2_to_json(cs.j);
        out["orientation"] = cs.orientation;
        out["wedge_constant"] = scalar_to_json(wedge.constant());
        return out;
    } catch (const irrational_normalizer& e) {
        json out;
        out["error"] = e.what();
        return out;
    }
}

template <class S>
S cli_tolerance(const RunConfig& cfg) {
    return S(cfg.tolerance);
}

template <class S>
int run_synth_impl(const RunConfig& cfg, const json& input) {
    GroupSpec<S> spec = group_spec_from_json<S>(input, "input");
    if (cfg.closure_limit) spec.closure_limit = *cfg.closure_limit;
    const std::string spec_hash = group_spec_hash(spec);

    const QuadraticForm<S> q0{S(1), S(0), S(2)};
    const WedgeForm<S> wedge{S(1)};
    const S tol = cli_tolerance<S>(cfg);

    std::vector<std::string> methods;
    if (cfg.method == "all") {
        methods = {"averaging", "contraction", "algebraic"};
    } else {
        methods = {cfg.method};
    }

    bool needs_closure = cfg.method != "contraction";
    GroupClosure<S> closure;
    if (needs_closure) closure = close_group(spec);

    json certificate;
    std::vector<std::pair<std::string, QuadraticForm<S>>> outputs;
    json method_reports;
    for (const std::string& name : methods) {
        QuadraticForm<S> form;
        SynthesisReport<S> report;
        if (name == "averaging") {
            std::tie(form, report) = synth_averaging(closure, q0);
        } else if (name == "contraction") {
            std::tie(form, report) = synth_contraction(spec, q0, tol, kDefaultMaxIterations);
        } else {
            std::tie(form, report) = synth_algebraic(closure, wedge);
        }
        outputs.emplace_back(name, form);
        method_reports[name] = report_to_json(form, report);
        std::cout << "synth " << name << ": gram " << to_string(form.gram()) << ", residual "
                  << scalar_to_string(report.residual) << "\n";
    }

    if (methods.size() == 1) {
        certificate = method_reports[methods.front()];
    } else {
        certificate["methods"] = method_reports;
        // Cross-check: for irreducible groups the invariant forms make a
        // one-dimensional cone, so all three outputs must be positive
        // multiples of one another.
        const S ratio_tol = scalar_traits<S>::is_exact ? S(0) : S(1e-8);
        bool irreducible = is_irreducible(closure);
        json cross;
        cross["irreducible"] = irreducible;
        if (irreducible) {
            bool all_proportional = true;
            json ratios;
            for (std::size_t i = 1; i < outputs.size(); ++i) {
                auto ratio =
                    proportionality_ratio(outputs[0].second, outputs[i].second, ratio_tol);
                ratios[outputs[i].first + "_over_" + outputs[0].first] =
                    ratio ? scalar_to_json(*ratio) : json(nullptr);
                if (!ratio) all_proportional = false;
            }
            cross["pairwise_proportional"] = all_proportional;
            cross["ratios"] = ratios;
            std::cout << "cross-check: pairwise proportional = "
                      << (all_proportional ? "yes" : "no") << "\n";
        } else {
            cross["pairwise_proportional"] = nullptr;
            cross["note"] = "group has a common real eigenvector; invariant forms are not "
                            "unique up to scale";
        }
        certificate["cross_check"] = cross;
    }

    certificate["scalar"] = scalar_traits<S>::name();
    certificate["input_hash"] = spec_hash;
    certificate["seed"] = cfg.seed;
    certificate["q0"] = gram_to_json(q0);
    if (needs_closure) {
        certificate["group"] = {{"members", closure.size()}, {"complete", closure.complete}};
    }
    certificate["complex_structure"] = complex_structure_json(outputs.back().second, wedge);
    certificate["notes"] = {
        {"line_transitivity",
         "transitivity on 1-dimensional subspaces is not checkable for finite closures; "
         "synthesis needs only boundedness"}};
    emit(certificate, cfg);
    return kExitOk;
}

template <class S>
int run_check_impl(const RunConfig& cfg, const json& input) {
    if (!input.contains("group")) throw parse_error("check input: missing 'group'");
    GroupSpec<S> spec = group_spec_from_json<S>(input["group"], "group");
    if (cfg.closure_limit) spec.closure_limit = *cfg.closure_limit;
    const std::string spec_hash = group_spec_hash(spec);

    QuadraticForm<S> form;
    if (input.contains("gram")) {
        form = form_from_json<S>(input["gram"], "gram");
    } else if (input.contains("certificate")) {
        const json& cert = input["certificate"];
        if (!cert.contains("gram")) throw parse_error("certificate: missing 'gram'");
        form = form_from_json<S>(cert["gram"], "certificate.gram");
        if (cert.contains("input_hash") && cert["input_hash"].get<std::string>() != spec_hash) {
            throw parse_error("certificate.input_hash does not match this group spec; "
                              "the (form, group) pair is mismatched");
        }
    } else {
        throw parse_error("check input: need 'gram' or 'certificate'");
    }

    GroupClosure<S> closure = close_group(spec);
    S residual = invariance_residual(form, closure);
    bool pd = is_positive_definite(form);
    bool invariant = residual <= cli_tolerance<S>(cfg);

    json report;
    report["command"] = "check";
    report["scalar"] = scalar_traits<S>::name();
    report["input_hash"] = spec_hash;
    report["gram"] = gram_to_json(form);
    report["residual"] = scalar_to_json(residual);
    report["positive_definite"] = pd;
    report["invariant"] = invariant;
    report["group"] = {{"members", closure.size()}, {"complete", closure.complete}};
    emit(report, cfg);

    std::cout << "check: residual " << scalar_to_string(residual) << ", positive-definite "
              << (pd ? "yes" : "no") << "\n";
    return (invariant && pd) ? kExitOk : kExitRejected;
}

template <class S>
int run_geom_impl(const RunConfig& cfg, const json& input) {
    json report;
    report["command"] = "geom";
    report["scalar"] = scalar_traits<S>::name();
    bool did_anything = false;

    if (input.contains("ruler")) {
        const json& spec = input["ruler"];
        for (const char* key : {"a", "b", "k", "l", "n"}) {
            if (!spec.contains(key))
                throw parse_error(std::string("ruler: missing '") + key + "'");
        }
        auto index = [&](const char* key) {
            if (!spec[key].is_number_integer())
                throw parse_error(std::string("ruler.") + key + ": expected an integer");
            return spec[key].get<long long>();
        };
        Point<S> a = point_from_json<S>(spec["a"], "ruler.a");
        Point<S> b = point_from_json<S>(spec["b"], "ruler.b");
        Ruler<S> ruler = ruler_between(a, b, index("k"), index("l"), index("n"));
        json points = json::array();
        std::cout << "ruler:";
        for (const auto& p : ruler.points) {
            points.push_back(point_to_json(p));
            std::cout << " " << to_string(p.coords);
        }
        std::cout << "\n";
        report["ruler"] = {{"points", points}, {"valid", is_ruler(ruler.points)}};
        did_anything = true;
    }

    if (input.contains("line")) {
        const json& spec = input["line"];
        Point<S> a = point_from_json<S>(spec.at("a"), "line.a");
        Point<S> b = point_from_json<S>(spec.at("b"), "line.b");
        long long num_bound = spec.value("num_bound", 1LL);
        long long den_bound = spec.value("den_bound", 1LL);
        auto points = rational_line(a, b, num_bound, den_bound);
        json arr = json::array();
        for (const auto& p : points) arr.push_back(point_to_json(p));
        report["line"] = {{"points", arr}, {"count", points.size()}};
        std::cout << "rational line: " << points.size() << " points\n";
        did_anything = true;
    }

    if (input.contains("parallelogram")) {
        const json& quad = input["parallelogram"];
        if (!quad.is_array() || quad.size() != 4)
            throw parse_error("parallelogram: expected an array of 4 points");
        bool verdict = is_parallelogram(
            point_from_json<S>(quad[0], "parallelogram[0]"),
            point_from_json<S>(quad[1], "parallelogram[1]"),
            point_from_json<S>(quad[2], "parallelogram[2]"),
            point_from_json<S>(quad[3], "parallelogram[3]"));
        report["parallelogram"] = {{"is_parallelogram", verdict}};
        std::cout << "parallelogram: " << (verdict ? "yes" : "no") << "\n";
        did_anything = true;
    }

    if (input.contains("chart_check")) {
        const json& spec = input["chart_check"];
        Vec2<S> anchor = vec2_from_json<S>(spec.at("anchor"), "chart_check.anchor");
        if (!spec.contains("samples") || !spec["samples"].is_array())
            throw parse_error("chart_check.samples: expected an array of points");
        std::vector<Point<S>> samples;
        for (std::size_t i = 0; i < spec["samples"].size(); ++i)
            samples.push_back(point_from_json<S>(spec["samples"][i],
                                                 "chart_check.samples[" + std::to_string(i) + "]"));
        GroupSpec<S> gspec = group_spec_from_json<S>(spec.at("group"), "chart_check.group");
        GroupClosure<S> closure = close_group(gspec);
        ChartMapReport<S> chart = check_chart_maps(samples, anchor, closure);
        report["chart_check"] = {{"middle_preserved", chart.middle_preserved},
                                 {"length_preserved", chart.length_preserved},
                                 {"passed", chart.passed()},
                                 {"counterexample", chart.counterexample}};
        std::cout << "chart maps: " << (chart.passed() ? "pass" : "fail") << "\n";
        did_anything = true;
    }

    if (!did_anything)
        throw parse_error("geom input: need at least one of 'ruler', 'line', 'parallelogram', "
                          "'chart_check'");
    emit(report, cfg);
    return kExitOk;
}

template <class S>
FormEvaluator<S> builtin_evaluator(const std::string& name, std::size_t dim) {
    if (name == "quartic") {
        return {dim, [](const VecN<S>& v) {
                    S total(0);
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        S sq = S(v[i] * v[i]);
                        total = S(total + sq * sq);
                    }
                    return total;
                }};
    }
    if (name == "sphere") {
        return {dim, [](const VecN<S>& v) {
                    S total(0);
                    for (std::size_t i = 0; i < v.size(); ++i) total = S(total + v[i] * v[i]);
                    return total;
                }};
    }
    throw parse_error("builtin: expected 'quartic' or 'sphere', got '" + name + "'");
}

template <class S>
int run_patch_impl(const RunConfig& cfg, const json* input) {
    FormEvaluator<S> evaluator;
    json source;
    if (!cfg.builtin.empty()) {
        evaluator = builtin_evaluator<S>(cfg.builtin, cfg.dimension);
        source = {{"builtin", cfg.builtin}, {"dimension", cfg.dimension}};
    } else {
        if (!input || !input->contains("gram"))
            throw parse_error("patch input: missing 'gram' (or use --builtin)");
        auto gram = std::make_shared<GramN<S>>(gram_n_from_json<S>((*input)["gram"], "gram"));
        evaluator = {gram->size(), [gram](const VecN<S>& v) { return gram->quadratic(v); }};
        source = {{"dimension", gram->size()}};
    }

    PatchResult<S> result =
        patch_form(evaluator, kDefaultPatchTrials, cli_tolerance<S>(cfg), cfg.seed);

    json report;
    report["command"] = "patch";
    report["scalar"] = scalar_traits<S>::name();
    report["source"] = source;
    report["seed"] = cfg.seed;

    using Status = typename PatchResult<S>::Status;
    if (result.status == Status::ok) {
        report["status"] = "ok";
        report["gram"] = gram_n_to_json(*result.gram);
        report["positive_definite"] = true;
        emit(report, cfg);
        std::cout << "patch: assembled a positive-definite Gram matrix of dimension "
                  << result.gram->size() << "\n";
        return kExitOk;
    }
    if (result.status == Status::not_positive_definite) {
        report["status"] = "not_positive_definite";
        report["gram"] = gram_n_to_json(*result.gram);
        emit(report, cfg);
        std::cout << "patch: input is quadratic but not positive-definite\n";
        return kExitRejected;
    }

    const PatchWitness<S>& w = *result.witness;
    report["status"] = "not_quadratic";
    report["witness"] = {{"kind", patch_failure_name(w.kind)},
                         {"a", vecn_to_json(w.a)},
                         {"b", vecn_to_json(w.b)},
                         {"lambda", scalar_to_json(w.lambda)},
                         {"violation", scalar_to_json(w.violation)},
                         {"replayed_violation", scalar_to_json(replay_witness(evaluator, w))}};
    emit(report, cfg);
    std::cout << "patch: not a quadratic form (witness kind " << patch_failure_name(w.kind)
              << ", violation " << scalar_to_string(w.violation) << ")\n";
    return kExitRejected;
}

} // namespace

int run_synth(const RunConfig& cfg) {
    return guarded([&] {
        if (cfg.method.empty()) throw parse_error("synth needs --method");
        json input = load_input(cfg.input_path);
        if (scalar_kind_from_json(input) == "float") return run_synth_impl<double>(cfg, input);
        return run_synth_impl<Rational>(cfg, input);
    });
}

int run_check(const RunConfig& cfg) {
    return guarded([&] {
        json input = load_input(cfg.input_path);
        if (scalar_kind_from_json(input) == "float") return run_check_impl<double>(cfg, input);
        return run_check_impl<Rational>(cfg, input);
    });
}

int run_geom(const RunConfig& cfg) {
    return guarded([&] {
        json input = load_input(cfg.input_path);
        if (scalar_kind_from_json(input) == "float") return run_geom_impl<double>(cfg, input);
        return run_geom_impl<Rational>(cfg, input);
    });
}

int run_patch(const RunConfig& cfg) {
    return guarded([&] {
        if (!cfg.builtin.empty()) {
            // Builtins run exactly in the rational backend.
            return run_patch_impl<Rational>(cfg, nullptr);
        }
        json input = load_input(cfg.input_path);
        if (scalar_kind_from_json(input) == "float") return run_patch_impl<double>(cfg, &input);
        return run_patch_impl<Rational>(cfg, &input);
    });
}

int run(const RunConfig& cfg) {
    if (cfg.command == "synth") return run_synth(cfg);
    if (cfg.command == "check") return run_check(cfg);
    if (cfg.command == "geom") return run_geom(cfg);
    if (cfg.command == "patch") return run_patch(cfg);
    std::cerr << "error: unknown command '" << cfg.command << "'\n";
    return kExitInputError;
}

} // namespace planekit::cli
