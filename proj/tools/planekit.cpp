#include <CLI11.hpp>

#include "planekit/cli_runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"invariant quadratic forms for bounded 2x2 matrix groups, plane-geometry "
                 "constructions, and n-dimensional quadratic-form patching"};
    app.require_subcommand(1);

    planekit::cli::RunConfig cfg;
    std::size_t closure_limit = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", cfg.input_path, "input JSON file");
        cmd->add_option("--output", cfg.output_path,
                        "write the JSON certificate/report here (stdout when omitted)");
        cmd->add_option("--tol", cfg.tolerance, "numeric tolerance")->capture_default_str();
        cmd->add_option("--seed", cfg.seed, "seed for all sampled randomness")
            ->capture_default_str();
    };

    CLI::App* synth = app.add_subcommand("synth", "synthesize an invariant form for a group spec");
    add_common(synth);
    synth->add_option("--method", cfg.method, "averaging | contraction | algebraic | all")
        ->required()
        ->check(CLI::IsMember({"averaging", "contraction", "algebraic", "all"}));
    synth->add_option("--closure-limit", closure_limit, "override the spec's closure cap");

    CLI::App* check = app.add_subcommand("check", "re-verify a (form, group) pair");
    add_common(check);
    check->add_option("--closure-limit", closure_limit, "override the spec's closure cap");

    CLI::App* geom = app.add_subcommand("geom", "run ruler/line/parallelogram/chart demos");
    add_common(geom);

    CLI::App* patch = app.add_subcommand("patch", "assemble a global Gram matrix from a "
                                                  "plane-quadratic evaluator");
    add_common(patch);
    patch->add_option("--dim", cfg.dimension, "dimension for --builtin evaluators")
        ->capture_default_str();
    patch->add_option("--builtin", cfg.builtin, "quartic | sphere")
        ->check(CLI::IsMember({"quartic", "sphere"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return planekit::cli::kExitInputError;
    }

    if (closure_limit > 0) cfg.closure_limit = closure_limit;
    cfg.command = app.get_subcommands().front()->get_name();
    return planekit::cli::run(cfg);
}
