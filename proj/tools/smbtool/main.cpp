#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "smb/runner.hpp"

int main(int argc, char **argv) {
    CLI::App app{"gauge-fixed lattice Hamiltonian toolkit"};
    app.require_subcommand(1);

    smb::RunOptions opt;
    std::string check_what;
    std::string export_what;

    auto add_common = [&](CLI::App *sub, bool needs_out) {
        sub->add_option("--config", opt.config_path, "JSON configuration file")
            ->required();
        sub->add_option("--out", opt.out_dir,
                        needs_out ? "output directory (overrides config)"
                                  : "output directory override");
        sub->add_option("--tolerance", opt.tolerance,
                        "verification tolerance override");
        sub->add_option("--threads", opt.threads,
                        "parallelism cap for verification sweeps");
        sub->add_flag("--debug-provenance", opt.debug_provenance,
                      "tally every assembled operator term");
    };

    CLI::App *build = app.add_subcommand("build", "assemble and report both "
                                                  "Hamiltonian pieces");
    add_common(build, false);

    CLI::App *check =
        app.add_subcommand("check", "run a verification sweep");
    check
        ->add_option("what", check_what,
                     "which sweep: frames, oracle, or counts")
        ->required()
        ->check(CLI::IsMember({"frames", "oracle", "counts"}));
    add_common(check, false);

    CLI::App *exp =
        app.add_subcommand("export", "write basis, matrix, or catalog files");
    exp->add_option("what", export_what,
                    "which artifact: basis, matrix, or catalog")
        ->required()
        ->check(CLI::IsMember({"basis", "matrix", "catalog"}));
    add_common(exp, true);

    CLI::App *spec = app.add_subcommand(
        "spectrum", "lowest eigenvalues of the assembled Hamiltonian");
    add_common(spec, false);

    CLI::App *res = app.add_subcommand(
        "resources", "term counts and quantum-simulation cost envelopes");
    add_common(res, false);

    CLI11_PARSE(app, argc, argv);

    if (build->parsed())
        opt.command = "build";
    else if (check->parsed())
        opt.command = "check-" + check_what;
    else if (exp->parsed())
        opt.command = "export-" + export_what;
    else if (spec->parsed())
        opt.command = "spectrum";
    else if (res->parsed())
        opt.command = "resources";

    return smb::run(opt, std::cout);
}
