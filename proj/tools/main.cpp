#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_common(CLI::App* cmd, mpsimd::cli::RunConfig& cfg) {
    cmd->add_option("--prime", cfg.prime, "Preset name or 0x-prefixed modulus")->capture_default_str();
    cmd->add_option("--omega", cfg.omega, "Limb width in bits (1..64)");
    cmd->add_option("--limbs", cfg.limbs, "Number of limbs");
    cmd->add_option("--add-strategy", cfg.add_strategy,
                    "default, none, native-popcount, reduced-popcount:<k> or reduced-saturate:<k>")
        ->capture_default_str();
    cmd->add_option("--backend", cfg.backend, "all, none or a reduction back end")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    cmd->add_option("--presets", cfg.presets_file, "Extra preset file");
}

// Plain key=value config lines land on the root app. Mirror every subcommand
// option there (hidden) and copy values down wherever the command line left
// the subcommand option unset.
void mirror_config_keys(CLI::App& app) {
    for (CLI::App* sub : app.get_subcommands({})) {
        for (const CLI::Option* opt : sub->get_options()) {
            const std::string& name = opt->get_lnames().empty() ? std::string() : opt->get_lnames().front();
            if (name.empty() || name == "help" || app.get_option_no_throw("--" + name)) continue;
            app.add_option("--" + name)->group("")->configurable();
        }
    }
}

void apply_config_keys(CLI::App& app, CLI::App& sub) {
    for (CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty() || opt->count() != 0) continue;
        const CLI::Option* root = app.get_option_no_throw("--" + opt->get_lnames().front());
        if (root == nullptr || root->count() == 0) continue;
        opt->add_result(root->as<std::string>());
        opt->run_callback();
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace mpsimd::cli;
    CLI::App app{"Multi-precision SIMD arithmetic model"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value configuration file");

    RunConfig cfg;
    std::string t_hex, a_hex, b_hex;

    auto* validate = app.add_subcommand("validate", "Check every module against the oracle");
    add_common(validate, cfg);
    validate->add_option("--trials", cfg.trials, "Random trials per suite")->capture_default_str();
    validate->add_flag("--json", cfg.json, "Emit the summary as JSON");
    validate->add_flag("--corrupt-m", cfg.corrupt_m, "Perturb a precomputed constant (self-test of the checks)");

    auto* examples = app.add_subcommand("examples", "Reproduce the worked examples");

    auto* count = app.add_subcommand("count", "Report instruction counts and modeled cycles as JSON");
    add_common(count, cfg);
    count->add_option("--profile", cfg.profile, "all or a cost profile name")->capture_default_str();
    count->add_option("--cost-models", cfg.cost_models_file, "Cost model file replacing the built-ins");

    auto* redc = app.add_subcommand("redc", "Montgomery-reduce one value");
    add_common(redc, cfg);
    redc->add_option("T", t_hex, "Input in hex")->required();

    auto* mulmod = app.add_subcommand("mulmod", "Multiply two residues through the field layer");
    add_common(mulmod, cfg);
    mulmod->add_option("a", a_hex, "First operand in hex")->required();
    mulmod->add_option("b", b_hex, "Second operand in hex")->required();

    auto* bench = app.add_subcommand("bench", "Wall-clock timing of each back end");
    add_common(bench, cfg);
    bench->add_option("--trials", cfg.trials, "Reductions per back end")->capture_default_str();

    mirror_config_keys(app);
    try {
        app.parse(argc, argv);
        for (CLI::App* sub : app.get_subcommands()) apply_config_keys(app, *sub);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*validate) return cmd_validate(cfg, std::cout, std::cerr);
    if (*examples) return cmd_examples(std::cout);
    if (*count) return cmd_count(cfg, std::cout, std::cerr);
    if (*redc) return cmd_redc(cfg, t_hex, std::cout, std::cerr);
    if (*mulmod) return cmd_mulmod(cfg, a_hex, b_hex, std::cout, std::cerr);
    if (*bench) return cmd_bench(cfg, std::cout, std::cerr);
    return kExitConfig;
}
