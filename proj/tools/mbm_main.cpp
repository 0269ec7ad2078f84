// mbm: run the Multi-BMBY mechanism on a cap table, verify its guarantees on
// generated instances, or tabulate equal-shares welfare curves.

#include "mbm/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Multi-BMBY ownership restructuring mechanism"};
    app.require_subcommand(1);

    mbm::cli::RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run the mechanism on a cap table");
    run_cmd->add_option("--captable", run.captable, "CSV with header agent_id,share,bid")->required();
    run_cmd->add_option("--mbar", run.m_bar, "Threshold owner count (1 < mbar < n)")->required();
    run_cmd->add_option("--seed", run.seed, "Realize one branch with this seed (fallback: MBM_SEED)");
    run_cmd->add_flag("--expected", run.expected, "Report both branches and expected utilities");
    run_cmd->add_option("--format", run.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    run_cmd->add_flag("--normalize", run.normalize, "Rescale shares that do not sum to one");
    run_cmd->add_flag("--check", run.check, "Run the property oracles on this instance");

    mbm::cli::VerifyOptions verify;
    std::string n_range = "3..6";
    std::string corrupt;
    auto* verify_cmd = app.add_subcommand("verify", "Check mechanism properties on generated instances");
    verify_cmd->add_option("--suite", verify.suite, "budget|ir|sp|group-sp|monotone|efficiency|all");
    verify_cmd->add_option("--instances", verify.instances, "Number of generated instances");
    verify_cmd->add_option("--seed", verify.seed, "Generator seed");
    verify_cmd->add_option("--n-range", n_range, "Agent count range A..B");
    verify_cmd->add_option("--monotone-trials", verify.monotone_trials, "Perturbations per instance");
    verify_cmd->add_option("--group-budget", verify.group_max_evaluations, "Coalition search evaluation cap");
    verify_cmd->add_option("--corrupt", corrupt)->group("");  // negative-control mode for CI

    mbm::cli::WelfareOptions welfare;
    auto* welfare_cmd = app.add_subcommand("welfare", "Equal-shares welfare table as CSV");
    welfare_cmd->add_option("--n-list", welfare.n_list, "Agent counts, e.g. 4,10 or 4..200")->required();
    welfare_cmd->add_option("--alpha-list", welfare.alpha_list, "Retained fractions, e.g. 1/2,0.25, or all")
        ->required();
    welfare_cmd->add_option("--out", welfare.out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mbm::cli::kValidation;
    }

    if (*run_cmd) return mbm::cli::cmd_run(run, std::cout, std::cerr);
    if (*verify_cmd) {
        try {
            std::tie(verify.n_low, verify.n_high) = mbm::cli::parse_n_range(n_range);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return mbm::cli::kValidation;
        }
        if (!corrupt.empty()) {
            verify.corrupt = mbm::parse_corruption(corrupt);
            if (!verify.corrupt) {
                std::cerr << "error: unknown corruption '" << corrupt << "'\n";
                return mbm::cli::kValidation;
            }
        }
        return mbm::cli::cmd_verify(verify, std::cout, std::cerr);
    }
    return mbm::cli::cmd_welfare(welfare, std::cout, std::cerr);
}
