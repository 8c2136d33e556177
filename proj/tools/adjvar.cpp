#include <iostream>

#include <CLI11.hpp>

#include "adjvar/pipeline.hpp"

int main(int argc, char** argv) {
    using adjvar::RunConfig;
    CLI::App app{"adjvar: partisanship and consistency analysis of adjudication records"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(adjvar::kToolVersion));

    RunConfig cfg;
    const auto common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", cfg.input, "Proceedings CSV");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        sub->add_option("--output-dir", cfg.output_dir, "Directory for artifacts and manifest.json")
            ->capture_default_str();
        sub->add_option("--mapping", cfg.mapping, "Column mapping file")->check(CLI::ExistingFile);
        sub->add_option("--administrations", cfg.administrations, "Administrations table CSV")
            ->check(CLI::ExistingFile);
        sub->add_option("--state-votes", cfg.state_votes, "State election results CSV")->check(CLI::ExistingFile);
        sub->add_option("--seed", cfg.seed, "Root random seed")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
    };
    const auto scoring = [&](CLI::App* sub) {
        sub->add_flag("--judge-weighted", cfg.judge_weighted, "Average omega over judges rather than proceedings");
    };
    const auto correlate = [&](CLI::App* sub) {
        sub->add_option("--prune-threshold", cfg.prune_threshold, "Absolute Pearson cut-off for pruning")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        sub->add_option("--alpha", cfg.alpha, "Family-wise significance level")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        sub->add_option("--targets", cfg.targets, "Targets among gamma, phi, president_party")->capture_default_str();
        sub->add_option("--replicates", cfg.replicates, "Bagged forest replicates")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--sample-size", cfg.sample_size, "Rows per replicate")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--trees", cfg.trees, "Trees per forest")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--tree-samples", cfg.tree_sample_cap, "Bootstrap rows per tree (0 = all)")
            ->capture_default_str();
    };
    const auto trend = [&](CLI::App* sub) {
        sub->add_option("--changepoint-scale", cfg.changepoint_scale, "Prior scale on trend changes")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seasonality-scale", cfg.seasonality_scale, "Prior scale on yearly seasonality")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_flag("--count-weighted-weeks", cfg.count_weighted_weeks, "Weight weeks by proceeding count");
        sub->add_flag_callback("--no-grid", [&] { cfg.grid = false; }, "Skip the cross-validated scale grid");
        sub->add_flag("--svg", cfg.svg, "Also write SVG charts");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a proceedings CSV");
    common(ingest, true);
    auto* describe = app.add_subcommand("describe", "Yearly volume, grant and representation summaries");
    common(describe, true);
    auto* score = app.add_subcommand("score", "Partisanship and consistency scores");
    common(score, true);
    scoring(score);
    auto* corr = app.add_subcommand("correlate", "Bagged forest importances and Spearman tests");
    common(corr, true);
    scoring(corr);
    correlate(corr);
    auto* predict = app.add_subcommand("predict", "Decision prediction from score features");
    common(predict, true);
    scoring(predict);
    auto* tr = app.add_subcommand("trend", "Weekly partisanship trend decomposition");
    common(tr, true);
    scoring(tr);
    trend(tr);
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus");
    common(simulate, false);
    simulate->add_option("--scenario", cfg.scenario, "Scenario file")->check(CLI::ExistingFile);
    auto* report = app.add_subcommand("report", "Run every analysis stage");
    common(report, true);
    scoring(report);
    correlate(report);
    trend(report);

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    const int rc = adjvar::run_pipeline(cfg, std::cerr);
    if (rc == 0) std::cout << "wrote " << cfg.output_dir << "/manifest.json\n";
    return rc;
}
