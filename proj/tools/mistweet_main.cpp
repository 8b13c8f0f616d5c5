// Apache License, Version 2.0, refer to LICENSE.txt
#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mistweet.h"

namespace {

// Options funnel into config key/value pairs; a key reaches the library only
// when the flag was actually passed, so library defaults stay in charge.
void add_opt(CLI::App* cmd, std::map<std::string, std::string>& values, const std::string& flag,
          const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&values, key](const std::string& v) { values[key] = v; }, desc);
}

void bind_common(CLI::App* cmd, std::map<std::string, std::string>& values) {
    add_opt(cmd, values, "--out", "out", "output directory (default .)");
    add_opt(cmd, values, "--seed", "seed", "master seed (default 1)");
    add_opt(cmd, values, "--threads", "threads", "worker threads (default 1)");
    add_opt(cmd, values, "--lexicon-dir", "lexicon_dir", "directory of lexicon overrides");
}

void bind_model(CLI::App* cmd, std::map<std::string, std::string>& values) {
    add_opt(cmd, values, "--model", "model", "dt, xt, rf, xts, bagging, or knn (default rf)");
    add_opt(cmd, values, "--trees", "trees", "ensemble size (default 100)");
    add_opt(cmd, values, "--features-per-split", "features_per_split",
         "candidate features per split; 0 = floor(sqrt(p))");
    add_opt(cmd, values, "--max-depth", "max_depth", "tree depth cap; 0 = unlimited");
    add_opt(cmd, values, "--min-samples-split", "min_samples_split",
         "minimum rows to split a node (default 2)");
    add_opt(cmd, values, "--knn-k", "knn_k", "neighbor count for knn (default 5)");
    add_opt(cmd, values, "--folds", "folds", "cross-validation folds (default 5)");
    add_opt(cmd, values, "--features", "features", "comma-separated feature subset");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Characterize and classify misleading vaccination tweets."};
    app.require_subcommand(1);
    app.set_version_flag("--version", mistweet_version());

    std::map<std::string, std::string> values;

    CLI::App* ingest = app.add_subcommand("ingest", "Normalize a corpus into JSONL");
    add_opt(ingest, values, "input", "input", "corpus file (jsonl or csv)");
    add_opt(ingest, values, "--format", "format", "jsonl or csv (default: by extension)");

    CLI::App* analyze =
        app.add_subcommand("analyze", "Extract features and per-class statistics");
    add_opt(analyze, values, "--input", "input", "corpus JSONL (default <out>/corpus.jsonl)");
    add_opt(analyze, values, "--top-words", "top_words", "word list length (default 50)");

    CLI::App* topics = app.add_subcommand("topics", "Fit conditional topic models");
    add_opt(topics, values, "--input", "input", "corpus JSONL (default <out>/corpus.jsonl)");
    add_opt(topics, values, "--k", "k", "topic count (default 5)");
    add_opt(topics, values, "--k-grid", "k_grid", "comma-separated k candidates to search");
    add_opt(topics, values, "--iterations", "iterations", "Gibbs sweeps (default 1000)");
    add_opt(topics, values, "--alpha", "alpha", "Dirichlet alpha; 0 = 50/k");
    add_opt(topics, values, "--beta", "beta", "Dirichlet beta; 0 = 0.01");
    add_opt(topics, values, "--holdout-fraction", "holdout_fraction",
         "held-out share for the k search (default 0.2)");

    CLI::App* train = app.add_subcommand("train", "Cross-validate models and save one");
    bind_model(train, values);
    add_opt(train, values, "--test-fraction", "test_fraction",
         "holdout share for the final fit (default 0.2)");

    CLI::App* explain = app.add_subcommand("explain", "Shapley attributions for a saved model");
    add_opt(explain, values, "--model-path", "model_path", "model file (default <out>/model.json)");

    CLI::App* ablate = app.add_subcommand("ablate", "Re-validate while dropping ranked features");
    add_opt(ablate, values, "--ranking-path", "ranking_path",
         "ranking file (default <out>/shap_ranking.json)");
    bind_model(ablate, values);

    CLI::App* report = app.add_subcommand("report", "Summarize the artifacts in one place");

    for (CLI::App* cmd : {ingest, analyze, topics, train, explain, ablate, report})
        bind_common(cmd, values);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : MISTWEET_INPUT_ERROR;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    mistweet_config* config = mistweet_config_new();
    if (config == nullptr) {
        std::fprintf(stderr, "mistweet: out of memory\n");
        return MISTWEET_INTERNAL_ERROR;
    }
    int rc = MISTWEET_OK;
    for (const auto& [key, value] : values) {
        rc = mistweet_config_set(config, key.c_str(), value.c_str());
        if (rc != MISTWEET_OK) break;
    }
    if (rc == MISTWEET_OK) rc = mistweet_run(name.c_str(), config);
    if (rc != MISTWEET_OK) std::fprintf(stderr, "mistweet: %s\n", mistweet_last_error());
    mistweet_config_free(config);
    return rc;
}
