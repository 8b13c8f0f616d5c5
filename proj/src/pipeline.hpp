// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mistweet {

struct RunConfig {
    std::string input;          // source file; subcommands default to out_dir artifacts
    std::string out_dir = ".";  // created if absent
    std::uint64_t seed = 1;
    int threads = 1;
    std::string lexicon_dir;  // empty = bundled lexicons
    std::string format;       // "", "jsonl", "csv"; empty sniffs the extension

    int k = 5;                 // topic count when k_grid is empty
    std::vector<int> k_grid;   // candidate ks for the held-out grid search
    int iterations = 1000;     // Gibbs sweeps
    double alpha = 0.0;        // <= 0 selects 50/k
    double beta = 0.0;         // <= 0 selects 0.01
    double holdout_fraction = 0.2;  // select_k held-out share

    int folds = 5;
    std::string model = "rf";  // dt|xt|rf|xts|bagging|knn
    int trees = 100;
    int features_per_split = 0;  // 0 = floor(sqrt(p))
    int max_depth = 0;           // 0 = unlimited
    int min_samples_split = 2;
    int knn_k = 5;
    double test_fraction = 0.2;
    std::string features;  // comma-separated feature subset

    int top_words = 50;       // per-class word frequency list length
    std::string model_path;   // explain/ablate model override
    std::string ranking_path;  // ablate ranking override
};

// Builds a config from string key/value pairs; unknown keys and malformed
// values are input errors. Used by the C API boundary.
RunConfig config_from_map(const std::map<std::string, std::string>& kv);

void run_ingest(const RunConfig& config);
void run_analyze(const RunConfig& config);
void run_topics(const RunConfig& config);
void run_train(const RunConfig& config);
void run_explain(const RunConfig& config);
void run_ablate(const RunConfig& config);
void run_report(const RunConfig& config);

void run_subcommand(const std::string& name, const RunConfig& config);

}  // namespace mistweet
