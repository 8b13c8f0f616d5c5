// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affect.hpp"
#include "corpus.hpp"
#include "syntax.hpp"

namespace mistweet {

inline constexpr int kFeatureCount = 18;

// Frozen column order; serialized artifacts and loaded models must agree.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "stop_words",    "pronouns",      "nouns",       "adjectives", "avg_token_length",
    "wh_words",      "adverbs",       "conjunctions", "verbs",      "determiners",
    "ttr",           "sentiment_compound", "emo_happiness", "emo_fear", "emo_anger",
    "emo_surprise",  "emo_sadness",   "hashtag_count"};

std::vector<std::string> feature_name_vector();

struct LabeledDataset {
    std::vector<std::vector<double>> x;
    std::vector<int> y;  // 1 = misleading (positive class), 0 = non-misleading
    std::vector<std::string> feature_names;
    std::vector<std::string> ids;
};

struct BuildResult {
    LabeledDataset data;
    std::vector<std::string> skipped;  // labeled records missing an artifact
};

// One schema row; hashtag_count fills the final column.
std::vector<double> feature_row(const SyntacticProfile& profile, const SentimentScore& sentiment,
                                const EmotionScores& emotions, std::size_t hashtag_count);

// Rows in corpus order; per-record artifact vectors are aligned with
// corpus.records and hold nullopt where extraction failed.
BuildResult build_feature_matrix(const Corpus& corpus,
                                 const std::vector<std::optional<SyntacticProfile>>& profiles,
                                 const std::vector<std::optional<SentimentScore>>& sentiments,
                                 const std::vector<std::optional<EmotionScores>>& emotions);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double n_pos = 0.0;  // training rows reaching this node, per class
    double n_neg = 0.0;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // preorder, root at 0
    std::uint64_t seed = 0;
    int n_features = 0;
    int max_depth = 0;  // 0 = unlimited
    int min_samples_split = 2;
};

enum class ForestVariant { RandomForest, ExtraTrees, Bagging };

std::string_view variant_name(ForestVariant v);
ForestVariant parse_variant(std::string_view name);

struct ForestModel {
    ForestVariant variant = ForestVariant::RandomForest;
    std::vector<TreeModel> trees;
    int n_trees = 0;
    int features_per_split = 0;  // effective value, never 0
    int n_features = 0;
    bool bootstrap = true;
    std::uint64_t master_seed = 0;
    int max_depth = 0;
    int min_samples_split = 2;
};

// CART with Gini impurity; exhaustive midpoint scan; ties broken by lowest
// feature index then lowest threshold. Single-class data yields a one-leaf
// tree.
TreeModel train_tree(const LabeledDataset& data, int max_depth, int min_samples_split,
                     std::uint64_t seed);

// features_per_split <= 0 selects floor(sqrt(p)). bootstrap overrides the
// variant default (on for RandomForest/Bagging, off for ExtraTrees). Per-tree
// seeds derive from master_seed, so results are thread-count independent.
ForestModel train_forest(const LabeledDataset& data, ForestVariant variant, int n_trees,
                         int features_per_split, std::uint64_t master_seed, int max_depth = 0,
                         int min_samples_split = 2,
                         std::optional<bool> bootstrap = std::nullopt, int threads = 1);

double predict_proba(const TreeModel& model, const std::vector<double>& x);
double predict_proba(const ForestModel& model, const std::vector<double>& x);

// Euclidean distance on per-column z-scores from the training statistics;
// constant columns are dropped (indices reported via dropped_columns).
// Distance ties break toward the lower row index.
double knn_predict(const LabeledDataset& train, const std::vector<double>& x, int k,
                   std::vector<int>* dropped_columns = nullptr);

struct EvalMetrics {
    double accuracy = 0.0;
    double precision = 0.0;  // macro over the two classes
    double recall = 0.0;     // macro over the two classes
    double f1 = 0.0;         // harmonic mean of macro precision/recall
    std::optional<double> auc;  // absent when y_true is single-class
    std::int64_t n = 0;
};

// Threshold ties go to the positive class; AUC is the Mann-Whitney rank
// statistic with midranks.
EvalMetrics evaluate(const std::vector<int>& y_true, const std::vector<double>& y_prob,
                     double threshold = 0.5);

struct ModelSpec {
    enum class Kind { DecisionTree, ExtraTree, RandomForest, ExtraTrees, Bagging, Knn };
    Kind kind = Kind::RandomForest;
    int n_trees = 100;
    int features_per_split = 0;  // 0 = floor(sqrt(p))
    int max_depth = 0;           // 0 = unlimited
    int min_samples_split = 2;
    int knn_k = 5;
};

std::string_view model_kind_name(ModelSpec::Kind kind);
ModelSpec::Kind parse_model_kind(std::string_view name);

// Trains the requested model kind (k-NN is lazy) and scores each row.
std::vector<double> fit_predict(const LabeledDataset& train,
                                const std::vector<std::vector<double>>& rows,
                                const ModelSpec& spec, std::uint64_t seed, int threads = 1);

struct CvResult {
    std::vector<EvalMetrics> folds;
    EvalMetrics mean;    // auc averaged over folds where it is defined
    EvalMetrics stddev;  // sample standard deviation (n-1)
    EvalMetrics pooled;  // out-of-fold predictions evaluated together
};

// Stratified seeded-shuffle folds; per-fold model seed derives from (seed,
// fold). A training fold missing a class is an error.
CvResult cross_validate(const LabeledDataset& data, const ModelSpec& spec, int folds,
                        std::uint64_t seed, int threads = 1);

// Downsamples the majority class to the minority count, preserving row order.
LabeledDataset balance_dataset(const LabeledDataset& data, std::uint64_t seed);

// Keeps the named columns in their original order.
LabeledDataset select_features(const LabeledDataset& data, const std::vector<std::string>& kept);

// Stratified split; test gets round(fraction * class size) rows per class.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data,
                                                        double test_fraction, std::uint64_t seed);

void save_model_json(const TreeModel& model, const std::vector<std::string>& feature_names,
                     const std::string& path);
void save_model_json(const ForestModel& model, const std::vector<std::string>& feature_names,
                     const std::string& path);

struct LoadedModel {
    bool is_forest = false;
    TreeModel tree;
    ForestModel forest;
    std::vector<std::string> feature_names;
};

LoadedModel load_model_json(const std::string& path);
double predict_proba(const LoadedModel& model, const std::vector<double>& x);

}  // namespace mistweet
