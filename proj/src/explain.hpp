// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "learn.hpp"
#include "stats.hpp"

namespace mistweet {

struct ShapAttribution {
    std::vector<double> values;  // one per feature
    double base_value = 0.0;     // cover-weighted expectation of the model output
    double prediction = 0.0;
    // efficiency invariant: base_value + sum(values) == prediction within 1e-9
};

// Definitional oracle: enumerates all 2^p feature subsets of the
// cover-weighted conditional value function. p <= 20.
ShapAttribution exact_shapley(const TreeModel& model, const std::vector<double>& x);
ShapAttribution exact_shapley(const ForestModel& model, const std::vector<double>& x);

// Polynomial-time path-dependent algorithm; must equal exact_shapley wherever
// both are defined.
ShapAttribution tree_shap(const TreeModel& model, const std::vector<double>& x);
ShapAttribution tree_shap(const ForestModel& model, const std::vector<double>& x);
ShapAttribution tree_shap(const LoadedModel& model, const std::vector<double>& x);

struct ShapRanking {
    std::vector<int> order;          // feature indices, most important first
    std::vector<double> mean_abs;    // indexed by feature, not by rank
    std::vector<std::string> names;  // aligned with order
};

// Mean |phi| over the dataset rows; ties resolve to the lower feature index
// (the frozen schema order).
ShapRanking shap_ranking(const TreeModel& model, const LabeledDataset& data, int threads = 1);
ShapRanking shap_ranking(const ForestModel& model, const LabeledDataset& data, int threads = 1);
ShapRanking shap_ranking(const LoadedModel& model, const LabeledDataset& data, int threads = 1);

struct AblationRow {
    int cut_rank = -1;        // rank index whose feature starts the dropped tail; -1 = final row
    std::string cut_feature;  // empty on the final all-features row
    std::vector<std::string> dropped;
    bool skipped = false;
    std::string note;
    EvalMetrics mean;
    EvalMetrics stddev;
    EvalMetrics pooled;
};

// Cut at rank c drops that feature and everything ranked below it, then
// retrains via cross-validation; the last row keeps every feature.
std::vector<AblationRow> ablation_run(const LabeledDataset& data, const ShapRanking& ranking,
                                      const ModelSpec& spec, int folds, std::uint64_t seed,
                                      int threads = 1);

struct PairRankingRow {
    std::string a;
    std::string b;
    double abs_corr = 0.0;
    int rank_distance = 0;
};

struct PairRanking {
    std::vector<PairRankingRow> rows;  // |correlation| descending
    std::optional<double> tau;  // Kendall tau-b of (|corr|, -rank_distance); absent if degenerate
};

// Pairs with an undefined correlation (constant columns) are excluded.
PairRanking correlation_vs_ranking(const CorrelationMatrix& corr, const ShapRanking& ranking);

}  // namespace mistweet
