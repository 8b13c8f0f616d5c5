// Apache License, Version 2.0, refer to LICENSE.txt
#include "learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace mistweet {

using nlohmann::ordered_json;

std::vector<std::string> feature_name_vector() {
    std::vector<std::string> out;
    out.reserve(kFeatureCount);
    for (auto name : kFeatureNames) out.emplace_back(name);
    return out;
}

std::string_view variant_name(ForestVariant v) {
    switch (v) {
        case ForestVariant::RandomForest: return "random_forest";
        case ForestVariant::ExtraTrees: return "extra_trees";
        case ForestVariant::Bagging: return "bagging";
    }
    throw InternalError("variant_name: unknown variant");
}

ForestVariant parse_variant(std::string_view name) {
    if (name == "random_forest") return ForestVariant::RandomForest;
    if (name == "extra_trees") return ForestVariant::ExtraTrees;
    if (name == "bagging") return ForestVariant::Bagging;
    throw InputError("unknown forest variant '" + std::string(name) + "'");
}

std::string_view model_kind_name(ModelSpec::Kind kind) {
    switch (kind) {
        case ModelSpec::Kind::DecisionTree: return "dt";
        case ModelSpec::Kind::ExtraTree: return "xt";
        case ModelSpec::Kind::RandomForest: return "rf";
        case ModelSpec::Kind::ExtraTrees: return "xts";
        case ModelSpec::Kind::Bagging: return "bagging";
        case ModelSpec::Kind::Knn: return "knn";
    }
    throw InternalError("model_kind_name: unknown kind");
}

ModelSpec::Kind parse_model_kind(std::string_view name) {
    if (name == "dt") return ModelSpec::Kind::DecisionTree;
    if (name == "xt") return ModelSpec::Kind::ExtraTree;
    if (name == "rf") return ModelSpec::Kind::RandomForest;
    if (name == "xts") return ModelSpec::Kind::ExtraTrees;
    if (name == "bagging") return ModelSpec::Kind::Bagging;
    if (name == "knn") return ModelSpec::Kind::Knn;
    throw InputError("unknown model kind '" + std::string(name) + "'");
}

std::vector<double> feature_row(const SyntacticProfile& profile, const SentimentScore& sentiment,
                                const EmotionScores& emotions, std::size_t hashtag_count) {
    std::vector<double> row(kFeatureCount, 0.0);
    row[0] = static_cast<double>(profile.stop_words);
    row[1] = static_cast<double>(profile.pronouns);
    row[2] = static_cast<double>(profile.nouns);
    row[3] = static_cast<double>(profile.adjectives);
    row[4] = profile.avg_token_length;
    row[5] = static_cast<double>(profile.wh_words);
    row[6] = static_cast<double>(profile.adverbs);
    row[7] = static_cast<double>(profile.conjunctions);
    row[8] = static_cast<double>(profile.verbs);
    row[9] = static_cast<double>(profile.determiners);
    row[10] = profile.ttr;
    row[11] = sentiment.compound;
    const auto hot = one_hot_emotion(emotions);
    for (std::size_t e = 0; e < hot.size(); ++e) row[12 + e] = hot[e];
    row[17] = static_cast<double>(hashtag_count);
    return row;
}

BuildResult build_feature_matrix(const Corpus& corpus,
                                 const std::vector<std::optional<SyntacticProfile>>& profiles,
                                 const std::vector<std::optional<SentimentScore>>& sentiments,
                                 const std::vector<std::optional<EmotionScores>>& emotions) {
    const std::size_t n = corpus.records.size();
    if (profiles.size() != n || sentiments.size() != n || emotions.size() != n)
        throw InputError("build_feature_matrix: artifact vectors misaligned with the corpus");
    BuildResult out;
    out.data.feature_names = feature_name_vector();
    for (std::size_t i = 0; i < n; ++i) {
        const TweetRecord& rec = corpus.records[i];
        if (rec.label == Label::Unlabeled) continue;
        if (!profiles[i] || !sentiments[i] || !emotions[i]) {
            out.skipped.push_back(rec.id);
            continue;
        }
        out.data.x.push_back(
            feature_row(*profiles[i], *sentiments[i], *emotions[i], rec.hashtags.size()));
        out.data.y.push_back(rec.label == Label::Misleading ? 1 : 0);
        out.data.ids.push_back(rec.id);
    }
    if (out.data.x.empty())
        throw PreconditionError("build_feature_matrix: no labeled rows with complete features");
    return out;
}

namespace {

void validate_dataset(const LabeledDataset& data) {
    if (data.x.empty()) throw InputError("empty dataset");
    if (data.y.size() != data.x.size()) throw InputError("row/label count mismatch");
    const std::size_t p = data.x.front().size();
    if (p == 0) throw InputError("dataset has no feature columns");
    for (const auto& row : data.x)
        if (row.size() != p) throw InputError("ragged feature matrix");
    if (!data.feature_names.empty() && data.feature_names.size() != p)
        throw InputError("feature_names do not match the matrix width");
    for (int v : data.y)
        if (v != 0 && v != 1) throw InputError("labels must be 0 or 1");
}

double gini_impurity(double np, double nn) {
    const double n = np + nn;
    if (n <= 0.0) return 0.0;
    const double a = np / n;
    const double b = nn / n;
    return 1.0 - a * a - b * b;
}

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();  // weighted child impurity
};

enum class SplitMode { Exhaustive, RandomThreshold };

struct TreeBuilder {
    const std::vector<std::vector<double>>& x;
    const std::vector<int>& y;
    int p = 0;
    int max_depth = 0;
    int min_samples_split = 2;
    SplitMode mode = SplitMode::Exhaustive;
    int features_per_split = 0;  // 0 = consider every feature, no sampling
    Rng* rng = nullptr;
    std::vector<TreeNode> nodes;

    std::vector<int> candidate_features() {
        std::vector<int> feats;
        if (features_per_split <= 0 || features_per_split >= p) {
            feats.resize(static_cast<std::size_t>(p));
            std::iota(feats.begin(), feats.end(), 0);
            return feats;
        }
        std::unordered_set<int> seen;
        while (static_cast<int>(feats.size()) < features_per_split) {
            const int f = static_cast<int>(rng->below(static_cast<std::uint64_t>(p)));
            if (seen.insert(f).second) feats.push_back(f);
        }
        std::sort(feats.begin(), feats.end());
        return feats;
    }

    // Exhaustive midpoint scan; features and thresholds ascending with strict
    // improvement, so ties resolve to the lowest feature then threshold.
    bool find_exhaustive(const std::vector<std::size_t>& idx, const std::vector<int>& feats,
                         SplitCandidate& best) {
        const double n = static_cast<double>(idx.size());
        std::vector<std::pair<double, int>> vals(idx.size());
        for (int f : feats) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                vals[i] = {x[idx[i]][static_cast<std::size_t>(f)], y[idx[i]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double total_pos = 0.0;
            for (const auto& v : vals) total_pos += v.second;
            double left_pos = 0.0, left_n = 0.0;
            std::size_t i = 0;
            while (i < vals.size()) {
                const double v = vals[i].first;
                while (i < vals.size() && vals[i].first == v) {
                    left_pos += vals[i].second;
                    left_n += 1.0;
                    ++i;
                }
                if (i == vals.size()) break;
                const double next = vals[i].first;
                double t = (v + next) / 2.0;
                if (!(t > v && t < next)) t = v;  // adjacent representable values
                const double right_n = n - left_n;
                const double right_pos = total_pos - left_pos;
                const double score = (left_n * gini_impurity(left_pos, left_n - left_pos) +
                                      right_n * gini_impurity(right_pos, right_n - right_pos)) /
                                     n;
                if (score < best.score) {
                    best.feature = f;
                    best.threshold = t;
                    best.score = score;
                }
            }
        }
        return best.feature >= 0;
    }

    // One uniform threshold per non-constant candidate feature, drawn in
    // ascending feature order so the stream is reproducible.
    bool find_random(const std::vector<std::size_t>& idx, const std::vector<int>& feats,
                     SplitCandidate& best) {
        const double n = static_cast<double>(idx.size());
        for (int f : feats) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t i : idx) {
                const double v = x[i][static_cast<std::size_t>(f)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (!(lo < hi)) continue;
            const double u = rng->uniform();
            double t = lo + u * (hi - lo);
            if (!(t < hi)) t = lo;
            double left_pos = 0.0, left_n = 0.0, total_pos = 0.0;
            for (std::size_t i : idx) {
                total_pos += y[i];
                if (x[i][static_cast<std::size_t>(f)] <= t) {
                    left_pos += y[i];
                    left_n += 1.0;
                }
            }
            const double right_n = n - left_n;
            const double right_pos = total_pos - left_pos;
            const double score = (left_n * gini_impurity(left_pos, left_n - left_pos) +
                                  right_n * gini_impurity(right_pos, right_n - right_pos)) /
                                 n;
            if (score < best.score) {
                best.feature = f;
                best.threshold = t;
                best.score = score;
            }
        }
        return best.feature >= 0;
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        double np = 0.0;
        for (std::size_t i : idx) np += y[i];
        const double nn = static_cast<double>(idx.size()) - np;
        const int node_id = static_cast<int>(nodes.size());
        TreeNode node;
        node.n_pos = np;
        node.n_neg = nn;
        nodes.push_back(node);
        const bool pure = np == 0.0 || nn == 0.0;
        const bool depth_stop = max_depth > 0 && depth >= max_depth;
        const bool size_stop = static_cast<int>(idx.size()) < min_samples_split;
        if (pure || depth_stop || size_stop) return node_id;
        SplitCandidate best;
        const std::vector<int> feats = candidate_features();
        const bool found = mode == SplitMode::Exhaustive ? find_exhaustive(idx, feats, best)
                                                         : find_random(idx, feats, best);
        if (!found) return node_id;
        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            if (x[i][static_cast<std::size_t>(best.feature)] <= best.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        if (left.empty() || right.empty()) return node_id;  // defensive, cannot trigger
        idx.clear();
        idx.shrink_to_fit();
        const int left_id = build(left, depth + 1);
        const int right_id = build(right, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].feature = best.feature;
        nodes[static_cast<std::size_t>(node_id)].threshold = best.threshold;
        nodes[static_cast<std::size_t>(node_id)].left = left_id;
        nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

TreeModel train_tree(const LabeledDataset& data, int max_depth, int min_samples_split,
                     std::uint64_t seed) {
    validate_dataset(data);
    if (max_depth < 0) throw InputError("max_depth must be >= 0");
    if (min_samples_split < 2) min_samples_split = 2;
    TreeBuilder b{data.x, data.y};
    b.p = static_cast<int>(data.x.front().size());
    b.max_depth = max_depth;
    b.min_samples_split = min_samples_split;
    std::vector<std::size_t> idx(data.x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    b.build(idx, 0);
    TreeModel m;
    m.nodes = std::move(b.nodes);
    m.seed = seed;
    m.n_features = b.p;
    m.max_depth = max_depth;
    m.min_samples_split = min_samples_split;
    return m;
}

ForestModel train_forest(const LabeledDataset& data, ForestVariant variant, int n_trees,
                         int features_per_split, std::uint64_t master_seed, int max_depth,
                         int min_samples_split, std::optional<bool> bootstrap, int threads) {
    validate_dataset(data);
    if (n_trees < 1) throw InputError("n_trees must be >= 1");
    if (max_depth < 0) throw InputError("max_depth must be >= 0");
    if (min_samples_split < 2) min_samples_split = 2;
    const int p = static_cast<int>(data.x.front().size());
    int fps = features_per_split;
    if (fps <= 0) fps = static_cast<int>(std::floor(std::sqrt(static_cast<double>(p))));
    fps = std::clamp(fps, 1, p);
    const bool use_bootstrap = bootstrap.value_or(variant != ForestVariant::ExtraTrees);
    const SplitMode mode =
        variant == ForestVariant::ExtraTrees ? SplitMode::RandomThreshold : SplitMode::Exhaustive;
    const int builder_fps = variant == ForestVariant::Bagging ? 0 : fps;

    ForestModel fm;
    fm.variant = variant;
    fm.n_trees = n_trees;
    fm.features_per_split = fps;
    fm.n_features = p;
    fm.bootstrap = use_bootstrap;
    fm.master_seed = master_seed;
    fm.max_depth = max_depth;
    fm.min_samples_split = min_samples_split;
    fm.trees.resize(static_cast<std::size_t>(n_trees));
    const std::size_t n = data.x.size();
    parallel_for(static_cast<std::size_t>(n_trees), threads, [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(master_seed, t);
        Rng rng(tree_seed);
        std::vector<std::size_t> idx;
        idx.reserve(n);
        if (use_bootstrap) {
            for (std::size_t i = 0; i < n; ++i) idx.push_back(rng.below(n));
        } else {
            idx.resize(n);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
        }
        TreeBuilder b{data.x, data.y};
        b.p = p;
        b.max_depth = max_depth;
        b.min_samples_split = min_samples_split;
        b.mode = mode;
        b.features_per_split = builder_fps;
        b.rng = &rng;
        b.build(idx, 0);
        TreeModel& m = fm.trees[t];
        m.nodes = std::move(b.nodes);
        m.seed = tree_seed;
        m.n_features = p;
        m.max_depth = max_depth;
        m.min_samples_split = min_samples_split;
    });
    return fm;
}

double predict_proba(const TreeModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.n_features)
        throw InputError("feature count mismatch: got " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(model.n_features));
    if (model.nodes.empty()) throw InputError("empty model");
    std::size_t node = 0;
    std::size_t steps = 0;
    while (model.nodes[node].feature >= 0) {
        const TreeNode& nd = model.nodes[node];
        node = static_cast<std::size_t>(
            x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
        if (++steps > model.nodes.size()) throw InternalError("tree walk did not terminate");
    }
    const TreeNode& leaf = model.nodes[node];
    const double total = leaf.n_pos + leaf.n_neg;
    if (total <= 0.0) throw PreconditionError("model node covers missing");
    return leaf.n_pos / total;
}

double predict_proba(const ForestModel& model, const std::vector<double>& x) {
    if (model.trees.empty()) throw InputError("empty model");
    double sum = 0.0;
    for (const auto& t : model.trees) sum += predict_proba(t, x);
    return sum / static_cast<double>(model.trees.size());
}

double knn_predict(const LabeledDataset& train, const std::vector<double>& x, int k,
                   std::vector<int>* dropped_columns) {
    validate_dataset(train);
    const std::size_t n = train.x.size();
    const std::size_t p = train.x.front().size();
    if (x.size() != p)
        throw InputError("feature count mismatch: got " + std::to_string(x.size()) +
                         ", training data has " + std::to_string(p));
    if (k < 1) throw InputError("k must be >= 1");
    if (static_cast<std::size_t>(k) > n) throw PreconditionError("k exceeds the training size");

    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - mean[j];
            sd[j] += d * d;
        }
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < p; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
        if (sd[j] > 0.0)
            kept.push_back(j);
        else if (dropped_columns != nullptr)
            dropped_columns->push_back(static_cast<int>(j));
    }
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t j : kept) {
            const double d = (train.x[i][j] - mean[j]) / sd[j] - (x[j] - mean[j]) / sd[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    std::sort(dist.begin(), dist.end());
    double pos = 0.0;
    for (int i = 0; i < k; ++i) pos += train.y[dist[static_cast<std::size_t>(i)].second];
    return pos / static_cast<double>(k);
}

EvalMetrics evaluate(const std::vector<int>& y_true, const std::vector<double>& y_prob,
                     double threshold) {
    if (y_true.size() != y_prob.size()) throw InputError("evaluate: length mismatch");
    if (y_true.empty()) throw InputError("evaluate: empty input");
    for (int v : y_true)
        if (v != 0 && v != 1) throw InputError("labels must be 0 or 1");
    const std::size_t n = y_true.size();
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int pred = y_prob[i] >= threshold ? 1 : 0;
        if (y_true[i] == 1 && pred == 1) ++tp;
        else if (y_true[i] == 0 && pred == 1) ++fp;
        else if (y_true[i] == 0 && pred == 0) ++tn;
        else ++fn;
    }
    auto safe_div = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
    const double p1 = safe_div(tp, tp + fp);
    const double r1 = safe_div(tp, tp + fn);
    const double p0 = safe_div(tn, tn + fn);
    const double r0 = safe_div(tn, tn + fp);
    EvalMetrics m;
    m.n = static_cast<std::int64_t>(n);
    m.accuracy = (tp + tn) / static_cast<double>(n);
    m.precision = (p0 + p1) / 2.0;
    m.recall = (r0 + r1) / 2.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    const double npos = tp + fn;
    const double nneg = tn + fp;
    if (npos > 0.0 && nneg > 0.0) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return y_prob[a] < y_prob[b]; });
        double rank_pos = 0.0;
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && y_prob[order[j]] == y_prob[order[i]]) ++j;
            const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (std::size_t t = i; t < j; ++t)
                if (y_true[order[t]] == 1) rank_pos += midrank;
            i = j;
        }
        m.auc = (rank_pos - npos * (npos + 1.0) / 2.0) / (npos * nneg);
    }
    return m;
}

std::vector<double> fit_predict(const LabeledDataset& train,
                                const std::vector<std::vector<double>>& rows,
                                const ModelSpec& spec, std::uint64_t seed, int threads) {
    std::vector<double> out;
    out.reserve(rows.size());
    switch (spec.kind) {
        case ModelSpec::Kind::Knn:
            for (const auto& r : rows) out.push_back(knn_predict(train, r, spec.knn_k));
            return out;
        case ModelSpec::Kind::DecisionTree: {
            const TreeModel m = train_tree(train, spec.max_depth, spec.min_samples_split, seed);
            for (const auto& r : rows) out.push_back(predict_proba(m, r));
            return out;
        }
        default: {
            ForestVariant variant = ForestVariant::RandomForest;
            int n_trees = spec.n_trees;
            if (spec.kind == ModelSpec::Kind::ExtraTree) {
                variant = ForestVariant::ExtraTrees;
                n_trees = 1;
            } else if (spec.kind == ModelSpec::Kind::ExtraTrees) {
                variant = ForestVariant::ExtraTrees;
            } else if (spec.kind == ModelSpec::Kind::Bagging) {
                variant = ForestVariant::Bagging;
            }
            const ForestModel m =
                train_forest(train, variant, n_trees, spec.features_per_split, seed,
                             spec.max_depth, spec.min_samples_split, std::nullopt, threads);
            for (const auto& r : rows) out.push_back(predict_proba(m, r));
            return out;
        }
    }
}

namespace {

struct FoldOutcome {
    std::vector<std::size_t> test_idx;
    std::vector<double> probs;
};

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

CvResult cross_validate(const LabeledDataset& data, const ModelSpec& spec, int folds,
                        std::uint64_t seed, int threads) {
    validate_dataset(data);
    if (folds < 2) throw InputError("cross_validate: folds must be >= 2");
    const std::size_t n = data.x.size();
    if (static_cast<std::size_t>(folds) > n)
        throw PreconditionError("cross_validate: more folds than rows");

    std::vector<int> fold_of(n, -1);
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (data.y[i] == cls) members.push_back(i);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(members);
        const std::size_t len = members.size();
        for (int f = 0; f < folds; ++f) {
            const std::size_t lo = len * static_cast<std::size_t>(f) / static_cast<std::size_t>(folds);
            const std::size_t hi =
                len * (static_cast<std::size_t>(f) + 1) / static_cast<std::size_t>(folds);
            for (std::size_t j = lo; j < hi; ++j) fold_of[members[j]] = f;
        }
    }

    std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(folds));
    parallel_for(static_cast<std::size_t>(folds), threads, [&](std::size_t f) {
        LabeledDataset train;
        train.feature_names = data.feature_names;
        std::vector<std::vector<double>> test_rows;
        FoldOutcome& oc = outcomes[f];
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of[i] == static_cast<int>(f)) {
                oc.test_idx.push_back(i);
                test_rows.push_back(data.x[i]);
            } else {
                train.x.push_back(data.x[i]);
                train.y.push_back(data.y[i]);
                if (!data.ids.empty()) train.ids.push_back(data.ids[i]);
            }
        }
        if (oc.test_idx.empty()) return;  // tiny class chunking can leave a fold empty
        bool has0 = false, has1 = false;
        for (int v : train.y) (v == 1 ? has1 : has0) = true;
        if (!has0 || !has1)
            throw PreconditionError(
                "cross_validate: training fold missing a class (class too small for "
                "stratification)");
        oc.probs = fit_predict(train, test_rows, spec,
                               derive_seed(seed, 100 + static_cast<std::uint64_t>(f)), 1);
    });

    CvResult res;
    std::vector<int> pooled_y;
    std::vector<double> pooled_p;
    std::vector<double> accs, precs, recs, f1s, aucs, auc_present;
    for (std::size_t f = 0; f < outcomes.size(); ++f) {
        const FoldOutcome& oc = outcomes[f];
        if (oc.test_idx.empty()) {
            res.folds.push_back(EvalMetrics{});  // n = 0 marks a skipped fold
            continue;
        }
        std::vector<int> yt;
        for (std::size_t i : oc.test_idx) {
            yt.push_back(data.y[i]);
            pooled_y.push_back(data.y[i]);
        }
        for (double v : oc.probs) pooled_p.push_back(v);
        const EvalMetrics m = evaluate(yt, oc.probs);
        res.folds.push_back(m);
        accs.push_back(m.accuracy);
        precs.push_back(m.precision);
        recs.push_back(m.recall);
        f1s.push_back(m.f1);
        if (m.auc) aucs.push_back(*m.auc);
    }
    res.mean.accuracy = mean_of(accs);
    res.mean.precision = mean_of(precs);
    res.mean.recall = mean_of(recs);
    res.mean.f1 = mean_of(f1s);
    if (!aucs.empty()) res.mean.auc = mean_of(aucs);
    res.mean.n = static_cast<std::int64_t>(pooled_y.size());
    res.stddev.accuracy = sample_stddev(accs);
    res.stddev.precision = sample_stddev(precs);
    res.stddev.recall = sample_stddev(recs);
    res.stddev.f1 = sample_stddev(f1s);
    if (!aucs.empty()) res.stddev.auc = sample_stddev(aucs);
    res.pooled = evaluate(pooled_y, pooled_p);
    return res;
}

LabeledDataset balance_dataset(const LabeledDataset& data, std::uint64_t seed) {
    validate_dataset(data);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.y.size(); ++i) (data.y[i] == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw PreconditionError("balance_dataset: both classes required");
    std::vector<std::size_t>& major = pos.size() >= neg.size() ? pos : neg;
    const std::size_t keep = std::min(pos.size(), neg.size());
    Rng rng(seed);
    rng.shuffle(major);
    major.resize(keep);
    std::vector<std::size_t> kept;
    kept.reserve(2 * keep);
    kept.insert(kept.end(), pos.begin(), pos.end());
    kept.insert(kept.end(), neg.begin(), neg.end());
    std::sort(kept.begin(), kept.end());
    LabeledDataset out;
    out.feature_names = data.feature_names;
    for (std::size_t i : kept) {
        out.x.push_back(data.x[i]);
        out.y.push_back(data.y[i]);
        if (!data.ids.empty()) out.ids.push_back(data.ids[i]);
    }
    return out;
}

LabeledDataset select_features(const LabeledDataset& data, const std::vector<std::string>& kept) {
    validate_dataset(data);
    if (data.feature_names.empty())
        throw InputError("select_features: dataset has no feature names");
    if (kept.empty()) throw InputError("select_features: no features kept");
    std::unordered_set<std::string> want(kept.begin(), kept.end());
    for (const auto& name : kept)
        if (std::find(data.feature_names.begin(), data.feature_names.end(), name) ==
            data.feature_names.end())
            throw InputError("select_features: unknown feature '" + name + "'");
    std::vector<std::size_t> cols;
    LabeledDataset out;
    for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
        if (want.count(data.feature_names[j]) > 0) {
            cols.push_back(j);
            out.feature_names.push_back(data.feature_names[j]);
        }
    }
    out.y = data.y;
    out.ids = data.ids;
    out.x.reserve(data.x.size());
    for (const auto& row : data.x) {
        std::vector<double> r;
        r.reserve(cols.size());
        for (std::size_t j : cols) r.push_back(row[j]);
        out.x.push_back(std::move(r));
    }
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data,
                                                        double test_fraction,
                                                        std::uint64_t seed) {
    validate_dataset(data);
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InputError("split_dataset: test_fraction must be in (0, 1)");
    std::vector<bool> to_test(data.y.size(), false);
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.y.size(); ++i)
            if (data.y[i] == cls) members.push_back(i);
        if (members.size() < 2)
            throw PreconditionError(std::string("split_dataset: class '") +
                                    (cls == 1 ? "misleading" : "non-misleading") +
                                    "' has fewer than 2 rows");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(members);
        const std::size_t n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(members.size()) * test_fraction + 0.5));
        for (std::size_t j = 0; j < n_test && j < members.size(); ++j) to_test[members[j]] = true;
    }
    LabeledDataset train, test;
    train.feature_names = data.feature_names;
    test.feature_names = data.feature_names;
    for (std::size_t i = 0; i < data.y.size(); ++i) {
        LabeledDataset& dst = to_test[i] ? test : train;
        dst.x.push_back(data.x[i]);
        dst.y.push_back(data.y[i]);
        if (!data.ids.empty()) dst.ids.push_back(data.ids[i]);
    }
    return {std::move(train), std::move(test)};
}

namespace {

ordered_json nodes_to_json(const std::vector<TreeNode>& nodes) {
    ordered_json arr = ordered_json::array();
    for (const auto& nd : nodes)
        arr.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.n_pos, nd.n_neg});
    return arr;
}

std::vector<TreeNode> nodes_from_json(const ordered_json& arr, int n_features) {
    if (!arr.is_array() || arr.empty()) throw InputError("model JSON: empty node list");
    std::vector<TreeNode> nodes;
    nodes.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 6)
            throw InputError("model JSON: node entries must have 6 fields");
        TreeNode nd;
        nd.feature = e[0].get<int>();
        nd.threshold = e[1].get<double>();
        nd.left = e[2].get<int>();
        nd.right = e[3].get<int>();
        nd.n_pos = e[4].get<double>();
        nd.n_neg = e[5].get<double>();
        if (nd.feature < -1 || nd.feature >= n_features)
            throw InputError("model JSON: split feature out of range");
        if (nd.n_pos < 0.0 || nd.n_neg < 0.0 || nd.n_pos + nd.n_neg <= 0.0)
            throw InputError("model JSON: node covers missing or invalid");
        if (!std::isfinite(nd.threshold)) throw InputError("model JSON: non-finite threshold");
        nodes.push_back(nd);
    }
    const int size = static_cast<int>(nodes.size());
    // Walk the tree once to guarantee a well-formed single-parent structure.
    std::vector<bool> seen(nodes.size(), false);
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        if (cur < 0 || cur >= size || seen[static_cast<std::size_t>(cur)])
            throw InputError("model JSON: malformed tree structure");
        seen[static_cast<std::size_t>(cur)] = true;
        const TreeNode& nd = nodes[static_cast<std::size_t>(cur)];
        if (nd.feature < 0) {
            if (nd.left != -1 || nd.right != -1)
                throw InputError("model JSON: leaf with children");
        } else {
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    for (bool s : seen)
        if (!s) throw InputError("model JSON: unreachable node");
    return nodes;
}

void write_json_file(const ordered_json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump() << '\n';
    if (!out) throw InputError("cannot write " + path);
}

}  // namespace

void save_model_json(const TreeModel& model, const std::vector<std::string>& feature_names,
                     const std::string& path) {
    ordered_json j;
    j["schema_version"] = 1;
    j["type"] = "tree";
    j["n_features"] = model.n_features;
    j["feature_names"] = feature_names;
    j["max_depth"] = model.max_depth;
    j["min_samples_split"] = model.min_samples_split;
    j["seed"] = model.seed;
    j["nodes"] = nodes_to_json(model.nodes);
    write_json_file(j, path);
}

void save_model_json(const ForestModel& model, const std::vector<std::string>& feature_names,
                     const std::string& path) {
    ordered_json j;
    j["schema_version"] = 1;
    j["type"] = "forest";
    j["variant"] = std::string(variant_name(model.variant));
    j["n_features"] = model.n_features;
    j["feature_names"] = feature_names;
    j["n_trees"] = model.n_trees;
    j["features_per_split"] = model.features_per_split;
    j["bootstrap"] = model.bootstrap;
    j["max_depth"] = model.max_depth;
    j["min_samples_split"] = model.min_samples_split;
    j["seed"] = model.master_seed;
    ordered_json trees = ordered_json::array();
    for (const auto& t : model.trees) {
        ordered_json tj;
        tj["seed"] = t.seed;
        tj["nodes"] = nodes_to_json(t.nodes);
        trees.push_back(std::move(tj));
    }
    j["trees"] = std::move(trees);
    write_json_file(j, path);
}

LoadedModel load_model_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("model not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid model JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw InputError("model JSON: not an object");
        if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
            throw InputError("model JSON: missing schema_version");
        const std::int64_t ver = j["schema_version"].get<std::int64_t>();
        if (ver > 1)
            throw InputError("artifact schema_version " + std::to_string(ver) +
                             " newer than supported 1");
        const std::string type = j.at("type").get<std::string>();
        LoadedModel lm;
        const int n_features = j.at("n_features").get<int>();
        if (n_features < 1) throw InputError("model JSON: n_features must be >= 1");
        lm.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (static_cast<int>(lm.feature_names.size()) != n_features)
            throw InputError("model JSON: feature_names do not match n_features");
        if (type == "tree") {
            lm.is_forest = false;
            lm.tree.n_features = n_features;
            lm.tree.max_depth = j.at("max_depth").get<int>();
            lm.tree.min_samples_split = j.at("min_samples_split").get<int>();
            lm.tree.seed = j.at("seed").get<std::uint64_t>();
            lm.tree.nodes = nodes_from_json(j.at("nodes"), n_features);
        } else if (type == "forest") {
            lm.is_forest = true;
            ForestModel& fm = lm.forest;
            fm.variant = parse_variant(j.at("variant").get<std::string>());
            fm.n_features = n_features;
            fm.n_trees = j.at("n_trees").get<int>();
            fm.features_per_split = j.at("features_per_split").get<int>();
            fm.bootstrap = j.at("bootstrap").get<bool>();
            fm.max_depth = j.at("max_depth").get<int>();
            fm.min_samples_split = j.at("min_samples_split").get<int>();
            fm.master_seed = j.at("seed").get<std::uint64_t>();
            const auto& trees = j.at("trees");
            if (!trees.is_array() || trees.empty())
                throw InputError("model JSON: empty forest");
            if (fm.n_trees != static_cast<int>(trees.size()))
                throw InputError("model JSON: n_trees does not match the tree list");
            for (const auto& tj : trees) {
                TreeModel t;
                t.n_features = n_features;
                t.max_depth = fm.max_depth;
                t.min_samples_split = fm.min_samples_split;
                t.seed = tj.at("seed").get<std::uint64_t>();
                t.nodes = nodes_from_json(tj.at("nodes"), n_features);
                fm.trees.push_back(std::move(t));
            }
        } else {
            throw InputError("model JSON: unknown type '" + type + "'");
        }
        return lm;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid model JSON: ") + e.what());
    }
}

double predict_proba(const LoadedModel& model, const std::vector<double>& x) {
    return model.is_forest ? predict_proba(model.forest, x) : predict_proba(model.tree, x);
}

}  // namespace mistweet
