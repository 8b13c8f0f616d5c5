// Apache License, Version 2.0, refer to LICENSE.txt
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "../src/errors.hpp"
#include "../src/learn.hpp"
#include "../src/rng.hpp"
#include "synth.hpp"
#include "temp_dir.hpp"

using namespace mistweet;

namespace {

double audit_gini(double np, double nn) {
    const double n = np + nn;
    if (n <= 0.0) return 0.0;
    const double a = np / n;
    const double b = nn / n;
    return 1.0 - a * a - b * b;
}

struct BruteSplit {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();
};

// Exhaustive brute force: every feature, every midpoint between adjacent
// distinct values, children re-counted from scratch for every candidate.
// Candidate order is feature then threshold ascending with strict improvement,
// the documented tie-break.
BruteSplit brute_best_split(const LabeledDataset& d, const std::vector<std::size_t>& idx) {
    BruteSplit best;
    const std::size_t p = d.x.front().size();
    const double n = static_cast<double>(idx.size());
    for (std::size_t f = 0; f < p; ++f) {
        std::vector<double> vals;
        for (std::size_t i : idx) vals.push_back(d.x[i][f]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t v = 0; v + 1 < vals.size(); ++v) {
            double t = (vals[v] + vals[v + 1]) / 2.0;
            if (!(t > vals[v] && t < vals[v + 1])) t = vals[v];
            double lp = 0, ln = 0, rp = 0, rn = 0;
            for (std::size_t i : idx) {
                if (d.x[i][f] <= t) {
                    lp += d.y[i];
                    ln += 1.0 - d.y[i];
                } else {
                    rp += d.y[i];
                    rn += 1.0 - d.y[i];
                }
            }
            const double score =
                ((lp + ln) * audit_gini(lp, ln) + (rp + rn) * audit_gini(rp, rn)) / n;
            if (score < best.score) {
                best.feature = static_cast<int>(f);
                best.threshold = t;
                best.score = score;
            }
        }
    }
    return best;
}

// Recursively verifies one trained node: class counts, stop legality, and
// Gini optimality of the recorded split against the brute-force scan.
void audit_node(const LabeledDataset& d, const TreeModel& m, int node_id,
                const std::vector<std::size_t>& idx, int depth) {
    REQUIRE(node_id >= 0);
    REQUIRE(static_cast<std::size_t>(node_id) < m.nodes.size());
    const TreeNode& nd = m.nodes[static_cast<std::size_t>(node_id)];
    double np = 0.0;
    for (std::size_t i : idx) np += d.y[i];
    CHECK(nd.n_pos == np);
    CHECK(nd.n_neg == static_cast<double>(idx.size()) - np);

    const bool pure = np == 0.0 || np == static_cast<double>(idx.size());
    if (nd.feature < 0) {
        const bool depth_stop = m.max_depth > 0 && depth >= m.max_depth;
        const bool size_stop = static_cast<int>(idx.size()) < m.min_samples_split;
        const bool splittable = brute_best_split(d, idx).feature >= 0;
        CHECK((pure || depth_stop || size_stop || !splittable));
        return;
    }
    CHECK_FALSE(pure);
    if (m.max_depth > 0) CHECK(depth < m.max_depth);
    CHECK(static_cast<int>(idx.size()) >= m.min_samples_split);

    const BruteSplit want = brute_best_split(d, idx);
    CHECK(nd.feature == want.feature);
    CHECK(nd.threshold == want.threshold);

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
        (d.x[i][static_cast<std::size_t>(nd.feature)] <= nd.threshold ? left : right).push_back(i);
    }
    CHECK_FALSE(left.empty());
    CHECK_FALSE(right.empty());
    audit_node(d, m, nd.left, left, depth + 1);
    audit_node(d, m, nd.right, right, depth + 1);
}

void audit_tree(const LabeledDataset& d, const TreeModel& m) {
    std::vector<std::size_t> idx(d.x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    audit_node(d, m, 0, idx, 0);
}

bool same_nodes(const std::vector<TreeNode>& a, const std::vector<TreeNode>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].feature != b[i].feature || a[i].threshold != b[i].threshold ||
            a[i].left != b[i].left || a[i].right != b[i].right || a[i].n_pos != b[i].n_pos ||
            a[i].n_neg != b[i].n_neg)
            return false;
    }
    return true;
}

// Independent z-score kNN sharing the production arithmetic shape so that
// matching neighbor sets give an identical probability.
double oracle_knn(const LabeledDataset& train, const std::vector<double>& q, int k) {
    const std::size_t n = train.x.size();
    const std::size_t p = train.x.front().size();
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);
    for (const auto& row : train.x)
        for (std::size_t j = 0; j < p; ++j) sd[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < p; ++j) sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (!(sd[j] > 0.0)) continue;
            const double diff = (train.x[i][j] - mean[j]) / sd[j] - (q[j] - mean[j]) / sd[j];
            d2 += diff * diff;
        }
        dist.emplace_back(d2, i);
    }
    std::sort(dist.begin(), dist.end());
    double pos = 0.0;
    for (int i = 0; i < k; ++i) pos += train.y[dist[static_cast<std::size_t>(i)].second];
    return pos / static_cast<double>(k);
}

LabeledDataset tiny_dataset(std::vector<std::vector<double>> x, std::vector<int> y,
                            std::vector<std::string> names) {
    LabeledDataset d;
    d.x = std::move(x);
    d.y = std::move(y);
    d.feature_names = std::move(names);
    for (std::size_t i = 0; i < d.y.size(); ++i) d.ids.push_back("t" + std::to_string(i));
    return d;
}

}  // namespace

TEST_CASE("train_tree picks the Gini-optimal split at every node") {
    Rng rng(404u);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 10 + static_cast<std::size_t>(rng.below(50));
        const std::size_t p = 2 + static_cast<std::size_t>(rng.below(4));
        LabeledDataset d = rep % 2 == 0 ? synth::grid_dataset(n, p, 4, 1000u + rep)
                                        : synth::two_gaussians(n, p, 1, 1.5, 2000u + rep);
        const int max_depth = rep % 3 == 0 ? 3 : 0;
        const int mss = rep % 4 == 0 ? 5 : 2;
        TreeModel m = train_tree(d, max_depth, mss, 1u);
        REQUIRE_FALSE(m.nodes.empty());
        audit_tree(d, m);
    }
}

TEST_CASE("train_tree collapses single-class data to one leaf") {
    LabeledDataset d = tiny_dataset({{1.0}, {2.0}, {3.0}}, {1, 1, 1}, {"f0"});
    TreeModel m = train_tree(d, 0, 2, 1u);
    REQUIRE(m.nodes.size() == 1);
    CHECK(m.nodes[0].feature == -1);
    CHECK(predict_proba(m, {9.9}) == 1.0);
}

TEST_CASE("train_tree validates its dataset") {
    CHECK_THROWS_WITH_AS(train_tree(LabeledDataset{}, 0, 2, 1u), "empty dataset", InputError);
    LabeledDataset bad_label = tiny_dataset({{1.0}, {2.0}}, {0, 2}, {"f0"});
    CHECK_THROWS_WITH_AS(train_tree(bad_label, 0, 2, 1u), "labels must be 0 or 1", InputError);
    LabeledDataset ragged = tiny_dataset({{1.0}, {2.0, 3.0}}, {0, 1}, {"f0"});
    CHECK_THROWS_WITH_AS(train_tree(ragged, 0, 2, 1u), "ragged feature matrix", InputError);
    LabeledDataset mismatch = tiny_dataset({{1.0}, {2.0}}, {0, 1}, {"f0", "f1"});
    CHECK_THROWS_WITH_AS(train_tree(mismatch, 0, 2, 1u),
                         "feature_names do not match the matrix width", InputError);
    LabeledDataset ok = tiny_dataset({{1.0}, {2.0}}, {0, 1}, {"f0"});
    CHECK_THROWS_WITH_AS(train_tree(ok, -1, 2, 1u), "max_depth must be >= 0", InputError);
}

TEST_CASE("a degenerate forest reproduces the plain tree exactly") {
    LabeledDataset d = synth::grid_dataset(40, 3, 4, 77u);
    TreeModel tree = train_tree(d, 0, 2, 123u);
    // One tree, no bootstrap, all features per split: the randomness is inert.
    ForestModel forest = train_forest(d, ForestVariant::RandomForest, 1, 3, 999u, 0, 2, false, 1);
    REQUIRE(forest.trees.size() == 1);
    CHECK(same_nodes(tree.nodes, forest.trees[0].nodes));
}

TEST_CASE("train_forest is reproducible and thread-count independent") {
    LabeledDataset d = synth::two_gaussians(60, 5, 2, 1.5, 88u);
    ForestModel a = train_forest(d, ForestVariant::RandomForest, 8, 0, 42u, 0, 2, std::nullopt, 1);
    ForestModel b = train_forest(d, ForestVariant::RandomForest, 8, 0, 42u, 0, 2, std::nullopt, 4);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t)
        CHECK(same_nodes(a.trees[t].nodes, b.trees[t].nodes));
    // floor(sqrt(5)) = 2 when features_per_split is defaulted.
    CHECK(a.features_per_split == 2);
    CHECK(a.bootstrap);

    ForestModel xt = train_forest(d, ForestVariant::ExtraTrees, 3, 0, 42u);
    CHECK_FALSE(xt.bootstrap);
    ForestModel xt_boot =
        train_forest(d, ForestVariant::ExtraTrees, 3, 0, 42u, 0, 2, true, 1);
    CHECK(xt_boot.bootstrap);

    CHECK_THROWS_WITH_AS(train_forest(d, ForestVariant::Bagging, 0, 0, 1u),
                         "n_trees must be >= 1", InputError);
}

TEST_CASE("predict_proba walks splits and reports leaf shares") {
    TreeModel m;
    m.n_features = 1;
    TreeNode root;
    root.feature = 0;
    root.threshold = 0.5;
    root.left = 1;
    root.right = 2;
    root.n_pos = 3;
    root.n_neg = 3;
    TreeNode left;
    left.n_pos = 3;
    left.n_neg = 1;
    TreeNode right;
    right.n_pos = 0;
    right.n_neg = 2;
    m.nodes = {root, left, right};
    CHECK(predict_proba(m, {0.5}) == 0.75);  // boundary goes left
    CHECK(predict_proba(m, {0.51}) == 0.0);

    CHECK_THROWS_WITH_AS(predict_proba(m, {1.0, 2.0}),
                         "feature count mismatch: got 2, model expects 1", InputError);
    TreeModel empty;
    empty.n_features = 1;
    CHECK_THROWS_WITH_AS(predict_proba(empty, {1.0}), "empty model", InputError);
    TreeModel hollow = m;
    hollow.nodes[1].n_pos = 0;
    hollow.nodes[1].n_neg = 0;
    CHECK_THROWS_WITH_AS(predict_proba(hollow, {0.0}), "model node covers missing",
                         PreconditionError);

    ForestModel no_trees;
    CHECK_THROWS_WITH_AS(predict_proba(no_trees, {1.0}), "empty model", InputError);
}

TEST_CASE("knn_predict matches the brute-force z-score oracle") {
    LabeledDataset train = synth::two_gaussians(30, 4, 2, 1.0, 3030u);
    Rng rng(606u);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> q(4);
        for (auto& v : q) v = synth::gaussian(rng);
        for (int k : {1, 3, 5}) {
            CHECK(knn_predict(train, q, k) == oracle_knn(train, q, k));
        }
    }
}

TEST_CASE("knn_predict drops constant columns and breaks ties to lower rows") {
    LabeledDataset train = synth::two_gaussians(20, 3, 1, 1.0, 11u);
    LabeledDataset padded = train;
    padded.feature_names.push_back("flat");
    for (auto& row : padded.x) row.push_back(7.0);
    std::vector<double> q = {0.1, -0.2, 0.3};
    std::vector<double> qp = q;
    qp.push_back(7.0);
    std::vector<int> dropped;
    const double with_pad = knn_predict(padded, qp, 3, &dropped);
    CHECK(with_pad == knn_predict(train, q, 3));
    CHECK(dropped == std::vector<int>{3});

    // Two zero-distance neighbors with opposite labels: row 0 wins at k=1.
    LabeledDataset dup = tiny_dataset({{0.0, 0.0}, {0.0, 0.0}, {5.0, 5.0}, {6.0, 6.0}},
                                      {1, 0, 0, 1}, {"a", "b"});
    CHECK(knn_predict(dup, {0.0, 0.0}, 1) == 1.0);

    CHECK_THROWS_WITH_AS(knn_predict(train, {1.0}, 3),
                         "feature count mismatch: got 1, training data has 3", InputError);
    CHECK_THROWS_WITH_AS(knn_predict(train, q, 0), "k must be >= 1", InputError);
    CHECK_THROWS_WITH_AS(knn_predict(train, q, 21), "k exceeds the training size",
                         PreconditionError);
}

TEST_CASE("evaluate reproduces the worked confusion and rank statistics") {
    EvalMetrics m = evaluate({1, 1, 0, 0}, {0.9, 0.4, 0.6, 0.1});
    CHECK(m.accuracy == 0.5);
    CHECK(m.precision == 0.5);
    CHECK(m.recall == 0.5);
    CHECK(m.f1 == 0.5);
    REQUIRE(m.auc.has_value());
    CHECK(*m.auc == 0.75);
    CHECK(m.n == 4);

    // All probabilities tied: midranks give chance-level AUC exactly.
    EvalMetrics tied = evaluate({1, 0}, {0.5, 0.5});
    REQUIRE(tied.auc.has_value());
    CHECK(*tied.auc == 0.5);

    // Probability equal to the threshold classifies as positive.
    CHECK(evaluate({1}, {0.5}).accuracy == 1.0);
    CHECK_FALSE(evaluate({1}, {0.5}).auc.has_value());

    EvalMetrics perfect = evaluate({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9});
    CHECK(perfect.accuracy == 1.0);
    CHECK(*perfect.auc == 1.0);

    CHECK_THROWS_WITH_AS(evaluate({1}, {0.5, 0.5}), "evaluate: length mismatch", InputError);
    CHECK_THROWS_WITH_AS(evaluate({}, {}), "evaluate: empty input", InputError);
    CHECK_THROWS_WITH_AS(evaluate({2}, {0.5}), "labels must be 0 or 1", InputError);
}

TEST_CASE("fit_predict routes each spec to the matching trainer") {
    LabeledDataset d = synth::two_gaussians(40, 4, 2, 1.5, 55u);
    std::vector<std::vector<double>> rows(d.x.begin(), d.x.begin() + 5);

    ModelSpec dt;
    dt.kind = ModelSpec::Kind::DecisionTree;
    TreeModel tree = train_tree(d, dt.max_depth, dt.min_samples_split, 9u);
    std::vector<double> via_spec = fit_predict(d, rows, dt, 9u);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(via_spec[i] == predict_proba(tree, rows[i]));

    ModelSpec knn;
    knn.kind = ModelSpec::Kind::Knn;
    knn.knn_k = 3;
    std::vector<double> knn_probs = fit_predict(d, rows, knn, 1u);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(knn_probs[i] == knn_predict(d, rows[i], 3));

    // xt is a single extra-tree; the forest equivalent has one tree.
    ModelSpec xt;
    xt.kind = ModelSpec::Kind::ExtraTree;
    ForestModel one = train_forest(d, ForestVariant::ExtraTrees, 1, xt.features_per_split, 9u,
                                   xt.max_depth, xt.min_samples_split);
    std::vector<double> xt_probs = fit_predict(d, rows, xt, 9u);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(xt_probs[i] == predict_proba(one, rows[i]));
}

TEST_CASE("cross_validate stratifies folds and pools out-of-fold predictions") {
    LabeledDataset d = synth::grid_dataset(24, 3, 5, 909u);
    ModelSpec spec;
    spec.kind = ModelSpec::Kind::DecisionTree;
    CvResult r = cross_validate(d, spec, 4, 17u);
    REQUIRE(r.folds.size() == 4);
    std::int64_t total = 0;
    for (const auto& f : r.folds) total += f.n;
    CHECK(total == 24);
    CHECK(r.pooled.n == 24);
    CHECK(r.mean.n == 24);

    CvResult again = cross_validate(d, spec, 4, 17u);
    CHECK(r.pooled.accuracy == again.pooled.accuracy);
    for (std::size_t f = 0; f < 4; ++f)
        CHECK(r.folds[f].accuracy == again.folds[f].accuracy);
    CvResult threaded = cross_validate(d, spec, 4, 17u, 3);
    CHECK(r.pooled.accuracy == threaded.pooled.accuracy);

    // More folds than class members: surplus folds are marked with n = 0.
    LabeledDataset four = tiny_dataset({{0.0}, {1.0}, {2.0}, {3.0}}, {0, 1, 0, 1}, {"f0"});
    CvResult sparse = cross_validate(four, spec, 4, 5u);
    CHECK(sparse.pooled.n == 4);
    int skipped = 0;
    for (const auto& f : sparse.folds) skipped += f.n == 0 ? 1 : 0;
    CHECK(skipped == 2);
}

TEST_CASE("cross_validate guards fold shapes") {
    LabeledDataset d = synth::grid_dataset(12, 2, 3, 2u);
    ModelSpec spec;
    spec.kind = ModelSpec::Kind::DecisionTree;
    CHECK_THROWS_WITH_AS(cross_validate(d, spec, 1, 1u), "cross_validate: folds must be >= 2",
                         InputError);
    CHECK_THROWS_WITH_AS(cross_validate(d, spec, 13, 1u), "cross_validate: more folds than rows",
                         PreconditionError);

    LabeledDataset lopsided = tiny_dataset(
        {{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}}, {0, 0, 0, 0, 0, 1}, {"f0"});
    CHECK_THROWS_WITH_AS(
        cross_validate(lopsided, spec, 2, 1u),
        "cross_validate: training fold missing a class (class too small for stratification)",
        PreconditionError);
}

TEST_CASE("cross_validate recovers a strong planted signal") {
    LabeledDataset d = synth::two_gaussians(200, 6, 3, 2.0, 31u);
    ModelSpec rf;
    rf.kind = ModelSpec::Kind::RandomForest;
    rf.n_trees = 60;
    CvResult r = cross_validate(d, rf, 3, 7u, 2);
    CHECK(r.mean.accuracy >= 0.9);
    REQUIRE(r.pooled.auc.has_value());
    CHECK(*r.pooled.auc >= 0.95);
}

TEST_CASE("balance_dataset downsamples the majority class in place") {
    LabeledDataset d = tiny_dataset(
        {{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {6.0}}, {1, 1, 1, 1, 1, 0, 0}, {"f0"});
    LabeledDataset b = balance_dataset(d, 9u);
    CHECK(b.x.size() == 4);
    int pos = 0;
    for (int v : b.y) pos += v;
    CHECK(pos == 2);
    // Row order is preserved, so ids stay ascending.
    CHECK(std::is_sorted(b.ids.begin(), b.ids.end(),
                         [](const std::string& a, const std::string& c) { return a < c; }));
    LabeledDataset again = balance_dataset(d, 9u);
    CHECK(b.x == again.x);
    CHECK(b.ids == again.ids);

    LabeledDataset single = tiny_dataset({{0.0}, {1.0}}, {1, 1}, {"f0"});
    CHECK_THROWS_WITH_AS(balance_dataset(single, 1u), "balance_dataset: both classes required",
                         PreconditionError);
}

TEST_CASE("select_features keeps the original column order") {
    LabeledDataset d = tiny_dataset({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}}, {0, 1}, {"a", "b", "c"});
    LabeledDataset s = select_features(d, {"c", "a"});
    CHECK(s.feature_names == std::vector<std::string>{"a", "c"});
    CHECK(s.x == std::vector<std::vector<double>>{{1.0, 3.0}, {4.0, 6.0}});
    CHECK(s.y == d.y);
    CHECK(s.ids == d.ids);

    CHECK_THROWS_WITH_AS(select_features(d, {"zz"}), "select_features: unknown feature 'zz'",
                         InputError);
    CHECK_THROWS_WITH_AS(select_features(d, {}), "select_features: no features kept", InputError);
    LabeledDataset unnamed = d;
    unnamed.feature_names.clear();
    CHECK_THROWS_WITH_AS(select_features(unnamed, {"a"}),
                         "select_features: dataset has no feature names", InputError);
}

TEST_CASE("split_dataset rounds the per-class test share to nearest") {
    LabeledDataset d;
    d.feature_names = {"f0"};
    for (int i = 0; i < 10; ++i) {
        d.x.push_back({static_cast<double>(i)});
        d.y.push_back(1);
        d.ids.push_back("p" + std::to_string(i));
    }
    for (int i = 0; i < 5; ++i) {
        d.x.push_back({static_cast<double>(100 + i)});
        d.y.push_back(0);
        d.ids.push_back("n" + std::to_string(i));
    }
    auto [train, test] = split_dataset(d, 0.2, 3u);
    // round(10 * 0.2) = 2 positives, round(5 * 0.2) = 1 negative.
    int test_pos = 0;
    for (int v : test.y) test_pos += v;
    CHECK(test.y.size() == 3);
    CHECK(test_pos == 2);
    CHECK(train.y.size() == 12);
    CHECK(train.feature_names == d.feature_names);

    CHECK_THROWS_WITH_AS(split_dataset(d, 0.0, 1u),
                         "split_dataset: test_fraction must be in (0, 1)", InputError);
    LabeledDataset thin = tiny_dataset({{0.0}, {1.0}, {2.0}}, {1, 0, 0}, {"f0"});
    CHECK_THROWS_WITH_AS(split_dataset(thin, 0.5, 1u),
                         "split_dataset: class 'misleading' has fewer than 2 rows",
                         PreconditionError);
}

TEST_CASE("model JSON round-trips trees and forests bit-for-bit") {
    ScopedDir dir("models");
    LabeledDataset d = synth::two_gaussians(50, 4, 2, 1.5, 21u);

    TreeModel tree = train_tree(d, 4, 2, 77u);
    const std::string tree_path = dir.file("tree.json");
    save_model_json(tree, d.feature_names, tree_path);
    LoadedModel lt = load_model_json(tree_path);
    CHECK_FALSE(lt.is_forest);
    CHECK(lt.feature_names == d.feature_names);
    CHECK(same_nodes(lt.tree.nodes, tree.nodes));

    ForestModel forest = train_forest(d, ForestVariant::ExtraTrees, 5, 2, 99u);
    const std::string forest_path = dir.file("forest.json");
    save_model_json(forest, d.feature_names, forest_path);
    LoadedModel lf = load_model_json(forest_path);
    CHECK(lf.is_forest);
    CHECK(lf.forest.variant == ForestVariant::ExtraTrees);
    REQUIRE(lf.forest.trees.size() == 5);
    for (std::size_t t = 0; t < 5; ++t)
        CHECK(same_nodes(lf.forest.trees[t].nodes, forest.trees[t].nodes));
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(predict_proba(lf, d.x[i]) == predict_proba(forest, d.x[i]));
}

TEST_CASE("load_model_json refuses bad files with precise messages") {
    ScopedDir dir("badmodels");
    CHECK_THROWS_WITH_AS(load_model_json(dir.file("nope.json")),
                         ("model not found: " + dir.file("nope.json")).c_str(), InputError);

    auto write_and_load = [&](const std::string& name, const std::string& body) {
        dir.write(name, body);
        return load_model_json(dir.file(name));
    };
    CHECK_THROWS_AS(write_and_load("garbage.json", "{not json"), InputError);
    CHECK_THROWS_WITH_AS(write_and_load("new.json", R"({"schema_version": 2})"),
                         "artifact schema_version 2 newer than supported 1", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("nover.json", R"({"type": "tree"})"),
                         "model JSON: missing schema_version", InputError);

    const std::string head = R"({"schema_version":1,"type":"tree","n_features":1,)"
                             R"("feature_names":["a"],"max_depth":0,"min_samples_split":2,)"
                             R"("seed":0,"nodes":)";
    CHECK_THROWS_WITH_AS(write_and_load("cycle.json", head + "[[0,0.5,0,1,1,1]]}"),
                         "model JSON: malformed tree structure", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("leafkid.json", head + "[[-1,0,0,1,1,1]]}"),
                         "model JSON: leaf with children", InputError);
    CHECK_THROWS_WITH_AS(
        write_and_load("orphan.json", head + "[[-1,0,-1,-1,1,1],[-1,0,-1,-1,1,1]]}"),
        "model JSON: unreachable node", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("empty.json", head + "[]}"),
                         "model JSON: empty node list", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("short.json", head + "[[-1,0,-1,-1,1]]}"),
                         "model JSON: node entries must have 6 fields", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("range.json", head + "[[5,0.5,1,2,1,1]]}"),
                         "model JSON: split feature out of range", InputError);
    CHECK_THROWS_WITH_AS(write_and_load("cover.json", head + "[[-1,0,-1,-1,0,0]]}"),
                         "model JSON: node covers missing or invalid", InputError);
    CHECK_THROWS_WITH_AS(
        write_and_load("kind.json",
                       R"({"schema_version":1,"type":"stump","n_features":1,)"
                       R"("feature_names":["a"]})"),
        "model JSON: unknown type 'stump'", InputError);
}

TEST_CASE("variant and model kind names round-trip") {
    for (ForestVariant v :
         {ForestVariant::RandomForest, ForestVariant::ExtraTrees, ForestVariant::Bagging})
        CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_WITH_AS(parse_variant("jungle"), "unknown forest variant 'jungle'", InputError);

    for (ModelSpec::Kind k :
         {ModelSpec::Kind::DecisionTree, ModelSpec::Kind::ExtraTree, ModelSpec::Kind::RandomForest,
          ModelSpec::Kind::ExtraTrees, ModelSpec::Kind::Bagging, ModelSpec::Kind::Knn})
        CHECK(parse_model_kind(model_kind_name(k)) == k);
    CHECK_THROWS_WITH_AS(parse_model_kind("svm"), "unknown model kind 'svm'", InputError);

    CHECK(feature_name_vector().size() == kFeatureCount);
    CHECK(feature_name_vector().front() == "stop_words");
    CHECK(feature_name_vector().back() == "hashtag_count");
}
