// Apache License, Version 2.0, refer to LICENSE.txt
#include "explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"
#include "parallel.hpp"

namespace mistweet {

namespace {

void require_covers(const TreeModel& model) {
    if (model.nodes.empty()) throw InputError("empty model");
    for (const auto& nd : model.nodes)
        if (nd.n_pos + nd.n_neg <= 0.0) throw PreconditionError("model node covers missing");
}

void require_input(const TreeModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.n_features)
        throw InputError("feature count mismatch: got " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(model.n_features));
}

double node_cover(const TreeNode& nd) { return nd.n_pos + nd.n_neg; }

double leaf_value(const TreeNode& nd) { return nd.n_pos / (nd.n_pos + nd.n_neg); }

// Pascal's triangle; rows are exact in double for every size used here.
const std::vector<double>& binomial_row(int m) {
    static thread_local std::vector<std::vector<double>> rows{{1.0}};
    while (static_cast<int>(rows.size()) <= m) {
        const auto& prev = rows.back();
        std::vector<double> next(prev.size() + 1, 1.0);
        for (std::size_t i = 1; i + 1 < next.size(); ++i) next[i] = prev[i - 1] + prev[i];
        rows.push_back(std::move(next));
    }
    return rows[static_cast<std::size_t>(m)];
}

struct PathFactor {
    int feature = -1;
    double zero = 1.0;  // product of child-cover fractions along the path
    double one = 1.0;   // product of x-follows-this-edge indicators (0 or 1)
};

struct ShapWalker {
    const TreeModel& model;
    const std::vector<double>& x;
    std::vector<PathFactor> factors;        // one entry per unique path feature
    std::unordered_map<int, int> position;  // feature -> index into factors
    std::vector<double> phi;
    double base = 0.0;

    ShapWalker(const TreeModel& m, const std::vector<double>& input)
        : model(m), x(input), phi(static_cast<std::size_t>(m.n_features), 0.0) {}

    void leaf_contribution(double c_leaf) {
        const std::size_t m = factors.size();
        double zero_prod = 1.0;
        for (const auto& f : factors) zero_prod *= f.zero;
        base += c_leaf * zero_prod;
        if (m == 0) return;
        for (const auto& f : factors)
            if (f.one == 0.0 && f.zero == 0.0) return;

        // G(t) = prod_j (zero_j + one_j t); coefficient k weighs subsets of
        // size k among the path features.
        std::vector<double> g{1.0};
        for (const auto& f : factors) {
            std::vector<double> next(g.size() + 1, 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                next[i] += g[i] * f.zero;
                next[i + 1] += g[i] * f.one;
            }
            g = std::move(next);
        }
        const auto& binom = binomial_row(static_cast<int>(m) - 1);
        std::vector<double> h(m, 0.0);
        for (const auto& f : factors) {
            // Deconvolve factor f out of G. one is exactly 0 or 1, so one of
            // the two recurrences is always division-free in the unstable
            // direction.
            if (f.one == 1.0) {
                h[m - 1] = g[m];
                for (std::size_t k = m - 1; k >= 1; --k) h[k - 1] = g[k] - f.zero * h[k];
            } else {  // f.one == 0.0
                for (std::size_t k = 0; k < m; ++k) h[k] = g[k] / f.zero;
            }
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += h[k] / binom[k];
            phi[static_cast<std::size_t>(f.feature)] +=
                c_leaf * (f.one - f.zero) * s / static_cast<double>(m);
        }
    }

    void walk(std::size_t node) {
        const TreeNode& nd = model.nodes[node];
        if (nd.feature < 0) {
            leaf_contribution(leaf_value(nd));
            return;
        }
        const bool goes_left = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold;
        const double cover = node_cover(nd);
        for (int side = 0; side < 2; ++side) {
            const std::size_t child = static_cast<std::size_t>(side == 0 ? nd.left : nd.right);
            const double zero_edge = node_cover(model.nodes[child]) / cover;
            const double one_edge = (side == 0) == goes_left ? 1.0 : 0.0;
            auto it = position.find(nd.feature);
            if (it == position.end()) {
                position.emplace(nd.feature, static_cast<int>(factors.size()));
                factors.push_back({nd.feature, zero_edge, one_edge});
                walk(child);
                factors.pop_back();
                position.erase(nd.feature);
            } else {
                // Index, not reference: the recursive walk can grow `factors`
                // and reallocate out from under a reference.
                const std::size_t at = static_cast<std::size_t>(it->second);
                const PathFactor saved = factors[at];
                factors[at].zero *= zero_edge;
                factors[at].one *= one_edge;
                walk(child);
                factors[at] = saved;
            }
        }
    }
};

ShapAttribution tree_shap_one(const TreeModel& model, const std::vector<double>& x) {
    require_input(model, x);
    require_covers(model);
    ShapWalker w(model, x);
    w.walk(0);
    ShapAttribution out;
    out.values = std::move(w.phi);
    out.base_value = w.base;
    out.prediction = predict_proba(model, x);
    return out;
}

// Cover-weighted conditional expectation: features in `mask` follow x.
double subset_value(const TreeModel& model, const std::vector<double>& x, std::uint32_t mask,
                    std::size_t node) {
    const TreeNode& nd = model.nodes[node];
    if (nd.feature < 0) return leaf_value(nd);
    if (mask & (1u << nd.feature)) {
        const bool left = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold;
        return subset_value(model, x, mask, static_cast<std::size_t>(left ? nd.left : nd.right));
    }
    const double cl = node_cover(model.nodes[static_cast<std::size_t>(nd.left)]);
    const double cr = node_cover(model.nodes[static_cast<std::size_t>(nd.right)]);
    return (cl * subset_value(model, x, mask, static_cast<std::size_t>(nd.left)) +
            cr * subset_value(model, x, mask, static_cast<std::size_t>(nd.right))) /
           (cl + cr);
}

ShapAttribution exact_over(const std::vector<const TreeModel*>& trees,
                           const std::vector<double>& x, double prediction) {
    const int p = trees.front()->n_features;
    if (p > 20)
        throw PreconditionError("exact_shapley: feature count exceeds 20; use tree_shap");
    for (const TreeModel* t : trees) {
        require_input(*t, x);
        require_covers(*t);
    }
    const std::uint32_t full = (1u << p) - 1u;
    std::vector<double> v(static_cast<std::size_t>(full) + 1, 0.0);
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        double sum = 0.0;
        for (const TreeModel* t : trees) sum += subset_value(*t, x, mask, 0);
        v[mask] = sum / static_cast<double>(trees.size());
    }
    const auto& binom = binomial_row(p - 1);
    ShapAttribution out;
    out.values.assign(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i) {
        const std::uint32_t bit = 1u << i;
        double phi = 0.0;
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (mask & bit) continue;
            const int s = std::popcount(mask);
            const double w = 1.0 / (static_cast<double>(p) * binom[static_cast<std::size_t>(s)]);
            phi += w * (v[mask | bit] - v[mask]);
        }
        out.values[static_cast<std::size_t>(i)] = phi;
    }
    out.base_value = v[0];
    out.prediction = prediction;
    return out;
}

}  // namespace

ShapAttribution exact_shapley(const TreeModel& model, const std::vector<double>& x) {
    return exact_over({&model}, x, predict_proba(model, x));
}

ShapAttribution exact_shapley(const ForestModel& model, const std::vector<double>& x) {
    if (model.trees.empty()) throw InputError("empty model");
    std::vector<const TreeModel*> trees;
    trees.reserve(model.trees.size());
    for (const auto& t : model.trees) trees.push_back(&t);
    return exact_over(trees, x, predict_proba(model, x));
}

ShapAttribution tree_shap(const TreeModel& model, const std::vector<double>& x) {
    return tree_shap_one(model, x);
}

ShapAttribution tree_shap(const ForestModel& model, const std::vector<double>& x) {
    if (model.trees.empty()) throw InputError("empty model");
    ShapAttribution out;
    out.values.assign(static_cast<std::size_t>(model.n_features), 0.0);
    for (const auto& t : model.trees) {
        const ShapAttribution one = tree_shap_one(t, x);
        for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += one.values[j];
        out.base_value += one.base_value;
    }
    const double nt = static_cast<double>(model.trees.size());
    for (auto& v : out.values) v /= nt;
    out.base_value /= nt;
    out.prediction = predict_proba(model, x);
    return out;
}

ShapAttribution tree_shap(const LoadedModel& model, const std::vector<double>& x) {
    return model.is_forest ? tree_shap(model.forest, x) : tree_shap(model.tree, x);
}

namespace {

template <typename Model>
ShapRanking ranking_over(const Model& model, const LabeledDataset& data, int n_features,
                         int threads) {
    if (data.x.empty()) throw InputError("shap_ranking: empty dataset");
    if (data.feature_names.empty())
        throw InputError("shap_ranking: dataset has no feature names");
    if (static_cast<int>(data.feature_names.size()) != n_features)
        throw InputError("shap_ranking: feature names do not match the model width");
    std::vector<std::vector<double>> per_row(data.x.size());
    parallel_for(data.x.size(), threads,
                 [&](std::size_t i) { per_row[i] = tree_shap(model, data.x[i]).values; });
    ShapRanking r;
    r.mean_abs.assign(static_cast<std::size_t>(n_features), 0.0);
    for (const auto& row : per_row)
        for (std::size_t j = 0; j < row.size(); ++j) r.mean_abs[j] += std::fabs(row[j]);
    for (auto& v : r.mean_abs) v /= static_cast<double>(data.x.size());
    r.order.resize(static_cast<std::size_t>(n_features));
    std::iota(r.order.begin(), r.order.end(), 0);
    std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
        const double va = r.mean_abs[static_cast<std::size_t>(a)];
        const double vb = r.mean_abs[static_cast<std::size_t>(b)];
        if (va != vb) return va > vb;
        return a < b;
    });
    r.names.reserve(r.order.size());
    for (int j : r.order) r.names.push_back(data.feature_names[static_cast<std::size_t>(j)]);
    return r;
}

}  // namespace

ShapRanking shap_ranking(const TreeModel& model, const LabeledDataset& data, int threads) {
    return ranking_over(model, data, model.n_features, threads);
}

ShapRanking shap_ranking(const ForestModel& model, const LabeledDataset& data, int threads) {
    return ranking_over(model, data, model.n_features, threads);
}

ShapRanking shap_ranking(const LoadedModel& model, const LabeledDataset& data, int threads) {
    const int nf = model.is_forest ? model.forest.n_features : model.tree.n_features;
    return ranking_over(model, data, nf, threads);
}

std::vector<AblationRow> ablation_run(const LabeledDataset& data, const ShapRanking& ranking,
                                      const ModelSpec& spec, int folds, std::uint64_t seed,
                                      int threads) {
    if (data.feature_names.empty())
        throw InputError("ablation_run: dataset has no feature names");
    if (ranking.names.size() != data.feature_names.size())
        throw InputError("ablation_run: ranking does not cover the feature set");
    std::unordered_set<std::string> have(data.feature_names.begin(), data.feature_names.end());
    for (const auto& name : ranking.names)
        if (have.count(name) == 0)
            throw InputError("ablation_run: ranking does not cover the feature set");

    std::vector<AblationRow> rows;
    const std::size_t m = ranking.names.size();
    for (std::size_t c = 0; c < m; ++c) {
        AblationRow row;
        row.cut_rank = static_cast<int>(c);
        row.cut_feature = ranking.names[c];
        row.dropped.assign(ranking.names.begin() + static_cast<std::ptrdiff_t>(c),
                           ranking.names.end());
        if (c == 0) {
            row.skipped = true;
            row.note = "cut leaves zero features";
            rows.push_back(std::move(row));
            continue;
        }
        const std::vector<std::string> kept(ranking.names.begin(),
                                            ranking.names.begin() + static_cast<std::ptrdiff_t>(c));
        const LabeledDataset reduced = select_features(data, kept);
        const CvResult cv = cross_validate(reduced, spec, folds, seed, threads);
        row.mean = cv.mean;
        row.stddev = cv.stddev;
        row.pooled = cv.pooled;
        rows.push_back(std::move(row));
    }
    AblationRow full;
    full.cut_rank = -1;
    const CvResult cv = cross_validate(data, spec, folds, seed, threads);
    full.mean = cv.mean;
    full.stddev = cv.stddev;
    full.pooled = cv.pooled;
    rows.push_back(std::move(full));
    return rows;
}

PairRanking correlation_vs_ranking(const CorrelationMatrix& corr, const ShapRanking& ranking) {
    if (corr.names.size() != ranking.names.size())
        throw InputError("correlation_vs_ranking: feature name mismatch");
    std::unordered_map<std::string, int> rank_of;
    for (std::size_t r = 0; r < ranking.names.size(); ++r)
        rank_of[ranking.names[r]] = static_cast<int>(r);
    for (const auto& name : corr.names)
        if (rank_of.find(name) == rank_of.end())
            throw InputError("correlation_vs_ranking: feature name mismatch");

    PairRanking out;
    for (std::size_t i = 0; i < corr.names.size(); ++i) {
        for (std::size_t j = i + 1; j < corr.names.size(); ++j) {
            if (!corr.defined[i][j]) continue;
            PairRankingRow row;
            row.a = corr.names[i];
            row.b = corr.names[j];
            row.abs_corr = std::fabs(corr.values[i][j]);
            row.rank_distance = std::abs(rank_of[row.a] - rank_of[row.b]);
            out.rows.push_back(std::move(row));
        }
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const PairRankingRow& a, const PairRankingRow& b) {
        if (a.abs_corr != b.abs_corr) return a.abs_corr > b.abs_corr;
        if (a.a != b.a) return a.a < b.a;
        return a.b < b.b;
    });
    if (out.rows.size() >= 2) {
        std::vector<double> xs, ys;
        xs.reserve(out.rows.size());
        ys.reserve(out.rows.size());
        for (const auto& row : out.rows) {
            xs.push_back(row.abs_corr);
            ys.push_back(-static_cast<double>(row.rank_distance));
        }
        try {
            out.tau = kendall_tau_b(xs, ys);
        } catch (const PreconditionError&) {
            out.tau = std::nullopt;
        }
    }
    return out;
}

}  // namespace mistweet
