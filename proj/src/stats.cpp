// Apache License, Version 2.0, refer to LICENSE.txt
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "errors.hpp"
#include "syntax.hpp"
#include "textutil.hpp"

namespace mistweet {

double ks_asymptotic_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1;; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw PreconditionError("ks_two_sample requires non-empty samples");
    std::vector<double> a = xs, b = ys;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto n1 = a.size(), n2 = b.size();
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n1 || j < n2) {
        double v = (i < n1 && (j >= n2 || a[i] <= b[j])) ? a[i] : b[j];
        while (i < n1 && a[i] == v) ++i;  // evaluate after all equal values
        while (j < n2 && b[j] == v) ++j;
        double gap = std::fabs(static_cast<double>(i) / static_cast<double>(n1) -
                               static_cast<double>(j) / static_cast<double>(n2));
        d = std::max(d, gap);
    }
    KsResult r;
    r.d = d;
    r.n1 = n1;
    r.n2 = n2;
    double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                static_cast<double>(n1 + n2);
    r.p_value = ks_asymptotic_q(d * std::sqrt(ne));
    return r;
}

namespace {

// Counts inversions in v by mergesort; v is left sorted.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t inv = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            inv += static_cast<std::int64_t>(mid - i);
            tmp[k++] = v[j++];
        } else {
            tmp[k++] = v[i++];
        }
    }
    while (i < mid) tmp[k++] = v[i++];
    while (j < hi) tmp[k++] = v[j++];
    std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
              tmp.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

}  // namespace

double kendall_tau_b(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw InputError("kendall_tau_b requires equal lengths");
    const auto n = static_cast<std::int64_t>(xs.size());
    if (n < 2) throw PreconditionError("kendall_tau_b requires at least 2 pairs");

    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        if (xs[l] != xs[r]) return xs[l] < xs[r];
        return ys[l] < ys[r];
    });

    const std::int64_t n0 = n * (n - 1) / 2;
    std::int64_t n1 = 0, n2 = 0, n3 = 0;

    // Tie pairs in x and joint ties in (x, y) from the sorted order.
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        if (i == order.size() || xs[order[i]] != xs[order[run_start]]) {
            n1 += tie_pairs(static_cast<std::int64_t>(i - run_start));
            std::size_t joint_start = run_start;
            for (std::size_t j = run_start + 1; j <= i; ++j) {
                if (j == i || ys[order[j]] != ys[order[joint_start]]) {
                    n3 += tie_pairs(static_cast<std::int64_t>(j - joint_start));
                    joint_start = j;
                }
            }
            run_start = i;
        }
    }
    {
        std::vector<double> sorted_y = ys;
        std::sort(sorted_y.begin(), sorted_y.end());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= sorted_y.size(); ++i) {
            if (i == sorted_y.size() || sorted_y[i] != sorted_y[start]) {
                n2 += tie_pairs(static_cast<std::int64_t>(i - start));
                start = i;
            }
        }
    }
    if (n0 == n1 || n0 == n2) throw PreconditionError("degenerate ranking");

    std::vector<double> y_seq(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) y_seq[i] = ys[order[i]];
    std::vector<double> tmp(y_seq.size());
    const std::int64_t discordant = merge_count(y_seq, tmp, 0, y_seq.size());

    const std::int64_t concordant = n0 - n1 - n2 + n3 - discordant;
    const double num = static_cast<double>(concordant - discordant);
    const double den =
        std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
    return num / den;
}

KappaResult fleiss_kappa(const std::vector<std::vector<std::int64_t>>& counts) {
    if (counts.empty() || counts[0].empty()) throw InputError("fleiss_kappa requires a matrix");
    const std::size_t big_n = counts.size();
    const std::size_t k = counts[0].size();
    std::int64_t n = 0;
    for (std::int64_t v : counts[0]) {
        if (v < 0) throw InputError("fleiss_kappa counts must be non-negative");
        n += v;
    }
    if (n < 2) throw PreconditionError("fleiss_kappa requires at least 2 raters");

    double p_bar = 0.0;
    std::vector<std::int64_t> col(k, 0);
    for (const auto& row : counts) {
        if (row.size() != k) throw InputError("fleiss_kappa rows must have equal length");
        std::int64_t row_sum = 0, sq = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (row[j] < 0) throw InputError("fleiss_kappa counts must be non-negative");
            row_sum += row[j];
            sq += row[j] * row[j];
            col[j] += row[j];
        }
        if (row_sum != n) throw InputError("fleiss_kappa rows must share one rater count");
        p_bar += static_cast<double>(sq - n) / static_cast<double>(n * (n - 1));
    }
    p_bar /= static_cast<double>(big_n);

    double p_e = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double share = static_cast<double>(col[j]) /
                       static_cast<double>(static_cast<std::int64_t>(big_n) * n);
        p_e += share * share;
    }
    if (p_e >= 1.0 - 1e-12) throw PreconditionError("no variation");

    KappaResult r;
    r.p_bar = p_bar;
    r.p_e_bar = p_e;
    r.kappa = (p_bar - p_e) / (1.0 - p_e);
    return r;
}

CorrelationMatrix pearson_matrix(const std::vector<std::vector<double>>& rows,
                                 const std::vector<std::string>& names) {
    const std::size_t n = rows.size();
    if (n < 2) throw PreconditionError("pearson_matrix requires at least 2 rows");
    const std::size_t p = names.size();
    for (const auto& r : rows) {
        if (r.size() != p) throw InputError("pearson_matrix rows must match names length");
    }

    std::vector<double> mean(p, 0.0);
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < p; ++j) mean[j] += r[j];
    }
    for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);

    std::vector<double> ss(p, 0.0);
    std::vector<bool> constant(p, false);
    for (std::size_t j = 0; j < p; ++j) {
        bool all_equal = true;
        for (std::size_t i = 0; i < n; ++i) {
            double d = rows[i][j] - mean[j];
            ss[j] += d * d;
            all_equal = all_equal && rows[i][j] == rows[0][j];
        }
        constant[j] = all_equal;
    }

    CorrelationMatrix m;
    m.names = names;
    m.values.assign(p, std::vector<double>(p, 0.0));
    m.defined.assign(p, std::vector<bool>(p, true));
    for (std::size_t j = 0; j < p; ++j) {
        m.values[j][j] = 1.0;
        if (constant[j]) m.warnings.push_back(names[j] + ": constant column");
    }
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            if (constant[a] || constant[b]) {
                m.defined[a][b] = m.defined[b][a] = false;
                continue;
            }
            double cov = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cov += (rows[i][a] - mean[a]) * (rows[i][b] - mean[b]);
            }
            double r = cov / std::sqrt(ss[a] * ss[b]);
            m.values[a][b] = m.values[b][a] = r;
        }
    }
    return m;
}

std::vector<std::pair<std::string, std::int64_t>> top_words(
    const Corpus& corpus, Label label, std::size_t k,
    const std::unordered_set<std::string>& stopwords) {
    std::unordered_map<std::string, std::int64_t> counts;
    bool any_tokens = false;
    for (const auto& rec : corpus.records) {
        if (rec.label != label) continue;
        std::vector<Token> tokens;
        try {
            tokens = tokenize(clean_text(rec.text));
        } catch (const InputError&) {
            continue;  // record empty after cleaning
        }
        for (const auto& t : tokens) {
            if (!t.is_word) continue;
            any_tokens = true;
            std::string fold = casefold(t.surface);
            if (stopwords.count(fold)) continue;
            ++counts[fold];
        }
    }
    if (!any_tokens) throw InputError("no tokens");
    std::vector<std::pair<std::string, std::int64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

namespace {

std::vector<std::pair<std::string, std::int64_t>> ranked_set_difference(
    const std::unordered_map<std::string, std::int64_t>& own,
    const std::unordered_map<std::string, std::int64_t>& other) {
    std::vector<std::pair<std::string, std::int64_t>> out;
    for (const auto& [tag, count] : own) {
        if (!other.count(tag)) out.emplace_back(tag, count);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

std::vector<HashtagReport::PairCount> ranked_pairs(
    const std::map<std::pair<std::string, std::string>, std::int64_t>& counts) {
    std::vector<HashtagReport::PairCount> out;
    for (const auto& [pair, count] : counts) {
        out.push_back({pair.first, pair.second, count, count > 1});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.a != b.a) return a.a < b.a;
        return a.b < b.b;
    });
    return out;
}

}  // namespace

HashtagReport hashtag_report(const Corpus& corpus) {
    std::unordered_map<std::string, std::int64_t> tags_m, tags_n;
    std::map<std::pair<std::string, std::string>, std::int64_t> pairs_m, pairs_n;
    for (const auto& rec : corpus.records) {
        if (rec.label == Label::Unlabeled) continue;
        auto& tags = rec.label == Label::Misleading ? tags_m : tags_n;
        auto& pairs = rec.label == Label::Misleading ? pairs_m : pairs_n;
        for (const auto& t : rec.hashtags) ++tags[t];
        for (std::size_t a = 0; a < rec.hashtags.size(); ++a) {
            for (std::size_t b = a + 1; b < rec.hashtags.size(); ++b) {
                auto key = std::minmax(rec.hashtags[a], rec.hashtags[b]);
                ++pairs[{key.first, key.second}];
            }
        }
    }
    HashtagReport r;
    r.unique_misleading = ranked_set_difference(tags_m, tags_n);
    r.unique_nonmisleading = ranked_set_difference(tags_n, tags_m);
    r.pairs_misleading = ranked_pairs(pairs_m);
    r.pairs_nonmisleading = ranked_pairs(pairs_n);
    return r;
}

namespace {

FieldStats field_stats(std::vector<std::int64_t> values, Label label, const char* field) {
    if (values.empty()) {
        throw PreconditionError(std::string("visibility_summary: class '") +
                                std::string(label_name(label)) + "' has no " + field + " counts");
    }
    std::sort(values.begin(), values.end());
    FieldStats s;
    s.n = values.size();
    s.median = values[(values.size() - 1) / 2];  // lower median for even n
    double sum = 0.0;
    for (std::int64_t v : values) sum += static_cast<double>(v);
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

}  // namespace

VisibilitySummary visibility_summary(const Corpus& corpus) {
    VisibilitySummary out;
    for (Label label : {Label::Misleading, Label::NonMisleading}) {
        std::vector<std::int64_t> rt, rp, lk;
        for (const auto& rec : corpus.records) {
            if (rec.label != label) continue;
            if (rec.retweet_count) rt.push_back(*rec.retweet_count);
            if (rec.reply_count) rp.push_back(*rec.reply_count);
            if (rec.like_count) lk.push_back(*rec.like_count);
        }
        VisibilitySummary::ClassStats cs;
        cs.retweets = field_stats(std::move(rt), label, "retweet");
        cs.replies = field_stats(std::move(rp), label, "reply");
        cs.likes = field_stats(std::move(lk), label, "like");
        (label == Label::Misleading ? out.misleading : out.nonmisleading) = cs;
    }
    return out;
}

}  // namespace mistweet
