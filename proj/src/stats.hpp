// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corpus.hpp"

namespace mistweet {

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

// Two-sample Kolmogorov-Smirnov; ECDFs evaluated after all equal values, so
// ties are handled exactly. p from the asymptotic Kolmogorov distribution.
KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys);

// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), truncated when a
// term drops below 1e-12, clamped to [0,1].
double ks_asymptotic_q(double lambda);

// Tau-b with tie corrections; exact agreement with the O(n^2) pairwise
// definition. Throws "degenerate ranking" when either side is all ties.
double kendall_tau_b(const std::vector<double>& xs, const std::vector<double>& ys);

struct KappaResult {
    double kappa = 0.0;
    double p_bar = 0.0;
    double p_e_bar = 0.0;
};

// counts: N subjects x k categories, every row summing to the rater count.
KappaResult fleiss_kappa(const std::vector<std::vector<std::int64_t>>& counts);

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // symmetric, diagonal 1
    std::vector<std::vector<bool>> defined;   // false where a constant column is involved
    std::vector<std::string> warnings;        // names of constant columns
};

// rows: n x p feature matrix, n >= 2.
CorrelationMatrix pearson_matrix(const std::vector<std::vector<double>>& rows,
                                 const std::vector<std::string>& names);

// Case-folded word tokens, stopwords and punctuation removed; ranked by count
// descending then lexicographically.
std::vector<std::pair<std::string, std::int64_t>> top_words(
    const Corpus& corpus, Label label, std::size_t k,
    const std::unordered_set<std::string>& stopwords);

struct HashtagReport {
    struct PairCount {
        std::string a, b;  // a < b lexicographically
        std::int64_t count = 0;
        bool flagged = false;  // count > 1
    };
    // Hashtags seen in exactly one class, ranked by tweet count then name.
    std::vector<std::pair<std::string, std::int64_t>> unique_misleading;
    std::vector<std::pair<std::string, std::int64_t>> unique_nonmisleading;
    std::vector<PairCount> pairs_misleading;
    std::vector<PairCount> pairs_nonmisleading;
};

HashtagReport hashtag_report(const Corpus& corpus);

struct FieldStats {
    std::int64_t median = 0;  // lower median for even n, always an observed value
    double mean = 0.0;
    std::size_t n = 0;
};

struct VisibilitySummary {
    struct ClassStats {
        FieldStats retweets, replies, likes;
    };
    ClassStats misleading, nonmisleading;
};

// Per-field statistics over records where the field is present.
VisibilitySummary visibility_summary(const Corpus& corpus);

}  // namespace mistweet
