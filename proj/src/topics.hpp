// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "affect.hpp"
#include "corpus.hpp"
#include "lexicons.hpp"

namespace mistweet {

struct TopicModel {
    int k = 0;
    std::vector<std::vector<double>> phi;    // k x V, rows sum to 1
    std::vector<std::vector<double>> theta;  // D x k, rows sum to 1
    std::vector<std::string> vocabulary;     // sorted, duplicate-free
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
};

inline constexpr double kLdaDefaultBeta = 0.01;
inline constexpr int kLdaDefaultIterations = 1000;

// Collapsed Gibbs sampling. Tokens are case-folded; stopwords (bundled list
// when nullptr) and words with corpus frequency < 2 are pruned. alpha <= 0
// selects the 50/k default, beta <= 0 selects 0.01. check_invariants verifies
// count conservation after every sweep.
TopicModel lda_fit(const std::vector<std::vector<std::string>>& docs, int k, double alpha,
                   double beta, int iterations, std::uint64_t seed,
                   const std::unordered_set<std::string>* stopwords = nullptr,
                   bool check_invariants = false);

// Grid search by held-out per-token log-likelihood (fold-in with phi frozen,
// 50 sweeps); ties within 1e-12 resolve to the smaller k.
int select_k(const std::vector<std::vector<std::string>>& docs,
             const std::vector<int>& candidate_ks, double holdout_fraction, std::uint64_t seed,
             const std::unordered_set<std::string>* stopwords = nullptr);

// Per topic, words ranked by phi descending, ties lexicographic.
std::vector<std::vector<std::pair<std::string, double>>> top_words_per_topic(const TopicModel& m,
                                                                             std::size_t n);

struct TopicFilter {
    std::optional<Label> label;
    std::optional<SentimentCategory> sentiment;
    std::optional<Emotion> emotion;
    std::string describe() const;
};

struct ConditionalTopics {
    TopicModel model;
    std::string filter;
    std::size_t doc_count = 0;
};

// Fits LDA on the records matching the filter; errors name the filter.
ConditionalTopics conditional_topics(const Corpus& corpus, const TopicFilter& filter,
                                     const Lexicons& lex, int k, double alpha, double beta,
                                     int iterations, std::uint64_t seed);

}  // namespace mistweet
