// Apache License, Version 2.0, refer to LICENSE.txt
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "../src/errors.hpp"
#include "../src/lexicons.hpp"
#include "../src/rng.hpp"
#include "../src/topics.hpp"

using namespace mistweet;

namespace {

const std::unordered_set<std::string> kNoStops;

// Docs drawn from one of two disjoint six-word families. Every family word
// appears many times, so frequency pruning never bites.
std::vector<std::vector<std::string>> two_family_docs(std::size_t docs_per_family,
                                                      std::size_t tokens_per_doc,
                                                      std::uint64_t seed) {
    std::vector<std::string> fam_a, fam_b;
    for (int i = 0; i < 6; ++i) {
        fam_a.push_back("alpha" + std::to_string(i));
        fam_b.push_back("bravo" + std::to_string(i));
    }
    Rng rng(seed);
    std::vector<std::vector<std::string>> docs;
    for (std::size_t d = 0; d < 2 * docs_per_family; ++d) {
        const auto& fam = d < docs_per_family ? fam_a : fam_b;
        std::vector<std::string> doc;
        for (std::size_t t = 0; t < tokens_per_doc; ++t)
            doc.push_back(fam[static_cast<std::size_t>(rng.below(fam.size()))]);
        docs.push_back(std::move(doc));
    }
    return docs;
}

double cluster_purity(const TopicModel& m, std::size_t docs_per_family) {
    // Doc d belongs to family d / docs_per_family; cluster = argmax theta.
    std::vector<std::vector<std::size_t>> tally(static_cast<std::size_t>(m.k),
                                                std::vector<std::size_t>(2, 0));
    for (std::size_t d = 0; d < m.theta.size(); ++d) {
        std::size_t best = 0;
        for (std::size_t t = 1; t < m.theta[d].size(); ++t)
            if (m.theta[d][t] > m.theta[d][best]) best = t;
        ++tally[best][d / docs_per_family];
    }
    std::size_t agree = 0;
    for (const auto& row : tally) agree += std::max(row[0], row[1]);
    return static_cast<double>(agree) / static_cast<double>(m.theta.size());
}

}  // namespace

TEST_CASE("lda_fit is deterministic and keeps distributions normalized") {
    auto docs = two_family_docs(10, 8, 11u);
    TopicModel a = lda_fit(docs, 2, 0.0, 0.0, 100, 42u, &kNoStops, true);
    TopicModel b = lda_fit(docs, 2, 0.0, 0.0, 100, 42u, &kNoStops, true);
    CHECK(a.phi == b.phi);
    CHECK(a.theta == b.theta);
    CHECK(a.vocabulary == b.vocabulary);

    CHECK(a.k == 2);
    CHECK(a.alpha == 25.0);  // 50 / k default kicks in for alpha <= 0
    CHECK(a.beta == kLdaDefaultBeta);
    CHECK(std::is_sorted(a.vocabulary.begin(), a.vocabulary.end()));
    CHECK(a.vocabulary.size() == 12);
    for (const auto& row : a.phi) {
        double s = 0.0;
        for (double v : row) {
            CHECK(v > 0.0);
            s += v;
        }
        CHECK(std::fabs(s - 1.0) <= 1e-9);
    }
    REQUIRE(a.theta.size() == docs.size());
    for (const auto& row : a.theta) {
        double s = 0.0;
        for (double v : row) s += v;
        CHECK(std::fabs(s - 1.0) <= 1e-9);
    }
}

TEST_CASE("lda_fit folds case and prunes stopwords and singletons") {
    std::unordered_set<std::string> stops = {"the"};
    std::vector<std::vector<std::string>> docs = {
        {"Apple", "apple", "the"},
        {"apple", "zebra"},
    };
    TopicModel m = lda_fit(docs, 2, 0.0, 0.0, 20, 7u, &stops, true);
    // "the" is a stopword and "zebra" occurs once; only "apple" survives.
    REQUIRE(m.vocabulary == std::vector<std::string>{"apple"});
    for (const auto& row : m.phi) {
        REQUIRE(row.size() == 1);
        CHECK(row[0] == 1.0);
    }
}

TEST_CASE("lda_fit gives pruned-empty documents a uniform theta row") {
    std::vector<std::vector<std::string>> docs = {
        {"apple", "apple"},
        {"apple", "banana", "banana"},
        {"zzz"},
    };
    TopicModel m = lda_fit(docs, 2, 0.0, 0.0, 20, 9u, &kNoStops);
    REQUIRE(m.theta.size() == 3);
    CHECK(m.theta[2][0] == 0.5);
    CHECK(m.theta[2][1] == 0.5);
}

TEST_CASE("lda_fit rejects malformed setups") {
    std::vector<std::vector<std::string>> docs = {{"a", "a"}, {"a"}};
    CHECK_THROWS_WITH_AS(lda_fit(docs, 1, 0.0, 0.0, 10, 1u, &kNoStops),
                         "lda_fit: k must be >= 2", InputError);
    CHECK_THROWS_WITH_AS(lda_fit(docs, 2, 0.0, 0.0, 0, 1u, &kNoStops),
                         "lda_fit: iterations must be >= 1", InputError);
    CHECK_THROWS_WITH_AS(lda_fit({}, 2, 0.0, 0.0, 10, 1u, &kNoStops),
                         "lda_fit: no documents", PreconditionError);
    std::unordered_set<std::string> stops = {"a"};
    CHECK_THROWS_WITH_AS(lda_fit(docs, 2, 0.0, 0.0, 10, 1u, &stops),
                         "lda_fit: vocabulary is empty after pruning", PreconditionError);
    std::vector<std::vector<std::string>> lonely = {{"a", "a"}, {"b"}};
    CHECK_THROWS_WITH_AS(lda_fit(lonely, 2, 0.0, 0.0, 10, 1u, &kNoStops),
                         "lda_fit: fewer than 2 non-empty documents after pruning",
                         PreconditionError);
    CHECK_THROWS_WITH_AS(lda_fit(docs, 4, 0.0, 0.0, 10, 1u, &kNoStops),
                         "lda_fit: k exceeds the total token count", PreconditionError);
}

TEST_CASE("lda_fit separates disjoint vocabularies with high purity") {
    auto docs = two_family_docs(20, 8, 33u);
    // Explicit small alpha: the 50/k default puts 25 pseudo-counts on each
    // topic of an 8-token doc, which drowns the document signal this test
    // is about.
    TopicModel m = lda_fit(docs, 2, 0.1, 0.0, 300, 2024u, &kNoStops, true);
    CHECK(cluster_purity(m, 20) >= 0.9);
}

TEST_CASE("select_k prefers the planted number of topics") {
    auto docs = two_family_docs(20, 8, 55u);
    CHECK(select_k(docs, {2, 4}, 0.25, 99u, &kNoStops) == 2);
    // Candidate order must not matter.
    CHECK(select_k(docs, {4, 2}, 0.25, 99u, &kNoStops) == 2);
}

TEST_CASE("select_k rejects malformed setups") {
    std::vector<std::vector<std::string>> docs = {{"a", "a"}, {"a", "b", "b"}};
    CHECK_THROWS_WITH_AS(select_k(docs, {}, 0.5, 1u, &kNoStops),
                         "select_k: no candidate values", InputError);
    CHECK_THROWS_WITH_AS(select_k(docs, {2}, 0.0, 1u, &kNoStops),
                         "select_k: holdout_fraction must be in (0, 1)", InputError);
    CHECK_THROWS_WITH_AS(select_k(docs, {2}, 1.0, 1u, &kNoStops),
                         "select_k: holdout_fraction must be in (0, 1)", InputError);
    CHECK_THROWS_WITH_AS(select_k(docs, {2, 1}, 0.5, 1u, &kNoStops),
                         "select_k: k must be >= 2", InputError);
    CHECK_THROWS_WITH_AS(select_k({{"a", "a"}}, {2}, 0.5, 1u, &kNoStops),
                         "select_k: need at least 2 documents", PreconditionError);
}

TEST_CASE("top_words_per_topic ranks by probability then name") {
    TopicModel m;
    m.k = 2;
    m.vocabulary = {"a", "b", "c"};
    m.phi = {{0.5, 0.3, 0.2}, {0.2, 0.2, 0.6}};
    auto top = top_words_per_topic(m, 2);
    REQUIRE(top.size() == 2);
    REQUIRE(top[0].size() == 2);
    CHECK(top[0][0] == std::pair<std::string, double>{"a", 0.5});
    CHECK(top[0][1] == std::pair<std::string, double>{"b", 0.3});
    // Topic 1 has a tie at 0.2; "a" wins lexicographically.
    CHECK(top[1][0] == std::pair<std::string, double>{"c", 0.6});
    CHECK(top[1][1] == std::pair<std::string, double>{"a", 0.2});
    // Requests beyond the vocabulary truncate quietly.
    CHECK(top_words_per_topic(m, 99)[0].size() == 3);
}

TEST_CASE("TopicFilter::describe spells out each active part") {
    CHECK(TopicFilter{}.describe() == "all");
    TopicFilter lab;
    lab.label = Label::Misleading;
    CHECK(lab.describe() == "label=misleading");
    lab.label = Label::NonMisleading;
    CHECK(lab.describe() == "label=non-misleading");
    TopicFilter full;
    full.label = Label::Misleading;
    full.sentiment = SentimentCategory::Negative;
    full.emotion = Emotion::Fear;
    CHECK(full.describe() == "label=misleading,sentiment=negative,emotion=fear");
    TopicFilter sent;
    sent.sentiment = SentimentCategory::Positive;
    CHECK(sent.describe() == "sentiment=positive");
}

TEST_CASE("conditional_topics filters records and names the filter on failure") {
    const Lexicons& lex = default_lexicons();
    Corpus c;
    auto rec = [](std::string id, Label l, std::string text) {
        TweetRecord r;
        r.id = std::move(id);
        r.label = l;
        r.text = std::move(text);
        return r;
    };
    c.records.push_back(rec("m1", Label::Misleading, "poison killed poison"));
    c.records.push_back(rec("m2", Label::Misleading, "killed poison killed"));
    c.records.push_back(rec("n1", Label::NonMisleading, "clinic visit clinic visit"));
    c.records.push_back(rec("n2", Label::NonMisleading, "visit clinic visit"));
    c.recount();

    TopicFilter mis;
    mis.label = Label::Misleading;
    ConditionalTopics ct = conditional_topics(c, mis, lex, 2, 0.0, 0.0, 50, 5u);
    CHECK(ct.doc_count == 2);
    CHECK(ct.filter == "label=misleading");
    CHECK(ct.model.vocabulary == std::vector<std::string>{"killed", "poison"});

    // Negative sentiment keeps only the misleading pair here.
    TopicFilter neg;
    neg.sentiment = SentimentCategory::Negative;
    CHECK(conditional_topics(c, neg, lex, 2, 0.0, 0.0, 50, 5u).doc_count == 2);

    // One matching doc cannot support a fit; the error carries the filter.
    TopicFilter fear;
    fear.label = Label::NonMisleading;
    fear.emotion = Emotion::Fear;
    CHECK_THROWS_WITH_AS(
        conditional_topics(c, fear, lex, 2, 0.0, 0.0, 50, 5u),
        "conditional topics [label=non-misleading,emotion=fear]: lda_fit: no documents",
        PreconditionError);
    CHECK_THROWS_WITH_AS(conditional_topics(c, mis, lex, 1, 0.0, 0.0, 50, 5u),
                         "conditional topics: k must be >= 2", InputError);
}
