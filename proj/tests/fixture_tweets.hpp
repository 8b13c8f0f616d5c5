// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

// Ten hand-assembled tweets with a fully derived expected feature matrix.
// Every expected cell below was worked out by hand against the bundled
// lexicons; expressions mirror the arithmetic the library performs so the
// comparison is bit-exact. Do not edit one side without re-deriving the
// other.

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "learn.hpp"

namespace fixture {

// Valence hits in token order; negated hits are listed pre-multiplied.
inline double comp(std::initializer_list<double> hits) {
    double s = 0.0;
    for (double v : hits) s += v;
    return s / std::sqrt(s * s + 15.0);
}

struct ExpectedTweet {
    const char* id;
    const char* text;
    mistweet::Label label;
    std::vector<std::string> hashtags;
    std::vector<double> row;
};

inline std::vector<ExpectedTweet> expected_tweets() {
    using mistweet::Label;
    std::vector<ExpectedTweet> t;
    // columns: stop_words pronouns nouns adjectives avg_token_length wh_words
    //          adverbs conjunctions verbs determiners ttr sentiment_compound
    //          emo_happiness emo_fear emo_anger emo_surprise emo_sadness
    //          hashtag_count

    // the/is/and/i/am stop; i PRP; vaccine+health NN; safe+grateful JJ;
    // today RB; and CC; is+am verbs; the DT; hits: safe 1.8, grateful 2.4,
    // health 1.4 (the '#' strip leaves the tag word in the text).
    t.push_back({"t01",
                 "The vaccine is safe and I am grateful today https://t.co/x #health \xF0\x9F\x98\x8A",
                 Label::NonMisleading,
                 {"health"},
                 {5, 1, 2, 2, 41.0 / 10.0, 0, 1, 1, 2, 1, 100.0 * 10.0 / 10.0,
                  comp({1.8, 2.4, 1.4}), 1, 0, 0, 0, 0, 1}});

    // we PRP; love/nurses/work NN; how WRB; quickly+now RB; the DT; love 3.0.
    t.push_back({"t02",
                 "We love how quickly the nurses work now @cityclinic",
                 Label::NonMisleading,
                 {},
                 {4, 1, 3, 0, 32.0 / 8.0, 1, 2, 0, 0, 1, 100.0 * 8.0 / 8.0, comp({3.0}), 1, 0,
                  0, 0, 0, 0}});

    // my/they/it pronouns; vaccine+neighbor NN; killed+lied VBD; killed -3.4
    // fear, lied -2.4 anger; equal emotion hits break to Fear.
    t.push_back({"t03",
                 "The vaccine killed my neighbor and they lied about it @newsdesk",
                 Label::Misleading,
                 {},
                 {6, 3, 2, 0, 44.0 / 10.0, 0, 0, 1, 2, 1, 100.0 * 10.0 / 10.0,
                  comp({-3.4, -2.4}), 0, 1, 0, 0, 0, 0}});

    // deadly is closed-class JJ (beats the -ly suffix); not RB and a negator:
    // safe 1.8 flips to 1.8 * -0.74; deadly/poison both fear.
    t.push_back({"t04",
                 "This deadly poison is not safe for children",
                 Label::Misleading,
                 {},
                 {4, 0, 2, 2, 36.0 / 8.0, 0, 1, 0, 1, 1, 100.0 * 8.0 / 8.0,
                  comp({-3.0, -3.0, 1.8 * -0.74}), 0, 1, 0, 0, 0, 0}});

    // Doctors at index 0 skips the NNP rule and strips to NNS; "again" twice
    // drops TTR to 8/9; no valence hits so the compound is exactly 0.
    t.push_back({"t05",
                 "Doctors say the shot was tested again and again",
                 Label::NonMisleading,
                 {},
                 {5, 0, 2, 0, 39.0 / 9.0, 0, 2, 1, 3, 1, 100.0 * 8.0 / 9.0, comp({}), 0, 0, 0,
                  0, 0, 0}});

    // Shocking -ing -> VBG; says closed-class VBZ; officials strips to NNS
    // (base "official" is JJ, not a verb); hid/report/data default NN.
    t.push_back({"t06",
                 "Shocking report says officials hid the data yesterday",
                 Label::Misleading,
                 {},
                 {1, 0, 4, 0, 46.0 / 8.0, 0, 1, 0, 2, 1, 100.0 * 8.0 / 8.0, comp({-1.8}), 0, 0,
                  0, 1, 0, 0}});

    // family ends in -ly so the suffix rule calls it RB; whole defaults NN.
    t.push_back({"t07",
                 "My whole family got vaccinated and we are happy \xF0\x9F\x98\x8A\xF0\x9F\x98\x8A",
                 Label::NonMisleading,
                 {},
                 {4, 2, 1, 1, 39.0 / 9.0, 0, 1, 1, 3, 0, 100.0 * 9.0 / 9.0, comp({2.7}), 1, 0,
                  0, 0, 0, 0}});

    // '#' strip keeps "truth truth" as word tokens (valence 1.6 each); anger
    // and sadness tie on one hit each and the tie order picks Sadness.
    t.push_back({"t08",
                 "They are lying about side effects and it is sad #truth #truth",
                 Label::Misleading,
                 {"truth"},
                 {6, 2, 4, 1, 48.0 / 12.0, 0, 0, 1, 3, 0, 100.0 * 11.0 / 12.0,
                  comp({-2.4, -2.1, 1.6, 1.6}), 0, 0, 0, 0, 1, 1}});

    // which WDT; gives closed-class VBZ; best JJS with valence 3.2; the
    // trailing '?' is a punctuation token and stays out of every count.
    t.push_back({"t09",
                 "Which clinic gives the best advice for travellers?",
                 Label::NonMisleading,
                 {},
                 {3, 0, 3, 1, 42.0 / 8.0, 1, 0, 0, 1, 1, 100.0 * 8.0 / 8.0, comp({3.2}), 0, 0,
                  0, 0, 0, 0}});

    // why WRB; never RB (a negator, but nothing follows within 3 tokens that
    // carries valence besides risks, whose window holds us/about/the).
    t.push_back({"t10",
                 "Why do they never tell us about the risks?",
                 Label::Misleading,
                 {},
                 {5, 2, 1, 0, 33.0 / 9.0, 1, 1, 0, 2, 1, 100.0 * 9.0 / 9.0, comp({-1.6}), 0, 1,
                  0, 0, 0, 0}});
    return t;
}

inline mistweet::Corpus fixture_corpus() {
    mistweet::Corpus c;
    for (const auto& t : expected_tweets()) {
        mistweet::TweetRecord r;
        r.id = t.id;
        r.text = t.text;
        r.label = t.label;
        r.hashtags = t.hashtags;
        c.records.push_back(std::move(r));
    }
    c.recount();
    return c;
}

}  // namespace fixture
