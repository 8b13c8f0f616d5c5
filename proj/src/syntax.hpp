// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexicons.hpp"

namespace mistweet {

struct Token {
    std::string surface;
    int start_offset = 0;  // code points into the cleaned text
    bool is_word = false;  // contains at least one word code point
};

// Splits on Unicode whitespace; leading/trailing punctuation becomes separate
// one-codepoint tokens; '&' is always a standalone token; internal
// apostrophes and hyphens stay inside word tokens.
std::vector<Token> tokenize(const std::string& text);

// Deterministic cascade: closed-class lexicon, numeric, suffix rules,
// capitalized non-initial proper noun, -s strip-and-retry, default NN.
// Non-word tokens get PUNCT ('&' gets SYM).
std::vector<PosTag> pos_tag(const std::vector<Token>& tokens);
std::vector<PosTag> pos_tag(const std::vector<Token>& tokens,
                            const std::unordered_map<std::string, PosTag>& closed_class);

struct SyntacticProfile {
    std::int64_t nouns = 0;
    std::int64_t pronouns = 0;
    std::int64_t verbs = 0;
    std::int64_t adjectives = 0;
    std::int64_t adverbs = 0;
    std::int64_t conjunctions = 0;
    std::int64_t determiners = 0;
    std::int64_t wh_words = 0;
    std::int64_t stop_words = 0;
    double ttr = 0.0;               // 100 * distinct word tokens / word tokens
    double avg_token_length = 0.0;  // mean code points per word token
    std::int64_t n_tokens = 0;      // word tokens only
};

// Word tokens only feed the profile; punctuation tokens carry no bucket.
SyntacticProfile syntactic_profile(const std::vector<Token>& tokens,
                                   const std::vector<PosTag>& tags,
                                   const std::unordered_set<std::string>& stopword_lexicon);

}  // namespace mistweet
