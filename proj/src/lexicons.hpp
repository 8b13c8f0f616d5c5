// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace mistweet {

// Penn-Treebank-style fine tags emitted by the cascade tagger.
enum class PosTag {
    NN, NNS, NNP, NNPS,
    PRP, PRPS,                       // PRPS prints as "PRP$"
    VB, VBD, VBG, VBN, VBP, VBZ, MD,
    JJ, JJR, JJS,
    RB, RBR, RBS,
    CC, DT, PDT,
    WDT, WP, WPS, WRB,               // WPS prints as "WP$"
    IN, TO, CD, UH, SYM, PUNCT,
};

// Frozen tag-to-bucket mapping; WH-tagged words count only as WhWord.
enum class Bucket {
    Noun, Pronoun, Verb, Adjective, Adverb, Conjunction, Determiner, WhWord, Other,
};

Bucket bucket_of(PosTag tag);
std::string_view tag_name(PosTag tag);
// Throws InputError on an unknown tag string (lexicon file validation).
PosTag parse_tag(std::string_view name);

enum class Emotion { Happiness = 0, Fear = 1, Anger = 2, Surprise = 3, Sadness = 4 };
inline constexpr int kEmotionCount = 5;
std::string_view emotion_name(Emotion e);
Emotion parse_emotion(std::string_view name);

struct Lexicons {
    std::unordered_set<std::string> stopwords;
    std::unordered_map<std::string, PosTag> closed_class;
    std::unordered_map<std::string, double> valence;
    std::unordered_map<std::string, Emotion> emotions;
    std::unordered_set<std::string> negators;
    // (canonical, alias) rows in file order; canonical set defines the 0-5 range.
    std::vector<std::pair<std::string, std::string>> vaccines;
};

// Compiled-in copies of data/lexicons/*.
const Lexicons& default_lexicons();

// Loads overrides from a directory holding any of stopwords.txt,
// closed_class.tsv, valence.tsv, emotions.tsv, negators.txt, vaccines.tsv.
// Files not present fall back to the bundled defaults.
Lexicons load_lexicons(const std::string& dir);

// Parsers are exposed for tests; content is the full file text.
std::unordered_set<std::string> parse_word_list(std::string_view content, std::string_view what);
std::unordered_map<std::string, PosTag> parse_closed_class(std::string_view content);
std::unordered_map<std::string, double> parse_valence(std::string_view content);
std::unordered_map<std::string, Emotion> parse_emotion_lexicon(std::string_view content);
std::vector<std::pair<std::string, std::string>> parse_vaccines(std::string_view content);

}  // namespace mistweet
