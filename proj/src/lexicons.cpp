// Apache License, Version 2.0, refer to LICENSE.txt
#include "lexicons.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "textutil.hpp"

namespace mistweet {

namespace embedded {
extern const unsigned char kStopwords[];
extern const std::size_t kStopwords_len;
extern const unsigned char kClosedClass[];
extern const std::size_t kClosedClass_len;
extern const unsigned char kValence[];
extern const std::size_t kValence_len;
extern const unsigned char kEmotions[];
extern const std::size_t kEmotions_len;
extern const unsigned char kNegators[];
extern const std::size_t kNegators_len;
extern const unsigned char kVaccines[];
extern const std::size_t kVaccines_len;
}  // namespace embedded

Bucket bucket_of(PosTag tag) {
    switch (tag) {
        case PosTag::NN:
        case PosTag::NNS:
        case PosTag::NNP:
        case PosTag::NNPS:
            return Bucket::Noun;
        case PosTag::PRP:
        case PosTag::PRPS:
            return Bucket::Pronoun;
        case PosTag::VB:
        case PosTag::VBD:
        case PosTag::VBG:
        case PosTag::VBN:
        case PosTag::VBP:
        case PosTag::VBZ:
        case PosTag::MD:
            return Bucket::Verb;
        case PosTag::JJ:
        case PosTag::JJR:
        case PosTag::JJS:
            return Bucket::Adjective;
        case PosTag::RB:
        case PosTag::RBR:
        case PosTag::RBS:
            return Bucket::Adverb;
        case PosTag::CC:
            return Bucket::Conjunction;
        case PosTag::DT:
        case PosTag::PDT:
            return Bucket::Determiner;
        case PosTag::WDT:
        case PosTag::WP:
        case PosTag::WPS:
        case PosTag::WRB:
            return Bucket::WhWord;
        default:
            return Bucket::Other;
    }
}

namespace {

struct TagName {
    PosTag tag;
    std::string_view name;
};

constexpr TagName kTagNames[] = {
    {PosTag::NN, "NN"},     {PosTag::NNS, "NNS"},   {PosTag::NNP, "NNP"},
    {PosTag::NNPS, "NNPS"}, {PosTag::PRP, "PRP"},   {PosTag::PRPS, "PRP$"},
    {PosTag::VB, "VB"},     {PosTag::VBD, "VBD"},   {PosTag::VBG, "VBG"},
    {PosTag::VBN, "VBN"},   {PosTag::VBP, "VBP"},   {PosTag::VBZ, "VBZ"},
    {PosTag::MD, "MD"},     {PosTag::JJ, "JJ"},     {PosTag::JJR, "JJR"},
    {PosTag::JJS, "JJS"},   {PosTag::RB, "RB"},     {PosTag::RBR, "RBR"},
    {PosTag::RBS, "RBS"},   {PosTag::CC, "CC"},     {PosTag::DT, "DT"},
    {PosTag::PDT, "PDT"},   {PosTag::WDT, "WDT"},   {PosTag::WP, "WP"},
    {PosTag::WPS, "WP$"},   {PosTag::WRB, "WRB"},   {PosTag::IN, "IN"},
    {PosTag::TO, "TO"},     {PosTag::CD, "CD"},     {PosTag::UH, "UH"},
    {PosTag::SYM, "SYM"},   {PosTag::PUNCT, "PUNCT"},
};

constexpr std::string_view kEmotionNames[kEmotionCount] = {
    "happiness", "fear", "anger", "surprise", "sadness",
};

std::string_view view_of(const unsigned char* data, std::size_t len) {
    return std::string_view(reinterpret_cast<const char*>(data), len);
}

// Yields trimmed, comment-free lines; keeps interior whitespace/tabs.
std::vector<std::string> data_lines(std::string_view content) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t end = content.find('\n', pos);
        std::string_view line = content.substr(
            pos, end == std::string_view::npos ? content.size() - pos : end - pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (!line.empty() && line.front() != '#') out.emplace_back(line);
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

std::pair<std::string, std::string> split_tsv(const std::string& line, std::string_view what) {
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
        throw InputError(std::string(what) + ": malformed line '" + line + "'");
    }
    return {line.substr(0, tab), line.substr(tab + 1)};
}

}  // namespace

std::string_view tag_name(PosTag tag) {
    for (const auto& t : kTagNames) {
        if (t.tag == tag) return t.name;
    }
    return "PUNCT";
}

PosTag parse_tag(std::string_view name) {
    for (const auto& t : kTagNames) {
        if (t.name == name) return t.tag;
    }
    throw InputError("unknown part-of-speech tag '" + std::string(name) + "'");
}

std::string_view emotion_name(Emotion e) { return kEmotionNames[static_cast<int>(e)]; }

Emotion parse_emotion(std::string_view name) {
    for (int i = 0; i < kEmotionCount; ++i) {
        if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
    }
    throw InputError("unknown emotion '" + std::string(name) + "'");
}

std::unordered_set<std::string> parse_word_list(std::string_view content, std::string_view what) {
    std::unordered_set<std::string> out;
    for (const auto& line : data_lines(content)) {
        if (line.find('\t') != std::string::npos) {
            throw InputError(std::string(what) + ": unexpected tab in '" + line + "'");
        }
        out.insert(casefold(line));
    }
    if (out.empty()) throw InputError(std::string(what) + ": empty lexicon");
    return out;
}

std::unordered_map<std::string, PosTag> parse_closed_class(std::string_view content) {
    std::unordered_map<std::string, PosTag> out;
    for (const auto& line : data_lines(content)) {
        auto [token, tag] = split_tsv(line, "closed-class lexicon");
        auto key = casefold(token);
        if (!out.emplace(key, parse_tag(tag)).second) {
            throw InputError("closed-class lexicon: duplicate token '" + key + "'");
        }
    }
    if (out.empty()) throw InputError("closed-class lexicon: empty lexicon");
    return out;
}

std::unordered_map<std::string, double> parse_valence(std::string_view content) {
    std::unordered_map<std::string, double> out;
    for (const auto& line : data_lines(content)) {
        auto [token, value] = split_tsv(line, "valence lexicon");
        double v;
        try {
            v = std::stod(value);
        } catch (const std::exception&) {
            throw InputError("valence lexicon: bad value in '" + line + "'");
        }
        if (v < -4.0 || v > 4.0) {
            throw InputError("valence lexicon: value out of [-4,4] in '" + line + "'");
        }
        auto key = casefold(token);
        if (!out.emplace(key, v).second) {
            throw InputError("valence lexicon: duplicate token '" + key + "'");
        }
    }
    if (out.empty()) throw InputError("valence lexicon: empty lexicon");
    return out;
}

std::unordered_map<std::string, Emotion> parse_emotion_lexicon(std::string_view content) {
    std::unordered_map<std::string, Emotion> out;
    for (const auto& line : data_lines(content)) {
        auto [token, emo] = split_tsv(line, "emotion lexicon");
        auto key = casefold(token);
        if (!out.emplace(key, parse_emotion(emo)).second) {
            throw InputError("emotion lexicon: duplicate token '" + key + "'");
        }
    }
    if (out.empty()) throw InputError("emotion lexicon: empty lexicon");
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_vaccines(std::string_view content) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& line : data_lines(content)) {
        auto [canonical, alias] = split_tsv(line, "vaccine dictionary");
        out.emplace_back(casefold(canonical), casefold(alias));
    }
    if (out.empty()) throw InputError("vaccine dictionary: empty file");
    return out;
}

const Lexicons& default_lexicons() {
    static const Lexicons lex = [] {
        Lexicons l;
        l.stopwords = parse_word_list(
            view_of(embedded::kStopwords, embedded::kStopwords_len), "stopword list");
        l.closed_class =
            parse_closed_class(view_of(embedded::kClosedClass, embedded::kClosedClass_len));
        l.valence = parse_valence(view_of(embedded::kValence, embedded::kValence_len));
        l.emotions =
            parse_emotion_lexicon(view_of(embedded::kEmotions, embedded::kEmotions_len));
        l.negators = parse_word_list(
            view_of(embedded::kNegators, embedded::kNegators_len), "negator list");
        l.vaccines = parse_vaccines(view_of(embedded::kVaccines, embedded::kVaccines_len));
        return l;
    }();
    return lex;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open lexicon file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Lexicons load_lexicons(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw InputError("lexicon directory not found: " + dir);
    }
    Lexicons l = default_lexicons();
    const fs::path base(dir);
    if (fs::exists(base / "stopwords.txt")) {
        l.stopwords = parse_word_list(read_file(base / "stopwords.txt"), "stopword list");
    }
    if (fs::exists(base / "closed_class.tsv")) {
        l.closed_class = parse_closed_class(read_file(base / "closed_class.tsv"));
    }
    if (fs::exists(base / "valence.tsv")) {
        l.valence = parse_valence(read_file(base / "valence.tsv"));
    }
    if (fs::exists(base / "emotions.tsv")) {
        l.emotions = parse_emotion_lexicon(read_file(base / "emotions.tsv"));
    }
    if (fs::exists(base / "negators.txt")) {
        l.negators = parse_word_list(read_file(base / "negators.txt"), "negator list");
    }
    if (fs::exists(base / "vaccines.tsv")) {
        l.vaccines = parse_vaccines(read_file(base / "vaccines.tsv"));
    }
    return l;
}

}  // namespace mistweet
