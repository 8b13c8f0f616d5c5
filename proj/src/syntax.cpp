// Apache License, Version 2.0, refer to LICENSE.txt
#include "syntax.hpp"

#include <unordered_set>

#include "errors.hpp"
#include "textutil.hpp"

namespace mistweet {

namespace {

Token make_token(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    Token t;
    t.start_offset = static_cast<int>(begin);
    bool word = false;
    std::string surface;
    for (std::size_t i = begin; i < end; ++i) {
        utf8_append(surface, cps[i]);
        word = word || is_word_cp(cps[i]);
    }
    t.surface = std::move(surface);
    t.is_word = word;
    return t;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<char32_t> cps = utf8_decode(text);
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (is_space_cp(cps[i])) {
            ++i;
            continue;
        }
        std::size_t chunk_end = i;
        while (chunk_end < cps.size() && !is_space_cp(cps[chunk_end])) ++chunk_end;

        std::size_t a = i, b = chunk_end;
        while (a < b && !is_word_cp(cps[a])) {
            out.push_back(make_token(cps, a, a + 1));
            ++a;
        }
        std::size_t trailing = b;
        while (trailing > a && !is_word_cp(cps[trailing - 1])) --trailing;
        // Middle [a, trailing) starts and ends on word code points; '&' inside
        // still splits into a standalone token.
        std::size_t seg = a;
        for (std::size_t j = a; j <= trailing; ++j) {
            if (j == trailing || cps[j] == U'&') {
                if (j > seg) out.push_back(make_token(cps, seg, j));
                if (j < trailing) out.push_back(make_token(cps, j, j + 1));  // the '&'
                seg = j + 1;
            }
        }
        for (std::size_t j = trailing; j < b; ++j) out.push_back(make_token(cps, j, j + 1));
        i = chunk_end;
    }
    bool any_word = false;
    for (const auto& t : out) any_word = any_word || t.is_word;
    if (!any_word) throw InputError("no tokens");
    return out;
}

std::vector<PosTag> pos_tag(const std::vector<Token>& tokens) {
    return pos_tag(tokens, default_lexicons().closed_class);
}

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_verb_tag(PosTag t) {
    return t == PosTag::VB || t == PosTag::VBD || t == PosTag::VBG || t == PosTag::VBN ||
           t == PosTag::VBP || t == PosTag::VBZ || t == PosTag::MD;
}

PosTag tag_one(const Token& tok, std::size_t index,
               const std::unordered_map<std::string, PosTag>& closed_class) {
    if (!tok.is_word) return tok.surface == "&" ? PosTag::SYM : PosTag::PUNCT;

    std::string fold = casefold(tok.surface);
    if (auto it = closed_class.find(fold); it != closed_class.end()) return it->second;

    std::vector<char32_t> cps = utf8_decode(fold);
    bool has_digit = false, has_letter = false;
    for (char32_t cp : cps) {
        if (is_digit_cp(cp)) {
            has_digit = true;
        } else if (is_word_cp(cp) && cp != U'_') {
            has_letter = true;
        }
    }
    if (has_digit && !has_letter) return PosTag::CD;

    const auto len = static_cast<long>(cps.size());
    if (ends_with(fold, "ly") && len > 3) return PosTag::RB;
    if (ends_with(fold, "ing") && len > 4) return PosTag::VBG;
    if (ends_with(fold, "ed") && len > 3) return PosTag::VBD;
    if (len > 4 && (ends_with(fold, "ous") || ends_with(fold, "ful") || ends_with(fold, "able") ||
                    ends_with(fold, "ible") || ends_with(fold, "ive"))) {
        return PosTag::JJ;
    }
    if (len > 4 && (ends_with(fold, "ness") || ends_with(fold, "ment") || ends_with(fold, "tion") ||
                    ends_with(fold, "sion") || ends_with(fold, "ship") || ends_with(fold, "ity"))) {
        return PosTag::NN;
    }

    std::vector<char32_t> surface_cps = utf8_decode(tok.surface);
    if (index > 0 && !surface_cps.empty() && is_upper_cp(surface_cps[0])) return PosTag::NNP;

    if (ends_with(fold, "s") && !ends_with(fold, "ss") && len > 3) {
        std::string base = fold.substr(0, fold.size() - 1);
        if (auto it = closed_class.find(base); it != closed_class.end() && is_verb_tag(it->second)) {
            return PosTag::VBZ;
        }
        return PosTag::NNS;
    }
    return PosTag::NN;
}

}  // namespace

std::vector<PosTag> pos_tag(const std::vector<Token>& tokens,
                            const std::unordered_map<std::string, PosTag>& closed_class) {
    if (tokens.empty()) throw InputError("pos_tag requires at least one token");
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        tags.push_back(tag_one(tokens[i], i, closed_class));
    }
    return tags;
}

SyntacticProfile syntactic_profile(const std::vector<Token>& tokens,
                                   const std::vector<PosTag>& tags,
                                   const std::unordered_set<std::string>& stopword_lexicon) {
    if (tokens.size() != tags.size()) {
        throw InputError("tokens and tags must be aligned");
    }
    SyntacticProfile p;
    std::unordered_set<std::string> types;
    std::int64_t length_sum = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!tokens[i].is_word) continue;
        ++p.n_tokens;
        switch (bucket_of(tags[i])) {
            case Bucket::Noun: ++p.nouns; break;
            case Bucket::Pronoun: ++p.pronouns; break;
            case Bucket::Verb: ++p.verbs; break;
            case Bucket::Adjective: ++p.adjectives; break;
            case Bucket::Adverb: ++p.adverbs; break;
            case Bucket::Conjunction: ++p.conjunctions; break;
            case Bucket::Determiner: ++p.determiners; break;
            case Bucket::WhWord: ++p.wh_words; break;
            case Bucket::Other: break;
        }
        std::string fold = casefold(tokens[i].surface);
        if (stopword_lexicon.count(fold)) ++p.stop_words;
        types.insert(std::move(fold));
        length_sum += static_cast<std::int64_t>(utf8_decode(tokens[i].surface).size());
    }
    if (p.n_tokens == 0) throw PreconditionError("zero word tokens");
    p.ttr = 100.0 * static_cast<double>(types.size()) / static_cast<double>(p.n_tokens);
    p.avg_token_length = static_cast<double>(length_sum) / static_cast<double>(p.n_tokens);
    return p;
}

}  // namespace mistweet
