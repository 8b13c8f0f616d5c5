// Apache License, Version 2.0, refer to LICENSE.txt
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "lexicons.hpp"
#include "syntax.hpp"

using namespace mistweet;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.surface);
    return out;
}

PosTag tag_of(const std::string& text, std::size_t index) {
    const auto tokens = tokenize(text);
    return pos_tag(tokens)[index];
}

}  // namespace

TEST_CASE("tokenize splits words and boundary punctuation") {
    const auto t = tokenize("Hello, world!");
    CHECK(surfaces(t) == std::vector<std::string>{"Hello", ",", "world", "!"});
    CHECK(t[0].is_word);
    CHECK_FALSE(t[1].is_word);
    CHECK(t[0].start_offset == 0);
    CHECK(t[1].start_offset == 5);
    CHECK(t[2].start_offset == 7);
}

TEST_CASE("tokenize keeps internal apostrophes and hyphens") {
    CHECK(surfaces(tokenize("don't re-open")) == std::vector<std::string>{"don't", "re-open"});
    CHECK(surfaces(tokenize("(ok)")) == std::vector<std::string>{"(", "ok", ")"});
}

TEST_CASE("ampersand always stands alone") {
    CHECK(surfaces(tokenize("you&me")) == std::vector<std::string>{"you", "&", "me"});
    CHECK(surfaces(tokenize("a & b")) == std::vector<std::string>{"a", "&", "b"});
}

TEST_CASE("tokenize rejects input with no word tokens") {
    CHECK_THROWS_AS(tokenize("!!! ..."), InputError);
    CHECK_THROWS_AS(tokenize("   "), InputError);
}

TEST_CASE("tagger cascade order") {
    // Closed-class lookup beats every suffix rule.
    CHECK(tag_of("deadly stuff", 0) == PosTag::JJ);
    CHECK(tag_of("the end", 0) == PosTag::DT);
    // Pure digits are cardinal numbers.
    CHECK(tag_of("see 42 there", 1) == PosTag::CD);
    // Suffix rules.
    CHECK(tag_of("move quickly now", 1) == PosTag::RB);
    CHECK(tag_of("keep running fast", 1) == PosTag::VBG);
    CHECK(tag_of("they tested it", 1) == PosTag::VBD);
    CHECK(tag_of("a grateful nod", 1) == PosTag::JJ);
    CHECK(tag_of("pure happiness here", 1) == PosTag::NN);
    // Capitalized word past index 0 is a proper noun.
    CHECK(tag_of("visit Paris today", 1) == PosTag::NNP);
    CHECK(tag_of("Paris visit", 0) != PosTag::NNP);
    // -s strips to a closed-class verb -> VBZ; otherwise plural noun.
    CHECK(tag_of("she tells stories", 1) == PosTag::VBZ);
    CHECK(tag_of("the nurses arrive", 1) == PosTag::NNS);
    {
        // Strip-and-retry specifically: the -s form is absent from the map.
        std::unordered_map<std::string, PosTag> cc{{"zorp", PosTag::VBP},
                                                   {"blee", PosTag::JJ}};
        const auto tokens = tokenize("zorps blees");
        const auto tags = pos_tag(tokens, cc);
        CHECK(tags[0] == PosTag::VBZ);  // base is a verb
        CHECK(tags[1] == PosTag::NNS);  // base is not a verb
    }
    // Default is a singular noun.
    CHECK(tag_of("the vaccine works", 1) == PosTag::NN);
    // Punctuation and the ampersand.
    CHECK(tag_of("yes !", 1) == PosTag::PUNCT);
    CHECK(tag_of("a & b", 1) == PosTag::SYM);
}

TEST_CASE("pos_tag requires tokens") {
    CHECK_THROWS_AS(pos_tag(std::vector<Token>{}), InputError);
}

TEST_CASE("syntactic_profile counts buckets over word tokens only") {
    const auto& lex = default_lexicons();
    const auto tokens = tokenize("The deadly vaccine quickly killed them !");
    const auto tags = pos_tag(tokens, lex.closed_class);
    const auto p = syntactic_profile(tokens, tags, lex.stopwords);
    CHECK(p.n_tokens == 6);
    CHECK(p.determiners == 1);   // the
    CHECK(p.adjectives == 1);    // deadly
    CHECK(p.nouns == 1);         // vaccine
    CHECK(p.adverbs == 1);       // quickly
    CHECK(p.verbs == 1);         // killed
    CHECK(p.pronouns == 1);      // them
    CHECK(p.wh_words == 0);
    CHECK(p.conjunctions == 0);
    CHECK(p.stop_words == 2);    // the, them
    CHECK(p.ttr == 100.0 * 6.0 / 6.0);
    CHECK(p.avg_token_length == (3.0 + 6.0 + 7.0 + 7.0 + 6.0 + 4.0) / 6.0);
}

TEST_CASE("ttr fixture is bit-exact") {
    const auto& lex = default_lexicons();
    const auto tokens = tokenize("again and again and again");
    const auto p = syntactic_profile(tokens, pos_tag(tokens, lex.closed_class), lex.stopwords);
    CHECK(p.n_tokens == 5);
    CHECK(p.ttr == 100.0 * 2.0 / 5.0);
    CHECK(p.ttr == 40.0);
    CHECK(p.adverbs == 3);
    CHECK(p.conjunctions == 2);
    CHECK(p.avg_token_length == 21.0 / 5.0);
}

TEST_CASE("syntactic_profile rejects misalignment and punctuation-only input") {
    const auto& lex = default_lexicons();
    const auto tokens = tokenize("one two");
    auto tags = pos_tag(tokens, lex.closed_class);
    tags.pop_back();
    CHECK_THROWS_AS(syntactic_profile(tokens, tags, lex.stopwords), InputError);

    Token punct;
    punct.surface = "!";
    punct.is_word = false;
    const std::vector<Token> only_punct{punct};
    const std::vector<PosTag> only_tag{PosTag::PUNCT};
    CHECK_THROWS_AS(syntactic_profile(only_punct, only_tag, lex.stopwords), PreconditionError);
}

TEST_CASE("ttr counts distinct case-folded types") {
    const auto& lex = default_lexicons();
    const auto tokens = tokenize("Word word WORD other");
    const auto p = syntactic_profile(tokens, pos_tag(tokens, lex.closed_class), lex.stopwords);
    CHECK(p.n_tokens == 4);
    CHECK(p.ttr == 100.0 * 2.0 / 4.0);
}
