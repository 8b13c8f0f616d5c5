// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mistweet {

// Decodes UTF-8; invalid sequences become U+FFFD so downstream code never
// sees malformed input.
std::vector<char32_t> utf8_decode(std::string_view s);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(const std::vector<char32_t>& cps);

bool is_space_cp(char32_t cp);
// Letters, digits and underscore; everything a word token may start with.
bool is_word_cp(char32_t cp);
bool is_digit_cp(char32_t cp);
// Emoji and pictographic blocks removed during cleaning.
bool is_emoji_cp(char32_t cp);
bool is_upper_cp(char32_t cp);

char32_t fold_cp(char32_t cp);
// ASCII + Latin-1 lowercasing; sufficient for the bundled lexicons.
std::string casefold(std::string_view s);

// Canonical composition for the Latin repertoire (base letter + combining
// mark -> precomposed form). Full UCD composition is out of scope; this
// subset is idempotent and covers realistic tweet input.
std::string nfc(std::string_view s);

// Zero-allocation helpers used across report writers.
std::string format_double(double v);          // shortest round-trip
std::string format_fixed(double v, int prec); // printf %.Nf

}  // namespace mistweet
