// Apache License, Version 2.0, refer to LICENSE.txt
#include "textutil.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace mistweet {

std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto bad = [&]() { out.push_back(0xFFFD); };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(c);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            bad();
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            bad();
            ++i;
            continue;
        }
        bool ok = true;
        char32_t acc = cp;
        for (int k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            acc = (acc << 6) | (cc & 0x3F);
        }
        // Reject overlongs and surrogates.
        if (ok) {
            if ((len == 2 && acc < 0x80) || (len == 3 && acc < 0x800) ||
                (len == 4 && acc < 0x10000) || acc > 0x10FFFF ||
                (acc >= 0xD800 && acc <= 0xDFFF)) {
                ok = false;
            }
        }
        if (!ok) {
            bad();
            ++i;
            continue;
        }
        out.push_back(acc);
        i += len;
    }
    return out;
}

void utf8_append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) utf8_append(out, cp);
    return out;
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_digit_cp(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_word_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
               is_digit_cp(cp) || cp == '_';
    }
    if (cp == 0xD7 || cp == 0xF7) return false;  // multiply / divide signs
    if (cp >= 0xC0 && cp <= 0x24F) return true;  // Latin-1 Sup + Extended A/B
    if (cp >= 0x80 && cp < 0xC0) return false;   // Latin-1 punctuation block
    // General punctuation and symbol blocks; everything else defaults to
    // "letter", which is the right call for the scripts tweets contain.
    if (cp >= 0x2000 && cp <= 0x206F) return false;
    if (cp >= 0x2100 && cp <= 0x2BFF) return false;
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE00 && cp <= 0xFE6F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
    if (is_emoji_cp(cp)) return false;
    return true;
}

bool is_emoji_cp(char32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // pictographs, emoticons, ...
           (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
           (cp >= 0x2B00 && cp <= 0x2BFF) ||    // arrows/symbols
           (cp >= 0xFE00 && cp <= 0xFE0F) ||    // variation selectors
           cp == 0x200D || cp == 0x20E3;        // ZWJ, combining keycap
}

bool is_upper_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return true;
    return cp >= 0xC0 && cp <= 0xDE && cp != 0xD7;
}

char32_t fold_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

std::string casefold(std::string_view s) {
    auto cps = utf8_decode(s);
    for (auto& cp : cps) cp = fold_cp(cp);
    return utf8_encode(cps);
}

namespace {

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

// Latin-1 Supplement and Latin Extended-A precomposed forms.
constexpr std::array<Composition, 64> kCompositions{{
    {'A', 0x300, 0xC0},  {'A', 0x301, 0xC1},  {'A', 0x302, 0xC2},
    {'A', 0x303, 0xC3},  {'A', 0x308, 0xC4},  {'A', 0x30A, 0xC5},
    {'C', 0x327, 0xC7},  {'E', 0x300, 0xC8},  {'E', 0x301, 0xC9},
    {'E', 0x302, 0xCA},  {'E', 0x308, 0xCB},  {'I', 0x300, 0xCC},
    {'I', 0x301, 0xCD},  {'I', 0x302, 0xCE},  {'I', 0x308, 0xCF},
    {'N', 0x303, 0xD1},  {'O', 0x300, 0xD2},  {'O', 0x301, 0xD3},
    {'O', 0x302, 0xD4},  {'O', 0x303, 0xD5},  {'O', 0x308, 0xD6},
    {'U', 0x300, 0xD9},  {'U', 0x301, 0xDA},  {'U', 0x302, 0xDB},
    {'U', 0x308, 0xDC},  {'Y', 0x301, 0xDD},  {'a', 0x300, 0xE0},
    {'a', 0x301, 0xE1},  {'a', 0x302, 0xE2},  {'a', 0x303, 0xE3},
    {'a', 0x308, 0xE4},  {'a', 0x30A, 0xE5},  {'c', 0x327, 0xE7},
    {'e', 0x300, 0xE8},  {'e', 0x301, 0xE9},  {'e', 0x302, 0xEA},
    {'e', 0x308, 0xEB},  {'i', 0x300, 0xEC},  {'i', 0x301, 0xED},
    {'i', 0x302, 0xEE},  {'i', 0x308, 0xEF},  {'n', 0x303, 0xF1},
    {'o', 0x300, 0xF2},  {'o', 0x301, 0xF3},  {'o', 0x302, 0xF4},
    {'o', 0x303, 0xF5},  {'o', 0x308, 0xF6},  {'u', 0x300, 0xF9},
    {'u', 0x301, 0xFA},  {'u', 0x302, 0xFB},  {'u', 0x308, 0xFC},
    {'y', 0x301, 0xFD},  {'y', 0x308, 0xFF},  {'A', 0x304, 0x100},
    {'a', 0x304, 0x101}, {'E', 0x304, 0x112}, {'e', 0x304, 0x113},
    {'I', 0x304, 0x12A}, {'i', 0x304, 0x12B}, {'O', 0x304, 0x14C},
    {'o', 0x304, 0x14D}, {'U', 0x304, 0x16A}, {'u', 0x304, 0x16B},
}};

char32_t compose_pair(char32_t base, char32_t mark) {
    for (const auto& c : kCompositions) {
        if (c.base == base && c.mark == mark) return c.composed;
    }
    return 0;
}

}  // namespace

std::string nfc(std::string_view s) {
    auto cps = utf8_decode(s);
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!out.empty() && cp >= 0x300 && cp <= 0x36F) {
            if (char32_t composed = compose_pair(out.back(), cp)) {
                out.back() = composed;
                continue;
            }
        }
        out.push_back(cp);
    }
    return utf8_encode(out);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return std::string(buf);
}

}  // namespace mistweet
