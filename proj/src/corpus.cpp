// Apache License, Version 2.0, refer to LICENSE.txt
#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "lexicons.hpp"
#include "rng.hpp"
#include "textutil.hpp"

namespace mistweet {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_ascii_word(char32_t cp) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') ||
           cp == '_';
}

std::string trim_copy(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && static_cast<unsigned char>(s[a]) <= ' ') ++a;
    while (b > a && static_cast<unsigned char>(s[b - 1]) <= ' ') --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace

std::string_view label_name(Label l) {
    switch (l) {
        case Label::Misleading:
            return "misleading";
        case Label::NonMisleading:
            return "non-misleading";
        default:
            return "unlabeled";
    }
}

Label parse_label(std::string_view s) {
    std::string norm;
    for (char ch : casefold(trim_copy(s))) {
        if (ch == '-' || ch == '_' || ch == ' ') continue;
        norm.push_back(ch);
    }
    if (norm == "misleading") return Label::Misleading;
    if (norm == "nonmisleading") return Label::NonMisleading;
    throw InputError("unknown label '" + std::string(s) + "'");
}

void Corpus::recount() {
    class_counts = {0, 0, 0};
    for (const auto& r : records) ++class_counts[static_cast<int>(r.label)];
}

std::string clean_text(const std::string& raw) {
    std::vector<char32_t> cps = utf8_decode(nfc(raw));

    // Emoji and all '#' markers go first so later passes never see them.
    std::vector<char32_t> pass;
    pass.reserve(cps.size());
    for (char32_t cp : cps) {
        if (is_emoji_cp(cp) || cp == U'#') continue;
        pass.push_back(cp);
    }

    // @-mentions: '@' followed by at least one [A-Za-z0-9_].
    cps.clear();
    for (std::size_t i = 0; i < pass.size();) {
        if (pass[i] == U'@' && i + 1 < pass.size() && is_ascii_word(pass[i + 1])) {
            ++i;
            while (i < pass.size() && is_ascii_word(pass[i])) ++i;
            continue;
        }
        cps.push_back(pass[i++]);
    }

    // Character repetition beyond 3 collapses to 3. Runs before URL removal
    // so a collapsed run cannot mint a fresh URL on a second pass.
    pass.clear();
    for (std::size_t i = 0; i < cps.size();) {
        std::size_t j = i;
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        std::size_t keep = std::min<std::size_t>(j - i, 3);
        pass.insert(pass.end(), keep, cps[i]);
        i = j;
    }

    // URLs: "http://" or "https://" anywhere, or "www." at a word boundary;
    // the match and everything up to the next whitespace is dropped.
    auto matches = [&](std::size_t i, std::string_view lit) {
        if (i + lit.size() > pass.size()) return false;
        for (std::size_t k = 0; k < lit.size(); ++k) {
            if (fold_cp(pass[i + k]) != static_cast<char32_t>(lit[k])) return false;
        }
        return true;
    };
    cps.clear();
    for (std::size_t i = 0; i < pass.size();) {
        bool boundary = i == 0 || !is_word_cp(pass[i - 1]);
        if (matches(i, "http://") || matches(i, "https://") || (boundary && matches(i, "www."))) {
            while (i < pass.size() && !is_space_cp(pass[i])) ++i;
            continue;
        }
        cps.push_back(pass[i++]);
    }

    // Whitespace collapse + trim.
    pass.clear();
    for (char32_t cp : cps) {
        if (is_space_cp(cp)) {
            if (!pass.empty() && pass.back() != U' ') pass.push_back(U' ');
        } else {
            pass.push_back(cp);
        }
    }
    if (!pass.empty() && pass.back() == U' ') pass.pop_back();

    if (pass.empty()) throw InputError("empty after cleaning");
    return utf8_encode(pass);
}

std::vector<std::string> extract_hashtags(const std::string& raw) {
    std::vector<char32_t> cps = utf8_decode(raw);
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] != U'#') continue;
        std::size_t j = i + 1;
        std::string body;
        while (j < cps.size() && is_ascii_word(cps[j])) {
            body.push_back(static_cast<char>(fold_cp(cps[j])));
            ++j;
        }
        if (!body.empty() && seen.insert(body).second) out.push_back(std::move(body));
    }
    return out;
}

namespace {

std::int64_t read_count_field(const ordered_json& v, const char* name, std::size_t line) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw InputError("line " + std::to_string(line) + ": " + name +
                         " must be a non-negative integer");
    }
    return v.get<std::int64_t>();
}

std::vector<std::string> normalize_hashtags(std::vector<std::string> tags) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& t : tags) {
        std::string body;
        for (char ch : casefold(t)) {
            if (ch != '#') body.push_back(ch);
        }
        if (!body.empty() && seen.insert(body).second) out.push_back(std::move(body));
    }
    return out;
}

TweetRecord record_from_json(const ordered_json& row, std::size_t line) {
    if (!row.is_object()) throw InputError("line " + std::to_string(line) + ": not an object");
    TweetRecord r;
    if (auto it = row.find("id"); it != row.end()) {
        if (it->is_string()) {
            r.id = it->get<std::string>();
        } else if (it->is_number_integer()) {
            r.id = std::to_string(it->get<std::int64_t>());
        } else {
            throw InputError("line " + std::to_string(line) + ": id must be a string");
        }
    } else {
        throw InputError("line " + std::to_string(line) + ": missing id");
    }
    auto text = row.find("text");
    if (text == row.end() || !text->is_string()) {
        throw InputError("line " + std::to_string(line) + ": missing text");
    }
    r.text = text->get<std::string>();
    if (trim_copy(r.text).empty()) {
        throw InputError("line " + std::to_string(line) + ": empty text");
    }
    if (auto it = row.find("label"); it != row.end() && !it->is_null()) {
        if (!it->is_string()) {
            throw InputError("line " + std::to_string(line) + ": label must be a string");
        }
        try {
            r.label = parse_label(it->get<std::string>());
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(line) + ": " + e.what());
        }
    }
    if (auto it = row.find("created_at"); it != row.end() && !it->is_null()) {
        if (!it->is_string()) {
            throw InputError("line " + std::to_string(line) + ": created_at must be a string");
        }
        r.created_at = it->get<std::string>();
    }
    if (auto it = row.find("retweet_count"); it != row.end() && !it->is_null()) {
        r.retweet_count = read_count_field(*it, "retweet_count", line);
    }
    if (auto it = row.find("reply_count"); it != row.end() && !it->is_null()) {
        r.reply_count = read_count_field(*it, "reply_count", line);
    }
    if (auto it = row.find("like_count"); it != row.end() && !it->is_null()) {
        r.like_count = read_count_field(*it, "like_count", line);
    }
    if (auto it = row.find("hashtags"); it != row.end() && !it->is_null()) {
        if (!it->is_array()) {
            throw InputError("line " + std::to_string(line) + ": hashtags must be an array");
        }
        std::vector<std::string> tags;
        for (const auto& t : *it) {
            if (!t.is_string()) {
                throw InputError("line " + std::to_string(line) + ": hashtags must be strings");
            }
            tags.push_back(t.get<std::string>());
        }
        r.hashtags = normalize_hashtags(std::move(tags));
    } else {
        r.hashtags = extract_hashtags(r.text);
    }
    return r;
}

Corpus load_jsonl(std::istream& in) {
    Corpus c;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        ordered_json row;
        try {
            row = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        TweetRecord r = record_from_json(row, line_no);
        if (!ids.insert(r.id).second) throw InputError("duplicate id '" + r.id + "'");
        c.records.push_back(std::move(r));
    }
    c.recount();
    return c;
}

Corpus load_csv(std::istream& in) {
    CsvReader reader{in};
    std::vector<std::string> fields;
    std::size_t start_line = 0;
    if (!reader.next(fields, start_line)) throw InputError("empty CSV file");
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < fields.size(); ++i) col[casefold(trim_copy(fields[i]))] = i;
    if (!col.count("id") || !col.count("text")) {
        throw InputError("CSV header must contain id and text columns");
    }
    auto cell = [&](const std::vector<std::string>& row, const char* name) -> const std::string* {
        auto it = col.find(name);
        if (it == col.end() || it->second >= row.size()) return nullptr;
        return &row[it->second];
    };

    Corpus c;
    std::unordered_set<std::string> ids;
    while (reader.next(fields, start_line)) {
        if (fields.size() == 1 && trim_copy(fields[0]).empty()) continue;
        TweetRecord r;
        const std::string* id = cell(fields, "id");
        const std::string* text = cell(fields, "text");
        if (!id || trim_copy(*id).empty()) {
            throw InputError("line " + std::to_string(start_line) + ": missing id");
        }
        if (!text || trim_copy(*text).empty()) {
            throw InputError("line " + std::to_string(start_line) + ": empty text");
        }
        r.id = trim_copy(*id);
        r.text = *text;
        if (const std::string* v = cell(fields, "label"); v && !trim_copy(*v).empty()) {
            try {
                r.label = parse_label(*v);
            } catch (const InputError& e) {
                throw InputError("line " + std::to_string(start_line) + ": " + e.what());
            }
        }
        if (const std::string* v = cell(fields, "created_at"); v && !trim_copy(*v).empty()) {
            r.created_at = trim_copy(*v);
        }
        for (const char* name : {"retweet_count", "reply_count", "like_count"}) {
            const std::string* v = cell(fields, name);
            if (!v || trim_copy(*v).empty()) continue;
            std::int64_t n = 0;
            try {
                std::size_t pos = 0;
                n = std::stoll(trim_copy(*v), &pos);
                if (pos != trim_copy(*v).size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(start_line) + ": " + name +
                                 " must be a non-negative integer");
            }
            if (n < 0) {
                throw InputError("line " + std::to_string(start_line) + ": " + name +
                                 " must be a non-negative integer");
            }
            if (name[2] == 't') {
                r.retweet_count = n;
            } else if (name[2] == 'p') {
                r.reply_count = n;
            } else {
                r.like_count = n;
            }
        }
        r.hashtags = extract_hashtags(r.text);
        if (!ids.insert(r.id).second) throw InputError("duplicate id '" + r.id + "'");
        c.records.push_back(std::move(r));
    }
    c.recount();
    return c;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open corpus file " + path);
    return format == CorpusFormat::Jsonl ? load_jsonl(in) : load_csv(in);
}

void save_corpus(const Corpus& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write corpus file " + path);
    for (const auto& r : c.records) {
        ordered_json row;
        row["id"] = r.id;
        row["text"] = r.text;
        if (r.label != Label::Unlabeled) row["label"] = std::string(label_name(r.label));
        if (r.created_at) row["created_at"] = *r.created_at;
        if (r.retweet_count) row["retweet_count"] = *r.retweet_count;
        if (r.reply_count) row["reply_count"] = *r.reply_count;
        if (r.like_count) row["like_count"] = *r.like_count;
        row["hashtags"] = r.hashtags;
        out << row.dump() << '\n';
    }
    if (!out) throw InternalError("failed writing " + path);
}

Corpus balance_classes(const Corpus& c, std::uint64_t seed) {
    std::vector<std::size_t> mis, non;
    for (std::size_t i = 0; i < c.records.size(); ++i) {
        if (c.records[i].label == Label::Misleading) mis.push_back(i);
        if (c.records[i].label == Label::NonMisleading) non.push_back(i);
    }
    if (mis.empty() || non.empty()) {
        throw PreconditionError("balance_classes requires both classes present");
    }
    std::vector<std::size_t>& majority = mis.size() >= non.size() ? mis : non;
    std::size_t keep = std::min(mis.size(), non.size());
    Rng rng(seed);
    rng.shuffle(majority);
    majority.resize(keep);
    std::sort(majority.begin(), majority.end());

    std::vector<bool> retain(c.records.size(), false);
    for (std::size_t i = 0; i < c.records.size(); ++i) {
        if (c.records[i].label == Label::Unlabeled) retain[i] = true;
    }
    for (std::size_t i : mis) retain[i] = true;
    for (std::size_t i : non) retain[i] = true;

    Corpus out;
    for (std::size_t i = 0; i < c.records.size(); ++i) {
        if (retain[i]) out.records.push_back(c.records[i]);
    }
    out.recount();
    return out;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& c, double test_fraction,
                                           std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InputError("test_fraction must be in (0,1)");
    }
    if (c.count(Label::Unlabeled) > 0) {
        throw PreconditionError("split_train_test requires a fully labeled corpus");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < c.records.size(); ++i) {
        by_class[static_cast<int>(c.records[i].label)].push_back(i);
    }
    std::vector<bool> to_test(c.records.size(), false);
    for (int cls = 0; cls < 2; ++cls) {
        auto& idx = by_class[cls];
        if (idx.size() < 2) {
            throw PreconditionError("class '" +
                                    std::string(label_name(static_cast<Label>(cls))) +
                                    "' has fewer than 2 records");
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        auto n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(idx.size()) * test_fraction + 0.5));
        for (std::size_t i = 0; i < n_test && i < idx.size(); ++i) to_test[idx[i]] = true;
    }
    Corpus train, test;
    for (std::size_t i = 0; i < c.records.size(); ++i) {
        (to_test[i] ? test : train).records.push_back(c.records[i]);
    }
    train.recount();
    test.recount();
    return {std::move(train), std::move(test)};
}

std::vector<std::string> vaccine_names_mentioned(
    const std::string& text, const std::vector<std::pair<std::string, std::string>>& vaccines) {
    std::string folded = casefold(text);
    auto blocked = [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
    };
    std::unordered_set<std::string> found;
    for (const auto& [canonical, alias] : vaccines) {
        if (found.count(canonical)) continue;
        for (std::size_t pos = folded.find(alias); pos != std::string::npos;
             pos = folded.find(alias, pos + 1)) {
            bool left_ok = pos == 0 || !blocked(folded[pos - 1]);
            std::size_t end = pos + alias.size();
            bool right_ok = end >= folded.size() || !blocked(folded[end]);
            if (left_ok && right_ok) {
                found.insert(canonical);
                break;
            }
        }
    }
    std::vector<std::string> out(found.begin(), found.end());
    std::sort(out.begin(), out.end());
    return out;
}

int count_vaccine_mentions(const std::string& text) {
    return count_vaccine_mentions(text, default_lexicons().vaccines);
}

int count_vaccine_mentions(const std::string& text,
                           const std::vector<std::pair<std::string, std::string>>& vaccines) {
    return static_cast<int>(vaccine_names_mentioned(text, vaccines).size());
}

}  // namespace mistweet
