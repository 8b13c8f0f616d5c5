// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mistweet {

enum class Label { Misleading = 0, NonMisleading = 1, Unlabeled = 2 };

std::string_view label_name(Label l);
// Trims and case-folds; accepts "misleading" / "non-misleading" with optional
// spaces, hyphens, or underscores between words.
Label parse_label(std::string_view s);

struct TweetRecord {
    std::string id;
    std::string text;
    std::optional<std::string> created_at;
    std::optional<std::int64_t> retweet_count;
    std::optional<std::int64_t> reply_count;
    std::optional<std::int64_t> like_count;
    Label label = Label::Unlabeled;
    std::vector<std::string> hashtags;  // lowercase, deduplicated, no '#'
};

struct Corpus {
    std::vector<TweetRecord> records;
    std::array<std::int64_t, 3> class_counts{};  // indexed by Label

    void recount();
    std::int64_t count(Label l) const { return class_counts[static_cast<int>(l)]; }
};

enum class CorpusFormat { Jsonl, Csv };

// Errors name the offending 1-based line number or duplicate id.
Corpus load_corpus(const std::string& path, CorpusFormat format);
void save_corpus(const Corpus& c, const std::string& path);

// Fixed cleaning order: NFC, emoji strip, '#' strip, @-mention removal,
// repetition collapse (>3 to 3), URL removal, whitespace collapse + trim.
// The order makes the whole map idempotent. Case is preserved.
std::string clean_text(const std::string& raw);

// '#' at start-of-text or after a non-word character, body [A-Za-z0-9_]+;
// lowercase, deduplicated, first-occurrence order. Runs on raw text.
std::vector<std::string> extract_hashtags(const std::string& raw);

// Downsamples the majority class without replacement via a seeded shuffle;
// relative record order preserved. Unlabeled records pass through untouched.
Corpus balance_classes(const Corpus& c, std::uint64_t seed);

// Stratified split, each class independently at test_fraction (round half-up).
std::pair<Corpus, Corpus> split_train_test(const Corpus& c, double test_fraction,
                                           std::uint64_t seed);

// Distinct canonical vaccine names mentioned (case-insensitive, boundary
// substring match); aliases collapse to their canonical name. Sorted output.
std::vector<std::string> vaccine_names_mentioned(
    const std::string& text, const std::vector<std::pair<std::string, std::string>>& vaccines);
int count_vaccine_mentions(const std::string& text);
int count_vaccine_mentions(const std::string& text,
                           const std::vector<std::pair<std::string, std::string>>& vaccines);

}  // namespace mistweet
