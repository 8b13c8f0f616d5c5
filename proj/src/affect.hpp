// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexicons.hpp"
#include "syntax.hpp"

namespace mistweet {

enum class SentimentCategory { Positive, Negative, Neutral };

std::string_view sentiment_name(SentimentCategory c);

// Positive iff compound >= 0.05, Negative iff compound <= -0.05, else Neutral.
SentimentCategory categorize_compound(double compound);

struct SentimentScore {
    double compound = 0.0;  // S / sqrt(S^2 + 15), in [-1, 1]
    SentimentCategory category = SentimentCategory::Neutral;
};

// Case-folded lexicon sum; a negator within the 3 preceding tokens flips a
// hit's valence by -0.74 (applied once per hit).
SentimentScore sentiment_score(const std::vector<Token>& tokens,
                               const std::unordered_map<std::string, double>& valence_lexicon,
                               const std::unordered_set<std::string>& negators);

struct EmotionScores {
    std::array<double, kEmotionCount> scores{};  // sum to 1 when any hit, else all 0
    std::optional<Emotion> dominant;
};

// Raw hit counts normalized to sum 1; tie-break Fear > Surprise > Sadness >
// Anger > Happiness.
EmotionScores emotion_scores(const std::vector<Token>& tokens,
                             const std::unordered_map<std::string, Emotion>& emotion_lexicon);

// Frozen column order [Happiness, Fear, Anger, Surprise, Sadness]; all zero
// when dominant is absent.
std::array<double, kEmotionCount> one_hot_emotion(const EmotionScores& e);

}  // namespace mistweet
