// Apache License, Version 2.0, refer to LICENSE.txt
#include "affect.hpp"

#include <cmath>

#include "errors.hpp"
#include "textutil.hpp"

namespace mistweet {

std::string_view sentiment_name(SentimentCategory c) {
    switch (c) {
        case SentimentCategory::Positive: return "positive";
        case SentimentCategory::Negative: return "negative";
        default: return "neutral";
    }
}

SentimentCategory categorize_compound(double compound) {
    if (compound >= 0.05) return SentimentCategory::Positive;
    if (compound <= -0.05) return SentimentCategory::Negative;
    return SentimentCategory::Neutral;
}

SentimentScore sentiment_score(const std::vector<Token>& tokens,
                               const std::unordered_map<std::string, double>& valence_lexicon,
                               const std::unordered_set<std::string>& negators) {
    if (tokens.empty()) throw InputError("sentiment_score requires at least one token");
    double s = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto it = valence_lexicon.find(casefold(tokens[i].surface));
        if (it == valence_lexicon.end()) continue;
        double v = it->second;
        for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
            if (negators.count(casefold(tokens[i - back].surface))) {
                v *= -0.74;
                break;
            }
        }
        s += v;
    }
    SentimentScore out;
    out.compound = s / std::sqrt(s * s + 15.0);
    out.category = categorize_compound(out.compound);
    return out;
}

EmotionScores emotion_scores(const std::vector<Token>& tokens,
                             const std::unordered_map<std::string, Emotion>& emotion_lexicon) {
    if (tokens.empty()) throw InputError("emotion_scores requires at least one token");
    std::array<std::int64_t, kEmotionCount> hits{};
    std::int64_t total = 0;
    for (const auto& t : tokens) {
        auto it = emotion_lexicon.find(casefold(t.surface));
        if (it == emotion_lexicon.end()) continue;
        ++hits[static_cast<int>(it->second)];
        ++total;
    }
    EmotionScores out;
    if (total == 0) return out;
    for (int e = 0; e < kEmotionCount; ++e) {
        out.scores[e] = static_cast<double>(hits[e]) / static_cast<double>(total);
    }
    static constexpr Emotion kTieOrder[] = {Emotion::Fear, Emotion::Surprise, Emotion::Sadness,
                                            Emotion::Anger, Emotion::Happiness};
    Emotion best = kTieOrder[0];
    for (Emotion e : kTieOrder) {
        if (out.scores[static_cast<int>(e)] > out.scores[static_cast<int>(best)]) best = e;
    }
    out.dominant = best;
    return out;
}

std::array<double, kEmotionCount> one_hot_emotion(const EmotionScores& e) {
    std::array<double, kEmotionCount> out{};
    if (e.dominant) out[static_cast<int>(*e.dominant)] = 1.0;
    return out;
}

}  // namespace mistweet
