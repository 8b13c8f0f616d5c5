// Apache License, Version 2.0, refer to LICENSE.txt
#include "topics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <unordered_map>

#include "errors.hpp"
#include "rng.hpp"
#include "syntax.hpp"
#include "textutil.hpp"

namespace mistweet {

namespace {

struct PreparedDocs {
    std::vector<std::string> vocab;
    std::vector<std::vector<int>> ids;  // one row per input doc, possibly empty
    std::int64_t total_tokens = 0;
};

// Case-folds, drops stopwords, then drops words seen fewer than twice in the
// whole corpus. Document rows are kept even when they end up empty so that
// theta stays aligned with the input.
PreparedDocs prepare_docs(const std::vector<std::vector<std::string>>& docs,
                          const std::unordered_set<std::string>& stops) {
    std::vector<std::vector<std::string>> folded(docs.size());
    std::unordered_map<std::string, std::int64_t> freq;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        folded[d].reserve(docs[d].size());
        for (const auto& w : docs[d]) {
            std::string f = casefold(w);
            if (f.empty() || stops.count(f) > 0) continue;
            ++freq[f];
            folded[d].push_back(std::move(f));
        }
    }
    PreparedDocs out;
    for (const auto& [w, c] : freq) {
        if (c >= 2) out.vocab.push_back(w);
    }
    std::sort(out.vocab.begin(), out.vocab.end());
    std::unordered_map<std::string, int> word_id;
    word_id.reserve(out.vocab.size());
    for (std::size_t i = 0; i < out.vocab.size(); ++i) word_id.emplace(out.vocab[i], static_cast<int>(i));
    out.ids.resize(docs.size());
    for (std::size_t d = 0; d < folded.size(); ++d) {
        for (const auto& f : folded[d]) {
            auto it = word_id.find(f);
            if (it == word_id.end()) continue;
            out.ids[d].push_back(it->second);
            ++out.total_tokens;
        }
    }
    return out;
}

struct GibbsCounts {
    std::vector<std::vector<std::int64_t>> n_dt;  // D x k
    std::vector<std::vector<std::int64_t>> n_tw;  // k x V
    std::vector<std::int64_t> n_t;                // k
};

void check_conservation(const GibbsCounts& c, const std::vector<std::vector<int>>& ids,
                        std::int64_t total) {
    std::int64_t sum_t = std::accumulate(c.n_t.begin(), c.n_t.end(), std::int64_t{0});
    if (sum_t != total) throw InternalError("lda_fit: count conservation violated");
    for (std::size_t d = 0; d < ids.size(); ++d) {
        std::int64_t s = std::accumulate(c.n_dt[d].begin(), c.n_dt[d].end(), std::int64_t{0});
        if (s != static_cast<std::int64_t>(ids[d].size()))
            throw InternalError("lda_fit: count conservation violated");
    }
    for (std::size_t t = 0; t < c.n_tw.size(); ++t) {
        std::int64_t s = std::accumulate(c.n_tw[t].begin(), c.n_tw[t].end(), std::int64_t{0});
        if (s != c.n_t[t]) throw InternalError("lda_fit: count conservation violated");
    }
}

// Draws an index proportional to weights; total is their sum (always > 0 here
// because every weight carries a positive smoothing term).
int draw_index(Rng& rng, const std::vector<double>& weights, double total) {
    const double u = rng.uniform() * total;
    double cum = 0.0;
    for (std::size_t t = 0; t < weights.size(); ++t) {
        cum += weights[t];
        if (u < cum) return static_cast<int>(t);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace

TopicModel lda_fit(const std::vector<std::vector<std::string>>& docs, int k, double alpha,
                   double beta, int iterations, std::uint64_t seed,
                   const std::unordered_set<std::string>* stopwords, bool check_invariants) {
    if (k < 2) throw InputError("lda_fit: k must be >= 2");
    if (iterations < 1) throw InputError("lda_fit: iterations must be >= 1");
    if (docs.empty()) throw PreconditionError("lda_fit: no documents");
    const std::unordered_set<std::string>& stops =
        stopwords != nullptr ? *stopwords : default_lexicons().stopwords;
    if (alpha <= 0.0) alpha = 50.0 / static_cast<double>(k);
    if (beta <= 0.0) beta = kLdaDefaultBeta;

    PreparedDocs prep = prepare_docs(docs, stops);
    if (prep.vocab.empty()) throw PreconditionError("lda_fit: vocabulary is empty after pruning");
    std::int64_t non_empty = 0;
    for (const auto& row : prep.ids)
        if (!row.empty()) ++non_empty;
    if (non_empty < 2)
        throw PreconditionError("lda_fit: fewer than 2 non-empty documents after pruning");
    if (static_cast<std::int64_t>(k) > prep.total_tokens)
        throw PreconditionError("lda_fit: k exceeds the total token count");

    const std::size_t D = prep.ids.size();
    const std::size_t V = prep.vocab.size();
    GibbsCounts c;
    c.n_dt.assign(D, std::vector<std::int64_t>(k, 0));
    c.n_tw.assign(k, std::vector<std::int64_t>(V, 0));
    c.n_t.assign(k, 0);

    Rng rng(seed);
    std::vector<std::vector<int>> z(D);
    for (std::size_t d = 0; d < D; ++d) {
        z[d].resize(prep.ids[d].size());
        for (std::size_t i = 0; i < prep.ids[d].size(); ++i) {
            const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
            z[d][i] = t;
            ++c.n_dt[d][t];
            ++c.n_tw[t][prep.ids[d][i]];
            ++c.n_t[t];
        }
    }

    const double v_beta = static_cast<double>(V) * beta;
    std::vector<double> weights(k);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t i = 0; i < prep.ids[d].size(); ++i) {
                const int w = prep.ids[d][i];
                const int old_t = z[d][i];
                --c.n_dt[d][old_t];
                --c.n_tw[old_t][w];
                --c.n_t[old_t];
                double total = 0.0;
                for (int t = 0; t < k; ++t) {
                    const double wt = (static_cast<double>(c.n_dt[d][t]) + alpha) *
                                      (static_cast<double>(c.n_tw[t][w]) + beta) /
                                      (static_cast<double>(c.n_t[t]) + v_beta);
                    weights[t] = wt;
                    total += wt;
                }
                const int new_t = draw_index(rng, weights, total);
                z[d][i] = new_t;
                ++c.n_dt[d][new_t];
                ++c.n_tw[new_t][w];
                ++c.n_t[new_t];
            }
        }
        if (check_invariants) check_conservation(c, prep.ids, prep.total_tokens);
    }

    TopicModel m;
    m.k = k;
    m.alpha = alpha;
    m.beta = beta;
    m.seed = seed;
    m.iterations = iterations;
    m.vocabulary = std::move(prep.vocab);
    m.phi.assign(k, std::vector<double>(V, 0.0));
    for (int t = 0; t < k; ++t) {
        const double denom = static_cast<double>(c.n_t[t]) + v_beta;
        for (std::size_t w = 0; w < V; ++w)
            m.phi[t][w] = (static_cast<double>(c.n_tw[t][w]) + beta) / denom;
    }
    m.theta.assign(D, std::vector<double>(k, 0.0));
    const double k_alpha = static_cast<double>(k) * alpha;
    for (std::size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(prep.ids[d].size()) + k_alpha;
        for (int t = 0; t < k; ++t)
            m.theta[d][t] = (static_cast<double>(c.n_dt[d][t]) + alpha) / denom;
    }
    return m;
}

int select_k(const std::vector<std::vector<std::string>>& docs,
             const std::vector<int>& candidate_ks, double holdout_fraction, std::uint64_t seed,
             const std::unordered_set<std::string>* stopwords) {
    if (candidate_ks.empty()) throw InputError("select_k: no candidate values");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw InputError("select_k: holdout_fraction must be in (0, 1)");
    std::vector<int> ks = candidate_ks;
    std::sort(ks.begin(), ks.end());
    for (int k : ks)
        if (k < 2) throw InputError("select_k: k must be >= 2");
    if (docs.size() < 2) throw PreconditionError("select_k: need at least 2 documents");

    std::vector<std::size_t> idx(docs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng split_rng(seed);
    split_rng.shuffle(idx);
    std::size_t n_hold =
        static_cast<std::size_t>(std::floor(static_cast<double>(docs.size()) * holdout_fraction + 0.5));
    if (n_hold < 1) n_hold = 1;
    if (n_hold > docs.size() - 1) n_hold = docs.size() - 1;
    std::vector<std::size_t> hold_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_hold));
    std::vector<std::size_t> train_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_hold), idx.end());
    std::sort(hold_idx.begin(), hold_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::vector<std::vector<std::string>> train_docs;
    train_docs.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_docs.push_back(docs[i]);

    // The 50/k training default adds the same total pseudo-mass to theta at
    // every k, which makes candidates score near-identically on cleanly
    // separated corpora; a fixed symmetric alpha lets them compete on
    // structure instead of prior mass.
    constexpr double grid_alpha = 0.1;
    int best_k = -1;
    double best_ll = 0.0;
    for (int k : ks) {
        TopicModel m = lda_fit(train_docs, k, grid_alpha, 0.0, kLdaDefaultIterations,
                               derive_seed(seed, static_cast<std::uint64_t>(k)), stopwords);
        std::unordered_map<std::string, int> word_id;
        word_id.reserve(m.vocabulary.size());
        for (std::size_t i = 0; i < m.vocabulary.size(); ++i)
            word_id.emplace(m.vocabulary[i], static_cast<int>(i));

        Rng fold_rng(derive_seed(seed, 100000 + static_cast<std::uint64_t>(k)));
        double ll = 0.0;
        std::int64_t n_tokens = 0;
        std::vector<double> weights(static_cast<std::size_t>(k));
        for (std::size_t hi : hold_idx) {
            std::vector<int> ids;
            for (const auto& w : docs[hi]) {
                auto it = word_id.find(casefold(w));
                if (it != word_id.end()) ids.push_back(it->second);
            }
            // Document completion: theta is folded in on the even positions
            // and scored on the odd ones. Scoring the same tokens theta was
            // adapted to would reward per-word topics at any k.
            std::vector<int> est, held;
            for (std::size_t i = 0; i < ids.size(); ++i)
                (i % 2 == 0 ? est : held).push_back(ids[i]);
            if (held.empty()) continue;
            std::vector<int> zd(est.size());
            std::vector<std::int64_t> n_dt(static_cast<std::size_t>(k), 0);
            for (std::size_t i = 0; i < est.size(); ++i) {
                const int t = static_cast<int>(fold_rng.below(static_cast<std::uint64_t>(k)));
                zd[i] = t;
                ++n_dt[static_cast<std::size_t>(t)];
            }
            for (int sweep = 0; sweep < 50; ++sweep) {
                for (std::size_t i = 0; i < est.size(); ++i) {
                    const int w = est[i];
                    --n_dt[static_cast<std::size_t>(zd[i])];
                    double total = 0.0;
                    for (int t = 0; t < k; ++t) {
                        const double wt =
                            m.phi[t][w] * (static_cast<double>(n_dt[static_cast<std::size_t>(t)]) + m.alpha);
                        weights[static_cast<std::size_t>(t)] = wt;
                        total += wt;
                    }
                    const int new_t = draw_index(fold_rng, weights, total);
                    zd[i] = new_t;
                    ++n_dt[static_cast<std::size_t>(new_t)];
                }
            }
            const double denom = static_cast<double>(est.size()) + static_cast<double>(k) * m.alpha;
            for (int w : held) {
                double p = 0.0;
                for (int t = 0; t < k; ++t) {
                    const double theta_t =
                        (static_cast<double>(n_dt[static_cast<std::size_t>(t)]) + m.alpha) / denom;
                    p += theta_t * m.phi[t][w];
                }
                ll += std::log(p);
                ++n_tokens;
            }
        }
        if (n_tokens == 0)
            throw PreconditionError("select_k: held-out documents have no in-vocabulary tokens");
        const double per_token = ll / static_cast<double>(n_tokens);
        if (best_k < 0 || per_token > best_ll + 1e-12) {
            best_k = k;
            best_ll = per_token;
        }
    }
    return best_k;
}

std::vector<std::vector<std::pair<std::string, double>>> top_words_per_topic(const TopicModel& m,
                                                                             std::size_t n) {
    std::vector<std::vector<std::pair<std::string, double>>> out(static_cast<std::size_t>(m.k));
    const std::size_t take = std::min(n, m.vocabulary.size());
    for (int t = 0; t < m.k; ++t) {
        std::vector<std::size_t> order(m.vocabulary.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (m.phi[t][a] != m.phi[t][b]) return m.phi[t][a] > m.phi[t][b];
            return m.vocabulary[a] < m.vocabulary[b];
        });
        auto& row = out[static_cast<std::size_t>(t)];
        row.reserve(take);
        for (std::size_t i = 0; i < take; ++i)
            row.emplace_back(m.vocabulary[order[i]], m.phi[t][order[i]]);
    }
    return out;
}

std::string TopicFilter::describe() const {
    std::string out;
    auto add = [&out](const std::string& part) {
        if (!out.empty()) out += ",";
        out += part;
    };
    if (label) add("label=" + std::string(label_name(*label)));
    if (sentiment) add("sentiment=" + std::string(sentiment_name(*sentiment)));
    if (emotion) add("emotion=" + std::string(emotion_name(*emotion)));
    if (out.empty()) return "all";
    return out;
}

ConditionalTopics conditional_topics(const Corpus& corpus, const TopicFilter& filter,
                                     const Lexicons& lex, int k, double alpha, double beta,
                                     int iterations, std::uint64_t seed) {
    if (k < 2) throw InputError("conditional topics: k must be >= 2");
    if (iterations < 1) throw InputError("conditional topics: iterations must be >= 1");
    const std::string desc = filter.describe();
    std::vector<std::vector<std::string>> docs;
    for (const auto& rec : corpus.records) {
        if (filter.label && rec.label != *filter.label) continue;
        std::vector<Token> tokens;
        try {
            tokens = tokenize(clean_text(rec.text));
        } catch (const InputError&) {
            continue;  // nothing usable in this record
        }
        if (filter.sentiment) {
            const SentimentScore s = sentiment_score(tokens, lex.valence, lex.negators);
            if (s.category != *filter.sentiment) continue;
        }
        if (filter.emotion) {
            const EmotionScores e = emotion_scores(tokens, lex.emotions);
            if (!e.dominant || *e.dominant != *filter.emotion) continue;
        }
        std::vector<std::string> doc;
        for (const auto& tok : tokens)
            if (tok.is_word) doc.push_back(tok.surface);
        docs.push_back(std::move(doc));
    }
    ConditionalTopics out;
    out.filter = desc;
    out.doc_count = docs.size();
    try {
        out.model = lda_fit(docs, k, alpha, beta, iterations, seed, &lex.stopwords);
    } catch (const PreconditionError& e) {
        throw PreconditionError(std::string("conditional topics [") + desc + "]: " + e.what());
    }
    return out;
}

}  // namespace mistweet
