// Apache License, Version 2.0, refer to LICENSE.txt
#include "mistweet.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <string>

#include "affect.hpp"
#include "corpus.hpp"
#include "errors.hpp"
#include "explain.hpp"
#include "learn.hpp"
#include "lexicons.hpp"
#include "pipeline.hpp"
#include "stats.hpp"
#include "syntax.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

// Exceptions must not cross the C boundary; the taxonomy maps onto codes and
// anything unexpected counts as an internal fault.
template <typename Fn>
int guarded(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return MISTWEET_OK;
    } catch (const mistweet::InputError& e) {
        return fail(MISTWEET_INPUT_ERROR, e.what());
    } catch (const mistweet::PreconditionError& e) {
        return fail(MISTWEET_PRECONDITION_ERROR, e.what());
    } catch (const mistweet::InternalError& e) {
        return fail(MISTWEET_INTERNAL_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail(MISTWEET_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(MISTWEET_INTERNAL_ERROR, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr) throw mistweet::InputError(std::string(name) + " is null");
}

const mistweet::Lexicons& kernel_lexicons() {
    static const mistweet::Lexicons lex = mistweet::default_lexicons();
    return lex;
}

}  // namespace

struct mistweet_config {
    std::map<std::string, std::string> kv;
};

struct mistweet_model {
    mistweet::LoadedModel loaded;
};

extern "C" {

const char* mistweet_version(void) { return "1.0.0"; }

const char* mistweet_last_error(void) { return g_last_error.c_str(); }

mistweet_config* mistweet_config_new(void) {
    return new (std::nothrow) mistweet_config();
}

void mistweet_config_free(mistweet_config* config) { delete config; }

int mistweet_config_set(mistweet_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        // Validates the key name and, for numeric keys, the value format.
        mistweet::config_from_map({{key, value}});
        config->kv[key] = value;
    });
}

int mistweet_run(const char* subcommand, const mistweet_config* config) {
    return guarded([&] {
        require(subcommand, "subcommand");
        require(config, "config");
        mistweet::run_subcommand(subcommand, mistweet::config_from_map(config->kv));
    });
}

int mistweet_clean_text(const char* text, char** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const std::string cleaned = mistweet::clean_text(text);
        char* buf = static_cast<char*>(std::malloc(cleaned.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, cleaned.c_str(), cleaned.size() + 1);
        *out = buf;
    });
}

void mistweet_string_free(char* s) { std::free(s); }

int mistweet_sentiment_compound(const char* text, double* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const auto& lex = kernel_lexicons();
        const auto tokens = mistweet::tokenize(mistweet::clean_text(text));
        *out = mistweet::sentiment_score(tokens, lex.valence, lex.negators).compound;
    });
}

size_t mistweet_feature_count(void) { return mistweet::kFeatureCount; }

const char* mistweet_feature_name(size_t i) {
    if (i >= mistweet::kFeatureNames.size()) return nullptr;
    return mistweet::kFeatureNames[i].data();
}

int mistweet_text_features(const char* text, double* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const auto& lex = kernel_lexicons();
        const std::string raw = text;
        const auto tokens = mistweet::tokenize(mistweet::clean_text(raw));
        const auto tags = mistweet::pos_tag(tokens, lex.closed_class);
        const auto profile = mistweet::syntactic_profile(tokens, tags, lex.stopwords);
        const auto sentiment = mistweet::sentiment_score(tokens, lex.valence, lex.negators);
        const auto emotions = mistweet::emotion_scores(tokens, lex.emotions);
        const auto row = mistweet::feature_row(profile, sentiment, emotions,
                                               mistweet::extract_hashtags(raw).size());
        std::memcpy(out, row.data(), row.size() * sizeof(double));
    });
}

int mistweet_ks_two_sample(const double* xs, size_t n_xs, const double* ys, size_t n_ys,
                           double* d, double* p_value) {
    return guarded([&] {
        require(xs, "xs");
        require(ys, "ys");
        const auto res = mistweet::ks_two_sample(std::vector<double>(xs, xs + n_xs),
                                                 std::vector<double>(ys, ys + n_ys));
        if (d != nullptr) *d = res.d;
        if (p_value != nullptr) *p_value = res.p_value;
    });
}

int mistweet_kendall_tau_b(const double* xs, const double* ys, size_t n, double* tau) {
    return guarded([&] {
        require(xs, "xs");
        require(ys, "ys");
        require(tau, "tau");
        *tau = mistweet::kendall_tau_b(std::vector<double>(xs, xs + n),
                                       std::vector<double>(ys, ys + n));
    });
}

int mistweet_fleiss_kappa(const int64_t* counts, size_t n_subjects, size_t n_categories,
                          double* kappa) {
    return guarded([&] {
        require(counts, "counts");
        require(kappa, "kappa");
        std::vector<std::vector<std::int64_t>> rows(n_subjects);
        for (size_t i = 0; i < n_subjects; ++i)
            rows[i].assign(counts + i * n_categories, counts + (i + 1) * n_categories);
        *kappa = mistweet::fleiss_kappa(rows).kappa;
    });
}

int mistweet_model_load(const char* path, mistweet_model** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto model = std::make_unique<mistweet_model>();
        model->loaded = mistweet::load_model_json(path);
        *out = model.release();
    });
}

void mistweet_model_free(mistweet_model* model) { delete model; }

int mistweet_model_num_features(const mistweet_model* model, size_t* out) {
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        *out = model->loaded.feature_names.size();
    });
}

int mistweet_model_predict(const mistweet_model* model, const double* x, size_t n, double* out) {
    return guarded([&] {
        require(model, "model");
        require(x, "x");
        require(out, "out");
        *out = mistweet::predict_proba(model->loaded, std::vector<double>(x, x + n));
    });
}

int mistweet_model_shap(const mistweet_model* model, const double* x, size_t n, double* phi,
                        double* base, double* prediction) {
    return guarded([&] {
        require(model, "model");
        require(x, "x");
        require(phi, "phi");
        const auto attribution =
            mistweet::tree_shap(model->loaded, std::vector<double>(x, x + n));
        std::memcpy(phi, attribution.values.data(), attribution.values.size() * sizeof(double));
        if (base != nullptr) *base = attribution.base_value;
        if (prediction != nullptr) *prediction = attribution.prediction;
    });
}

}  // extern "C"
