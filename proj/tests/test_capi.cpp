// Apache License, Version 2.0, refer to LICENSE.txt
//
// Exercises the shared library through the C header alone; nothing here may
// touch the C++ core directly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "mistweet.h"
#include "temp_dir.hpp"

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

const char* kRawM1 = "The vaccine killed my neighbor #truth https://t.co/abc";

const char* kCorpusJsonl =
    R"({"id":"m1","label":"Misleading","text":"The vaccine killed my neighbor #truth https://t.co/abc","retweet_count":5,"reply_count":1,"like_count":2})"
    "\n"
    R"({"id":"m2","label":"Misleading","text":"Pfizer poison harms children #truth #risky","retweet_count":8,"reply_count":2,"like_count":1})"
    "\n"
    R"({"id":"m3","label":"Misleading","text":"They lied about the deadly shot again @newsdesk","retweet_count":3,"reply_count":1,"like_count":4})"
    "\n"
    R"({"id":"m4","label":"Misleading","text":"Shocking report says officials hid the vaccine data","retweet_count":9,"reply_count":0,"like_count":0})"
    "\n"
    R"({"id":"m5","label":"Misleading","text":"Moderna poison killed again say them #risky","retweet_count":2,"reply_count":2,"like_count":2})"
    "\n"
    R"({"id":"m6","label":"Misleading","text":"Why do they never tell us about the risks?","retweet_count":1,"reply_count":1,"like_count":1})"
    "\n"
    R"({"id":"n1","label":"NonMisleading","text":"We love how quickly the nurses work #health","retweet_count":4,"reply_count":1,"like_count":6})"
    "\n"
    R"({"id":"n2","label":"NonMisleading","text":"The vaccine is safe and I am grateful today #health","retweet_count":2,"reply_count":0,"like_count":9})"
    "\n"
    R"({"id":"n3","label":"NonMisleading","text":"Doctors say the Pfizer shot was tested again","retweet_count":0,"reply_count":1,"like_count":3})"
    "\n"
    R"({"id":"n4","label":"NonMisleading","text":"My whole family got vaccinated and we are happy","retweet_count":5,"reply_count":2,"like_count":2})"
    "\n"
    R"({"id":"n5","label":"NonMisleading","text":"Which clinic gives the best advice for travellers?","retweet_count":1,"reply_count":0,"like_count":1})"
    "\n"
    R"({"id":"n6","label":"NonMisleading","text":"Good news the moderna trial results look safe #health","retweet_count":3,"reply_count":3,"like_count":3})"
    "\n";

struct ConfigHandle {
    mistweet_config* c = mistweet_config_new();
    ~ConfigHandle() { mistweet_config_free(c); }
    void set(const char* key, const std::string& value) {
        REQUIRE(mistweet_config_set(c, key, value.c_str()) == MISTWEET_OK);
    }
};

}  // namespace

TEST_CASE("version and the frozen feature schema") {
    CHECK(std::string(mistweet_version()) == "1.0.0");
    REQUIRE(mistweet_feature_count() == 18);
    CHECK(std::string(mistweet_feature_name(0)) == "stop_words");
    CHECK(std::string(mistweet_feature_name(10)) == "ttr");
    CHECK(std::string(mistweet_feature_name(11)) == "sentiment_compound");
    CHECK(std::string(mistweet_feature_name(17)) == "hashtag_count");
    CHECK(mistweet_feature_name(18) == nullptr);
}

TEST_CASE("clean_text strips markup and reports failures") {
    char* out = nullptr;
    REQUIRE(mistweet_clean_text("Wooooow!!!! \xF0\x9F\x98\x8A thanks @dr_b see https://t.co/xyz #Safe now",
                                &out) == MISTWEET_OK);
    CHECK(std::string(out) == "Wooow!!! thanks see Safe now");
    mistweet_string_free(out);

    CHECK(mistweet_clean_text(nullptr, &out) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "text is null");
    CHECK(mistweet_clean_text("\xF0\x9F\x98\x8A", &out) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "empty after cleaning");

    // A successful call clears the sticky message.
    REQUIRE(mistweet_clean_text("ok", &out) == MISTWEET_OK);
    CHECK(std::string(mistweet_last_error()).empty());
    mistweet_string_free(out);
}

TEST_CASE("sentiment compound matches the valence arithmetic") {
    double compound = 0.0;
    REQUIRE(mistweet_sentiment_compound("i love this", &compound) == MISTWEET_OK);
    CHECK(compound == 3.0 / std::sqrt(3.0 * 3.0 + 15.0));

    CHECK(mistweet_sentiment_compound("...", &compound) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "no tokens");
    CHECK(mistweet_sentiment_compound("fine", nullptr) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "out is null");
}

TEST_CASE("statistics kernels cross the boundary intact") {
    const double xs[] = {0.0, 0.0, 0.0};
    const double ys[] = {1.0, 1.0};
    double d = 0.0, p = -1.0;
    REQUIRE(mistweet_ks_two_sample(xs, 3, ys, 2, &d, &p) == MISTWEET_OK);
    CHECK(d == 1.0);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(mistweet_ks_two_sample(xs, 3, nullptr, 0, &d, &p) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "ys is null");

    const double as[] = {1.0, 2.0, 3.0};
    const double bs[] = {4.0, 5.0, 6.0};
    double tau = 0.0;
    REQUIRE(mistweet_kendall_tau_b(as, bs, 3, &tau) == MISTWEET_OK);
    CHECK(tau == 1.0);
    CHECK(mistweet_kendall_tau_b(as, bs, 1, &tau) == MISTWEET_PRECONDITION_ERROR);
    CHECK(std::string(mistweet_last_error()) == "kendall_tau_b requires at least 2 pairs");

    const std::int64_t perfect[] = {2, 0, 0, 2};
    double kappa = 0.0;
    REQUIRE(mistweet_fleiss_kappa(perfect, 2, 2, &kappa) == MISTWEET_OK);
    CHECK(kappa == 1.0);
    const std::int64_t unanimous[] = {2, 0, 2, 0};
    CHECK(mistweet_fleiss_kappa(unanimous, 2, 2, &kappa) == MISTWEET_PRECONDITION_ERROR);
    CHECK(std::string(mistweet_last_error()) == "no variation");
}

TEST_CASE("config handles validate keys eagerly") {
    ConfigHandle cfg;
    REQUIRE(cfg.c != nullptr);
    CHECK(mistweet_config_set(cfg.c, "bogus", "1") == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "unknown config key 'bogus'");
    CHECK(mistweet_config_set(cfg.c, "seed", "abc") == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) ==
          "config key 'seed': invalid unsigned integer 'abc'");
    CHECK(mistweet_config_set(cfg.c, "seed", "9") == MISTWEET_OK);
    CHECK(std::string(mistweet_last_error()).empty());
    CHECK(mistweet_config_set(nullptr, "seed", "9") == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "config is null");

    CHECK(mistweet_run(nullptr, cfg.c) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "subcommand is null");
    CHECK(mistweet_run("bogus", cfg.c) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "unknown subcommand 'bogus'");
    CHECK(mistweet_run("ingest", cfg.c) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "ingest: input path required");
}

TEST_CASE("pipeline, feature extraction, and model explanations round-trip") {
    ScopedDir dir("capi");
    dir.write("corpus.jsonl", kCorpusJsonl);
    const std::string out_dir = dir.file("out");

    ConfigHandle ingest;
    ingest.set("input", dir.file("corpus.jsonl"));
    ingest.set("out", out_dir);
    ingest.set("seed", "7");
    REQUIRE(mistweet_run("ingest", ingest.c) == MISTWEET_OK);

    ConfigHandle rest;
    rest.set("out", out_dir);
    rest.set("seed", "7");
    rest.set("threads", "2");
    rest.set("folds", "3");
    rest.set("trees", "15");
    rest.set("model", "rf");
    REQUIRE(mistweet_run("analyze", rest.c) == MISTWEET_OK);
    REQUIRE(mistweet_run("train", rest.c) == MISTWEET_OK);

    // The features the pipeline wrote for m1 equal the kernel's output for
    // the same raw text; the CSV stores shortest round-trip doubles.
    std::vector<double> row;
    {
        std::istringstream csv(read_file(out_dir + "/features.csv"));
        std::string line;
        REQUIRE(std::getline(csv, line));
        CHECK(line.substr(0, 9) == "id,label,");
        bool found = false;
        while (std::getline(csv, line)) {
            const std::vector<std::string> fields = split_csv_line(line);
            if (fields.empty() || fields[0] != "m1") continue;
            REQUIRE(fields.size() == 20);
            CHECK(fields[1] == "1");
            for (std::size_t j = 2; j < fields.size(); ++j)
                row.push_back(std::strtod(fields[j].c_str(), nullptr));
            found = true;
        }
        REQUIRE(found);
    }
    double kernel_row[18] = {};
    REQUIRE(mistweet_text_features(kRawM1, kernel_row) == MISTWEET_OK);
    for (std::size_t j = 0; j < 18; ++j) {
        CAPTURE(j);
        CHECK(kernel_row[j] == row[j]);
    }
    CHECK(kernel_row[17] == 1.0);  // #truth

    mistweet_model* model = nullptr;
    REQUIRE(mistweet_model_load((out_dir + "/model.json").c_str(), &model) == MISTWEET_OK);
    size_t n_features = 0;
    REQUIRE(mistweet_model_num_features(model, &n_features) == MISTWEET_OK);
    REQUIRE(n_features == 18);

    double pred = -1.0;
    REQUIRE(mistweet_model_predict(model, kernel_row, 18, &pred) == MISTWEET_OK);
    CHECK(pred >= 0.0);
    CHECK(pred <= 1.0);

    double phi[18] = {};
    double base = 0.0, shap_pred = 0.0;
    REQUIRE(mistweet_model_shap(model, kernel_row, 18, phi, &base, &shap_pred) == MISTWEET_OK);
    CHECK(shap_pred == pred);
    double total = base;
    for (double v : phi) total += v;
    CHECK(std::fabs(total - pred) <= 1e-9);

    CHECK(mistweet_model_predict(model, kernel_row, 3, &pred) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "feature count mismatch: got 3, model expects 18");
    mistweet_model_free(model);

    mistweet_model* missing = nullptr;
    CHECK(mistweet_model_load(dir.file("absent.json").c_str(), &missing) == MISTWEET_INPUT_ERROR);
    CHECK(std::string(mistweet_last_error()) == "model not found: " + dir.file("absent.json"));
}
