// Apache License, Version 2.0, refer to LICENSE.txt
#include "pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "affect.hpp"
#include "corpus.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "explain.hpp"
#include "learn.hpp"
#include "lexicons.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "svg.hpp"
#include "syntax.hpp"
#include "textutil.hpp"
#include "topics.hpp"

namespace fs = std::filesystem;

namespace mistweet {

using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw InputError("config key '" + key + "': invalid unsigned integer '" + value + "'");
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw InputError("config key '" + key + "': invalid integer '" + value + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "': invalid number '" + value + "'");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("cannot write " + path.string());
}

void write_json(const fs::path& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw InputError("cannot write " + path.string());
}

ordered_json read_artifact(const fs::path& path, const std::string& producer) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("missing upstream artifact: " + path.filename().string() + "; run " +
                         producer + " first");
    std::stringstream buf;
    buf << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid artifact " + path.filename().string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version") ||
        !j["schema_version"].is_number_integer())
        throw InputError("invalid artifact " + path.filename().string() +
                         ": missing schema_version");
    const std::int64_t ver = j["schema_version"].get<std::int64_t>();
    if (ver > kSchemaVersion)
        throw InputError("artifact schema_version " + std::to_string(ver) +
                         " newer than supported " + std::to_string(kSchemaVersion));
    return j;
}

Lexicons effective_lexicons(const RunConfig& config) {
    if (config.lexicon_dir.empty()) return default_lexicons();
    return load_lexicons(config.lexicon_dir);
}

CorpusFormat pick_format(const RunConfig& config) {
    if (config.format == "jsonl") return CorpusFormat::Jsonl;
    if (config.format == "csv") return CorpusFormat::Csv;
    if (!config.format.empty())
        throw InputError("unknown format '" + config.format + "' (expected jsonl or csv)");
    const std::string folded = casefold(config.input);
    if (folded.size() >= 4 && folded.substr(folded.size() - 4) == ".csv")
        return CorpusFormat::Csv;
    return CorpusFormat::Jsonl;
}

fs::path out_path(const RunConfig& config, const char* name) {
    return fs::path(config.out_dir) / name;
}

Corpus load_pipeline_corpus(const RunConfig& config) {
    fs::path path;
    if (!config.input.empty()) {
        path = config.input;
    } else {
        path = out_path(config, "corpus.jsonl");
        if (!fs::exists(path))
            throw InputError("missing upstream artifact: corpus.jsonl; run ingest first");
    }
    return load_corpus(path.string(), CorpusFormat::Jsonl);
}

struct RecordArtifacts {
    std::vector<std::optional<SyntacticProfile>> profiles;
    std::vector<std::optional<SentimentScore>> sentiments;
    std::vector<std::optional<EmotionScores>> emotions;
};

RecordArtifacts compute_artifacts(const Corpus& corpus, const Lexicons& lex, int threads) {
    RecordArtifacts arts;
    const std::size_t n = corpus.records.size();
    arts.profiles.resize(n);
    arts.sentiments.resize(n);
    arts.emotions.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            const std::vector<Token> tokens = tokenize(clean_text(corpus.records[i].text));
            const std::vector<PosTag> tags = pos_tag(tokens, lex.closed_class);
            arts.profiles[i] = syntactic_profile(tokens, tags, lex.stopwords);
            arts.sentiments[i] = sentiment_score(tokens, lex.valence, lex.negators);
            arts.emotions[i] = emotion_scores(tokens, lex.emotions);
        } catch (const Error&) {
            // record stays skipped; ids surface via build_feature_matrix
        }
    });
    return arts;
}

ordered_json metrics_json(const EvalMetrics& m) {
    ordered_json j;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    if (m.auc)
        j["auc"] = *m.auc;
    else
        j["auc"] = nullptr;
    j["n"] = m.n;
    return j;
}

ordered_json cv_json(const CvResult& cv) {
    ordered_json j;
    ordered_json folds = ordered_json::array();
    for (const auto& m : cv.folds) folds.push_back(metrics_json(m));
    j["folds"] = std::move(folds);
    j["mean"] = metrics_json(cv.mean);
    j["stddev"] = metrics_json(cv.stddev);
    j["pooled"] = metrics_json(cv.pooled);
    return j;
}

ModelSpec spec_for(ModelSpec::Kind kind, const RunConfig& config) {
    ModelSpec s;
    s.kind = kind;
    s.n_trees = config.trees;
    s.features_per_split = config.features_per_split;
    s.max_depth = config.max_depth;
    s.min_samples_split = config.min_samples_split;
    s.knn_k = config.knn_k;
    return s;
}

LabeledDataset load_features_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("missing upstream artifact: " + path.filename().string() +
                         "; run analyze first");
    CsvReader reader{in};
    std::vector<std::string> fields;
    std::size_t line = 0;
    if (!reader.next(fields, line)) throw InputError("features CSV is empty");
    if (fields.size() < 3 || fields[0] != "id" || fields[1] != "label")
        throw InputError("features CSV header must start with id,label");
    LabeledDataset d;
    d.feature_names.assign(fields.begin() + 2, fields.end());
    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != d.feature_names.size() + 2)
            throw InputError("features CSV line " + std::to_string(line) + ": wrong field count");
        d.ids.push_back(fields[0]);
        if (fields[1] == "1")
            d.y.push_back(1);
        else if (fields[1] == "0")
            d.y.push_back(0);
        else
            throw InputError("features CSV line " + std::to_string(line) +
                             ": label must be 0 or 1");
        std::vector<double> row;
        row.reserve(d.feature_names.size());
        for (std::size_t f = 2; f < fields.size(); ++f) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(fields[f], &pos));
                if (pos != fields[f].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw InputError("features CSV line " + std::to_string(line) +
                                 ": invalid number '" + fields[f] + "'");
            }
        }
        d.x.push_back(std::move(row));
    }
    if (d.x.empty()) throw InputError("features CSV has no rows");
    return d;
}

std::string pad(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s + " ";
    return s + std::string(width - s.size(), ' ');
}

std::string metrics_line(const EvalMetrics& m) {
    std::string out = "acc " + format_fixed(m.accuracy, 4) + "  prec " +
                      format_fixed(m.precision, 4) + "  rec " + format_fixed(m.recall, 4) +
                      "  f1 " + format_fixed(m.f1, 4) + "  auc ";
    out += m.auc ? format_fixed(*m.auc, 4) : std::string("n/a");
    return out;
}

}  // namespace

RunConfig config_from_map(const std::map<std::string, std::string>& kv) {
    RunConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "input") c.input = value;
        else if (key == "out") c.out_dir = value;
        else if (key == "seed") c.seed = parse_u64(key, value);
        else if (key == "threads") c.threads = parse_int(key, value);
        else if (key == "lexicon_dir") c.lexicon_dir = value;
        else if (key == "format") c.format = value;
        else if (key == "k") c.k = parse_int(key, value);
        else if (key == "k_grid") {
            c.k_grid.clear();
            for (const auto& item : split_list(value)) c.k_grid.push_back(parse_int(key, item));
        } else if (key == "iterations") c.iterations = parse_int(key, value);
        else if (key == "alpha") c.alpha = parse_real(key, value);
        else if (key == "beta") c.beta = parse_real(key, value);
        else if (key == "holdout_fraction") c.holdout_fraction = parse_real(key, value);
        else if (key == "folds") c.folds = parse_int(key, value);
        else if (key == "model") c.model = value;
        else if (key == "trees") c.trees = parse_int(key, value);
        else if (key == "features_per_split") c.features_per_split = parse_int(key, value);
        else if (key == "max_depth") c.max_depth = parse_int(key, value);
        else if (key == "min_samples_split") c.min_samples_split = parse_int(key, value);
        else if (key == "knn_k") c.knn_k = parse_int(key, value);
        else if (key == "test_fraction") c.test_fraction = parse_real(key, value);
        else if (key == "features") c.features = value;
        else if (key == "top_words") c.top_words = parse_int(key, value);
        else if (key == "model_path") c.model_path = value;
        else if (key == "ranking_path") c.ranking_path = value;
        else throw InputError("unknown config key '" + key + "'");
    }
    if (c.out_dir.empty()) throw InputError("config key 'out': empty path");
    if (c.threads < 1) throw InputError("config key 'threads': must be >= 1");
    return c;
}

void run_ingest(const RunConfig& config) {
    if (config.input.empty()) throw InputError("ingest: input path required");
    const CorpusFormat fmt = pick_format(config);
    Corpus raw = load_corpus(config.input, fmt);

    // Drop records whose text cleans to nothing; they carry no signal for any
    // downstream stage.
    Corpus kept;
    std::vector<std::string> skipped;
    for (auto& rec : raw.records) {
        try {
            tokenize(clean_text(rec.text));
        } catch (const InputError&) {
            skipped.push_back(rec.id);
            continue;
        }
        kept.records.push_back(std::move(rec));
    }
    kept.recount();
    if (kept.records.empty()) throw PreconditionError("ingest: no usable records");

    fs::create_directories(config.out_dir);
    save_corpus(kept, out_path(config, "corpus.jsonl").string());

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["input_format"] = fmt == CorpusFormat::Csv ? "csv" : "jsonl";
    j["n_records"] = kept.records.size();
    ordered_json counts;
    counts["misleading"] = kept.count(Label::Misleading);
    counts["non_misleading"] = kept.count(Label::NonMisleading);
    counts["unlabeled"] = kept.count(Label::Unlabeled);
    j["class_counts"] = std::move(counts);
    if (kept.count(Label::NonMisleading) > 0)
        j["class_ratio"] = static_cast<double>(kept.count(Label::Misleading)) /
                           static_cast<double>(kept.count(Label::NonMisleading));
    else
        j["class_ratio"] = nullptr;
    j["skipped"] = skipped;
    j["corpus_file"] = "corpus.jsonl";
    write_json(out_path(config, "ingest_summary.json"), j);

    std::string txt;
    txt += "ingest summary\n";
    txt += "records: " + std::to_string(kept.records.size()) + "\n";
    txt += "misleading: " + std::to_string(kept.count(Label::Misleading)) + "\n";
    txt += "non-misleading: " + std::to_string(kept.count(Label::NonMisleading)) + "\n";
    txt += "unlabeled: " + std::to_string(kept.count(Label::Unlabeled)) + "\n";
    txt += "skipped (empty after cleaning): " + std::to_string(skipped.size()) + "\n";
    write_text(out_path(config, "ingest_summary.txt"), txt);
}

void run_analyze(const RunConfig& config) {
    const Lexicons lex = effective_lexicons(config);
    const Corpus corpus = load_pipeline_corpus(config);
    const std::int64_t n_mis = corpus.count(Label::Misleading);
    const std::int64_t n_non = corpus.count(Label::NonMisleading);
    if (n_mis == 0) throw PreconditionError("analyze: class 'misleading' has no records");
    if (n_non == 0) throw PreconditionError("analyze: class 'non-misleading' has no records");
    fs::create_directories(config.out_dir);

    const RecordArtifacts arts = compute_artifacts(corpus, lex, config.threads);
    const BuildResult built =
        build_feature_matrix(corpus, arts.profiles, arts.sentiments, arts.emotions);
    const LabeledDataset& data = built.data;

    {
        std::string csv = "id,label";
        for (const auto& name : data.feature_names) csv += "," + name;
        csv += "\n";
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            csv += csv_quote(data.ids[i]) + "," + std::to_string(data.y[i]);
            for (double v : data.x[i]) csv += "," + format_double(v);
            csv += "\n";
        }
        write_text(out_path(config, "features.csv"), csv);
    }

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    ordered_json counts;
    counts["misleading"] = n_mis;
    counts["non_misleading"] = n_non;
    counts["unlabeled"] = corpus.count(Label::Unlabeled);
    j["class_counts"] = std::move(counts);
    j["skipped"] = built.skipped;
    j["features_file"] = "features.csv";

    std::string txt = "analysis\n";
    txt += "misleading: " + std::to_string(n_mis) + ", non-misleading: " + std::to_string(n_non) +
           "\n\n";

    // Distribution tests over the ten syntactic attributes plus TTR.
    {
        ordered_json ks_rows = ordered_json::array();
        txt += "two-sample KS by class\n";
        for (std::size_t col = 0; col <= 10; ++col) {
            std::vector<double> a, b;
            for (std::size_t i = 0; i < data.x.size(); ++i)
                (data.y[i] == 1 ? a : b).push_back(data.x[i][col]);
            const KsResult ks = ks_two_sample(a, b);
            ordered_json row;
            row["feature"] = data.feature_names[col];
            row["d"] = ks.d;
            row["p_value"] = ks.p_value;
            ks_rows.push_back(std::move(row));
            txt += "  " + pad(data.feature_names[col], 18) + " D=" + format_fixed(ks.d, 4) +
                   "  p=" + format_double(ks.p_value) + "\n";
        }
        j["ks_table"] = std::move(ks_rows);
        txt += "\n";
    }

    // Sentiment and dominant-emotion distributions per class.
    {
        std::array<std::array<std::int64_t, 3>, 2> sent{};
        std::array<std::array<std::int64_t, kEmotionCount + 1>, 2> emo{};  // last = none
        for (std::size_t i = 0; i < corpus.records.size(); ++i) {
            const Label lbl = corpus.records[i].label;
            if (lbl == Label::Unlabeled || !arts.sentiments[i]) continue;
            const int cls = lbl == Label::Misleading ? 0 : 1;
            ++sent[cls][static_cast<int>(arts.sentiments[i]->category)];
            if (arts.emotions[i]->dominant)
                ++emo[cls][static_cast<int>(*arts.emotions[i]->dominant)];
            else
                ++emo[cls][kEmotionCount];
        }
        const char* cls_names[2] = {"misleading", "non_misleading"};
        const char* sent_names[3] = {"positive", "negative", "neutral"};
        ordered_json sent_json, emo_json;
        BarChart sent_chart{"Sentiment share by class (%)",
                            {"Positive", "Negative", "Neutral"},
                            {}};
        BarChart emo_chart{"Dominant emotion share by class (%)",
                           {"Happiness", "Fear", "Anger", "Surprise", "Sadness"},
                           {}};
        for (int cls = 0; cls < 2; ++cls) {
            double total = 0.0;
            for (auto v : sent[cls]) total += static_cast<double>(v);
            ordered_json sj;
            BarSeries ss{cls == 0 ? "misleading" : "non-misleading", {}};
            for (int s = 0; s < 3; ++s) {
                ordered_json cell;
                cell["count"] = sent[cls][s];
                cell["share"] = total > 0.0 ? static_cast<double>(sent[cls][s]) / total : 0.0;
                sj[sent_names[s]] = std::move(cell);
                ss.values.push_back(total > 0.0
                                        ? 100.0 * static_cast<double>(sent[cls][s]) / total
                                        : 0.0);
            }
            sent_json[cls_names[cls]] = std::move(sj);
            sent_chart.series.push_back(std::move(ss));

            double etotal = 0.0;
            for (auto v : emo[cls]) etotal += static_cast<double>(v);
            ordered_json ej;
            BarSeries es{cls == 0 ? "misleading" : "non-misleading", {}};
            for (int e = 0; e < kEmotionCount; ++e) {
                ordered_json cell;
                cell["count"] = emo[cls][e];
                cell["share"] = etotal > 0.0 ? static_cast<double>(emo[cls][e]) / etotal : 0.0;
                ej[std::string(emotion_name(static_cast<Emotion>(e)))] = std::move(cell);
                es.values.push_back(
                    etotal > 0.0 ? 100.0 * static_cast<double>(emo[cls][e]) / etotal : 0.0);
            }
            ordered_json none_cell;
            none_cell["count"] = emo[cls][kEmotionCount];
            none_cell["share"] = etotal > 0.0
                                     ? static_cast<double>(emo[cls][kEmotionCount]) / etotal
                                     : 0.0;
            ej["none"] = std::move(none_cell);
            emo_json[cls_names[cls]] = std::move(ej);
            emo_chart.series.push_back(std::move(es));
        }
        j["sentiment"] = std::move(sent_json);
        j["emotions"] = std::move(emo_json);
        write_bar_chart(sent_chart, out_path(config, "sentiment_by_class.svg").string());
        write_bar_chart(emo_chart, out_path(config, "emotions_by_class.svg").string());
        txt += "sentiment and emotion tables: see analysis.json\n\n";
    }

    // Per-class word frequencies and their rank agreement on the union of the
    // two top lists.
    {
        const std::size_t want = config.top_words < 1 ? 1 : static_cast<std::size_t>(config.top_words);
        const auto all_m =
            top_words(corpus, Label::Misleading, corpus.records.size() * 64, lex.stopwords);
        const auto all_n =
            top_words(corpus, Label::NonMisleading, corpus.records.size() * 64, lex.stopwords);
        std::map<std::string, std::int64_t> freq_m(all_m.begin(), all_m.end());
        std::map<std::string, std::int64_t> freq_n(all_n.begin(), all_n.end());
        std::map<std::string, bool> union_words;
        ordered_json top_m = ordered_json::array();
        for (std::size_t i = 0; i < all_m.size() && i < want; ++i) {
            top_m.push_back({{"word", all_m[i].first}, {"count", all_m[i].second}});
            union_words[all_m[i].first] = true;
        }
        ordered_json top_n = ordered_json::array();
        for (std::size_t i = 0; i < all_n.size() && i < want; ++i) {
            top_n.push_back({{"word", all_n[i].first}, {"count", all_n[i].second}});
            union_words[all_n[i].first] = true;
        }
        std::vector<double> cm, cn;
        for (const auto& [w, _] : union_words) {
            auto im = freq_m.find(w);
            auto in = freq_n.find(w);
            cm.push_back(im == freq_m.end() ? 0.0 : static_cast<double>(im->second));
            cn.push_back(in == freq_n.end() ? 0.0 : static_cast<double>(in->second));
        }
        ordered_json tw;
        tw["misleading"] = std::move(top_m);
        tw["non_misleading"] = std::move(top_n);
        tw["union_size"] = union_words.size();
        try {
            tw["union_tau"] = kendall_tau_b(cm, cn);
        } catch (const Error&) {
            tw["union_tau"] = nullptr;
        }
        j["top_words"] = std::move(tw);
    }

    // Hashtag usage: tags unique to one class plus co-occurring pairs.
    {
        const HashtagReport hr = hashtag_report(corpus);
        auto tags_json = [](const std::vector<std::pair<std::string, std::int64_t>>& v) {
            ordered_json arr = ordered_json::array();
            for (std::size_t i = 0; i < v.size() && i < 100; ++i)
                arr.push_back({{"tag", v[i].first}, {"count", v[i].second}});
            return arr;
        };
        auto pairs_json = [](const std::vector<HashtagReport::PairCount>& v) {
            ordered_json arr = ordered_json::array();
            for (std::size_t i = 0; i < v.size() && i < 100; ++i)
                arr.push_back({{"a", v[i].a},
                               {"b", v[i].b},
                               {"count", v[i].count},
                               {"flagged", v[i].flagged}});
            return arr;
        };
        ordered_json hj;
        hj["unique_misleading"] = tags_json(hr.unique_misleading);
        hj["unique_non_misleading"] = tags_json(hr.unique_nonmisleading);
        hj["pairs_misleading"] = pairs_json(hr.pairs_misleading);
        hj["pairs_non_misleading"] = pairs_json(hr.pairs_nonmisleading);
        j["hashtags"] = std::move(hj);
    }

    // Visibility medians/means; absent count fields downgrade to a note.
    try {
        const VisibilitySummary vs = visibility_summary(corpus);
        auto fj = [](const FieldStats& f) {
            ordered_json o;
            o["median"] = f.median;
            o["mean"] = f.mean;
            o["n"] = f.n;
            return o;
        };
        auto cj = [&fj](const VisibilitySummary::ClassStats& cs) {
            ordered_json o;
            o["retweets"] = fj(cs.retweets);
            o["replies"] = fj(cs.replies);
            o["likes"] = fj(cs.likes);
            return o;
        };
        ordered_json vj;
        vj["misleading"] = cj(vs.misleading);
        vj["non_misleading"] = cj(vs.nonmisleading);
        j["visibility"] = std::move(vj);
    } catch (const PreconditionError& e) {
        j["visibility"] = nullptr;
        j["visibility_note"] = e.what();
    }

    // Vaccine-name mentions per class.
    {
        std::map<std::string, std::array<std::int64_t, 2>> per_name;
        std::array<std::map<int, std::int64_t>, 2> histogram;
        for (const auto& rec : corpus.records) {
            if (rec.label == Label::Unlabeled) continue;
            const int cls = rec.label == Label::Misleading ? 0 : 1;
            const auto names = vaccine_names_mentioned(rec.text, lex.vaccines);
            ++histogram[cls][static_cast<int>(names.size())];
            for (const auto& name : names) ++per_name[name][cls];
        }
        ordered_json names = ordered_json::array();
        for (const auto& [name, cnt] : per_name)
            names.push_back({{"name", name},
                             {"misleading", cnt[0]},
                             {"non_misleading", cnt[1]}});
        auto hist_json = [](const std::map<int, std::int64_t>& h) {
            ordered_json o;
            for (const auto& [k, v] : h) o[std::to_string(k)] = v;
            return o;
        };
        ordered_json vj;
        vj["names"] = std::move(names);
        ordered_json hist;
        hist["misleading"] = hist_json(histogram[0]);
        hist["non_misleading"] = hist_json(histogram[1]);
        vj["mentions_per_tweet"] = std::move(hist);
        j["vaccines"] = std::move(vj);
    }

    write_json(out_path(config, "analysis.json"), j);
    txt += "feature rows: " + std::to_string(data.x.size()) + "\n";
    txt += "skipped records: " + std::to_string(built.skipped.size()) + "\n";
    write_text(out_path(config, "analysis.txt"), txt);
}

void run_topics(const RunConfig& config) {
    const Lexicons lex = effective_lexicons(config);
    const Corpus corpus = load_pipeline_corpus(config);
    fs::create_directories(config.out_dir);

    int k = config.k;
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    if (!config.k_grid.empty()) {
        std::vector<std::vector<std::string>> docs;
        for (const auto& rec : corpus.records) {
            try {
                std::vector<std::string> doc;
                for (const auto& tok : tokenize(clean_text(rec.text)))
                    if (tok.is_word) doc.push_back(tok.surface);
                docs.push_back(std::move(doc));
            } catch (const InputError&) {
            }
        }
        k = select_k(docs, config.k_grid, config.holdout_fraction,
                     derive_seed(config.seed, 777), &lex.stopwords);
        j["k_grid"] = config.k_grid;
    }
    j["k"] = k;
    j["iterations"] = config.iterations;

    std::vector<TopicFilter> filters;
    filters.push_back({Label::Misleading, std::nullopt, std::nullopt});
    filters.push_back({Label::NonMisleading, std::nullopt, std::nullopt});
    for (Label lbl : {Label::Misleading, Label::NonMisleading})
        for (SentimentCategory s :
             {SentimentCategory::Positive, SentimentCategory::Negative,
              SentimentCategory::Neutral})
            filters.push_back({lbl, s, std::nullopt});
    for (Label lbl : {Label::Misleading, Label::NonMisleading})
        for (int e = 0; e < kEmotionCount; ++e)
            filters.push_back({lbl, std::nullopt, static_cast<Emotion>(e)});

    std::string txt = "topics (k=" + std::to_string(k) + ")\n\n";
    ordered_json cells = ordered_json::array();
    for (std::size_t i = 0; i < filters.size(); ++i) {
        ordered_json cell;
        cell["filter"] = filters[i].describe();
        try {
            const ConditionalTopics ct =
                conditional_topics(corpus, filters[i], lex, k, config.alpha, config.beta,
                                   config.iterations, derive_seed(config.seed, 2000 + i));
            cell["doc_count"] = ct.doc_count;
            cell["vocabulary_size"] = ct.model.vocabulary.size();
            const auto tops = top_words_per_topic(ct.model, 10);
            ordered_json topics = ordered_json::array();
            txt += "[" + filters[i].describe() + "] docs=" + std::to_string(ct.doc_count) + "\n";
            for (std::size_t t = 0; t < tops.size(); ++t) {
                ordered_json words = ordered_json::array();
                std::string line = "  topic " + std::to_string(t) + ":";
                for (const auto& [w, phi] : tops[t]) {
                    words.push_back({{"word", w}, {"phi", phi}});
                    line += " " + w;
                }
                topics.push_back(std::move(words));
                txt += line + "\n";
            }
            cell["topics"] = std::move(topics);
        } catch (const Error& e) {
            cell["error"] = e.what();
            txt += "[" + filters[i].describe() + "] error: " + e.what() + "\n";
        }
        txt += "\n";
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    write_json(out_path(config, "topics.json"), j);
    write_text(out_path(config, "topics.txt"), txt);
}

void run_train(const RunConfig& config) {
    const ModelSpec::Kind chosen = parse_model_kind(config.model);
    if (chosen == ModelSpec::Kind::Knn)
        throw PreconditionError("train: model 'knn' cannot be serialized; choose a tree model");
    LabeledDataset data = load_features_csv(out_path(config, "features.csv"));
    if (!config.features.empty()) data = select_features(data, split_list(config.features));
    const std::size_t n_rows = data.x.size();
    const LabeledDataset balanced = balance_dataset(data, config.seed);
    fs::create_directories(config.out_dir);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["n_rows"] = n_rows;
    j["n_balanced"] = balanced.x.size();
    j["folds"] = config.folds;
    j["seed"] = config.seed;
    j["feature_names"] = balanced.feature_names;

    std::string txt = "cross-validation (" + std::to_string(config.folds) + " folds, " +
                      std::to_string(balanced.x.size()) + " balanced rows)\n";
    const std::array<ModelSpec::Kind, 6> suite = {
        ModelSpec::Kind::DecisionTree, ModelSpec::Kind::ExtraTree, ModelSpec::Kind::RandomForest,
        ModelSpec::Kind::ExtraTrees, ModelSpec::Kind::Bagging, ModelSpec::Kind::Knn};
    ordered_json cv_all;
    for (ModelSpec::Kind kind : suite) {
        const CvResult cv =
            cross_validate(balanced, spec_for(kind, config), config.folds, config.seed,
                           config.threads);
        cv_all[std::string(model_kind_name(kind))] = cv_json(cv);
        txt += "  " + pad(std::string(model_kind_name(kind)), 8) + metrics_line(cv.mean) + "\n";
    }
    j["cv"] = std::move(cv_all);

    const auto [train_part, test_part] =
        split_dataset(balanced, config.test_fraction, config.seed);
    const std::vector<double> holdout_probs =
        fit_predict(train_part, test_part.x, spec_for(chosen, config),
                    derive_seed(config.seed, 4242), config.threads);
    const EvalMetrics holdout = evaluate(test_part.y, holdout_probs);
    ordered_json hj;
    hj["model"] = config.model;
    hj["test_fraction"] = config.test_fraction;
    hj["n_train"] = train_part.x.size();
    hj["n_test"] = test_part.x.size();
    hj["metrics"] = metrics_json(holdout);
    j["holdout"] = std::move(hj);
    txt += "holdout (" + config.model + "): " + metrics_line(holdout) + "\n";

    const fs::path model_file = out_path(config, "model.json");
    if (chosen == ModelSpec::Kind::DecisionTree) {
        const TreeModel m =
            train_tree(balanced, config.max_depth, config.min_samples_split, config.seed);
        save_model_json(m, balanced.feature_names, model_file.string());
    } else {
        ForestVariant variant = ForestVariant::RandomForest;
        int n_trees = config.trees;
        if (chosen == ModelSpec::Kind::ExtraTree) {
            variant = ForestVariant::ExtraTrees;
            n_trees = 1;
        } else if (chosen == ModelSpec::Kind::ExtraTrees) {
            variant = ForestVariant::ExtraTrees;
        } else if (chosen == ModelSpec::Kind::Bagging) {
            variant = ForestVariant::Bagging;
        }
        const ForestModel m =
            train_forest(balanced, variant, n_trees, config.features_per_split, config.seed,
                         config.max_depth, config.min_samples_split, std::nullopt,
                         config.threads);
        save_model_json(m, balanced.feature_names, model_file.string());
    }
    j["model_kind"] = config.model;
    j["model_file"] = "model.json";
    write_json(out_path(config, "train_report.json"), j);
    write_text(out_path(config, "train_report.txt"), txt);
}

void run_explain(const RunConfig& config) {
    const fs::path model_file =
        config.model_path.empty() ? out_path(config, "model.json") : fs::path(config.model_path);
    const LoadedModel model = load_model_json(model_file.string());
    LabeledDataset data = load_features_csv(out_path(config, "features.csv"));
    if (data.feature_names != model.feature_names) {
        data = select_features(data, model.feature_names);
        // select_features keeps dataset column order; a model trained on a
        // different ordering cannot be explained against this matrix.
        if (data.feature_names != model.feature_names)
            throw InputError("explain: feature order differs between model and features CSV");
    }
    fs::create_directories(config.out_dir);

    const std::size_t n = data.x.size();
    const std::size_t p = data.feature_names.size();
    std::vector<ShapAttribution> attribs(n);
    parallel_for(n, config.threads, [&](std::size_t i) {
        ShapAttribution a = tree_shap(model, data.x[i]);
        double sum = a.base_value;
        for (double v : a.values) sum += v;
        if (std::fabs(sum - a.prediction) > 1e-9)
            throw InternalError("shap efficiency violated for row " + data.ids[i]);
        attribs[i] = std::move(a);
    });

    std::vector<double> mean_abs(p, 0.0);
    for (const auto& a : attribs)
        for (std::size_t jx = 0; jx < p; ++jx) mean_abs[jx] += std::fabs(a.values[jx]);
    for (auto& v : mean_abs) v /= static_cast<double>(n);
    ShapRanking ranking;
    ranking.mean_abs = mean_abs;
    ranking.order.resize(p);
    std::iota(ranking.order.begin(), ranking.order.end(), 0);
    std::sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
        if (mean_abs[static_cast<std::size_t>(a)] != mean_abs[static_cast<std::size_t>(b)])
            return mean_abs[static_cast<std::size_t>(a)] > mean_abs[static_cast<std::size_t>(b)];
        return a < b;
    });
    for (int idx : ranking.order)
        ranking.names.push_back(data.feature_names[static_cast<std::size_t>(idx)]);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["model_file"] = model_file.filename().string();
    j["n_rows"] = n;
    ordered_json rows = ordered_json::array();
    std::string txt = "mean |phi| ranking\n";
    for (std::size_t r = 0; r < ranking.names.size(); ++r) {
        const double v = ranking.mean_abs[static_cast<std::size_t>(ranking.order[r])];
        rows.push_back({{"feature", ranking.names[r]}, {"mean_abs", v}});
        txt += "  " + pad(ranking.names[r], 20) + format_double(v) + "\n";
    }
    j["ranking"] = std::move(rows);
    write_json(out_path(config, "shap_ranking.json"), j);

    {
        std::string csv = "id,feature,phi,feature_value\n";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t jx = 0; jx < p; ++jx)
                csv += csv_quote(data.ids[i]) + "," + data.feature_names[jx] + "," +
                       format_double(attribs[i].values[jx]) + "," +
                       format_double(data.x[i][jx]) + "\n";
        write_text(out_path(config, "shap_values.csv"), csv);
    }

    {
        const CorrelationMatrix corr = pearson_matrix(data.x, data.feature_names);
        const PairRanking pr = correlation_vs_ranking(corr, ranking);
        ordered_json cj;
        cj["schema_version"] = kSchemaVersion;
        if (pr.tau)
            cj["tau"] = *pr.tau;
        else
            cj["tau"] = nullptr;
        cj["warnings"] = corr.warnings;
        ordered_json pairs = ordered_json::array();
        for (const auto& row : pr.rows)
            pairs.push_back({{"a", row.a},
                             {"b", row.b},
                             {"abs_corr", row.abs_corr},
                             {"rank_distance", row.rank_distance}});
        cj["pairs"] = std::move(pairs);
        write_json(out_path(config, "correlation_pairs.json"), cj);
        txt += "\ncorrelation vs ranking tau: " +
               (pr.tau ? format_double(*pr.tau) : std::string("n/a")) + "\n";
        for (std::size_t i = 0; i < pr.rows.size() && i < 10; ++i)
            txt += "  " + pad(pr.rows[i].a + "/" + pr.rows[i].b, 34) + "|r|=" +
                   format_fixed(pr.rows[i].abs_corr, 4) +
                   "  rank_dist=" + std::to_string(pr.rows[i].rank_distance) + "\n";
    }
    write_text(out_path(config, "explain.txt"), txt);
}

void run_ablate(const RunConfig& config) {
    const fs::path ranking_file = config.ranking_path.empty()
                                      ? out_path(config, "shap_ranking.json")
                                      : fs::path(config.ranking_path);
    const ordered_json rj = read_artifact(ranking_file, "explain");
    LabeledDataset data = load_features_csv(out_path(config, "features.csv"));
    if (!config.features.empty()) data = select_features(data, split_list(config.features));
    const LabeledDataset balanced = balance_dataset(data, config.seed);
    fs::create_directories(config.out_dir);

    ShapRanking ranking;
    if (!rj.contains("ranking") || !rj["ranking"].is_array())
        throw InputError("invalid artifact " + ranking_file.filename().string() +
                         ": missing ranking");
    ranking.mean_abs.assign(balanced.feature_names.size(), 0.0);
    for (const auto& row : rj["ranking"]) {
        const std::string name = row.at("feature").get<std::string>();
        const auto it = std::find(balanced.feature_names.begin(), balanced.feature_names.end(),
                                  name);
        if (it == balanced.feature_names.end())
            throw InputError("ablate: ranking feature '" + name + "' not in the feature set");
        const int idx = static_cast<int>(it - balanced.feature_names.begin());
        ranking.order.push_back(idx);
        ranking.names.push_back(name);
        ranking.mean_abs[static_cast<std::size_t>(idx)] = row.at("mean_abs").get<double>();
    }

    const ModelSpec spec = spec_for(parse_model_kind(config.model), config);
    const std::vector<AblationRow> rows =
        ablation_run(balanced, ranking, spec, config.folds, config.seed, config.threads);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["model"] = config.model;
    j["folds"] = config.folds;
    j["seed"] = config.seed;
    ordered_json rows_json = ordered_json::array();
    std::string txt = "ablation (" + config.model + ", " + std::to_string(config.folds) +
                      " folds)\n";
    for (const auto& row : rows) {
        ordered_json r;
        r["cut_rank"] = row.cut_rank;
        if (row.cut_feature.empty())
            r["cut_feature"] = nullptr;
        else
            r["cut_feature"] = row.cut_feature;
        r["dropped"] = row.dropped;
        r["skipped"] = row.skipped;
        r["note"] = row.note;
        if (!row.skipped) {
            r["mean"] = metrics_json(row.mean);
            r["stddev"] = metrics_json(row.stddev);
            r["pooled"] = metrics_json(row.pooled);
        }
        rows_json.push_back(std::move(r));
        const std::string label = row.cut_rank < 0 ? std::string("all features")
                                                   : "cut@" + std::to_string(row.cut_rank) +
                                                         " " + row.cut_feature;
        txt += "  " + pad(label, 28) +
               (row.skipped ? row.note : metrics_line(row.mean)) + "\n";
    }
    j["rows"] = std::move(rows_json);
    write_json(out_path(config, "ablation.json"), j);
    write_text(out_path(config, "ablation.txt"), txt);
}

void run_report(const RunConfig& config) {
    ordered_json sections;
    std::string txt = "pipeline report\n\n";
    bool any = false;

    const fs::path ingest_p = out_path(config, "ingest_summary.json");
    if (fs::exists(ingest_p)) {
        const ordered_json s = read_artifact(ingest_p, "ingest");
        ordered_json o;
        o["n_records"] = s.value("n_records", 0);
        o["class_counts"] = s.value("class_counts", ordered_json::object());
        sections["ingest"] = std::move(o);
        txt += "records: " + std::to_string(s.value("n_records", 0)) + "\n";
        any = true;
    }
    const fs::path analysis_p = out_path(config, "analysis.json");
    if (fs::exists(analysis_p)) {
        const ordered_json s = read_artifact(analysis_p, "analyze");
        ordered_json o;
        o["ks_table"] = s.value("ks_table", ordered_json::array());
        if (s.contains("top_words") && s["top_words"].contains("union_tau"))
            o["top_word_tau"] = s["top_words"]["union_tau"];
        sections["analysis"] = std::move(o);
        txt += "analysis: KS rows " +
               std::to_string(s.value("ks_table", ordered_json::array()).size()) + "\n";
        any = true;
    }
    const fs::path topics_p = out_path(config, "topics.json");
    if (fs::exists(topics_p)) {
        const ordered_json s = read_artifact(topics_p, "topics");
        ordered_json o;
        o["k"] = s.value("k", 0);
        int errors = 0;
        for (const auto& cell : s.value("cells", ordered_json::array()))
            if (cell.contains("error")) ++errors;
        o["cells"] = s.value("cells", ordered_json::array()).size();
        o["cells_with_errors"] = errors;
        sections["topics"] = std::move(o);
        txt += "topics: k=" + std::to_string(s.value("k", 0)) + "\n";
        any = true;
    }
    const fs::path train_p = out_path(config, "train_report.json");
    if (fs::exists(train_p)) {
        const ordered_json s = read_artifact(train_p, "train");
        ordered_json o;
        ordered_json accs;
        std::string best;
        double best_acc = -1.0;
        if (s.contains("cv")) {
            for (const auto& [name, cv] : s["cv"].items()) {
                const double acc = cv.at("mean").at("accuracy").get<double>();
                accs[name] = acc;
                if (acc > best_acc) {
                    best_acc = acc;
                    best = name;
                }
            }
        }
        o["cv_mean_accuracy"] = std::move(accs);
        o["best_model"] = best;
        if (s.contains("holdout")) o["holdout"] = s["holdout"];
        sections["train"] = std::move(o);
        txt += "train: best model " + best + " (mean accuracy " + format_fixed(best_acc, 4) +
               ")\n";
        any = true;
    }
    const fs::path rank_p = out_path(config, "shap_ranking.json");
    if (fs::exists(rank_p)) {
        const ordered_json s = read_artifact(rank_p, "explain");
        ordered_json names = ordered_json::array();
        for (const auto& row : s.value("ranking", ordered_json::array()))
            names.push_back(row.at("feature"));
        ordered_json o;
        o["ranking"] = std::move(names);
        sections["explain"] = std::move(o);
        txt += "explain: ranking present\n";
        any = true;
    }
    const fs::path ablation_p = out_path(config, "ablation.json");
    if (fs::exists(ablation_p)) {
        const ordered_json s = read_artifact(ablation_p, "ablate");
        ordered_json o;
        o["rows"] = s.value("rows", ordered_json::array()).size();
        for (const auto& row : s.value("rows", ordered_json::array()))
            if (row.value("cut_rank", 0) == -1 && row.contains("mean"))
                o["all_features_accuracy"] = row["mean"]["accuracy"];
        sections["ablation"] = std::move(o);
        txt += "ablation: " + std::to_string(s.value("rows", ordered_json::array()).size()) +
               " rows\n";
        any = true;
    }
    if (!any) throw InputError("report: no artifacts found in " + config.out_dir);
    fs::create_directories(config.out_dir);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["sections"] = std::move(sections);
    write_json(out_path(config, "report.json"), j);
    write_text(out_path(config, "report.txt"), txt);
}

void run_subcommand(const std::string& name, const RunConfig& config) {
    if (name == "ingest") return run_ingest(config);
    if (name == "analyze") return run_analyze(config);
    if (name == "topics") return run_topics(config);
    if (name == "train") return run_train(config);
    if (name == "explain") return run_explain(config);
    if (name == "ablate") return run_ablate(config);
    if (name == "report") return run_report(config);
    throw InputError("unknown subcommand '" + name + "'");
}

}  // namespace mistweet
