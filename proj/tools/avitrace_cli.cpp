// avitrace: batch epidemic-intelligence pipeline over case reports, search
// trends, and social post dumps. Subcommands: ingest, filter, correlate,
// ablate, waves. Logs go to stderr; data products go to files under --out.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "avi/classifier.hpp"
#include "avi/correlate.hpp"
#include "avi/geo.hpp"
#include "avi/ingest.hpp"
#include "avi/report.hpp"
#include "avi/sarimax.hpp"
#include "avi/stationarity.hpp"
#include "avi/stats.hpp"
#include "avi/text.hpp"
#include "avi/waves.hpp"

namespace fs = std::filesystem;
using namespace avi;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    std::string region;
    std::map<std::string, std::string> overrides;  // path flags etc.
};

RunConfig resolve_config(const CliOptions& opt) {
    RunConfig config;
    if (!opt.config_path.empty()) config = load_config(opt.config_path);
    for (const auto& [k, v] : opt.overrides) {
        if (!v.empty()) config.values[k] = v;
    }
    config.values["seed"] = std::to_string(opt.seed);
    config.values["out"] = opt.out_dir;
    if (!opt.region.empty()) config.values["region"] = opt.region;
    return config;
}

std::ifstream open_input(const std::string& path, const char* kind) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(std::string(kind) + " file not readable: " + path);
    }
    return in;
}

// Exclusive ownership of the output directory for the duration of a command.
class OutDirLock {
  public:
    explicit OutDirLock(const fs::path& dir) : lock_(dir / ".lock") {
        fs::create_directories(dir);
        if (fs::exists(lock_)) {
            throw std::runtime_error("output directory is locked by another run: " +
                                     lock_.string());
        }
        std::ofstream(lock_) << "avitrace\n";
    }
    ~OutDirLock() {
        std::error_code ec;
        fs::remove(lock_, ec);
    }

  private:
    fs::path lock_;
};

void write_series_csv(const fs::path& path, const WeeklySeries& s) {
    std::ofstream out(path);
    out << "week_start,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_date(s.week_at(i)) << "," << format_double(s.values[i]) << "\n";
    }
}

WeeklySeries read_series_csv(const std::string& path) {
    auto in = open_input(path, "weekly series");
    std::string line;
    std::getline(in, line);
    std::optional<Date> start;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const Date week = parse_date(line.substr(0, comma));
        if (!start) start = week;
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (!start) throw std::runtime_error("weekly series file has no rows: " + path);
    return WeeklySeries(*start, std::move(values));
}

struct RegionFilter {
    std::string country;
    std::optional<std::string> region;
};

std::optional<RegionFilter> parse_region(const RunConfig& config) {
    const std::string spec = config.get("region");
    if (spec.empty()) return std::nullopt;
    RegionFilter rf;
    const auto colon = spec.find(':');
    rf.country = spec.substr(0, colon);
    if (colon != std::string::npos) rf.region = spec.substr(colon + 1);
    return rf;
}

struct LoadedInputs {
    std::vector<CaseRecord> cases;
    std::vector<TrendScore> trends;
    std::vector<Post> posts;  // deduped
    std::size_t posts_raw = 0;
    std::size_t flagged_cases = 0;
};

LoadedInputs load_inputs(const RunConfig& config, bool need_posts = true) {
    LoadedInputs li;
    {
        auto in = open_input(config.require("cases"), "cases");
        li.cases = parse_case_reports(in);
        for (const auto& c : li.cases) {
            if (c.flagged()) ++li.flagged_cases;
        }
    }
    {
        auto in = open_input(config.require("trends"), "trends");
        li.trends = parse_trend_scores(in);
    }
    if (need_posts) {
        auto in = open_input(config.require("posts"), "posts");
        auto raw = parse_posts(in);
        li.posts_raw = raw.size();
        li.posts = dedupe(raw);
        if (config.has("gazetteer")) {
            auto gzin = open_input(config.get("gazetteer"), "gazetteer");
            Gazetteer gz = load_gazetteer(gzin);
            if (config.has("exclusions")) {
                auto exin = open_input(config.get("exclusions"), "exclusions");
                load_exclusions(gz, exin);
            }
            const double threshold = config.get_double("fuzzy_threshold", 0.2);
            for (auto& p : li.posts) {
                const auto res = resolve_location(p.user_location, gz, threshold);
                if (res.outcome == GeoOutcome::Resolved) {
                    p.geo = {res.tag->country, res.tag->region};
                }
            }
        }
        if (const auto rf = parse_region(config)) {
            li.posts = filter_by_region(li.posts, rf->country, rf->region);
            std::erase_if(li.cases, [&](const CaseRecord& c) {
                return c.country != rf->country || (rf->region && c.region != *rf->region);
            });
            std::erase_if(li.trends, [&](const TrendScore& t) {
                return t.region != rf->country && (!rf->region || t.region != *rf->region);
            });
        }
    }
    return li;
}

WeeklySeries cases_weekly(const std::vector<CaseRecord>& records) {
    // flagged (unknown-count) rows contribute 0 but stay in the data-quality tally
    return aggregate_weekly(records, [](const CaseRecord& c) { return c.report_date; },
                            [](const CaseRecord& c) { return static_cast<double>(c.case_count.value_or(0)); });
}

WeeklySeries trends_weekly(const std::vector<TrendScore>& records) {
    return aggregate_weekly(records, [](const TrendScore& t) { return t.week_start; },
                            [](const TrendScore& t) { return static_cast<double>(t.score); });
}

WeeklySeries posts_weekly(const std::vector<Post>& posts, bool relevant_only) {
    std::vector<Post> used;
    for (const auto& p : posts) {
        if (relevant_only && p.relevance != Relevance::Relevant) continue;
        used.push_back(p);
    }
    return aggregate_weekly(used, [](const Post& p) { return p.day; },
                            [](const Post&) { return 1.0; });
}

int cmd_ingest(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const fs::path out(config.get("out"));
    OutDirLock lock(out);
    const LoadedInputs li = load_inputs(config);

    const WeeklySeries cases = cases_weekly(li.cases);
    const WeeklySeries trends = trends_weekly(li.trends);
    const WeeklySeries posts = posts_weekly(li.posts, false);
    write_series_csv(out / "cases_weekly.csv", cases);
    write_series_csv(out / "trends_weekly.csv", trends);
    write_series_csv(out / "posts_weekly.csv", posts);

    std::ofstream report(out / "ingest_report.txt");
    write_report_header(report, "ingest", config, opt.seed);
    report << "cases_rows=" << li.cases.size() << "\n";
    report << "cases_flagged=" << li.flagged_cases << "\n";
    report << "trend_rows=" << li.trends.size() << "\n";
    report << "posts_rows=" << li.posts_raw << "\n";
    report << "posts_after_dedupe=" << li.posts.size() << "\n";
    report << "rows_dropped=0\n";
    auto describe = [&](const char* name, const WeeklySeries& s) {
        report << name << "_weeks=" << s.size() << "\n";
        report << name << "_range=" << format_date(s.start_week) << ".."
               << format_date(s.last_week()) << "\n";
    };
    describe("cases", cases);
    describe("trends", trends);
    describe("posts", posts);
    std::cerr << "ingest: wrote 3 weekly series to " << out << "\n";
    return 0;
}

int cmd_filter(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const fs::path out(config.get("out"));
    OutDirLock lock(out);
    LoadedInputs li = load_inputs(config);

    const bool have_labels = config.has("labels");
    const bool have_corpus = config.has("corpus");
    if (!have_labels && !have_corpus) {
        throw std::runtime_error(
            "filter needs either a labels file (--labels) or a training corpus (--corpus)");
    }
    if (have_labels && have_corpus) {
        std::cerr << "filter: both labels and corpus given; external labels win\n";
    }

    std::ofstream report(out / "filter_report.txt");
    write_report_header(report, "filter", config, opt.seed);

    if (have_labels) {
        auto in = open_input(config.get("labels"), "labels");
        const auto res = apply_external_labels(li.posts, in);
        report << "label_source=external\n";
        report << "labels_matched=" << res.matched << "\n";
        report << "labels_unknown_ids=" << res.unknown_ids.size() << "\n";
        for (const auto& id : res.unknown_ids) {
            std::cerr << "filter: warning, label for unknown post id " << id << "\n";
        }
    } else {
        auto in = open_input(config.get("corpus"), "corpus");
        const LabeledCorpus corpus = load_corpus(in);
        const double alpha = config.get_double("alpha", 1.0);
        const bool stems = config.get_long("keep_hashtag_stems", 1) != 0;
        const auto [train, eval] = stratified_split(corpus, 0.8, opt.seed);
        const ClassifierModel model = train_classifier(train, alpha, stems);
        const Metrics metrics = evaluate(model, eval);
        {
            std::ofstream mf(out / "classifier_model.txt");
            save_model(model, mf);
        }
        for (auto& p : li.posts) {
            p.relevance = predict(model, p.text).label;
        }
        report << "label_source=classifier\n";
        report << "train_size=" << train.items.size() << "\n";
        report << "eval_size=" << eval.items.size() << "\n";
        report << "accuracy=" << format_double(metrics.accuracy) << "\n";
        report << "precision=" << format_double(metrics.precision) << "\n";
        report << "recall=" << format_double(metrics.recall) << "\n";
        report << "f1=" << format_double(metrics.f1) << "\n";
        report << "confusion_tp_fp_tn_fn=" << metrics.tp << "," << metrics.fp << "," << metrics.tn
               << "," << metrics.fn << "\n";
    }

    std::size_t relevant = 0, irrelevant = 0, unlabeled = 0;
    for (const auto& p : li.posts) {
        if (!p.relevance) {
            ++unlabeled;
        } else if (*p.relevance == Relevance::Relevant) {
            ++relevant;
        } else {
            ++irrelevant;
        }
    }
    report << "posts_relevant=" << relevant << "\n";
    report << "posts_irrelevant=" << irrelevant << "\n";
    report << "posts_unlabeled=" << unlabeled << "\n";

    if (relevant > 0) {
        write_series_csv(out / "relevant_weekly.csv", posts_weekly(li.posts, true));
    }
    std::cerr << "filter: " << relevant << " relevant / " << irrelevant << " irrelevant posts\n";
    return 0;
}

struct StationaryPair {
    WeeklySeries a, b;
    unsigned d_applied = 0;
};

// Differences both series by the larger d that makes each pass ADF + KPSS.
StationaryPair make_stationary_pair(const WeeklySeries& a, const WeeklySeries& b, unsigned max_d) {
    const auto pa = ensure_stationary(a, max_d);
    const auto pb = ensure_stationary(b, max_d);
    const unsigned d = std::max(pa.d_applied, pb.d_applied);
    return {difference(a, d), difference(b, d), d};
}

int cmd_correlate(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const fs::path out(config.get("out"));
    OutDirLock lock(out);

    const WeeklySeries cases = read_series_csv(config.require("cases_weekly"));
    const int sweep_lo = static_cast<int>(config.get_long("sweep_lo", -10));
    const int sweep_hi = static_cast<int>(config.get_long("sweep_hi", 10));
    const int window_lo = static_cast<int>(config.get_long("window_lo", -4));
    const int window_hi = static_cast<int>(config.get_long("window_hi", 0));
    const auto max_d = static_cast<unsigned>(config.get_long("max_d", 2));
    const std::string location = config.get("region", "global");
    const std::string timeframe =
        format_date(cases.start_week) + ".." + format_date(cases.last_week());

    std::vector<std::pair<std::string, std::string>> media;
    if (config.has("trends_weekly")) media.emplace_back("trends", config.get("trends_weekly"));
    if (config.has("posts_weekly")) media.emplace_back("posts", config.get("posts_weekly"));
    if (media.empty()) {
        throw std::runtime_error("correlate needs --trends-weekly and/or --posts-weekly");
    }

    std::ofstream report(out / "correlate_report.txt");
    write_report_header(report, "correlate", config, opt.seed);
    report << "location,media,timeframe,lag,coeff,p_value,n,d_applied,status\n";

    for (const auto& [name, path] : media) {
        const WeeklySeries signal = read_series_csv(path);
        try {
            const auto sp = make_stationary_pair(signal, cases, max_d);
            const AlignedPair pair = align(sp.a, sp.b);
            const auto sweep = cross_correlate(pair, sweep_lo, sweep_hi);
            const CorrelationResult best = best_lag(sweep, window_lo, window_hi);

            report << location << "," << name << "," << timeframe << "," << best.lag << ","
                   << format_double(best.r) << "," << format_double(best.p_value) << "," << best.n
                   << "," << sp.d_applied << ",ok\n";

            std::ofstream plot(out / ("correlate_sweep_" + name + ".csv"));
            plot << "lag,r,n,band95\n";
            for (const auto& lc : sweep) {
                plot << lc.lag << "," << format_double(lc.r) << "," << lc.n << ","
                     << format_double(confidence_band(lc.n)) << "\n";
            }
        } catch (const std::exception& e) {
            report << location << "," << name << "," << timeframe << ",,,,," << ",failed\n";
            std::cerr << "correlate: " << name << " failed: " << e.what() << "\n";
        }
    }
    std::cerr << "correlate: report written to " << (out / "correlate_report.txt") << "\n";
    return 0;
}

int cmd_ablate(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const fs::path out(config.get("out"));
    OutDirLock lock(out);

    const WeeklySeries cases = read_series_csv(config.require("cases_weekly"));
    const WeeklySeries posts = read_series_csv(config.require("posts_weekly"));
    const WeeklySeries trends = read_series_csv(config.require("trends_weekly"));
    const int lag = static_cast<int>(config.get_long("ablate_lag", -3));
    const auto eval_weeks = static_cast<std::size_t>(config.get_long("eval_weeks", 13));
    const auto runs = static_cast<std::size_t>(config.get_long("runs", 30));

    const Dataset dataset = build_design(cases, {posts, trends}, lag, 0, eval_weeks);

    // pick the spec on the no-exog scenario, then hold it fixed across (i)-(iv)
    std::vector<ModelSpec> grid;
    for (unsigned p = 0; p <= 2; ++p) {
        for (unsigned d = 0; d <= 1; ++d) {
            for (unsigned q = 0; q <= 2; ++q) {
                ModelSpec spec;
                spec.p = p;
                spec.d = d;
                spec.q = q;
                grid.push_back(spec);
            }
        }
    }
    Dataset baseline = dataset;
    baseline.exog.clear();
    const auto ranked = grid_search(grid, baseline, GridCriterion::Aic, opt.seed);
    const ModelSpec best = ranked.front().spec;

    const AblationReport ab = run_ablation(best, dataset, runs, opt.seed);

    std::ofstream report(out / "ablation_report.txt");
    write_report_header(report, "ablate", config, opt.seed);
    report << "spec=" << best.to_string() << "\n";
    report << "exog_lag=" << lag << "\n";
    report << "train_weeks=" << dataset.train_weeks << "\n";
    report << "eval_weeks=" << dataset.eval_weeks << "\n";
    report << "scenario,exog_posts,exog_trends,mean_r2,std_r2,runs,wilcoxon_p_vs_baseline\n";
    for (const auto& s : ab.scenarios) {
        report << s.name << "," << (s.uses_posts ? 1 : 0) << "," << (s.uses_trends ? 1 : 0) << ","
               << format_double(s.mean_r2) << ","
               << (s.std_r2 ? format_double(*s.std_r2) : std::string{}) << "," << s.r2.size()
               << ","
               << (s.wilcoxon_p_vs_baseline ? format_double(*s.wilcoxon_p_vs_baseline)
                                            : std::string{})
               << "\n";
    }
    report << "pearson_exog=" << format_double(ab.pearson_exog) << "\n";
    report << "vif_posts=" << format_double(ab.vif[0]) << "\n";
    report << "vif_trends=" << format_double(ab.vif[1]) << "\n";
    std::cerr << "ablate: scenario means";
    for (const auto& s : ab.scenarios) std::cerr << " " << s.name << "=" << s.mean_r2;
    std::cerr << "\n";
    return 0;
}

int cmd_waves(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const fs::path out(config.get("out"));
    OutDirLock lock(out);

    const WeeklySeries cases = read_series_csv(config.require("cases_weekly"));
    const bool detect = config.get_long("detect", 0) != 0;
    std::vector<WaveSegment> waves;
    if (config.has("waves")) {
        auto in = open_input(config.get("waves"), "waves");
        waves = load_official_waves(in);
    } else if (detect) {
        waves = detect_waves(cases, config.get_double("min_prominence", 0.1),
                             static_cast<unsigned>(config.get_long("smoothing_window", 3)));
    } else {
        throw std::runtime_error("waves needs an official waves file (--waves) or detect=1");
    }

    const double z = config.get_double("z_threshold", 2.0);
    const auto bw = static_cast<unsigned>(config.get_long("baseline_window", 8));

    std::vector<std::pair<std::string, WeeklySeries>> signals;
    if (config.has("posts_weekly")) {
        signals.emplace_back("posts", read_series_csv(config.get("posts_weekly")));
    }
    if (config.has("trends_weekly")) {
        signals.emplace_back("trends", read_series_csv(config.get("trends_weekly")));
    }

    std::ofstream report(out / "waves_report.txt");
    write_report_header(report, "waves", config, opt.seed);
    report << "waves=" << waves.size() << "\n";
    for (const auto& w : waves) {
        report << "wave," << w.label << "," << format_date(w.start_week) << ","
               << format_date(w.end_week) << ","
               << (w.source == WaveSource::Official ? "official" : "detected") << "\n";
    }
    report << "signal,wave,first_fire,lead_weeks,within_3w\n";
    for (const auto& [name, signal] : signals) {
        const TimelinessReport tr = evaluate_timeliness(signal, waves, z, bw);
        for (const auto& wt : tr.waves) {
            report << name << "," << wt.wave_label << ","
                   << (wt.first_fire ? format_date(*wt.first_fire) : std::string{}) << ","
                   << (wt.lead_weeks ? std::to_string(*wt.lead_weeks) : std::string{}) << ","
                   << (wt.within_window ? "true" : "false") << "\n";
        }
    }

    // plot-ready table of all series with wave boundaries marked
    std::ofstream plot(out / "waves_plot.csv");
    plot << "week,cases";
    for (const auto& [name, signal] : signals) plot << "," << name;
    plot << ",in_wave\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Date week = cases.week_at(i);
        plot << format_date(week) << "," << format_double(cases.values[i]);
        for (const auto& [name, signal] : signals) {
            const long idx = weeks_between(signal.start_week, week);
            plot << ",";
            if (idx >= 0 && idx < static_cast<long>(signal.size())) {
                plot << format_double(signal.values[static_cast<std::size_t>(idx)]);
            }
        }
        bool in_wave = false;
        for (const auto& w : waves) {
            if (week >= w.start_week && week <= w.end_week) in_wave = true;
        }
        plot << "," << (in_wave ? 1 : 0) << "\n";
    }
    std::cerr << "waves: " << waves.size() << " waves scored\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"avitrace: avian-influenza online-signal analysis pipeline"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "key=value config file");
        sub->add_option("--seed", opt.seed, "master seed");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--region", opt.region, "country[:region] filter");
    };
    auto add_path = [&](CLI::App* sub, const char* flag, const char* key, const char* help) {
        sub->add_option_function<std::string>(
            flag, [&opt, key = std::string(key)](const std::string& v) { opt.overrides[key] = v; },
            help);
    };

    auto* ingest = app.add_subcommand("ingest", "parse raw inputs into weekly series");
    add_common(ingest);
    add_path(ingest, "--cases", "cases", "cases CSV (date,country,region,cases)");
    add_path(ingest, "--trends", "trends", "trends CSV (week_start,region,score)");
    add_path(ingest, "--posts", "posts", "posts JSONL");
    add_path(ingest, "--gazetteer", "gazetteer", "gazetteer CSV");
    add_path(ingest, "--exclusions", "exclusions", "vague-location exclusion list");

    auto* filter = app.add_subcommand("filter", "label post relevance");
    add_common(filter);
    add_path(filter, "--cases", "cases", "cases CSV");
    add_path(filter, "--trends", "trends", "trends CSV");
    add_path(filter, "--posts", "posts", "posts JSONL");
    add_path(filter, "--labels", "labels", "external labels CSV (post_id,label)");
    add_path(filter, "--corpus", "corpus", "training corpus CSV (text,label)");
    add_path(filter, "--gazetteer", "gazetteer", "gazetteer CSV");

    auto* correlate = app.add_subcommand("correlate", "lagged cross-correlation analysis");
    add_common(correlate);
    add_path(correlate, "--cases-weekly", "cases_weekly", "weekly cases series CSV");
    add_path(correlate, "--trends-weekly", "trends_weekly", "weekly trends series CSV");
    add_path(correlate, "--posts-weekly", "posts_weekly", "weekly posts series CSV");

    auto* ablate = app.add_subcommand("ablate", "SARIMAX exogenous-variable ablation");
    add_common(ablate);
    add_path(ablate, "--cases-weekly", "cases_weekly", "weekly cases series CSV");
    add_path(ablate, "--trends-weekly", "trends_weekly", "weekly trends series CSV");
    add_path(ablate, "--posts-weekly", "posts_weekly", "weekly posts series CSV");
    ablate->add_option_function<std::string>(
        "--lag", [&](const std::string& v) { opt.overrides["ablate_lag"] = v; },
        "exog lag in weeks (non-positive)");
    ablate->add_option_function<std::string>(
        "--runs", [&](const std::string& v) { opt.overrides["runs"] = v; }, "fits per scenario");

    auto* waves = app.add_subcommand("waves", "outbreak wave timeliness scoring");
    add_common(waves);
    add_path(waves, "--cases-weekly", "cases_weekly", "weekly cases series CSV");
    add_path(waves, "--trends-weekly", "trends_weekly", "weekly trends series CSV");
    add_path(waves, "--posts-weekly", "posts_weekly", "weekly posts series CSV");
    add_path(waves, "--waves", "waves", "official waves CSV (label,start,end)");
    waves->add_flag_function(
        "--detect", [&](std::int64_t) { opt.overrides["detect"] = "1"; },
        "detect waves from the case series");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(opt);
        if (filter->parsed()) return cmd_filter(opt);
        if (correlate->parsed()) return cmd_correlate(opt);
        if (ablate->parsed()) return cmd_ablate(opt);
        if (waves->parsed()) return cmd_waves(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
