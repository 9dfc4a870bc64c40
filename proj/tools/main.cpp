#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boardcore/csv.hpp"
#include "boardcore/pipeline.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace boardcore;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void flush_warnings(Warnings& w) {
    for (const auto& m : w) std::fprintf(stderr, "warning: %s\n", m.c_str());
    w.clear();
}

void print_stages(const PipelineResult& res) {
    for (const auto& st : res.stages) {
        if (st.cached)
            std::printf("stage %-7s cached\n", st.name.c_str());
        else
            std::printf("stage %-7s %.2fs\n", st.name.c_str(), st.seconds);
    }
}

void print_summary_columns(const std::string& out_dir, bool brokers, bool cores) {
    CsvTable t = read_csv((fs::path(out_dir) / "summary.csv").string());
    for (const auto& row : t.rows) {
        if (brokers && cores)
            std::printf("%s  brokers=%s  degeneracy_hu=%s  core=%s\n", row[0].c_str(),
                        row[3].c_str(), row[1].c_str(), row[2].c_str());
        else if (brokers)
            std::printf("%s  brokers=%s\n", row[0].c_str(), row[3].c_str());
        else
            std::printf("%s  degeneracy_hu=%s  core=%s\n", row[0].c_str(), row[1].c_str(),
                        row[2].c_str());
    }
}

struct Overrides {
    std::string config_path, data_dir, out_dir, study_start, study_end;
    std::string brokerage_mode, brokerage_threshold, mediation, standardize, impute, cluster;
    unsigned long long seed = 0;
    int workers = 0, bins = 0;
    unsigned inner_circle = 0;
    double top_share = 0.0, ridge = 0.0;
    bool log1p = false, multiplicity = false, print_config = false;

    CLI::App* attach(CLI::App& app) {
        app.add_option("--config", config_path, "pipeline config JSON");
        app.add_option("--workers", workers, "worker threads");
        app.add_option("--out", out_dir, "artifact directory");
        app.add_option("--seed", seed, "synthetic registry seed");
        app.add_flag("--print-config", print_config, "print the effective config and exit");
        app.add_option("--data", data_dir, "registry CSV directory (disables synthesis)");
        app.add_option("--study-start", study_start, "first study month, YYYY-MM");
        app.add_option("--study-end", study_end, "last study month, YYYY-MM");
        app.add_option("--brokerage-mode", brokerage_mode, "middleman|reach");
        app.add_option("--brokerage-threshold", brokerage_threshold, "pruning threshold, rational");
        app.add_option("--mediation", mediation, "induced|ambient");
        app.add_flag("--multiplicity", multiplicity, "weight co-board edges by shared boards");
        app.add_option("--standardize", standardize, "ratio|minmax");
        app.add_option("--impute", impute, "zero|drop missing rank indicators");
        app.add_flag("--log1p", log1p, "log1p-transform rank indicators");
        app.add_option("--cluster", cluster, "robust covariance cluster variable");
        app.add_option("--ridge", ridge, "ridge penalty on non-intercept coefficients");
        app.add_option("--top-share", top_share, "keep positions at the top share of ranked companies");
        app.add_option("--inner-circle", inner_circle, "top-N boards for the inner-circle baseline");
        app.add_option("--bins", bins, "coreness bins for the enrichment report");
        return &app;
    }

    PipelineConfig build(const CLI::App& app) const {
        PipelineConfig cfg = config_path.empty()
                                 ? PipelineConfig::defaults()
                                 : PipelineConfig::from_json_text(slurp(config_path));
        auto given = [&](const char* name) { return app.count(name) > 0; };
        if (given("--out")) cfg.out_dir = out_dir;
        if (given("--workers")) cfg.workers = workers;
        if (given("--data")) {
            cfg.data_dir = data_dir;
            cfg.synth.reset();
        }
        if (given("--seed")) {
            if (cfg.synth)
                cfg.synth->seed = seed;
            else
                std::fprintf(stderr, "warning: --seed ignored without a synthetic registry\n");
        }
        auto month = [&](const std::string& s, const char* what) {
            auto m = parse_month(s);
            if (!m) throw std::runtime_error(std::string(what) + ": bad month '" + s + "'");
            return *m;
        };
        if (given("--study-start")) cfg.study_start = month(study_start, "--study-start");
        if (given("--study-end")) cfg.study_end = month(study_end, "--study-end");
        if (given("--brokerage-mode")) {
            if (brokerage_mode == "middleman")
                cfg.brokerage_mode = BrokerMode::Middleman;
            else if (brokerage_mode == "reach")
                cfg.brokerage_mode = BrokerMode::Reach;
            else
                throw std::runtime_error("unknown brokerage mode '" + brokerage_mode + "'");
        }
        if (given("--brokerage-threshold")) {
            auto r = parse_rational(brokerage_threshold);
            if (!r) throw std::runtime_error("bad threshold '" + brokerage_threshold + "'");
            cfg.brokerage_threshold = *r;
        }
        if (given("--mediation")) {
            if (mediation == "induced")
                cfg.mediation = Mediation::Induced;
            else if (mediation == "ambient")
                cfg.mediation = Mediation::Ambient;
            else
                throw std::runtime_error("unknown mediation mode '" + mediation + "'");
        }
        if (given("--multiplicity")) cfg.coboard_multiplicity = true;
        if (given("--standardize")) {
            if (standardize == "ratio")
                cfg.standardize = Standardize::Ratio;
            else if (standardize == "minmax")
                cfg.standardize = Standardize::MinMax;
            else
                throw std::runtime_error("unknown standardization mode '" + standardize + "'");
        }
        if (given("--impute")) {
            if (impute == "zero")
                cfg.rank_options.impute = Impute::Zero;
            else if (impute == "drop")
                cfg.rank_options.impute = Impute::Drop;
            else
                throw std::runtime_error("unknown imputation mode '" + impute + "'");
        }
        if (given("--log1p")) cfg.rank_options.log1p_transform = true;
        if (given("--cluster")) cfg.model.cluster = cluster;
        if (given("--ridge")) cfg.model.ridge = ridge;
        if (given("--top-share")) cfg.include_top_share = top_share;
        if (given("--inner-circle")) cfg.inner_circle_top_n = inner_circle;
        if (given("--bins")) cfg.enrichment_bins = bins;
        return cfg;
    }
};

// Writes the registry when it is synthetic and not on disk yet.
std::string ensure_registry(const PipelineConfig& cfg, Warnings& warnings) {
    if (!cfg.data_dir.empty()) return cfg.data_dir;
    std::string dir = (fs::path(cfg.out_dir) / "registry").string();
    if (!fs::exists(fs::path(dir) / "positions.csv")) synthesize_dataset(*cfg.synth, dir, &warnings);
    return dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"board network core detection pipeline"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    Overrides ov;
    ov.attach(app);

    auto* c_synth = app.add_subcommand("synth", "generate the synthetic registry");
    auto* c_snapshot = app.add_subcommand("snapshot", "monthly co-board projection sizes");
    std::string snap_month;
    c_snapshot->add_option("--month", snap_month, "month to project, YYYY-MM");
    auto* c_brokerage = app.add_subcommand("brokerage", "iterative local-broker pruning");
    auto* c_kcore = app.add_subcommand("kcore", "weighted core decomposition");
    auto* c_rank = app.add_subcommand("rank", "company and corporation ranking");
    auto* c_panel = app.add_subcommand("panel", "director-month panel assembly");
    auto* c_fit = app.add_subcommand("fit", "committee membership logistic fit");
    auto* c_report = app.add_subcommand("report", "profile and enrichment outputs");
    auto* c_sweep = app.add_subcommand("sweep", "re-run the pipeline over parameter values");
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    c_sweep->add_option("--key", sweep_key, "config key to vary")->required();
    c_sweep->add_option("--values", sweep_values, "values to run")->required()->expected(-1);
    auto* c_pipeline = app.add_subcommand("pipeline", "run every stage");

    CLI11_PARSE(app, argc, argv);

    Warnings warnings;
    try {
        PipelineConfig cfg = ov.build(app);
        if (ov.print_config) {
            std::fputs(cfg.to_json_text().c_str(), stdout);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::fputs(app.help().c_str(), stdout);
            return 0;
        }

        if (c_synth->parsed()) {
            if (!cfg.synth) throw std::runtime_error("synth needs a synthetic config (no --data)");
            std::string dir = (fs::path(cfg.out_dir) / "registry").string();
            SynthRegistry reg = synthesize_dataset(*cfg.synth, dir, &warnings);
            flush_warnings(warnings);
            std::printf("registry written to %s\n", dir.c_str());
            std::printf("directors=%zu positions=%zu core=%zu\n", reg.directors.size(),
                        reg.positions.size(), reg.truth.core_ids.size());
        } else if (c_snapshot->parsed()) {
            std::string dir = ensure_registry(cfg, warnings);
            auto records = parse_positions(dir + "/positions.csv");
            MonthIndex m = cfg.study_start;
            if (!snap_month.empty()) {
                auto p = parse_month(snap_month);
                if (!p) throw std::runtime_error("--month: bad month '" + snap_month + "'");
                m = *p;
            }
            Snapshot snap = build_snapshot(records, m);
            CoBoardGraph g = project_coboard(records, snap);
            auto lc = largest_component(g);
            flush_warnings(warnings);
            std::printf("%s  active_positions=%zu  directors=%u  coboard_edges=%llu  "
                        "largest_component=%zu\n",
                        to_string(m).c_str(), snap.active.size(), g.node_count(),
                        static_cast<unsigned long long>(g.edge_count()), lc.size());
        } else if (c_brokerage->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings, "graphs");
            flush_warnings(warnings);
            print_stages(res);
            print_summary_columns(res.out_dir, true, false);
        } else if (c_kcore->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings, "graphs");
            flush_warnings(warnings);
            print_stages(res);
            print_summary_columns(res.out_dir, false, true);
        } else if (c_rank->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings, "ranks");
            flush_warnings(warnings);
            print_stages(res);
            std::printf("wrote %s/ranks.csv, corp_ranks.csv, concentration.csv\n",
                        res.out_dir.c_str());
        } else if (c_panel->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings, "panel");
            flush_warnings(warnings);
            print_stages(res);
            std::printf("wrote %s/panel.csv\n", res.out_dir.c_str());
        } else if (c_fit->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings, "fit");
            flush_warnings(warnings);
            print_stages(res);
            nlohmann::json fit = nlohmann::json::parse(slurp(res.out_dir + "/fit.json"));
            std::printf("n=%llu  converged=%s  ll=%.6f\n",
                        fit.at("n").get<unsigned long long>(),
                        fit.at("converged").get<bool>() ? "yes" : "no",
                        fit.at("ll").get<double>());
            for (const auto& col : fit.at("columns"))
                std::printf("%-40s %12.6f  se=%.6f  robust_se=%.6f\n",
                            col.at("name").get<std::string>().c_str(),
                            col.at("beta").get<double>(), col.at("se_model").get<double>(),
                            col.at("se_robust").get<double>());
            if (res.coreness_ame)
                std::printf("coreness AME %.6f\n", *res.coreness_ame);
        } else if (c_report->parsed() || c_pipeline->parsed()) {
            PipelineResult res = run_pipeline(cfg, &warnings);
            flush_warnings(warnings);
            print_stages(res);
            std::printf("artifacts in %s\n", res.out_dir.c_str());
        } else if (c_sweep->parsed()) {
            auto rows = sensitivity_sweep(cfg, sweep_key, sweep_values, &warnings);
            flush_warnings(warnings);
            for (const auto& r : rows)
                std::printf("%s=%s  brokers=%.2f  degeneracy_hu=%.2f  core=%.2f  ame=%s\n",
                            r.key.c_str(), r.value.c_str(), r.broker_count_mean,
                            r.degeneracy_mean_hu, r.core_size_mean,
                            r.coreness_ame ? fmt_double(*r.coreness_ame).c_str() : "-");
            std::printf("sweep table in %s/sweep.csv\n", cfg.out_dir.c_str());
        }
    } catch (const std::exception& e) {
        flush_warnings(warnings);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
