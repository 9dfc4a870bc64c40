#include "boardcore/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "boardcore/csv.hpp"
#include "boardcore/parallel.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace boardcore {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// enum <-> config token
BrokerMode parse_broker_mode(const std::string& s) {
    if (s == "middleman") return BrokerMode::Middleman;
    if (s == "reach") return BrokerMode::Reach;
    throw ParseError("unknown brokerage mode '" + s + "' (middleman|reach)");
}
std::string to_token(BrokerMode m) { return m == BrokerMode::Middleman ? "middleman" : "reach"; }

Mediation parse_mediation(const std::string& s) {
    if (s == "induced") return Mediation::Induced;
    if (s == "ambient") return Mediation::Ambient;
    throw ParseError("unknown mediation mode '" + s + "' (induced|ambient)");
}
std::string to_token(Mediation m) { return m == Mediation::Induced ? "induced" : "ambient"; }

Standardize parse_standardize(const std::string& s) {
    if (s == "ratio") return Standardize::Ratio;
    if (s == "minmax") return Standardize::MinMax;
    throw ParseError("unknown standardization mode '" + s + "' (ratio|minmax)");
}
std::string to_token(Standardize m) { return m == Standardize::Ratio ? "ratio" : "minmax"; }

Impute parse_impute(const std::string& s) {
    if (s == "zero") return Impute::Zero;
    if (s == "drop") return Impute::Drop;
    throw ParseError("unknown imputation mode '" + s + "' (zero|drop)");
}
std::string to_token(Impute m) { return m == Impute::Zero ? "zero" : "drop"; }

MonthIndex parse_month_or_throw(const std::string& s, const char* what) {
    auto m = parse_month(s);
    if (!m) throw ParseError(std::string(what) + ": bad month '" + s + "' (want YYYY-MM)");
    return *m;
}

const char* kRegistryFiles[] = {"positions.csv", "financials.csv", "groups.csv",
                                "directors.csv", "committees.csv"};

}  // namespace

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig c;
    c.synth = SynthConfig{};
    // the default demo registry spans one month and a thousand directors; the
    // register-scale base rate would leave too few members for a stable fit
    c.synth->base_rate = 0.05;
    c.period_map = {
        {MonthIndex{2010, 1}, MonthIndex{2012, 12}, 2013, 2015},
        {MonthIndex{2013, 1}, MonthIndex{2015, 12}, 2016, 2017},
    };
    c.model.response = "committee";
    // additive by default: the demo registry is too small to pin down the
    // interaction cells; pass terms ["coreness*company_rank"] for the full
    // interacted design
    c.model.terms = {"coreness", "company_rank"};
    c.model.cluster = "director";
    c.inner_circle_top_n = 50;
    return c;
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_object()) throw ParseError("pipeline config must be a JSON object");

    static const std::set<std::string> known = {
        "data_dir",        "synth",          "out_dir",         "study_start",
        "study_end",       "brokerage_mode", "brokerage_threshold", "mediation",
        "coboard_multiplicity", "standardize", "impute",         "log1p",
        "rank_cutoffs",    "include_top_share", "inner_circle_top_n", "concentration_year",
        "period_map",      "model",          "profile",         "enrichment_bins",
        "workers",
    };
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ParseError("unknown config key '" + it.key() + "'");

    PipelineConfig c = defaults();
    c.synth.reset();

    if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("synth")) c.synth = SynthConfig::from_json_text(j.at("synth").dump());
    if (j.contains("study_start"))
        c.study_start = parse_month_or_throw(j.at("study_start").get<std::string>(), "study_start");
    if (j.contains("study_end"))
        c.study_end = parse_month_or_throw(j.at("study_end").get<std::string>(), "study_end");
    if (j.contains("brokerage_mode"))
        c.brokerage_mode = parse_broker_mode(j.at("brokerage_mode").get<std::string>());
    if (j.contains("brokerage_threshold")) {
        const auto& v = j.at("brokerage_threshold");
        if (v.is_number_integer()) {
            c.brokerage_threshold = Rat::make(v.get<long long>(), 1);
        } else {
            auto r = parse_rational(v.get<std::string>());
            if (!r) throw ParseError("bad brokerage_threshold '" + v.get<std::string>() + "'");
            c.brokerage_threshold = *r;
        }
    }
    if (j.contains("mediation")) c.mediation = parse_mediation(j.at("mediation").get<std::string>());
    if (j.contains("coboard_multiplicity"))
        c.coboard_multiplicity = j.at("coboard_multiplicity").get<bool>();
    if (j.contains("standardize"))
        c.standardize = parse_standardize(j.at("standardize").get<std::string>());
    if (j.contains("impute")) c.rank_options.impute = parse_impute(j.at("impute").get<std::string>());
    if (j.contains("log1p")) c.rank_options.log1p_transform = j.at("log1p").get<bool>();
    if (j.contains("rank_cutoffs")) {
        auto v = j.at("rank_cutoffs").get<std::vector<std::uint32_t>>();
        if (v.size() != 3) throw ParseError("rank_cutoffs wants [top, mid, broad]");
        c.rank_cutoffs = {v[0], v[1], v[2]};
    }
    if (j.contains("include_top_share")) c.include_top_share = j.at("include_top_share").get<double>();
    if (j.contains("inner_circle_top_n"))
        c.inner_circle_top_n = j.at("inner_circle_top_n").get<std::uint32_t>();
    if (j.contains("concentration_year")) c.concentration_year = j.at("concentration_year").get<int>();
    if (j.contains("period_map")) {
        c.period_map.clear();
        for (const auto& e : j.at("period_map")) {
            PeriodWindow w;
            w.obs_start = parse_month_or_throw(e.at("obs_start").get<std::string>(), "period_map");
            w.obs_end = parse_month_or_throw(e.at("obs_end").get<std::string>(), "period_map");
            w.committee_start = e.at("committee_start").get<int>();
            w.committee_end = e.at("committee_end").get<int>();
            c.period_map.push_back(w);
        }
    }
    if (j.contains("model")) c.model = ModelSpec::from_json_text(j.at("model").dump());
    if (j.contains("profile")) {
        const auto& p = j.at("profile");
        if (p.contains("var")) c.profile.var = p.at("var").get<std::string>();
        if (p.contains("values")) c.profile.values = p.at("values").get<std::vector<double>>();
        if (p.contains("by")) c.profile.by = p.at("by").get<std::vector<std::string>>();
    }
    if (j.contains("enrichment_bins")) c.enrichment_bins = j.at("enrichment_bins").get<int>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    return c;
}

std::string PipelineConfig::to_json_text() const {
    json j;
    j["data_dir"] = data_dir;
    if (synth) j["synth"] = json::parse(synth->to_json_text());
    j["out_dir"] = out_dir;
    j["study_start"] = to_string(study_start);
    j["study_end"] = to_string(study_end);
    j["brokerage_mode"] = to_token(brokerage_mode);
    j["brokerage_threshold"] = brokerage_threshold.to_string();
    j["mediation"] = to_token(mediation);
    j["coboard_multiplicity"] = coboard_multiplicity;
    j["standardize"] = to_token(standardize);
    j["impute"] = to_token(rank_options.impute);
    j["log1p"] = rank_options.log1p_transform;
    j["rank_cutoffs"] = {rank_cutoffs.top, rank_cutoffs.mid, rank_cutoffs.broad};
    j["include_top_share"] = include_top_share;
    j["inner_circle_top_n"] = inner_circle_top_n;
    if (concentration_year) j["concentration_year"] = *concentration_year;
    j["period_map"] = json::array();
    for (const auto& w : period_map)
        j["period_map"].push_back({{"obs_start", to_string(w.obs_start)},
                                   {"obs_end", to_string(w.obs_end)},
                                   {"committee_start", w.committee_start},
                                   {"committee_end", w.committee_end}});
    j["model"] = json::parse(model.to_json_text());
    j["profile"] = {{"var", profile.var}, {"values", profile.values}, {"by", profile.by}};
    j["enrichment_bins"] = enrichment_bins;
    j["workers"] = workers;
    return j.dump(2) + "\n";
}

void PipelineConfig::validate() const {
    if (data_dir.empty() == !synth.has_value())
        throw std::invalid_argument("config needs exactly one input source: data_dir or synth");
    if (!data_dir.empty())
        for (const char* f : kRegistryFiles) {
            fs::path p = fs::path(data_dir) / f;
            if (!fs::exists(p)) throw std::invalid_argument("input file missing: " + p.string());
        }
    if (study_end < study_start) throw std::invalid_argument("study_end precedes study_start");
    if (brokerage_threshold.num < 0) throw std::invalid_argument("brokerage_threshold is negative");
    if (include_top_share <= 0 || include_top_share > 1)
        throw std::invalid_argument("include_top_share must lie in (0, 1]");
    if (inner_circle_top_n == 0) throw std::invalid_argument("inner_circle_top_n must be positive");
    if (!(rank_cutoffs.top < rank_cutoffs.mid && rank_cutoffs.mid < rank_cutoffs.broad))
        throw std::invalid_argument("rank_cutoffs must be strictly increasing");
    if (concentration_year &&
        (*concentration_year < study_start.year || *concentration_year > study_end.year))
        throw std::invalid_argument("concentration_year outside the study period");
    if (enrichment_bins < 2) throw std::invalid_argument("enrichment_bins must be at least 2");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (profile.values.empty()) throw std::invalid_argument("profile grid is empty");
    for (const auto& w : period_map) {
        if (w.obs_end < w.obs_start)
            throw std::invalid_argument("period_map: observation window inverted");
        if (w.committee_end < w.committee_start)
            throw std::invalid_argument("period_map: committee window inverted");
    }
}

namespace {

struct MonthData {
    MonthIndex month;
    std::vector<std::string> lc_ids;
    std::vector<std::string> survivor_ids;
    std::vector<RoundStat> rounds;
    CorenessTable kc;
    std::vector<Rat> std_cor;
    std::vector<DirectorRankProfile> profiles;
    std::uint64_t lc_size = 0;
    std::uint64_t initial_lc = 0;
    std::uint64_t ic_linkers = 0;
    std::uint64_t core_overlap = 0;
};

struct StageClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double lap() {
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        t0 = t1;
        return s;
    }
};

class Runner {
  public:
    Runner(const PipelineConfig& cfg, Warnings* warnings, std::string until)
        : cfg_(cfg), warnings_(warnings), until_(std::move(until)) {}

    PipelineResult run();

  private:
    const PipelineConfig& cfg_;
    Warnings* warnings_;
    std::string until_;
    std::set<std::string> executed_;
    PipelineResult result_;

    std::string registry_dir_;
    std::map<std::string, std::string> old_keys_;
    size_t stale_from_ = SIZE_MAX;
    std::vector<std::pair<std::string, std::string>> stage_keys_;  // name -> key
    std::map<std::string, std::vector<std::string>> stage_outputs_;

    // parsed inputs
    std::vector<PositionRecord> positions_;
    FinancialTable fin_;
    GroupForest groups_;
    std::vector<DirectorAttributes> directors_;
    std::vector<CommitteeRoster> rosters_;

    std::vector<MonthIndex> months_;
    std::map<int, RankTable> company_ranks_, corp_ranks_;
    std::map<int, std::vector<PositionRecord>> year_positions_;  // include_top_share < 1
    std::vector<MonthData> month_data_;
    PanelTable panel_;
    DesignMatrix design_;
    FitResult fit_;
    bool fit_ran_ = false;

    std::string out(const std::string& name) const {
        return (fs::path(cfg_.out_dir) / name).string();
    }
    bool outputs_exist(const std::string& stage) const {
        for (const auto& f : stage_outputs_.at(stage))
            if (!fs::exists(f)) return false;
        return true;
    }
    void plan_stages();
    void load_cache();
    void save_cache();
    void restore_result_from_artifacts();
    template <typename F>
    void stage(const std::string& name, F&& body);

    void do_ingest();
    void do_ranks(bool emit);
    void do_graphs(bool emit);
    void do_panel(bool emit);
    void do_fit(bool emit);
    void do_report(bool emit);

    const std::vector<PositionRecord>& records_for(int year) const {
        if (cfg_.include_top_share >= 1.0) return positions_;
        return year_positions_.at(year);
    }
};

void Runner::load_cache() {
    std::string path = out("cache.json");
    if (!fs::exists(path)) return;
    try {
        json j = json::parse(read_file(path));
        for (auto it = j.begin(); it != j.end(); ++it)
            old_keys_[it.key()] = it.value().get<std::string>();
    } catch (const std::exception&) {
        old_keys_.clear();  // stale or foreign cache; recompute everything
    }
}

// A stage enters the cache when it ran this time, or when its old entry is
// still valid; partial runs never invalidate later stages.
void Runner::save_cache() {
    json entries = json::object();
    for (const auto& [name, key] : stage_keys_) {
        bool ran = executed_.count(name) > 0;
        auto it = old_keys_.find(name);
        bool still_valid = it != old_keys_.end() && it->second == key && outputs_exist(name);
        if (ran || still_valid) entries[name] = key;
    }
    std::ofstream outf(out("cache.json"), std::ios::binary);
    outf << entries.dump(2) << "\n";
}

// Keys chain: each stage key folds in its upstream key, so any input change
// invalidates everything downstream of it.
void Runner::plan_stages() {
    for (int L = cfg_.study_start.linear(); L <= cfg_.study_end.linear(); ++L)
        months_.push_back(MonthIndex::from_linear(L));

    std::uint64_t h = fnv1a64("pipeline-v1");
    auto fold = [&](const std::string& s) { h = fnv1a64(s, h); };

    if (cfg_.synth) {
        fold("synth");
        fold(cfg_.synth->to_json_text());
        stage_keys_.push_back({"synth", hex64(h)});
        std::vector<std::string> files;
        for (const char* f : kRegistryFiles) files.push_back(registry_dir_ + "/" + f);
        files.push_back(registry_dir_ + "/ground_truth.csv");
        files.push_back(registry_dir_ + "/dgp.json");
        stage_outputs_["synth"] = files;
    }
}

// A cached stage keeps its artifacts but still recomputes in memory so that
// stale downstream stages have inputs to work from.
template <typename F>
void Runner::stage(const std::string& name, F&& body) {
    StageClock clock;
    size_t idx = 0;
    for (; idx < stage_keys_.size(); ++idx)
        if (stage_keys_[idx].first == name) break;

    bool emit = idx >= stale_from_;
    try {
        body(emit);
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError("stage " + name + " failed: " + e.what() + "; partial artifacts in " +
                            cfg_.out_dir);
    }
    executed_.insert(name);
    result_.stages.push_back({name, !emit, clock.lap()});
}

PipelineResult Runner::run() {
    result_.out_dir = cfg_.out_dir;
    fs::create_directories(cfg_.out_dir);
    registry_dir_ = cfg_.data_dir.empty() ? out("registry") : cfg_.data_dir;
    load_cache();
    plan_stages();

    // the synth stage must settle before input files can be hashed
    bool synth_cached = false;
    if (cfg_.synth) {
        synth_cached = old_keys_.count("synth") && old_keys_["synth"] == stage_keys_[0].second &&
                       outputs_exist("synth");
        if (!synth_cached) {
            StageClock clock;
            try {
                synthesize_dataset(*cfg_.synth, registry_dir_, warnings_);
            } catch (const std::exception& e) {
                throw PipelineError(std::string("stage synth failed: ") + e.what() +
                                    "; partial artifacts in " + cfg_.out_dir);
            }
            executed_.insert("synth");
            result_.stages.push_back({"synth", false, clock.lap()});
        } else {
            result_.stages.push_back({"synth", true, 0.0});
        }
    }

    // content hashes of the five input files
    auto hash_file = [&](const char* name) { return fnv1a64(read_file(registry_dir_ + "/" + name)); };
    std::uint64_t h_pos = hash_file("positions.csv");
    std::uint64_t h_fin = hash_file("financials.csv");
    std::uint64_t h_grp = hash_file("groups.csv");
    std::uint64_t h_dir = hash_file("directors.csv");
    std::uint64_t h_com = hash_file("committees.csv");

    auto key_of = [&](std::initializer_list<std::string> parts) {
        std::uint64_t h = fnv1a64("pipeline-v1");
        for (const auto& p : parts) h = fnv1a64(p, h);
        return hex64(h);
    };
    std::string window = to_string(cfg_.study_start) + ".." + to_string(cfg_.study_end);
    std::string rank_params = to_token(cfg_.rank_options.impute) +
                              (cfg_.rank_options.log1p_transform ? ":log1p" : ":raw") + ":" +
                              std::to_string(cfg_.rank_cutoffs.top) + "," +
                              std::to_string(cfg_.rank_cutoffs.mid) + "," +
                              std::to_string(cfg_.rank_cutoffs.broad) + ":" +
                              (cfg_.concentration_year ? std::to_string(*cfg_.concentration_year)
                                                       : std::string("end"));
    std::string graph_params = to_token(cfg_.brokerage_mode) + ":" +
                               cfg_.brokerage_threshold.to_string() + ":" +
                               to_token(cfg_.mediation) + ":" +
                               (cfg_.coboard_multiplicity ? "mult" : "simple") + ":" +
                               to_token(cfg_.standardize) + ":" +
                               fmt_double(cfg_.include_top_share) + ":" +
                               std::to_string(cfg_.inner_circle_top_n);
    std::string period_params;
    for (const auto& w : cfg_.period_map)
        period_params += to_string(w.obs_start) + "-" + to_string(w.obs_end) + ">" +
                         std::to_string(w.committee_start) + "-" + std::to_string(w.committee_end) +
                         ";";

    std::string k_ingest = key_of({"ingest", hex64(h_pos), hex64(h_fin), hex64(h_grp),
                                   hex64(h_dir), hex64(h_com)});
    std::string k_ranks = key_of({"ranks", hex64(h_fin), hex64(h_grp), rank_params, window});
    std::string k_graphs = key_of({"graphs", hex64(h_pos), k_ranks, graph_params, window});
    std::string k_panel =
        key_of({"panel", k_graphs, k_ranks, hex64(h_dir), hex64(h_com), period_params});
    std::string k_fit = key_of({"fit", k_panel, cfg_.model.to_json_text()});
    json profile_j = {{"var", cfg_.profile.var},
                      {"values", cfg_.profile.values},
                      {"by", cfg_.profile.by},
                      {"bins", cfg_.enrichment_bins}};
    std::string k_report = key_of({"report", k_fit, profile_j.dump()});

    stage_keys_.push_back({"ingest", k_ingest});
    stage_outputs_["ingest"] = {};
    stage_keys_.push_back({"ranks", k_ranks});
    {
        std::vector<std::string> files = {out("ranks.csv"), out("corp_ranks.csv"),
                                          out("concentration.csv"), out("fig4_concentration.csv")};
        stage_outputs_["ranks"] = files;
    }
    stage_keys_.push_back({"graphs", k_graphs});
    {
        std::vector<std::string> files = {out("summary.csv"), out("fig1_rounds.csv"),
                                          out("fig2_core.csv"), out("fig3_compare.csv")};
        for (const auto& m : months_) {
            files.push_back(out("coreness_" + to_string(m) + ".csv"));
            files.push_back(out("rounds_" + to_string(m) + ".csv"));
        }
        stage_outputs_["graphs"] = files;
    }
    stage_keys_.push_back({"panel", k_panel});
    stage_outputs_["panel"] = {out("panel.csv")};
    stage_keys_.push_back({"fit", k_fit});
    stage_outputs_["fit"] = {out("fit.json"), out("ame.csv")};
    stage_keys_.push_back({"report", k_report});
    stage_outputs_["report"] = {out("profile.csv"), out("fig5_enrichment.csv"),
                                out("fig6_profiles.csv")};

    // first stale stage decides what actually executes
    size_t first = cfg_.synth ? 1 : 0;  // synth already handled
    stale_from_ = SIZE_MAX;
    if (cfg_.synth && !synth_cached) stale_from_ = 0;
    for (size_t i = first; i < stage_keys_.size() && stale_from_ == SIZE_MAX; ++i) {
        const auto& [name, key] = stage_keys_[i];
        auto it = old_keys_.find(name);
        if (it == old_keys_.end() || it->second != key || !outputs_exist(name)) stale_from_ = i;
    }

    static const char* kOrder[] = {"ingest", "ranks", "graphs", "panel", "fit", "report"};
    size_t cut = 6;
    if (!until_.empty()) {
        cut = 0;
        while (cut < 6 && until_ != kOrder[cut]) ++cut;
        if (cut == 6) throw std::invalid_argument("unknown stage '" + until_ + "'");
        ++cut;
    }

    if (stale_from_ == SIZE_MAX) {
        // everything reusable; summary numbers come back off the artifacts
        for (size_t i = first; i < stage_keys_.size() && i < first + cut; ++i)
            result_.stages.push_back({stage_keys_[i].first, true, 0.0});
        save_cache();
        restore_result_from_artifacts();
        return result_;
    }

    size_t done = 0;
    auto want = [&] { return done++ < cut; };
    if (want()) stage("ingest", [&](bool) { do_ingest(); });
    if (want()) stage("ranks", [&](bool emit) { do_ranks(emit); });
    if (want()) stage("graphs", [&](bool emit) { do_graphs(emit); });
    if (want()) stage("panel", [&](bool emit) { do_panel(emit); });
    if (want()) stage("fit", [&](bool emit) { do_fit(emit); });
    if (want()) stage("report", [&](bool emit) { do_report(emit); });
    save_cache();
    return result_;
}

void Runner::restore_result_from_artifacts() {
    CsvTable s = read_csv(out("summary.csv"));
    double bsum = 0, dsum = 0, csum = 0;
    for (const auto& row : s.rows) {
        dsum += std::stod(row[1]);
        csum += std::stod(row[2]);
        bsum += std::stod(row[3]);
    }
    if (!s.rows.empty()) {
        auto n = static_cast<double>(s.rows.size());
        result_.broker_count_mean = bsum / n;
        result_.degeneracy_mean_hu = dsum / n;
        result_.core_size_mean = csum / n;
    }
    CsvTable a = read_csv(out("ame.csv"));
    for (const auto& row : a.rows)
        if (row[0] == "coreness" && row[1].empty()) result_.coreness_ame = std::stod(row[2]);
}

void Runner::do_ingest() {
    positions_ = parse_positions(registry_dir_ + "/positions.csv");
    std::tie(fin_, groups_) = load_company_registry(registry_dir_ + "/financials.csv",
                                                    registry_dir_ + "/groups.csv", warnings_);
    directors_ = parse_directors(registry_dir_ + "/directors.csv");
    rosters_ = parse_committees(registry_dir_ + "/committees.csv");
}

void Runner::do_ranks(bool emit) {
    for (int y = cfg_.study_start.year; y <= cfg_.study_end.year; ++y) {
        company_ranks_.emplace(y, pca_company_rank(fin_, y, cfg_.rank_options, warnings_));
        corp_ranks_.emplace(y, corporation_rank(fin_, y, groups_, cfg_.rank_options, warnings_));
    }
    if (!emit) return;

    {
        CsvWriter w(out("ranks.csv"));
        w.row({"year", "company_id", "pc1", "rank", "category"});
        for (const auto& [y, t] : company_ranks_)
            for (size_t k = 0; k < t.entity_ids.size(); ++k)
                w.row({std::to_string(y), t.entity_ids[k], fmt_double(t.pc1[k]),
                       std::to_string(k + 1),
                       to_string(rank_category(static_cast<std::uint32_t>(k + 1), cfg_.rank_cutoffs))});
        w.close();
    }
    {
        CsvWriter w(out("corp_ranks.csv"));
        w.row({"year", "corporation_id", "pc1", "rank", "category"});
        for (const auto& [y, t] : corp_ranks_)
            for (size_t k = 0; k < t.entity_ids.size(); ++k)
                w.row({std::to_string(y), t.entity_ids[k], fmt_double(t.pc1[k]),
                       std::to_string(k + 1),
                       to_string(rank_category(static_cast<std::uint32_t>(k + 1), cfg_.rank_cutoffs))});
        w.close();
    }

    int cy = cfg_.concentration_year ? *cfg_.concentration_year : cfg_.study_end.year;
    {
        auto points = concentration_curve(company_ranks_.at(cy), fin_, warnings_);
        CsvWriter w(out("concentration.csv"));
        w.row({"rank", "cum_employees", "cum_revenue", "cum_assets"});
        for (const auto& p : points)
            w.row({std::to_string(p.rank), fmt_double(p.cum_employees), fmt_double(p.cum_revenue),
                   fmt_double(p.cum_assets)});
        w.close();
    }
    {
        CsvWriter w(out("fig4_concentration.csv"));
        w.row({"year", "rank", "cum_employees", "cum_revenue", "cum_assets"});
        for (const auto& [y, t] : company_ranks_) {
            auto points = concentration_curve(t, fin_, warnings_);
            for (const auto& p : points)
                w.row({std::to_string(y), std::to_string(p.rank), fmt_double(p.cum_employees),
                       fmt_double(p.cum_revenue), fmt_double(p.cum_assets)});
        }
        w.close();
    }
}

void Runner::do_graphs(bool emit) {
    if (cfg_.include_top_share < 1.0) {
        for (int y = cfg_.study_start.year; y <= cfg_.study_end.year; ++y) {
            const RankTable& rt = company_ranks_.at(y);
            auto top_k = static_cast<std::uint32_t>(
                std::ceil(cfg_.include_top_share * static_cast<double>(rt.entity_ids.size())));
            if (top_k == 0) top_k = 1;
            std::vector<PositionRecord> kept;
            for (const auto& rec : positions_) {
                std::uint32_t r = rt.rank(rec.company_id);
                if (r != 0 && r <= top_k) kept.push_back(rec);
            }
            year_positions_.emplace(y, std::move(kept));
        }
    }

    month_data_.assign(months_.size(), MonthData{});
    parallel_for(months_.size(), cfg_.workers, [&](size_t i) {
        MonthData& md = month_data_[i];
        md.month = months_[i];
        int y = md.month.year;
        const auto& recs = records_for(y);

        Snapshot snap = build_snapshot(recs, md.month);
        CoBoardGraph g = project_coboard(recs, snap);
        auto lc = largest_component(g);
        CoBoardGraph glc = induce(g, lc);
        md.lc_size = glc.node_count();
        md.initial_lc = glc.node_count();
        md.lc_ids = glc.ids;

        BrokerageReport rep = prune_brokers(glc, cfg_.brokerage_threshold, cfg_.brokerage_mode, 1);
        md.rounds = rep.rounds;
        md.survivor_ids.reserve(rep.survivors.size());
        for (std::uint32_t u : rep.survivors) md.survivor_ids.push_back(glc.ids[u]);

        ReachGraph rg =
            build_reach_graph(glc, rep.survivors, cfg_.mediation, cfg_.coboard_multiplicity);
        md.kc = weighted_kcore(rg, md.month);
        md.std_cor = standardized_coreness(md.kc, cfg_.standardize);
        md.profiles = director_rank_profiles(recs, snap, company_ranks_.at(y), corp_ranks_.at(y),
                                             groups_, cfg_.rank_cutoffs);

        const RankTable& rt = company_ranks_.at(y);
        std::uint32_t ranked = static_cast<std::uint32_t>(rt.entity_ids.size());
        std::uint32_t top_n = std::min(cfg_.inner_circle_top_n, ranked);
        if (top_n > 0) {
            InnerCircle ic = extract_inner_circle(recs, snap, rt.rank_of, top_n);
            std::unordered_set<std::string> linker_ids;
            for (std::uint32_t u = 0; u < ic.graph.node_count(); ++u)
                if (ic.linker[u]) linker_ids.insert(ic.graph.ids[u]);
            md.ic_linkers = linker_ids.size();
            if (md.kc.degeneracy.hu > 0)
                for (std::uint32_t u : md.kc.max_core)
                    if (linker_ids.count(md.kc.ids[u])) ++md.core_overlap;
        }
    });

    double bsum = 0, dsum = 0, csum = 0;
    for (const auto& md : month_data_) {
        bsum += static_cast<double>(md.survivor_ids.size());
        dsum += static_cast<double>(md.kc.degeneracy.hu);
        csum += static_cast<double>(md.kc.degeneracy.hu > 0 ? md.kc.max_core.size() : 0);
    }
    auto n_months = static_cast<double>(months_.size());
    result_.broker_count_mean = bsum / n_months;
    result_.degeneracy_mean_hu = dsum / n_months;
    result_.core_size_mean = csum / n_months;
    if (!emit) return;

    {
        CsvWriter w(out("summary.csv"));
        w.row({"month", "degeneracy_halfunits", "core_size", "broker_count"});
        for (const auto& md : month_data_) {
            std::uint64_t core = md.kc.degeneracy.hu > 0 ? md.kc.max_core.size() : 0;
            w.row({to_string(md.month), std::to_string(md.kc.degeneracy.hu), std::to_string(core),
                   std::to_string(md.survivor_ids.size())});
        }
        w.close();
    }
    {
        CsvWriter w(out("fig1_rounds.csv"));
        w.row({"month", "round", "removed", "remaining", "remaining_fraction",
               "removed_share_initial", "removed_share_remaining"});
        for (const auto& md : month_data_)
            for (const auto& r : md.rounds) {
                double initial = static_cast<double>(md.initial_lc);
                double at_start = static_cast<double>(r.remaining + r.removed);
                w.row({to_string(md.month), std::to_string(r.round), std::to_string(r.removed),
                       std::to_string(r.remaining), fmt_double(r.remaining_fraction.to_double()),
                       fmt_double(initial > 0 ? static_cast<double>(r.removed) / initial : 0.0),
                       fmt_double(at_start > 0 ? static_cast<double>(r.removed) / at_start : 0.0)});
            }
        w.close();
    }
    {
        CsvWriter w(out("fig2_core.csv"));
        w.row({"month", "lc_size", "broker_count", "degeneracy_halfunits", "core_size"});
        for (const auto& md : month_data_) {
            std::uint64_t core = md.kc.degeneracy.hu > 0 ? md.kc.max_core.size() : 0;
            w.row({to_string(md.month), std::to_string(md.lc_size),
                   std::to_string(md.survivor_ids.size()), std::to_string(md.kc.degeneracy.hu),
                   std::to_string(core)});
        }
        w.close();
    }
    {
        CsvWriter w(out("fig3_compare.csv"));
        w.row({"month", "network_core", "inner_circle_linkers", "overlap"});
        for (const auto& md : month_data_) {
            std::uint64_t core = md.kc.degeneracy.hu > 0 ? md.kc.max_core.size() : 0;
            w.row({to_string(md.month), std::to_string(core), std::to_string(md.ic_linkers),
                   std::to_string(md.core_overlap)});
        }
        w.close();
    }
    for (const auto& md : month_data_) {
        std::unordered_set<std::string> lc_set(md.lc_ids.begin(), md.lc_ids.end());
        std::unordered_set<std::string> sv_set(md.survivor_ids.begin(), md.survivor_ids.end());
        CsvWriter w(out("coreness_" + to_string(md.month) + ".csv"));
        w.row({"director_id", "coreness_halfunits", "std_coreness", "category"});
        for (size_t k = 0; k < md.kc.ids.size(); ++k) {
            auto cat = classify_elite(md.kc.ids[k], lc_set, sv_set, md.kc);
            w.row({md.kc.ids[k], std::to_string(md.kc.coreness[k].hu),
                   fmt_double(md.std_cor[k].to_double()),
                   std::to_string(static_cast<int>(cat))});
        }
        w.close();
        CsvWriter rw(out("rounds_" + to_string(md.month) + ".csv"));
        rw.row({"round", "removed", "remaining_fraction"});
        for (const auto& r : md.rounds)
            rw.row({std::to_string(r.round), std::to_string(r.removed),
                    fmt_double(r.remaining_fraction.to_double())});
        rw.close();
    }
}

void Runner::do_panel(bool emit) {
    CommitteeFlags flags = match_committee_members(directors_, rosters_, cfg_.period_map, warnings_);

    std::vector<MonthArtifacts> arts;
    arts.reserve(month_data_.size());
    for (const auto& md : month_data_) {
        MonthArtifacts a;
        a.month = md.month;
        a.lc_ids = md.lc_ids;
        a.survivor_ids = md.survivor_ids;
        a.coreness = &md.kc;
        a.std_coreness = &md.std_cor;
        a.profiles = &md.profiles;
        arts.push_back(std::move(a));
    }

    PanelQuality quality;
    panel_ = assemble_panel(arts, directors_, flags, cfg_.period_map, fin_, &quality);
    warn(warnings_, "panel rows: " + std::to_string(quality.rows) +
                        ", outside period map: " + std::to_string(quality.rows_outside_period_map) +
                        ", missing director attributes: " +
                        std::to_string(quality.missing_director_attributes) +
                        ", missing company records: " +
                        std::to_string(quality.missing_company_record));
    if (!emit) return;

    CsvWriter w(out("panel.csv"));
    std::vector<std::string> header = {"director_id", "month"};
    for (const auto& v : panel_.vars) header.push_back(v.name);
    w.row(header);
    std::vector<std::string> row;
    for (std::uint64_t i = 0; i < panel_.n; ++i) {
        row.clear();
        row.push_back(panel_.director_ids[i]);
        row.push_back(to_string(panel_.months[i]));
        for (std::uint32_t v = 0; v < panel_.vars.size(); ++v) {
            if (panel_.vars[v].kind == VarKind::Categorical)
                row.push_back(panel_.vars[v].levels[panel_.codes[v][i]]);
            else
                row.push_back(fmt_double(panel_.numeric[v][i]));
        }
        w.row(row);
    }
    w.close();
}

void Runner::do_fit(bool emit) {
    design_ = encode_design(panel_, cfg_.model, warnings_);
    FitOptions opt;
    opt.ridge = cfg_.model.ridge;
    opt.workers = cfg_.workers;
    fit_ = fit_logistic(design_, opt);
    fit_ran_ = true;

    AmeTable ame = average_marginal_effects(fit_, design_, cfg_.workers);
    for (const auto& r : ame.rows)
        if (r.variable == "coreness" && r.level.empty()) result_.coreness_ame = r.estimate;
    if (!emit) return;

    json j;
    j["model"] = json::parse(cfg_.model.to_json_text());
    j["n"] = design_.n;
    j["p"] = design_.p;
    j["n_clusters"] = design_.n_clusters;
    j["ll"] = fit_.ll;
    j["ll_null"] = fit_.ll_null;
    j["pseudo_r2"] = fit_.ll_null != 0.0 ? json(mcfadden_pseudo_r2(fit_)) : json();
    j["iterations"] = fit_.iterations;
    j["converged"] = fit_.converged;
    j["gradient_max"] = fit_.gradient_max;
    j["columns"] = json::array();
    for (std::uint32_t k = 0; k < design_.p; ++k)
        j["columns"].push_back({{"name", design_.cols[k].name},
                                {"beta", fit_.beta[k]},
                                {"se_model", fit_.se_model(k, design_.p)},
                                {"se_robust", fit_.se_robust(k, design_.p)}});
    std::ofstream outf(out("fit.json"), std::ios::binary);
    outf << j.dump(2) << "\n";

    CsvWriter w(out("ame.csv"));
    w.row({"variable", "level", "estimate", "se", "ci_lo", "ci_hi"});
    for (const auto& r : ame.rows)
        w.row({r.variable, r.level, fmt_double(r.estimate), fmt_double(r.se), fmt_double(r.ci_lo),
               fmt_double(r.ci_hi)});
    w.close();
}

void Runner::do_report(bool emit) {
    if (!emit) return;  // nothing downstream consumes report state
    // profiles need the grid variable and every by-variable in the design
    auto in_design = [&](const std::string& name) {
        std::uint32_t v = panel_.var(name);
        for (const auto& col : design_.cols)
            for (const auto& f : col.factors)
                if (f.var == v) return true;
        return false;
    };
    bool can_profile = fit_ran_ && in_design(cfg_.profile.var);
    for (const auto& by : cfg_.profile.by) can_profile = can_profile && in_design(by);

    {
        CsvWriter w(out("profile.csv"));
        w.row({"group", "value", "mean_p", "change", "se", "ci_lo", "ci_hi"});
        CsvWriter w6(out("fig6_profiles.csv"));
        w6.row({"group", "value", "mean_p", "change", "se", "ci_lo", "ci_hi"});
        if (can_profile) {
            auto rows = profile_effects(fit_, design_, cfg_.profile, cfg_.workers);
            for (const auto& r : rows) {
                std::vector<std::string> cells = {r.group,           fmt_double(r.value),
                                                  fmt_double(r.mean_p), fmt_double(r.change),
                                                  fmt_double(r.se),  fmt_double(r.ci_lo),
                                                  fmt_double(r.ci_hi)};
                w.row(cells);
                w6.row(cells);
            }
        } else {
            warn(warnings_, "profile variables not all present in the fitted model; profile.csv "
                            "left empty");
        }
        w.close();
        w6.close();
    }

    auto rows = coreness_concentration_report(panel_, cfg_.enrichment_bins);
    CsvWriter w(out("fig5_enrichment.csv"));
    w.row({"flag", "bin_lo", "bin_hi", "ratio", "months", "rows"});
    for (const auto& r : rows)
        w.row({r.flag, fmt_double(r.bin_lo), fmt_double(r.bin_hi), fmt_double(r.ratio),
               std::to_string(r.months), std::to_string(r.rows)});
    w.close();
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, Warnings* warnings,
                            const std::string& until) {
    cfg.validate();
    Runner r(cfg, warnings, until);
    return r.run();
}

std::vector<SweepRow> sensitivity_sweep(const PipelineConfig& cfg, const std::string& key,
                                        const std::vector<std::string>& values,
                                        Warnings* warnings) {
    if (values.empty()) throw std::invalid_argument("sweep values list is empty");

    auto apply = [&](PipelineConfig& c, const std::string& v) {
        if (key == "brokerage_threshold") {
            auto r = parse_rational(v);
            if (!r) throw std::invalid_argument("bad sweep threshold '" + v + "'");
            c.brokerage_threshold = *r;
        } else if (key == "include_top_share") {
            c.include_top_share = std::stod(v);
        } else if (key == "inner_circle_top_n") {
            c.inner_circle_top_n = static_cast<std::uint32_t>(std::stoul(v));
        } else if (key == "brokerage_mode") {
            c.brokerage_mode = parse_broker_mode(v);
        } else if (key == "mediation") {
            c.mediation = parse_mediation(v);
        } else if (key == "standardize") {
            c.standardize = parse_standardize(v);
        } else if (key == "enrichment_bins") {
            c.enrichment_bins = std::stoi(v);
        } else if (key == "synth.core_size") {
            if (!c.synth) throw std::invalid_argument("synth.core_size sweep needs a synth config");
            c.synth->core_size = static_cast<std::uint32_t>(std::stoul(v));
        } else if (key == "synth.seed") {
            if (!c.synth) throw std::invalid_argument("synth.seed sweep needs a synth config");
            c.synth->seed = std::stoull(v);
        } else {
            throw std::invalid_argument("config key '" + key + "' is not sweepable");
        }
    };

    std::vector<SweepRow> rows;
    for (const auto& v : values) {
        PipelineConfig sub = cfg;
        apply(sub, v);
        std::string tag = v;
        for (char& ch : tag)
            if (ch == '/' || ch == '\\') ch = '_';
        sub.out_dir = (fs::path(cfg.out_dir) / "sweep" / (key + "=" + tag)).string();
        PipelineResult res = run_pipeline(sub, warnings);
        SweepRow row{key, v, res.broker_count_mean, res.degeneracy_mean_hu, res.core_size_mean,
                     res.coreness_ame};
        rows.push_back(row);
    }

    fs::create_directories(cfg.out_dir);
    CsvWriter w((fs::path(cfg.out_dir) / "sweep.csv").string());
    w.row({"key", "value", "broker_count_mean", "degeneracy_mean_halfunits", "core_size_mean",
           "coreness_ame"});
    for (const auto& r : rows)
        w.row({r.key, r.value, fmt_double(r.broker_count_mean), fmt_double(r.degeneracy_mean_hu),
               fmt_double(r.core_size_mean),
               r.coreness_ame ? fmt_double(*r.coreness_ame) : std::string()});
    w.close();
    return rows;
}

}  // namespace boardcore
