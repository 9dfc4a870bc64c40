#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boardcore/brokerage.hpp"
#include "boardcore/graph.hpp"
#include "boardcore/ingest.hpp"
#include "boardcore/kcore.hpp"
#include "boardcore/ranking.hpp"
#include "boardcore/rational.hpp"
#include "boardcore/stats.hpp"
#include "boardcore/synth.hpp"
#include "boardcore/util.hpp"

namespace boardcore {

// Stage failures surface as: "stage <name> failed: <cause>; partial artifacts
// in <dir>".
class PipelineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    std::string data_dir;                // registry CSVs; empty = synthesize
    std::optional<SynthConfig> synth;    // used when data_dir is empty
    std::string out_dir = "artifacts";

    MonthIndex study_start{2010, 1};
    MonthIndex study_end{2010, 1};

    BrokerMode brokerage_mode = BrokerMode::Middleman;
    Rat brokerage_threshold = Rat::make(1, 1);
    Mediation mediation = Mediation::Induced;
    bool coboard_multiplicity = false;
    Standardize standardize = Standardize::Ratio;

    RankOptions rank_options;
    RankCutoffs rank_cutoffs;
    double include_top_share = 1.0;  // keep positions at companies in the top share of ranks
    std::uint32_t inner_circle_top_n = 500;
    std::optional<int> concentration_year;  // default: study_end year

    std::vector<PeriodWindow> period_map;
    ModelSpec model;
    ProfileSpec profile;
    int enrichment_bins = 10;
    int workers = 1;

    static PipelineConfig defaults();
    static PipelineConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;  // enum ranges, spans, path existence
};

struct StageStatus {
    std::string name;
    bool cached = false;
    double seconds = 0.0;
};

struct PipelineResult {
    std::string out_dir;
    std::vector<StageStatus> stages;
    // month means, for sweep summaries; filled when the graph stage ran
    double broker_count_mean = 0.0;
    double degeneracy_mean_hu = 0.0;
    double core_size_mean = 0.0;
    std::optional<double> coreness_ame;
};

// `until` stops after the named stage ("ingest", "ranks", "graphs", "panel",
// "fit", "report"); empty runs everything. Cache entries for later stages are
// kept when still valid.
PipelineResult run_pipeline(const PipelineConfig& cfg, Warnings* warnings = nullptr,
                            const std::string& until = "");

struct SweepRow {
    std::string key;
    std::string value;
    double broker_count_mean = 0.0;
    double degeneracy_mean_hu = 0.0;
    double core_size_mean = 0.0;
    std::optional<double> coreness_ame;
};

// Re-runs the pipeline once per value into out_dir/sweep/<key>=<value> and
// writes sweep.csv under out_dir.
std::vector<SweepRow> sensitivity_sweep(const PipelineConfig& cfg, const std::string& key,
                                        const std::vector<std::string>& values,
                                        Warnings* warnings = nullptr);

}  // namespace boardcore
