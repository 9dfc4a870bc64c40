#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "boardcore/graph.hpp"
#include "boardcore/ingest.hpp"
#include "boardcore/ranking.hpp"
#include "boardcore/rng.hpp"
#include "boardcore/stats.hpp"
#include "boardcore/util.hpp"

namespace boardcore {

// Coefficient arrays are indexed by RankCategory; the Beyond5000 slot is the
// reference and must stay 0.
struct SynthConfig {
    std::uint64_t seed = 20100101;
    std::uint32_t directors = 1000;
    std::uint32_t boards = 200;
    std::uint32_t months = 1;
    int epoch_year = 2010;
    int epoch_month = 1;

    double board_size_mu = 1.6;  // log scale, truncated
    double board_size_sigma = 0.6;
    std::uint32_t board_size_min = 2;
    std::uint32_t board_size_max = 50;
    double extra_seat_rate = 0.02;
    std::uint32_t max_extra_seats = 2;

    std::uint32_t core_size = 20;
    std::vector<std::uint32_t> core_offsets = {1, 3, 5};
    std::uint32_t bridge_boards = 2;  // per core member
    // observer seats on the first lattice boards; pruned in round one, so
    // top-ranked companies also carry directors outside the network core
    std::uint32_t core_passengers = 12;
    // planted periphery mini-lattices: local brokers below the core's coreness
    std::uint32_t broker_groups = 2;
    std::uint32_t broker_group_size = 8;
    std::vector<std::uint32_t> broker_offsets = {1, 3};
    // trailing broker groups whose companies never file financials
    std::uint32_t shadow_broker_groups = 1;

    std::uint32_t large_companies = 50;
    double large_boost = 1000.0;
    double fin_mu = 2.5;
    double fin_sigma = 1.2;
    double fin_coverage = 0.8;  // share of companies with register financials
    double missing_rate = 0.02;
    double group_rate = 0.15;

    double base_rate = 0.007;
    double b_coreness = 1.5;
    std::array<double, 4> b_rank = {0.8, 0.5, 0.2, 0.0};
    std::array<double, 4> b_interact = {0.0, 0.0, 0.0, 0.0};
    int committee_start = 2013;  // roster window, years
    int committee_end = 2015;

    static SynthConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct GroundTruth {
    std::vector<std::string> core_ids;    // sorted
    std::vector<std::string> broker_ids;  // sorted; periphery mini-lattice members
    std::unordered_map<std::string, std::string> tier;  // core|broker|passenger|bridge|clique
    double intercept = 0.0;  // calibrated by assign_committees
    double b_coreness = 0.0;
    std::array<double, 4> b_rank{};
    std::array<double, 4> b_interact{};
};

struct SynthRegistry {
    std::vector<PositionRecord> positions;
    FinancialTable financials;
    std::vector<std::pair<std::string, std::string>> group_rows;  // child -> ultimate parent
    GroupForest groups;
    std::vector<DirectorAttributes> directors;
    GroundTruth truth;
    MonthIndex first_month;
    MonthIndex last_month;
};

// Planted-core wiring: an even circulant lattice over odd offsets (bipartite,
// so board-mates never close a triangle), one two-seat board per lattice
// edge, observer passengers on the first boards, bridge boards into the
// periphery, and odd-offset broker mini-lattices tied to the core by one
// board each. The middleman guarantee is re-checked on the projected graph
// for core and broker members before returning.
SynthRegistry generate_registry(const SynthConfig& cfg);

struct SynthFeature {
    std::string director_id;
    double coreness = 0.0;  // standardized
    RankCategory cat = RankCategory::Beyond5000;
};

struct CommitteeDraw {
    std::vector<std::string> government;  // director ids, ascending
    std::vector<std::string> business;
    double intercept = 0.0;
    double mean_p = 0.0;
};

// Bernoulli committee membership with the intercept bisected so that the mean
// response probability hits cfg.base_rate.
CommitteeDraw assign_committees(const std::vector<SynthFeature>& features, GroundTruth& truth,
                                const SynthConfig& cfg, Rng& rng);

// generate_registry + pipeline features + assign_committees, written as the
// ingestible CSV set plus ground_truth.csv and dgp.json.
SynthRegistry synthesize_dataset(const SynthConfig& cfg, const std::string& out_dir,
                                 Warnings* warnings = nullptr);

void write_registry(const SynthRegistry& reg, const SynthConfig& cfg, const CommitteeDraw& draw,
                    const std::string& out_dir);

struct PanelDgpConfig {
    std::uint64_t seed = 1;
    std::uint64_t rows = 200000;
    double base_rate = 0.007;
    double b_coreness = 1.5;
    std::array<double, 4> b_rank = {0.8, 0.5, 0.2, 0.0};
    std::array<double, 4> b_interact = {0.0, 0.0, 0.0, 0.0};
    double broker_rate = 0.3;  // rows with coreness > 0
    std::array<double, 4> rank_probs = {0.05, 0.15, 0.30, 0.50};
};

struct PanelDgpTruth {
    double intercept = 0.0;
    double b_coreness = 0.0;
    std::array<double, 4> b_rank{};
    std::array<double, 4> b_interact{};
};

// Director-month rows drawn straight from the regression DGP; only committee,
// coreness and company_rank vary, everything else sits at its reference.
PanelTable generate_panel_dgp(const PanelDgpConfig& cfg, PanelDgpTruth* truth = nullptr);

// G(n, p) style test graphs.
CoBoardGraph random_graph(std::uint32_t n, double edge_prob, Rng& rng);
ReachGraph random_reach_graph(std::uint32_t n, double edge_prob, std::uint32_t max_w_hu, Rng& rng);

}  // namespace boardcore
