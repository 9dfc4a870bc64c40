#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "boardcore/dates.hpp"
#include "boardcore/ingest.hpp"
#include "boardcore/util.hpp"

namespace boardcore {

enum class RankCategory : std::uint8_t { Top1_50 = 0, Top51_500 = 1, Top501_5000 = 2, Beyond5000 = 3 };

// Category boundaries; the level names stay top50/top500/top5000 even when
// the cutoffs are reconfigured.
struct RankCutoffs {
    std::uint32_t top = 50;
    std::uint32_t mid = 500;
    std::uint32_t broad = 5000;
};

RankCategory rank_category(std::uint32_t rank,
                           const RankCutoffs& cutoffs = {});  // rank 0 = unranked -> Beyond5000
std::string to_string(RankCategory c);

struct RankTable {
    int year = 0;
    // rank order: entity_ids[k] holds rank k+1
    std::vector<std::string> entity_ids;
    std::vector<double> pc1;
    double explained_share = 0.0;
    std::unordered_map<std::string, std::uint32_t> rank_of;  // inherited members included

    // 0 when unranked
    std::uint32_t rank(const std::string& id) const {
        auto it = rank_of.find(id);
        return it == rank_of.end() ? 0 : it->second;
    }
};

enum class Impute { Zero, Drop };

struct RankOptions {
    Impute impute = Impute::Zero;
    bool log1p_transform = false;
};

RankTable pca_company_rank(const FinancialTable& fin, int year, const RankOptions& opt = {},
                           Warnings* warnings = nullptr);

// Indicators summed over ultimate-parent groups; member companies inherit the
// corporation's rank through rank_of.
RankTable corporation_rank(const FinancialTable& fin, int year, const GroupForest& groups,
                           const RankOptions& opt = {}, Warnings* warnings = nullptr);

struct DirectorRankProfile {
    std::string director_id;
    MonthIndex month;
    std::string best_company_id;  // highest-ranked board; smallest id when none ranked
    std::uint32_t best_company_rank = 0;
    RankCategory company_cat = RankCategory::Beyond5000;
    std::uint32_t best_corp_rank = 0;
    RankCategory corp_cat = RankCategory::Beyond5000;
    bool top50_linker = false;
    bool top500_linker = false;
    bool top50_corp_linker_across = false;
    bool top500_corp_linker_across = false;
    bool top50_corp_linker_within = false;
    bool top500_corp_linker_within = false;
    bool top50_executive = false;
    bool top500_executive = false;
    bool top50_chair = false;
    bool top500_chair = false;
    std::uint32_t board_count = 0;  // distinct companies
};

// One profile per director active in the snapshot, ascending director_id.
std::vector<DirectorRankProfile> director_rank_profiles(const std::vector<PositionRecord>& records,
                                                        const Snapshot& snapshot,
                                                        const RankTable& company_ranks,
                                                        const RankTable& corp_ranks,
                                                        const GroupForest& groups,
                                                        const RankCutoffs& cutoffs = {});

struct ConcentrationPoint {
    std::uint32_t rank = 0;
    double cum_employees = 0.0;
    double cum_revenue = 0.0;
    double cum_assets = 0.0;
};

std::vector<ConcentrationPoint> concentration_curve(const RankTable& ranks, const FinancialTable& fin,
                                                    Warnings* warnings = nullptr);

}  // namespace boardcore
