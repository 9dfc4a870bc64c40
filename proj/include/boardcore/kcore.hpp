#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "boardcore/dates.hpp"
#include "boardcore/graph.hpp"
#include "boardcore/rational.hpp"

namespace boardcore {

struct CorenessTable {
    std::vector<std::string> ids;       // ascending, same order as the peeled graph
    std::vector<HalfUnits> coreness;    // parallel to ids
    HalfUnits degeneracy;
    std::vector<std::uint32_t> max_core;  // indices with coreness == degeneracy
    std::optional<MonthIndex> month;

    std::int64_t node_of(const std::string& id) const;
};

enum class EliteCategory : std::uint8_t {
    NotInLargestComponent = 1,
    LargestComponentOnly = 2,
    LocalBroker = 3,
    NetworkCore = 4,
};

enum class Standardize { Ratio, MinMax };

// Min-degree peeling with exact half-unit arithmetic; the minimum-degree node
// with the smallest id is peeled first, coreness is the running max of
// degree-at-removal.
CorenessTable weighted_kcore(const ReachGraph& rg,
                             std::optional<MonthIndex> month = std::nullopt);

// Ratio: coreness/degeneracy (all zero when degeneracy is 0). MinMax:
// (coreness - min)/(max - min) over the peeled set, 1 everywhere when flat.
std::vector<Rat> standardized_coreness(const CorenessTable& table,
                                       Standardize mode = Standardize::Ratio);

EliteCategory classify_elite(const std::string& director_id,
                             const std::unordered_set<std::string>& largest_component,
                             const std::unordered_set<std::string>& survivors,
                             const CorenessTable& table);

}  // namespace boardcore
