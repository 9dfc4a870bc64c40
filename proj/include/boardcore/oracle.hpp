#pragma once

#include <cstdint>

#include "boardcore/brokerage.hpp"
#include "boardcore/graph.hpp"
#include "boardcore/kcore.hpp"

namespace boardcore {

// Reference coreness by iterated deletion per half-unit threshold; n <= 2000.
// For n <= 12 the result is additionally checked against the exhaustive
// maximal-subgraph definition.
CorenessTable oracle_kcore(const ReachGraph& rg);

// Reference local betweenness by exhaustive triple enumeration; n <= 200.
std::int64_t oracle_local_betweenness(const CoBoardGraph& g, std::uint32_t node, BrokerMode mode);

}  // namespace boardcore
