#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boardcore/graph.hpp"
#include "boardcore/rational.hpp"

namespace boardcore {

// Middleman counts non-adjacent neighbor pairs {j,h} of i. Reach counts
// two-paths i-j-h landing outside N(i) ∪ {i}, once per path.
enum class BrokerMode { Middleman, Reach };

struct RoundStat {
    int round = 0;
    std::uint64_t removed = 0;
    std::uint64_t remaining = 0;
    Rat remaining_fraction;  // remaining / initial node count
};

struct BrokerageReport {
    std::vector<std::uint32_t> survivors;  // node indices of the input graph, sorted
    std::vector<RoundStat> rounds;
    std::vector<Rat> survivor_scores;      // parallel to survivors, final-round graph
};

std::int64_t local_betweenness(const CoBoardGraph& g, std::uint32_t node, BrokerMode mode);

// betweenness / degree, exact; degree-0 nodes score 0.
std::vector<Rat> brokerage_scores(const CoBoardGraph& g, BrokerMode mode, int workers = 1);

// Batch-removes every node scoring below threshold, recomputes, repeats.
BrokerageReport prune_brokers(const CoBoardGraph& g, Rat threshold, BrokerMode mode,
                              int workers = 1);

}  // namespace boardcore
