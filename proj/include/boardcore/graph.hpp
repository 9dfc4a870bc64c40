#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "boardcore/ingest.hpp"
#include "boardcore/rational.hpp"

namespace boardcore {

// Undirected simple graph over director ids. Node order follows id order, so
// index comparisons double as id tie-breaks.
struct CoBoardGraph {
    std::vector<std::string> ids;        // node -> director_id, ascending
    std::vector<std::uint64_t> offsets;  // CSR, size node_count()+1
    std::vector<std::uint32_t> adj;      // sorted within each row
    std::vector<std::uint32_t> mult;     // shared-board count per adj entry

    std::uint32_t node_count() const { return static_cast<std::uint32_t>(ids.size()); }
    std::uint64_t edge_count() const { return adj.size() / 2; }
    std::uint32_t degree(std::uint32_t u) const {
        return static_cast<std::uint32_t>(offsets[u + 1] - offsets[u]);
    }
    std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
        return {adj.data() + offsets[u], adj.data() + offsets[u + 1]};
    }
    bool has_edge(std::uint32_t u, std::uint32_t v) const;
    // -1 when the id is not a node
    std::int64_t node_of(const std::string& id) const;
};

// Half-unit-weighted graph: 2 per co-board edge, 1 per distance-2 pair.
struct ReachGraph {
    std::vector<std::string> ids;
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint32_t> adj;
    std::vector<std::uint32_t> w_hu;      // parallel to adj
    std::vector<long long> degree_hu;     // per node, sum of incident weights

    std::uint32_t node_count() const { return static_cast<std::uint32_t>(ids.size()); }
    std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
        return {adj.data() + offsets[u], adj.data() + offsets[u + 1]};
    }
    std::span<const std::uint32_t> weights(std::uint32_t u) const {
        return {w_hu.data() + offsets[u], w_hu.data() + offsets[u + 1]};
    }
    std::int64_t node_of(const std::string& id) const;
};

enum class Mediation { Induced, Ambient };

CoBoardGraph project_coboard(const std::vector<PositionRecord>& records, const Snapshot& snapshot);

// Direct constructors for fixtures and oracles. Node u gets the id "n<u>"
// unless ids are supplied; duplicate edges collapse (multiplicity counted).
CoBoardGraph graph_from_edges(std::uint32_t n,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                              std::vector<std::string> ids = {});

struct WeightedEdge {
    std::uint32_t u = 0, v = 0;
    std::uint32_t w_hu = 1;
};

ReachGraph reach_from_edges(std::uint32_t n, const std::vector<WeightedEdge>& edges,
                            std::vector<std::string> ids = {});

// Maximum component; ties go to the component holding the smallest id.
std::vector<std::uint32_t> largest_component(const CoBoardGraph& g);

CoBoardGraph induce(const CoBoardGraph& g, const std::vector<std::uint32_t>& nodes);

// nodes must be sorted node indices of g. Induced: distance 2 measured inside
// the induced subgraph. Ambient: measured in g, pairs still restricted to
// nodes. coboard_multiplicity scales first-neighborhood weight by the number
// of shared boards.
ReachGraph build_reach_graph(const CoBoardGraph& g, const std::vector<std::uint32_t>& nodes,
                             Mediation mediation = Mediation::Induced,
                             bool coboard_multiplicity = false);

HalfUnits reach_degree(const ReachGraph& rg, const std::string& director_id);

struct InnerCircle {
    CoBoardGraph graph;
    std::vector<std::uint8_t> linker;  // per node: holds >= 2 distinct top-N boards
};

// company_rank: 1-based rank per ranked company id.
InnerCircle extract_inner_circle(const std::vector<PositionRecord>& records, const Snapshot& snapshot,
                                 const std::unordered_map<std::string, std::uint32_t>& company_rank,
                                 std::uint32_t top_n);

void export_edges_tsv(const ReachGraph& rg, const std::string& path);

}  // namespace boardcore
