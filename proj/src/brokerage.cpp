#include "boardcore/brokerage.hpp"

#include <algorithm>
#include <stdexcept>

#include "boardcore/parallel.hpp"

namespace boardcore {

namespace {

// Edges inside N(i): each neighbor j contributes |N(j) ∩ N(i)|, every edge
// counted from both ends.
std::int64_t middleman_count(const CoBoardGraph& g, std::uint32_t i) {
    auto row = g.neighbors(i);
    std::int64_t d = static_cast<std::int64_t>(row.size());
    std::int64_t twice_inside = 0;
    for (std::uint32_t j : row) {
        auto jr = g.neighbors(j);
        // sorted-merge intersection size
        size_t a = 0, b = 0;
        while (a < row.size() && b < jr.size()) {
            if (row[a] < jr[b]) ++a;
            else if (jr[b] < row[a]) ++b;
            else { ++twice_inside; ++a; ++b; }
        }
    }
    return d * (d - 1) / 2 - twice_inside / 2;
}

std::int64_t reach_count(const CoBoardGraph& g, std::uint32_t i, std::vector<std::uint8_t>& mark) {
    auto row = g.neighbors(i);
    for (std::uint32_t j : row) mark[j] = 1;
    mark[i] = 1;
    std::int64_t paths = 0;
    for (std::uint32_t j : row)
        for (std::uint32_t h : g.neighbors(j))
            if (!mark[h]) ++paths;
    for (std::uint32_t j : row) mark[j] = 0;
    mark[i] = 0;
    return paths;
}

}  // namespace

std::int64_t local_betweenness(const CoBoardGraph& g, std::uint32_t node, BrokerMode mode) {
    if (node >= g.node_count()) throw std::out_of_range("local_betweenness: node out of range");
    if (mode == BrokerMode::Middleman) return middleman_count(g, node);
    std::vector<std::uint8_t> mark(g.node_count(), 0);
    return reach_count(g, node, mark);
}

std::vector<Rat> brokerage_scores(const CoBoardGraph& g, BrokerMode mode, int workers) {
    std::uint32_t n = g.node_count();
    std::vector<Rat> out(n);
    parallel_for(n, workers, [&](size_t i) {
        std::uint32_t u = static_cast<std::uint32_t>(i);
        std::uint32_t d = g.degree(u);
        if (d == 0) {
            out[i] = Rat::make(0, 1);
            return;
        }
        std::int64_t bet;
        if (mode == BrokerMode::Middleman) {
            bet = middleman_count(g, u);
        } else {
            thread_local std::vector<std::uint8_t> mark;
            if (mark.size() < n) mark.assign(n, 0);
            bet = reach_count(g, u, mark);
        }
        out[i] = Rat::make(bet, d);
    });
    return out;
}

BrokerageReport prune_brokers(const CoBoardGraph& g, Rat threshold, BrokerMode mode, int workers) {
    BrokerageReport rep;
    std::uint64_t initial = g.node_count();
    if (initial == 0) return rep;

    // alive set tracked as original node indices; graph re-induced per round
    std::vector<std::uint32_t> alive(g.node_count());
    for (std::uint32_t u = 0; u < g.node_count(); ++u) alive[u] = u;

    CoBoardGraph cur = g;
    std::vector<Rat> scores = brokerage_scores(cur, mode, workers);
    int round = 1;
    while (true) {
        std::vector<std::uint32_t> keep;  // indices into cur
        keep.reserve(cur.node_count());
        for (std::uint32_t u = 0; u < cur.node_count(); ++u)
            if (!(scores[u] < threshold)) keep.push_back(u);
        std::uint64_t removed = cur.node_count() - keep.size();
        if (removed == 0) break;

        std::vector<std::uint32_t> next_alive;
        next_alive.reserve(keep.size());
        for (std::uint32_t u : keep) next_alive.push_back(alive[u]);
        alive = std::move(next_alive);
        cur = induce(cur, keep);
        rep.rounds.push_back({round, removed, cur.node_count(),
                              Rat::make(static_cast<long long>(cur.node_count()),
                                        static_cast<long long>(initial))});
        ++round;
        scores = brokerage_scores(cur, mode, workers);
    }

    rep.survivors = std::move(alive);
    rep.survivor_scores = std::move(scores);
    return rep;
}

}  // namespace boardcore
