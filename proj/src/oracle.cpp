#include "boardcore/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace boardcore {

namespace {

// coreness(v) = max over subsets S containing v of min weighted degree in S
std::vector<long long> exhaustive_coreness(const ReachGraph& rg) {
    std::uint32_t n = rg.node_count();
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n, 0));
    for (std::uint32_t u = 0; u < n; ++u) {
        auto row = rg.neighbors(u);
        auto wt = rg.weights(u);
        for (size_t k = 0; k < row.size(); ++k) w[u][row[k]] = wt[k];
    }
    std::vector<long long> best(n, 0);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        long long min_deg = -1;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (!(mask & (1u << u))) continue;
            long long d = 0;
            for (std::uint32_t v = 0; v < n; ++v)
                if (mask & (1u << v)) d += w[u][v];
            if (min_deg < 0 || d < min_deg) min_deg = d;
        }
        for (std::uint32_t u = 0; u < n; ++u)
            if ((mask & (1u << u)) && min_deg > best[u]) best[u] = min_deg;
    }
    return best;
}

}  // namespace

CorenessTable oracle_kcore(const ReachGraph& rg) {
    std::uint32_t n = rg.node_count();
    if (n > 2000) throw std::invalid_argument("oracle_kcore: size bound n <= 2000 exceeded");

    CorenessTable out;
    out.ids = rg.ids;
    out.coreness.assign(n, HalfUnits{0});
    std::vector<char> alive(n, 1);
    std::vector<long long> deg(rg.degree_hu.begin(), rg.degree_hu.end());
    std::uint32_t alive_count = n;
    long long degeneracy = 0;

    for (long long k = 1; alive_count > 0; ++k) {
        // delete below-threshold nodes to a fixed point
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::uint32_t u = 0; u < n; ++u) {
                if (!alive[u] || deg[u] >= k) continue;
                alive[u] = 0;
                --alive_count;
                out.coreness[u] = HalfUnits{k - 1};
                auto row = rg.neighbors(u);
                auto wt = rg.weights(u);
                for (size_t j = 0; j < row.size(); ++j)
                    if (alive[row[j]]) deg[row[j]] -= wt[j];
                changed = true;
            }
        }
        if (alive_count > 0) degeneracy = k;
    }
    out.degeneracy = HalfUnits{degeneracy};
    for (std::uint32_t u = 0; u < n; ++u)
        if (out.coreness[u] == out.degeneracy) out.max_core.push_back(u);

    if (n > 0 && n <= 12) {
        std::vector<long long> ex = exhaustive_coreness(rg);
        for (std::uint32_t u = 0; u < n; ++u)
            if (ex[u] != out.coreness[u].hu)
                throw std::logic_error("oracle_kcore: iterated deletion disagrees with subset check");
    }
    return out;
}

std::int64_t oracle_local_betweenness(const CoBoardGraph& g, std::uint32_t node, BrokerMode mode) {
    std::uint32_t n = g.node_count();
    if (n > 200) throw std::invalid_argument("oracle_local_betweenness: size bound n <= 200 exceeded");
    if (node >= n) throw std::invalid_argument("oracle_local_betweenness: node out of range");

    std::int64_t count = 0;
    if (mode == BrokerMode::Middleman) {
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == node || !g.has_edge(node, j)) continue;
            for (std::uint32_t h = j + 1; h < n; ++h) {
                if (h == node || !g.has_edge(node, h)) continue;
                if (!g.has_edge(j, h)) ++count;
            }
        }
    } else {
        // every two-path node-j-h whose endpoint falls outside N(node)+{node}
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == node || !g.has_edge(node, j)) continue;
            for (std::uint32_t h = 0; h < n; ++h) {
                if (h == node || h == j || !g.has_edge(j, h)) continue;
                if (!g.has_edge(node, h)) ++count;
            }
        }
    }
    return count;
}

}  // namespace boardcore
