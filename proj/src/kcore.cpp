#include "boardcore/kcore.hpp"

#include <algorithm>
#include <set>

namespace boardcore {

std::int64_t CorenessTable::node_of(const std::string& id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return it - ids.begin();
}

CorenessTable weighted_kcore(const ReachGraph& rg, std::optional<MonthIndex> month) {
    CorenessTable t;
    t.ids = rg.ids;
    t.month = month;
    std::uint32_t n = rg.node_count();
    t.coreness.assign(n, HalfUnits{0});
    if (n == 0) return t;

    long long maxd = 0;
    for (std::uint32_t u = 0; u < n; ++u) maxd = std::max(maxd, rg.degree_hu[u]);

    // ordered buckets give the smallest-id tie-break for free
    std::vector<std::set<std::uint32_t>> bucket(static_cast<size_t>(maxd) + 1);
    std::vector<long long> deg(rg.degree_hu);
    for (std::uint32_t u = 0; u < n; ++u) bucket[static_cast<size_t>(deg[u])].insert(u);

    std::vector<std::uint8_t> removed(n, 0);
    long long min_b = 0;
    long long k = 0;
    for (std::uint32_t step = 0; step < n; ++step) {
        while (bucket[static_cast<size_t>(min_b)].empty()) ++min_b;
        std::uint32_t u = *bucket[static_cast<size_t>(min_b)].begin();
        bucket[static_cast<size_t>(min_b)].erase(bucket[static_cast<size_t>(min_b)].begin());
        k = std::max(k, deg[u]);
        t.coreness[u] = HalfUnits{k};
        removed[u] = 1;
        auto row = rg.neighbors(u);
        auto w = rg.weights(u);
        for (size_t e = 0; e < row.size(); ++e) {
            std::uint32_t v = row[e];
            if (removed[v]) continue;
            bucket[static_cast<size_t>(deg[v])].erase(v);
            deg[v] -= w[e];
            bucket[static_cast<size_t>(deg[v])].insert(v);
            if (deg[v] < min_b) min_b = deg[v];
        }
    }

    t.degeneracy = HalfUnits{k};
    for (std::uint32_t u = 0; u < n; ++u)
        if (t.coreness[u] == t.degeneracy) t.max_core.push_back(u);
    return t;
}

std::vector<Rat> standardized_coreness(const CorenessTable& table, Standardize mode) {
    std::vector<Rat> out(table.ids.size(), Rat::make(0, 1));
    if (table.ids.empty()) return out;

    if (mode == Standardize::Ratio) {
        if (table.degeneracy.hu == 0) return out;
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = Rat::make(table.coreness[i].hu, table.degeneracy.hu);
        return out;
    }

    long long lo = table.coreness[0].hu, hi = table.coreness[0].hu;
    for (const auto& c : table.coreness) {
        lo = std::min(lo, c.hu);
        hi = std::max(hi, c.hu);
    }
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = lo == hi ? Rat::make(1, 1) : Rat::make(table.coreness[i].hu - lo, hi - lo);
    return out;
}

EliteCategory classify_elite(const std::string& director_id,
                             const std::unordered_set<std::string>& largest_component,
                             const std::unordered_set<std::string>& survivors,
                             const CorenessTable& table) {
    if (!largest_component.count(director_id)) return EliteCategory::NotInLargestComponent;
    if (!survivors.count(director_id)) return EliteCategory::LargestComponentOnly;
    std::int64_t u = table.node_of(director_id);
    if (u >= 0 && table.coreness[static_cast<size_t>(u)] == table.degeneracy &&
        table.degeneracy.hu > 0)
        return EliteCategory::NetworkCore;
    return EliteCategory::LocalBroker;
}

}  // namespace boardcore
