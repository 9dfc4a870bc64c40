#include "boardcore/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace boardcore {

bool CoBoardGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::int64_t CoBoardGraph::node_of(const std::string& id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return it - ids.begin();
}

std::int64_t ReachGraph::node_of(const std::string& id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return it - ids.begin();
}

namespace {

struct EdgeRec {
    std::uint32_t a, b;
    bool operator<(const EdgeRec& o) const { return a != o.a ? a < o.a : b < o.b; }
    bool operator==(const EdgeRec& o) const { return a == o.a && b == o.b; }
};

CoBoardGraph assemble(std::vector<std::string> ids, std::vector<EdgeRec> pairs) {
    std::sort(pairs.begin(), pairs.end());
    CoBoardGraph g;
    g.ids = std::move(ids);
    std::uint32_t n = g.node_count();

    // collapse duplicates into multiplicities, then mirror
    std::vector<EdgeRec> edges;
    std::vector<std::uint32_t> counts;
    for (size_t i = 0; i < pairs.size();) {
        size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        edges.push_back(pairs[i]);
        counts.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }

    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& e : edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    g.offsets.assign(n + 1, 0);
    for (std::uint32_t u = 0; u < n; ++u) g.offsets[u + 1] = g.offsets[u] + deg[u];
    g.adj.resize(g.offsets[n]);
    g.mult.resize(g.offsets[n]);
    std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (size_t k = 0; k < edges.size(); ++k) {
        g.adj[cursor[edges[k].a]] = edges[k].b;
        g.mult[cursor[edges[k].a]++] = counts[k];
        g.adj[cursor[edges[k].b]] = edges[k].a;
        g.mult[cursor[edges[k].b]++] = counts[k];
    }
    // rows need sorting because mirrored entries arrive out of order
    for (std::uint32_t u = 0; u < n; ++u) {
        auto lo = g.offsets[u], hi = g.offsets[u + 1];
        std::vector<std::pair<std::uint32_t, std::uint32_t>> row;
        row.reserve(hi - lo);
        for (auto k = lo; k < hi; ++k) row.emplace_back(g.adj[k], g.mult[k]);
        std::sort(row.begin(), row.end());
        for (auto k = lo; k < hi; ++k) {
            g.adj[k] = row[k - lo].first;
            g.mult[k] = row[k - lo].second;
        }
    }
    return g;
}

}  // namespace

CoBoardGraph project_coboard(const std::vector<PositionRecord>& records, const Snapshot& snapshot) {
    // board -> member directors, multi-role memberships collapsed
    std::map<std::string, std::vector<std::string>> boards;
    std::vector<std::string> ids;
    for (std::uint32_t idx : snapshot.active) {
        const PositionRecord& r = records[idx];
        boards[r.company_id].push_back(r.director_id);
        ids.push_back(r.director_id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    auto node = [&](const std::string& id) {
        return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    std::vector<EdgeRec> pairs;
    for (auto& [company, members] : boards) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
                pairs.push_back({node(members[i]), node(members[j])});
    }
    return assemble(std::move(ids), std::move(pairs));
}

std::vector<std::uint32_t> largest_component(const CoBoardGraph& g) {
    std::uint32_t n = g.node_count();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::vector<std::uint32_t> stack;
    std::uint32_t best_root = UINT32_MAX;
    std::uint64_t best_size = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        std::uint64_t size = 0;
        comp[s] = s;
        stack.push_back(s);
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            ++size;
            for (std::uint32_t v : g.neighbors(u)) {
                if (comp[v] == UINT32_MAX) {
                    comp[v] = s;
                    stack.push_back(v);
                }
            }
        }
        // scanning roots in id order makes ">" the declared tie-break
        if (size > best_size) {
            best_size = size;
            best_root = s;
        }
    }
    std::vector<std::uint32_t> out;
    if (best_root == UINT32_MAX) return out;
    out.reserve(best_size);
    for (std::uint32_t u = 0; u < n; ++u)
        if (comp[u] == best_root) out.push_back(u);
    return out;
}

CoBoardGraph induce(const CoBoardGraph& g, const std::vector<std::uint32_t>& nodes) {
    std::uint32_t m = static_cast<std::uint32_t>(nodes.size());
    std::vector<std::int64_t> remap(g.node_count(), -1);
    for (std::uint32_t i = 0; i < m; ++i) remap[nodes[i]] = i;

    CoBoardGraph out;
    out.ids.reserve(m);
    for (std::uint32_t u : nodes) out.ids.push_back(g.ids[u]);
    out.offsets.assign(m + 1, 0);

    std::vector<std::uint32_t> deg(m, 0);
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t v : g.neighbors(nodes[i]))
            if (remap[v] >= 0) ++deg[i];
    for (std::uint32_t i = 0; i < m; ++i) out.offsets[i + 1] = out.offsets[i] + deg[i];
    out.adj.resize(out.offsets[m]);
    out.mult.resize(out.offsets[m]);
    for (std::uint32_t i = 0; i < m; ++i) {
        std::uint64_t k = out.offsets[i];
        auto row = g.neighbors(nodes[i]);
        for (size_t t = 0; t < row.size(); ++t) {
            if (remap[row[t]] < 0) continue;
            out.adj[k] = static_cast<std::uint32_t>(remap[row[t]]);
            out.mult[k++] = g.mult[g.offsets[nodes[i]] + t];
        }
        // source rows are sorted by old index; remap preserves order
    }
    return out;
}

ReachGraph build_reach_graph(const CoBoardGraph& g, const std::vector<std::uint32_t>& nodes,
                             Mediation mediation, bool coboard_multiplicity) {
    CoBoardGraph gi = induce(g, nodes);
    std::uint32_t m = gi.node_count();

    ReachGraph rg;
    rg.ids = gi.ids;

    // remap of g-index -> rg-index, used by ambient mediation
    std::vector<std::int64_t> remap;
    if (mediation == Mediation::Ambient) {
        remap.assign(g.node_count(), -1);
        for (std::uint32_t i = 0; i < nodes.size(); ++i) remap[nodes[i]] = i;
    }

    // per node: (neighbor, weight_hu), built u-ascending; each undirected edge
    // discovered from its lower endpoint and mirrored afterwards
    std::vector<std::pair<std::uint32_t, std::uint32_t>> half;  // (v, w) grouped by u
    std::vector<std::uint64_t> half_off(m + 1, 0);
    std::vector<std::uint32_t> scratch;
    std::vector<std::uint8_t> mark(m, 0);

    for (std::uint32_t u = 0; u < m; ++u) {
        auto row = gi.neighbors(u);
        for (std::uint32_t v : row) mark[v] = 1;
        mark[u] = 1;

        for (size_t t = 0; t < row.size(); ++t) {
            if (row[t] > u)
                half.emplace_back(row[t], coboard_multiplicity ? 2 * gi.mult[gi.offsets[u] + t] : 2u);
        }

        scratch.clear();
        if (mediation == Mediation::Induced) {
            for (std::uint32_t j : row)
                for (std::uint32_t h : gi.neighbors(j))
                    if (h > u && !mark[h]) scratch.push_back(h);
        } else {
            // mediators j may live outside `nodes`; endpoints may not. A
            // g-edge inside `nodes` is an induced edge, so mark[] rules it out.
            std::uint32_t gu = nodes[u];
            for (std::uint32_t j : g.neighbors(gu))
                for (std::uint32_t h : g.neighbors(j)) {
                    std::int64_t hi = remap[h];
                    if (hi > static_cast<std::int64_t>(u) && !mark[static_cast<std::uint32_t>(hi)])
                        scratch.push_back(static_cast<std::uint32_t>(hi));
                }
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        for (std::uint32_t h : scratch) half.emplace_back(h, 1);

        for (std::uint32_t v : row) mark[v] = 0;
        mark[u] = 0;
        half_off[u + 1] = half.size();
    }

    // mirror into full CSR
    std::vector<std::uint32_t> deg(m, 0);
    for (std::uint32_t u = 0; u < m; ++u)
        for (auto k = half_off[u]; k < half_off[u + 1]; ++k) {
            ++deg[u];
            ++deg[half[k].first];
        }
    rg.offsets.assign(m + 1, 0);
    for (std::uint32_t u = 0; u < m; ++u) rg.offsets[u + 1] = rg.offsets[u] + deg[u];
    rg.adj.resize(rg.offsets[m]);
    rg.w_hu.resize(rg.offsets[m]);
    std::vector<std::uint64_t> cursor(rg.offsets.begin(), rg.offsets.end() - 1);
    for (std::uint32_t u = 0; u < m; ++u)
        for (auto k = half_off[u]; k < half_off[u + 1]; ++k) {
            auto [v, w] = half[k];
            rg.adj[cursor[u]] = v;
            rg.w_hu[cursor[u]++] = w;
            rg.adj[cursor[v]] = u;
            rg.w_hu[cursor[v]++] = w;
        }
    for (std::uint32_t u = 0; u < m; ++u) {
        auto lo = rg.offsets[u], hi2 = rg.offsets[u + 1];
        std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted_row;
        sorted_row.reserve(hi2 - lo);
        for (auto k = lo; k < hi2; ++k) sorted_row.emplace_back(rg.adj[k], rg.w_hu[k]);
        std::sort(sorted_row.begin(), sorted_row.end());
        for (auto k = lo; k < hi2; ++k) {
            rg.adj[k] = sorted_row[k - lo].first;
            rg.w_hu[k] = sorted_row[k - lo].second;
        }
    }

    rg.degree_hu.assign(m, 0);
    for (std::uint32_t u = 0; u < m; ++u)
        for (std::uint32_t w : rg.weights(u)) rg.degree_hu[u] += w;
    return rg;
}

HalfUnits reach_degree(const ReachGraph& rg, const std::string& director_id) {
    std::int64_t u = rg.node_of(director_id);
    if (u < 0) throw std::out_of_range("reach_degree: unknown director " + director_id);
    return HalfUnits{rg.degree_hu[static_cast<size_t>(u)]};
}

InnerCircle extract_inner_circle(const std::vector<PositionRecord>& records, const Snapshot& snapshot,
                                 const std::unordered_map<std::string, std::uint32_t>& company_rank,
                                 std::uint32_t top_n) {
    if (top_n > company_rank.size())
        throw std::invalid_argument("inner circle cutoff " + std::to_string(top_n) +
                                    " exceeds ranked universe of " + std::to_string(company_rank.size()));

    Snapshot filtered;
    filtered.month = snapshot.month;
    for (std::uint32_t idx : snapshot.active) {
        auto it = company_rank.find(records[idx].company_id);
        if (it != company_rank.end() && it->second <= top_n) filtered.active.push_back(idx);
    }

    InnerCircle ic;
    ic.graph = project_coboard(records, filtered);

    // linker = at least two distinct top-N boards
    std::map<std::string, std::vector<std::string>> seats;
    for (std::uint32_t idx : filtered.active)
        seats[records[idx].director_id].push_back(records[idx].company_id);
    ic.linker.assign(ic.graph.node_count(), 0);
    for (auto& [dir, companies] : seats) {
        std::sort(companies.begin(), companies.end());
        companies.erase(std::unique(companies.begin(), companies.end()), companies.end());
        if (companies.size() >= 2) {
            std::int64_t u = ic.graph.node_of(dir);
            if (u >= 0) ic.linker[static_cast<size_t>(u)] = 1;
        }
    }
    return ic;
}

namespace {

std::vector<std::string> default_ids(std::uint32_t n) {
    std::vector<std::string> ids(n);
    char buf[16];
    for (std::uint32_t u = 0; u < n; ++u) {
        std::snprintf(buf, sizeof buf, "n%06u", u);
        ids[u] = buf;
    }
    return ids;
}

}  // namespace

CoBoardGraph graph_from_edges(std::uint32_t n,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                              std::vector<std::string> ids) {
    if (ids.empty()) ids = default_ids(n);
    if (ids.size() != n || !std::is_sorted(ids.begin(), ids.end()))
        throw std::invalid_argument("graph_from_edges: ids must be n sorted strings");
    std::vector<EdgeRec> pairs;
    pairs.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= n || v >= n || u == v)
            throw std::invalid_argument("graph_from_edges: bad edge endpoint");
        pairs.push_back({std::min(u, v), std::max(u, v)});
    }
    return assemble(std::move(ids), std::move(pairs));
}

ReachGraph reach_from_edges(std::uint32_t n, const std::vector<WeightedEdge>& edges,
                            std::vector<std::string> ids) {
    if (ids.empty()) ids = default_ids(n);
    if (ids.size() != n || !std::is_sorted(ids.begin(), ids.end()))
        throw std::invalid_argument("reach_from_edges: ids must be n sorted strings");

    // collapse duplicates by summing weights
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> acc;
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n || e.u == e.v)
            throw std::invalid_argument("reach_from_edges: bad edge endpoint");
        if (e.w_hu == 0) throw std::invalid_argument("reach_from_edges: zero weight");
        acc[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w_hu;
    }

    ReachGraph rg;
    rg.ids = std::move(ids);
    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& [uv, w] : acc) {
        ++deg[uv.first];
        ++deg[uv.second];
    }
    rg.offsets.assign(n + 1, 0);
    for (std::uint32_t u = 0; u < n; ++u) rg.offsets[u + 1] = rg.offsets[u] + deg[u];
    rg.adj.resize(rg.offsets[n]);
    rg.w_hu.resize(rg.offsets[n]);
    std::vector<std::uint64_t> cursor(rg.offsets.begin(), rg.offsets.end() - 1);
    for (const auto& [uv, w] : acc) {
        rg.adj[cursor[uv.first]] = uv.second;
        rg.w_hu[cursor[uv.first]++] = w;
        rg.adj[cursor[uv.second]] = uv.first;
        rg.w_hu[cursor[uv.second]++] = w;
    }
    for (std::uint32_t u = 0; u < n; ++u) {
        auto lo = rg.offsets[u], hi = rg.offsets[u + 1];
        std::vector<std::pair<std::uint32_t, std::uint32_t>> row;
        row.reserve(hi - lo);
        for (auto k = lo; k < hi; ++k) row.push_back({rg.adj[k], rg.w_hu[k]});
        std::sort(row.begin(), row.end());
        for (auto k = lo; k < hi; ++k) {
            rg.adj[k] = row[k - lo].first;
            rg.w_hu[k] = row[k - lo].second;
        }
    }
    rg.degree_hu.assign(n, 0);
    for (std::uint32_t u = 0; u < n; ++u)
        for (auto k = rg.offsets[u]; k < rg.offsets[u + 1]; ++k) rg.degree_hu[u] += rg.w_hu[k];
    return rg;
}

void export_edges_tsv(const ReachGraph& rg, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("node_a\tnode_b\tweight_halfunits\n", f);
    for (std::uint32_t u = 0; u < rg.node_count(); ++u) {
        auto row = rg.neighbors(u);
        auto w = rg.weights(u);
        for (size_t k = 0; k < row.size(); ++k) {
            if (row[k] < u) continue;
            std::fprintf(f, "%s\t%s\t%u\n", rg.ids[u].c_str(), rg.ids[row[k]].c_str(), w[k]);
        }
    }
    std::fclose(f);
}

}  // namespace boardcore
