#include "boardcore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "boardcore/brokerage.hpp"
#include "boardcore/csv.hpp"
#include "boardcore/kcore.hpp"
#include "json.hpp"

namespace boardcore {

namespace {

using nlohmann::json;

std::string dir_id(std::uint32_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%06u", i + 1);
    return buf;
}

std::string com_id(std::uint32_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%06u", i + 1);
    return buf;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Intercept for mean sigmoid(a + eta_i) = target; monotone, so bisection.
double calibrate_intercept(const std::vector<double>& eta, double target) {
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        double a = 0.5 * (lo + hi);
        double mean = 0.0;
        for (double e : eta) mean += sigmoid(a + e);
        mean /= static_cast<double>(eta.size());
        (mean < target ? lo : hi) = a;
    }
    return 0.5 * (lo + hi);
}

void check_rates(const SynthConfig& cfg) {
    if (cfg.directors == 0 || cfg.boards == 0 || cfg.months == 0)
        throw std::invalid_argument("directors, boards and months must be positive");
    if (cfg.epoch_month < 1 || cfg.epoch_month > 12)
        throw std::invalid_argument("epoch_month must be 1..12");
    if (cfg.board_size_min < 2 || cfg.board_size_max < cfg.board_size_min)
        throw std::invalid_argument("board size bounds need 2 <= min <= max");
    for (double r : {cfg.extra_seat_rate, cfg.missing_rate, cfg.group_rate})
        if (r < 0 || r > 1) throw std::invalid_argument("rates must lie in [0, 1]");
    if (cfg.fin_coverage <= 0 || cfg.fin_coverage > 1)
        throw std::invalid_argument("fin_coverage must lie in (0, 1]");
    if (cfg.base_rate <= 0 || cfg.base_rate >= 1)
        throw std::invalid_argument("base_rate must lie in (0, 1)");
    if (cfg.b_rank[3] != 0 || cfg.b_interact[3] != 0)
        throw std::invalid_argument("the beyond5000 slot is the reference; its coefficients must be 0");
}

struct Wiring {
    std::vector<std::uint32_t> core;        // director indices
    std::vector<std::uint32_t> brokers;     // director indices, group-major
    std::vector<std::uint32_t> passengers;  // one per observed lattice board
    std::vector<std::uint32_t> periphery;   // director indices dealt into cliques
    std::uint32_t lattice_boards = 0;
    std::uint32_t bridge_board_count = 0;
    std::uint32_t broker_boards = 0;
};

void check_lattice(const char* what, std::uint32_t n, const std::vector<std::uint32_t>& offsets) {
    std::string prefix = std::string("planted ") + what + " wiring infeasible: ";
    if (n % 2 != 0)
        throw std::invalid_argument(prefix + "size " + std::to_string(n) +
                                    " is odd; the odd-offset lattice needs an even cycle to stay "
                                    "triangle-free");
    if (offsets.empty()) throw std::invalid_argument(prefix + "no lattice offsets");
    std::uint32_t prev = 0;
    for (std::uint32_t o : offsets) {
        if (o % 2 == 0)
            throw std::invalid_argument(prefix + "offset " + std::to_string(o) +
                                        " is even; even offsets close triangles among board-mates");
        if (o <= prev)
            throw std::invalid_argument(prefix + "offsets must be strictly increasing");
        if (2 * o >= n)
            throw std::invalid_argument(prefix + "offset " + std::to_string(o) +
                                        " is not below half the size; lattice edges would collide");
        prev = o;
    }
}

Wiring plan_wiring(const SynthConfig& cfg) {
    Wiring w;
    std::uint32_t c = cfg.core_size;
    if (c > 0) {
        if (c > cfg.directors)
            throw std::invalid_argument("planted core wiring infeasible: core size exceeds director count");
        check_lattice("core", c, cfg.core_offsets);
        w.lattice_boards = c * static_cast<std::uint32_t>(cfg.core_offsets.size());
        w.bridge_board_count = c * cfg.bridge_boards;
    }
    if (cfg.core_passengers > w.lattice_boards)
        throw std::invalid_argument(
            "planted core wiring infeasible: more observer passengers than lattice boards");
    std::uint32_t broker_count = cfg.broker_groups * cfg.broker_group_size;
    if (cfg.broker_groups > 0 && cfg.broker_group_size > 0) {
        check_lattice("broker", cfg.broker_group_size, cfg.broker_offsets);
        if (c == 0)
            throw std::invalid_argument(
                "planted broker wiring infeasible: broker groups need a planted core to tie into");
        // one tie board per group keeps the group inside the largest component
        w.broker_boards =
            cfg.broker_groups *
            (cfg.broker_group_size * static_cast<std::uint32_t>(cfg.broker_offsets.size()) + 1);
    }
    if (cfg.shadow_broker_groups > cfg.broker_groups)
        throw std::invalid_argument(
            "planted broker wiring infeasible: shadow groups exceed broker groups");

    std::uint32_t stride = c > 0 ? cfg.directors / c : 1;
    std::vector<char> taken(cfg.directors, 0);
    for (std::uint32_t k = 0; k < c; ++k) {
        w.core.push_back(k * stride);
        taken[k * stride] = 1;
    }
    auto take = [&](std::vector<std::uint32_t>& out, std::uint32_t count, const char* what) {
        for (std::uint32_t i = 0; i < cfg.directors && out.size() < count; ++i)
            if (!taken[i]) {
                out.push_back(i);
                taken[i] = 1;
            }
        if (out.size() < count)
            throw std::invalid_argument(std::string("planted core wiring infeasible: not enough "
                                                    "directors for the ") +
                                        what);
    };
    take(w.brokers, broker_count, "broker groups");
    take(w.passengers, cfg.core_passengers, "observer passengers");
    for (std::uint32_t i = 0; i < cfg.directors; ++i)
        if (!taken[i]) w.periphery.push_back(i);

    std::uint32_t reserved = w.lattice_boards + w.bridge_board_count + w.broker_boards;
    std::uint32_t need = reserved + (w.periphery.empty() ? 0 : 1);
    if (cfg.boards < need)
        throw std::invalid_argument("planted core wiring infeasible: needs at least " +
                                    std::to_string(need) + " boards, config has " +
                                    std::to_string(cfg.boards));
    if (w.bridge_board_count > 0 && w.periphery.empty())
        throw std::invalid_argument("planted core wiring infeasible: bridge boards need periphery directors");

    std::uint32_t periphery_boards = cfg.boards - reserved;
    std::uint64_t capacity = static_cast<std::uint64_t>(periphery_boards) * cfg.board_size_max;
    if (w.periphery.size() > capacity)
        throw std::invalid_argument(
            "planted core wiring infeasible: periphery does not fit the remaining boards under "
            "board_size_max");
    return w;
}

// Middleman guarantee: across the whole pruning cascade, every planted core
// and broker member must keep score >= 1. A violation is a generator bug,
// not bad input.
void verify_guarantee(const CoBoardGraph& full, const std::vector<std::string>& guarded_ids) {
    if (guarded_ids.empty()) return;
    auto lc = largest_component(full);
    CoBoardGraph cur = induce(full, lc);
    for (const auto& id : guarded_ids)
        if (cur.node_of(id) < 0)
            throw std::logic_error("planted director " + id +
                                   " is not in the largest component; raise bridge_boards or "
                                   "lower extra_seat_rate");

    Rat one = Rat::make(1, 1);
    for (int round = 1;; ++round) {
        std::vector<Rat> scores = brokerage_scores(cur, BrokerMode::Middleman);
        for (const auto& id : guarded_ids) {
            auto u = cur.node_of(id);
            if (u < 0 || scores[static_cast<size_t>(u)] < one)
                throw std::logic_error("planted middleman guarantee violated for " + id +
                                       " in round " + std::to_string(round));
        }
        std::vector<std::uint32_t> keep;
        for (std::uint32_t u = 0; u < cur.node_count(); ++u)
            if (!(scores[u] < one)) keep.push_back(u);
        if (keep.size() == cur.node_count()) return;
        cur = induce(cur, keep);
    }
}

}  // namespace

SynthConfig SynthConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    SynthConfig c;
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("seed", c.seed);
    get("directors", c.directors);
    get("boards", c.boards);
    get("months", c.months);
    get("epoch_year", c.epoch_year);
    get("epoch_month", c.epoch_month);
    get("board_size_mu", c.board_size_mu);
    get("board_size_sigma", c.board_size_sigma);
    get("board_size_min", c.board_size_min);
    get("board_size_max", c.board_size_max);
    get("extra_seat_rate", c.extra_seat_rate);
    get("max_extra_seats", c.max_extra_seats);
    get("core_size", c.core_size);
    get("core_offsets", c.core_offsets);
    get("bridge_boards", c.bridge_boards);
    get("core_passengers", c.core_passengers);
    get("broker_groups", c.broker_groups);
    get("broker_group_size", c.broker_group_size);
    get("broker_offsets", c.broker_offsets);
    get("shadow_broker_groups", c.shadow_broker_groups);
    get("large_companies", c.large_companies);
    get("large_boost", c.large_boost);
    get("fin_mu", c.fin_mu);
    get("fin_sigma", c.fin_sigma);
    get("fin_coverage", c.fin_coverage);
    get("missing_rate", c.missing_rate);
    get("group_rate", c.group_rate);
    get("base_rate", c.base_rate);
    get("b_coreness", c.b_coreness);
    get("b_rank", c.b_rank);
    get("b_interact", c.b_interact);
    get("committee_start", c.committee_start);
    get("committee_end", c.committee_end);
    return c;
}

std::string SynthConfig::to_json_text() const {
    json j = {
        {"seed", seed},
        {"directors", directors},
        {"boards", boards},
        {"months", months},
        {"epoch_year", epoch_year},
        {"epoch_month", epoch_month},
        {"board_size_mu", board_size_mu},
        {"board_size_sigma", board_size_sigma},
        {"board_size_min", board_size_min},
        {"board_size_max", board_size_max},
        {"extra_seat_rate", extra_seat_rate},
        {"max_extra_seats", max_extra_seats},
        {"core_size", core_size},
        {"core_offsets", core_offsets},
        {"bridge_boards", bridge_boards},
        {"core_passengers", core_passengers},
        {"broker_groups", broker_groups},
        {"broker_group_size", broker_group_size},
        {"broker_offsets", broker_offsets},
        {"shadow_broker_groups", shadow_broker_groups},
        {"large_companies", large_companies},
        {"large_boost", large_boost},
        {"fin_mu", fin_mu},
        {"fin_sigma", fin_sigma},
        {"fin_coverage", fin_coverage},
        {"missing_rate", missing_rate},
        {"group_rate", group_rate},
        {"base_rate", base_rate},
        {"b_coreness", b_coreness},
        {"b_rank", b_rank},
        {"b_interact", b_interact},
        {"committee_start", committee_start},
        {"committee_end", committee_end},
    };
    return j.dump(2) + "\n";
}

SynthRegistry generate_registry(const SynthConfig& cfg) {
    check_rates(cfg);
    Wiring w = plan_wiring(cfg);
    Rng root(cfg.seed);

    SynthRegistry reg;
    reg.first_month = MonthIndex{cfg.epoch_year, cfg.epoch_month};
    reg.last_month = MonthIndex::from_linear(reg.first_month.linear() +
                                             static_cast<int>(cfg.months) - 1);

    // seat lists per board, in board-id order
    std::vector<std::vector<std::uint32_t>> members(cfg.boards);
    std::uint32_t next_board = 0;

    std::uint32_t c = cfg.core_size;
    for (std::uint32_t o : cfg.core_offsets)
        for (std::uint32_t k = 0; k < c; ++k) {
            std::uint32_t a = w.core[k], b = w.core[(k + o) % c];
            members[next_board++] = {std::min(a, b), std::max(a, b)};
        }
    // passengers ride the first lattice boards as third seats; board-mates
    // are adjacent, so the passenger's middleman score is 0 in round one
    for (std::uint32_t k = 0; k < cfg.core_passengers; ++k)
        members[k].push_back(w.passengers[k]);

    std::vector<char> is_bridge(cfg.directors, 0);
    if (w.bridge_board_count > 0) {
        Rng rb = root.derive("bridge");
        for (std::uint32_t k = 0; k < c; ++k) {
            std::set<std::uint32_t> used;
            for (std::uint32_t j = 0; j < cfg.bridge_boards; ++j) {
                std::uint32_t partner = 0;
                for (int tries = 0; tries < 64; ++tries) {
                    partner = w.periphery[static_cast<size_t>(
                        rb.uniform_int(0, static_cast<long long>(w.periphery.size()) - 1))];
                    if (!used.count(partner)) break;
                }
                used.insert(partner);
                is_bridge[partner] = 1;
                members[next_board++] = {w.core[k], partner};
            }
        }
    }

    // broker mini-lattices, each tied to one core member through its first
    // seat; within-group offsets are odd, so groups stay triangle-free
    std::uint32_t broker_board_base = next_board;
    if (!w.brokers.empty()) {
        std::uint32_t gs = cfg.broker_group_size;
        for (std::uint32_t g = 0; g < cfg.broker_groups; ++g) {
            const std::uint32_t* bg = w.brokers.data() + static_cast<size_t>(g) * gs;
            for (std::uint32_t o : cfg.broker_offsets)
                for (std::uint32_t k = 0; k < gs; ++k) {
                    std::uint32_t a = bg[k], b = bg[(k + o) % gs];
                    members[next_board++] = {std::min(a, b), std::max(a, b)};
                }
            std::uint32_t anchor = w.core[(static_cast<size_t>(g) * c / cfg.broker_groups) % c];
            members[next_board++] = {std::min(anchor, bg[0]), std::max(anchor, bg[0])};
        }
    }
    std::uint32_t shadow_board_base =
        broker_board_base + (cfg.broker_groups - cfg.shadow_broker_groups) *
                                (cfg.broker_group_size *
                                     static_cast<std::uint32_t>(cfg.broker_offsets.size()) +
                                 1);
    std::uint32_t shadow_board_end = next_board;

    // periphery cliques: shuffled directors dealt sequentially, leftovers
    // appended round-robin so everyone sits somewhere
    std::uint32_t first_periphery_board = next_board;
    std::uint32_t periphery_boards = cfg.boards - next_board;
    if (periphery_boards > 0 && !w.periphery.empty()) {
        Rng rs = root.derive("board_size");
        Rng rd = root.derive("deal");
        std::vector<std::uint32_t> pool = w.periphery;
        for (size_t i = pool.size(); i > 1; --i)
            std::swap(pool[i - 1],
                      pool[static_cast<size_t>(rd.uniform_int(0, static_cast<long long>(i) - 1))]);

        size_t pos = 0;
        for (std::uint32_t b = 0; b < periphery_boards; ++b) {
            double draw = rs.lognormal(cfg.board_size_mu, cfg.board_size_sigma);
            std::uint32_t size = static_cast<std::uint32_t>(std::llround(
                std::clamp(draw, double(cfg.board_size_min), double(cfg.board_size_max))));
            auto& m = members[first_periphery_board + b];
            for (std::uint32_t s = 0; s < size && pos < pool.size(); ++s) m.push_back(pool[pos++]);
        }
        std::uint32_t cursor = 0;
        while (pos < pool.size()) {
            auto& m = members[first_periphery_board + cursor % periphery_boards];
            if (m.size() < cfg.board_size_max) m.push_back(pool[pos++]);
            ++cursor;
        }

        // multi-positional periphery directors get seats on other boards
        if (periphery_boards > 1 && cfg.extra_seat_rate > 0 && cfg.max_extra_seats > 0) {
            Rng re = root.derive("extra");
            for (std::uint32_t d : w.periphery) {
                if (!re.bernoulli(cfg.extra_seat_rate)) continue;
                long long extra = re.uniform_int(1, cfg.max_extra_seats);
                for (long long e = 0; e < extra; ++e) {
                    for (int tries = 0; tries < 64; ++tries) {
                        std::uint32_t b = first_periphery_board + static_cast<std::uint32_t>(
                            re.uniform_int(0, periphery_boards - 1));
                        auto& m = members[b];
                        if (m.size() >= cfg.board_size_max) continue;
                        if (std::find(m.begin(), m.end(), d) != m.end()) continue;
                        m.push_back(d);
                        break;
                    }
                }
            }
        }
    }

    Date start = reg.first_month.first_day();
    Date end = reg.last_month.last_day();
    for (std::uint32_t b = 0; b < cfg.boards; ++b)
        for (size_t s = 0; s < members[b].size(); ++s) {
            Role role = s == 0 ? Role::Chair : s == 1 ? Role::Executive : Role::OrdinaryMember;
            reg.positions.push_back({dir_id(members[b][s]), com_id(b), role, start, end});
        }

    // corporate groups: contiguous star blocks, root first
    std::set<std::uint32_t> subsidiaries;
    {
        Rng rg = root.derive("groups");
        std::uint32_t i = 0;
        while (i < cfg.boards) {
            if (i + 1 < cfg.boards && rg.bernoulli(cfg.group_rate)) {
                std::uint32_t size = static_cast<std::uint32_t>(rg.uniform_int(2, 4));
                size = std::min(size, cfg.boards - i);
                for (std::uint32_t j = i + 1; j < i + size; ++j) {
                    reg.group_rows.push_back({com_id(j), com_id(i)});
                    reg.groups.ultimate[com_id(j)] = com_id(i);
                    subsidiaries.insert(j);
                }
                i += size;
            } else {
                ++i;
            }
        }
    }

    // financials: company-major, year-minor; the first `large_companies` ids
    // (the lattice boards) get boosted so they occupy the top ranks
    {
        Rng rf = root.derive("financials");
        Rng rm = root.derive("missing");
        for (std::uint32_t i = 0; i < cfg.boards; ++i) {
            bool large = i < cfg.large_companies;
            bool shadow = i >= shadow_board_base && i < shadow_board_end;
            // coverage is drawn for every company so skipping one never
            // shifts another company's stream; large companies stay covered
            // to anchor the top ranks, shadow broker boards never file
            bool covered = (rf.bernoulli(cfg.fin_coverage) || large) && !shadow;
            double base = rf.lognormal(cfg.fin_mu, cfg.fin_sigma);
            if (large) base *= cfg.large_boost;
            bool listed = rf.bernoulli(large ? 0.5 : 0.05);
            int founded = cfg.epoch_year - 1 - static_cast<int>(rf.uniform_int(0, 79));
            int nace = static_cast<int>(rf.uniform_int(0, 9));
            bool founded_missing = rm.bernoulli(cfg.missing_rate);
            bool nace_missing = rm.bernoulli(cfg.missing_rate);

            for (int year = cfg.epoch_year; year <= reg.last_month.year; ++year) {
                double yf = rf.lognormal(0.0, 0.05);
                FinancialRecord rec;
                rec.company_id = com_id(i);
                rec.year = year;
                rec.employees = std::max(1.0, std::round(base * yf));
                rec.revenue = std::round(base * yf * rf.lognormal(0.0, 0.3) * 1000.0);
                rec.assets = std::round(base * yf * rf.lognormal(0.0, 0.4) * 800.0);
                rec.is_subsidiary = subsidiaries.count(i) > 0;
                rec.is_listed = listed;
                if (!founded_missing) rec.founded_year = founded;
                if (!nace_missing) rec.nace1 = nace;
                // draw the missing flags for every row so one company's
                // `large` status never shifts another company's stream
                bool m_emp = rm.bernoulli(cfg.missing_rate);
                bool m_rev = rm.bernoulli(cfg.missing_rate);
                bool m_ast = rm.bernoulli(cfg.missing_rate);
                if (!large) {
                    if (m_emp) rec.employees.reset();
                    if (m_rev) rec.revenue.reset();
                    if (m_ast) rec.assets.reset();
                }
                if (!covered) continue;
                reg.financials.index.emplace(
                    FinancialTable::key(rec.company_id, rec.year),
                    static_cast<std::uint32_t>(reg.financials.rows.size()));
                reg.financials.rows.push_back(std::move(rec));
            }
        }
    }

    // director attributes
    {
        Rng ra = root.derive("attributes");
        char buf[32];
        for (std::uint32_t i = 0; i < cfg.directors; ++i) {
            DirectorAttributes d;
            d.director_id = dir_id(i);
            std::snprintf(buf, sizeof buf, "Person %06u", i + 1);
            d.name = buf;
            std::snprintf(buf, sizeof buf, "Street %03u", i % 211);
            d.address = buf;
            d.female = ra.bernoulli(0.25);
            double mu = ra.uniform01();
            d.migrant = mu < 0.85   ? MigrantStatus::Native
                        : mu < 0.95 ? MigrantStatus::Immigrant
                                    : MigrantStatus::Descendant;
            if (ra.bernoulli(cfg.missing_rate)) d.migrant = MigrantStatus::Missing;
            d.birth_year = 1945 + static_cast<int>(ra.uniform_int(0, 47));
            if (ra.bernoulli(cfg.missing_rate)) d.birth_year.reset();
            d.college = ra.bernoulli(0.5);
            d.master = ra.bernoulli(0.25);
            d.top_income = ra.bernoulli(0.10);
            d.top_wealth = ra.bernoulli(0.05);
            double cu = ra.uniform01();
            d.class_origin = cu < 0.10   ? ClassOrigin::Employer
                             : cu < 0.35 ? ClassOrigin::Manager
                             : cu < 0.60 ? ClassOrigin::Professional
                                         : ClassOrigin::Other;
            if (ra.bernoulli(cfg.missing_rate)) d.class_origin = ClassOrigin::Missing;
            d.ba_leader_cur = ra.bernoulli(0.02);
            d.ba_leader_prev = ra.bernoulli(0.02);
            d.union_leader_cur = ra.bernoulli(0.02);
            d.union_leader_prev = ra.bernoulli(0.02);
            d.politician_cur = ra.bernoulli(0.02);
            d.politician_prev = ra.bernoulli(0.02);
            d.any_attr_missing = d.migrant == MigrantStatus::Missing || !d.birth_year ||
                                 d.class_origin == ClassOrigin::Missing;
            reg.directors.push_back(std::move(d));
        }
    }

    for (std::uint32_t k : w.core) reg.truth.core_ids.push_back(dir_id(k));
    std::sort(reg.truth.core_ids.begin(), reg.truth.core_ids.end());
    for (std::uint32_t b : w.brokers) reg.truth.broker_ids.push_back(dir_id(b));
    std::sort(reg.truth.broker_ids.begin(), reg.truth.broker_ids.end());
    for (std::uint32_t i = 0; i < cfg.directors; ++i) reg.truth.tier[dir_id(i)] = "clique";
    for (std::uint32_t i = 0; i < cfg.directors; ++i)
        if (is_bridge[i]) reg.truth.tier[dir_id(i)] = "bridge";
    for (std::uint32_t p : w.passengers) reg.truth.tier[dir_id(p)] = "passenger";
    for (std::uint32_t b : w.brokers) reg.truth.tier[dir_id(b)] = "broker";
    for (std::uint32_t k : w.core) reg.truth.tier[dir_id(k)] = "core";
    reg.truth.b_coreness = cfg.b_coreness;
    reg.truth.b_rank = cfg.b_rank;
    reg.truth.b_interact = cfg.b_interact;

    Snapshot snap = build_snapshot(reg.positions, reg.first_month);
    CoBoardGraph g = project_coboard(reg.positions, snap);
    std::vector<std::string> guarded = reg.truth.core_ids;
    guarded.insert(guarded.end(), reg.truth.broker_ids.begin(), reg.truth.broker_ids.end());
    verify_guarantee(g, guarded);
    return reg;
}

CommitteeDraw assign_committees(const std::vector<SynthFeature>& features, GroundTruth& truth,
                                const SynthConfig& cfg, Rng& rng) {
    if (features.empty()) throw std::invalid_argument("assign_committees: no features");
    std::vector<double> eta(features.size());
    for (size_t i = 0; i < features.size(); ++i) {
        const SynthFeature& f = features[i];
        auto k = static_cast<size_t>(f.cat);
        eta[i] = cfg.b_coreness * f.coreness + cfg.b_rank[k] + cfg.b_interact[k] * f.coreness;
    }

    CommitteeDraw draw;
    draw.intercept = calibrate_intercept(eta, cfg.base_rate);
    truth.intercept = draw.intercept;
    truth.b_coreness = cfg.b_coreness;
    truth.b_rank = cfg.b_rank;
    truth.b_interact = cfg.b_interact;

    Rng rgov = rng.derive("committee_gov");
    Rng rbus = rng.derive("committee_bus");
    double total = 0.0;
    for (size_t i = 0; i < features.size(); ++i) {
        double p = sigmoid(draw.intercept + eta[i]);
        total += p;
        if (rgov.bernoulli(p)) draw.government.push_back(features[i].director_id);
        if (rbus.bernoulli(p)) draw.business.push_back(features[i].director_id);
    }
    draw.mean_p = total / static_cast<double>(features.size());
    std::sort(draw.government.begin(), draw.government.end());
    std::sort(draw.business.begin(), draw.business.end());
    return draw;
}

namespace {

std::string flag(bool b) { return b ? "1" : "0"; }

std::string opt_str(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }
std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string migrant_label(MigrantStatus m) {
    switch (m) {
        case MigrantStatus::Native: return "native";
        case MigrantStatus::Immigrant: return "immigrant";
        case MigrantStatus::Descendant: return "descendant";
        case MigrantStatus::Missing: return "";
    }
    return "";
}

std::string class_label(ClassOrigin c) {
    switch (c) {
        case ClassOrigin::Employer: return "employer";
        case ClassOrigin::Manager: return "manager";
        case ClassOrigin::Professional: return "professional";
        case ClassOrigin::Other: return "other";
        case ClassOrigin::Missing: return "";
    }
    return "";
}

}  // namespace

void write_registry(const SynthRegistry& reg, const SynthConfig& cfg, const CommitteeDraw& draw,
                    const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    {
        CsvWriter wtr(path("positions.csv"));
        wtr.row({"director_id", "company_id", "role", "start_date", "end_date"});
        for (const auto& p : reg.positions)
            wtr.row({p.director_id, p.company_id, to_string(p.role), to_string(p.start),
                     p.end ? to_string(*p.end) : ""});
        wtr.close();
    }
    {
        CsvWriter wtr(path("financials.csv"));
        wtr.row({"company_id", "year", "employees", "revenue", "assets", "is_subsidiary",
                 "is_listed", "founded_year", "nace1"});
        for (const auto& r : reg.financials.rows)
            wtr.row({r.company_id, std::to_string(r.year), opt_str(r.employees),
                     opt_str(r.revenue), opt_str(r.assets), flag(r.is_subsidiary),
                     flag(r.is_listed), opt_str(r.founded_year), opt_str(r.nace1)});
        wtr.close();
    }
    {
        CsvWriter wtr(path("groups.csv"));
        wtr.row({"company_id", "ultimate_parent_id"});
        for (const auto& [child, parent] : reg.group_rows) wtr.row({child, parent});
        wtr.close();
    }
    {
        CsvWriter wtr(path("directors.csv"));
        wtr.row({"director_id", "name", "address", "gender", "migrant", "birth_year", "college",
                 "master", "top_income", "top_wealth", "class_origin", "ba_leader_cur",
                 "ba_leader_prev", "union_leader_cur", "union_leader_prev", "politician_cur",
                 "politician_prev"});
        for (const auto& d : reg.directors)
            wtr.row({d.director_id, d.name, d.address, flag(d.female), migrant_label(d.migrant),
                     opt_str(d.birth_year), flag(d.college), flag(d.master), flag(d.top_income),
                     flag(d.top_wealth), class_label(d.class_origin), flag(d.ba_leader_cur),
                     flag(d.ba_leader_prev), flag(d.union_leader_cur), flag(d.union_leader_prev),
                     flag(d.politician_cur), flag(d.politician_prev)});
        wtr.close();
    }
    {
        std::unordered_map<std::string, const DirectorAttributes*> by_id;
        for (const auto& d : reg.directors) by_id[d.director_id] = &d;
        CsvWriter wtr(path("committees.csv"));
        wtr.row({"committee_id", "kind", "member_name", "member_address", "member_director_id",
                 "window_start", "window_end"});
        auto emit = [&](const std::vector<std::string>& ids, const char* cid, const char* kind) {
            for (const auto& id : ids) {
                const DirectorAttributes* d = by_id.at(id);
                wtr.row({cid, kind, d->name, d->address, id, std::to_string(cfg.committee_start),
                         std::to_string(cfg.committee_end)});
            }
        };
        emit(draw.government, "GOV000001", "government");
        emit(draw.business, "BUS000001", "business_association");
        wtr.close();
    }
    {
        CsvWriter wtr(path("ground_truth.csv"));
        wtr.row({"director_id", "tier", "planted_core"});
        for (const auto& d : reg.directors) {
            const std::string& tier = reg.truth.tier.at(d.director_id);
            wtr.row({d.director_id, tier, flag(tier == "core")});
        }
        wtr.close();
    }
    {
        json j = {
            {"intercept", reg.truth.intercept},
            {"base_rate", cfg.base_rate},
            {"mean_response", draw.mean_p},
            {"b_coreness", reg.truth.b_coreness},
            {"b_rank", reg.truth.b_rank},
            {"b_interact", reg.truth.b_interact},
            {"committee_window", {cfg.committee_start, cfg.committee_end}},
        };
        std::ofstream out(path("dgp.json"), std::ios::binary);
        out << j.dump(2) << "\n";
    }
}

SynthRegistry synthesize_dataset(const SynthConfig& cfg, const std::string& out_dir,
                                 Warnings* warnings) {
    SynthRegistry reg = generate_registry(cfg);

    // committee probabilities condition on first-month pipeline features
    Snapshot snap = build_snapshot(reg.positions, reg.first_month);
    CoBoardGraph g = project_coboard(reg.positions, snap);
    auto lc = largest_component(g);
    CoBoardGraph glc = induce(g, lc);
    BrokerageReport rep = prune_brokers(glc, Rat::make(1, 1), BrokerMode::Middleman);
    ReachGraph rg = build_reach_graph(glc, rep.survivors);
    CorenessTable kc = weighted_kcore(rg, reg.first_month);
    std::vector<Rat> std_cor = standardized_coreness(kc);

    RankOptions ropt;
    RankTable company_ranks = pca_company_rank(reg.financials, cfg.epoch_year, ropt, warnings);
    RankTable corp_ranks = corporation_rank(reg.financials, cfg.epoch_year, reg.groups, ropt, warnings);
    auto profiles = director_rank_profiles(reg.positions, snap, company_ranks, corp_ranks, reg.groups);

    std::unordered_map<std::string, RankCategory> cat_of;
    for (const auto& p : profiles) cat_of[p.director_id] = p.company_cat;

    std::vector<SynthFeature> features;
    features.reserve(reg.directors.size());
    for (const auto& d : reg.directors) {
        SynthFeature f;
        f.director_id = d.director_id;
        auto u = kc.node_of(d.director_id);
        if (u >= 0) f.coreness = std_cor[static_cast<size_t>(u)].to_double();
        auto it = cat_of.find(d.director_id);
        if (it != cat_of.end()) f.cat = it->second;
        features.push_back(std::move(f));
    }

    Rng rng = Rng(cfg.seed).derive("committees");
    CommitteeDraw draw = assign_committees(features, reg.truth, cfg, rng);
    write_registry(reg, cfg, draw, out_dir);
    return reg;
}

PanelTable generate_panel_dgp(const PanelDgpConfig& cfg, PanelDgpTruth* truth) {
    if (cfg.rows == 0) throw std::invalid_argument("panel DGP needs rows > 0");
    if (cfg.base_rate <= 0 || cfg.base_rate >= 1)
        throw std::invalid_argument("base_rate must lie in (0, 1)");
    if (cfg.b_rank[3] != 0 || cfg.b_interact[3] != 0)
        throw std::invalid_argument("the beyond5000 slot is the reference; its coefficients must be 0");
    double psum = 0;
    for (double p : cfg.rank_probs) {
        if (p < 0) throw std::invalid_argument("rank_probs must be non-negative");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument("rank_probs must sum to 1");

    Rng feat = Rng(cfg.seed).derive("features");
    std::vector<double> coreness(cfg.rows);
    std::vector<std::uint8_t> cat(cfg.rows);
    std::vector<double> eta(cfg.rows);
    for (std::uint64_t i = 0; i < cfg.rows; ++i) {
        double c = feat.bernoulli(cfg.broker_rate) ? feat.uniform01() : 0.0;
        double u = feat.uniform01();
        std::uint8_t k = 3;
        double cum = 0;
        for (std::uint8_t j = 0; j < 4; ++j) {
            cum += cfg.rank_probs[j];
            if (u < cum) {
                k = j;
                break;
            }
        }
        coreness[i] = c;
        cat[i] = k;
        eta[i] = cfg.b_coreness * c + cfg.b_rank[k] + cfg.b_interact[k] * c;
    }
    double a = calibrate_intercept(eta, cfg.base_rate);
    if (truth) {
        truth->intercept = a;
        truth->b_coreness = cfg.b_coreness;
        truth->b_rank = cfg.b_rank;
        truth->b_interact = cfg.b_interact;
    }

    PanelTable t = make_panel_table();
    t.reserve(cfg.rows);
    const std::uint32_t v_committee = t.var("committee"), v_coreness = t.var("coreness"),
                        v_crank = t.var("company_rank");
    Rng resp = Rng(cfg.seed).derive("response");
    char buf[16];
    MonthIndex month{2010, 1};
    for (std::uint64_t i = 0; i < cfg.rows; ++i) {
        std::snprintf(buf, sizeof buf, "P%08llu", static_cast<unsigned long long>(i + 1));
        t.director_ids.push_back(buf);
        t.months.push_back(month);
        for (std::uint32_t v = 0; v < t.vars.size(); ++v) {
            if (t.vars[v].kind == VarKind::Categorical)
                t.codes[v].push_back(v == v_crank ? cat[i] : t.vars[v].ref);
            else if (v == v_committee)
                t.numeric[v].push_back(resp.bernoulli(sigmoid(a + eta[i])) ? 1.0 : 0.0);
            else if (v == v_coreness)
                t.numeric[v].push_back(coreness[i]);
            else
                t.numeric[v].push_back(0.0);
        }
    }
    t.n = cfg.rows;
    return t;
}

CoBoardGraph random_graph(std::uint32_t n, double edge_prob, Rng& rng) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (rng.bernoulli(edge_prob)) edges.push_back({u, v});
    return graph_from_edges(n, edges);
}

ReachGraph random_reach_graph(std::uint32_t n, double edge_prob, std::uint32_t max_w_hu, Rng& rng) {
    if (max_w_hu == 0) throw std::invalid_argument("max_w_hu must be positive");
    std::vector<WeightedEdge> edges;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (rng.bernoulli(edge_prob))
                edges.push_back({u, v, static_cast<std::uint32_t>(rng.uniform_int(1, max_w_hu))});
    return reach_from_edges(n, edges);
}

}  // namespace boardcore
