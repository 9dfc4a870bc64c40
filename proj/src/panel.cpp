#include <algorithm>
#include <map>
#include <stdexcept>

#include "boardcore/stats.hpp"
#include "json.hpp"

namespace boardcore {

std::int64_t Variable::level_of(const std::string& label) const {
    for (size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == label) return static_cast<std::int64_t>(i);
    return -1;
}

std::uint32_t PanelTable::var(const std::string& name) const {
    auto it = var_index.find(name);
    if (it == var_index.end()) throw std::invalid_argument("unknown panel variable '" + name + "'");
    return it->second;
}

void PanelTable::reserve(std::uint64_t rows) {
    director_ids.reserve(rows);
    months.reserve(rows);
    for (size_t v = 0; v < vars.size(); ++v) {
        if (vars[v].kind == VarKind::Categorical) codes[v].reserve(rows);
        else numeric[v].reserve(rows);
    }
}

namespace {

void add_binary(PanelTable& t, const std::string& name) {
    t.var_index.emplace(name, static_cast<std::uint32_t>(t.vars.size()));
    t.vars.push_back({name, VarKind::Binary, {}, 0});
    t.numeric.emplace_back();
    t.codes.emplace_back();
}

void add_continuous(PanelTable& t, const std::string& name) {
    t.var_index.emplace(name, static_cast<std::uint32_t>(t.vars.size()));
    t.vars.push_back({name, VarKind::Continuous, {}, 0});
    t.numeric.emplace_back();
    t.codes.emplace_back();
}

void add_categorical(PanelTable& t, const std::string& name, std::vector<std::string> levels,
                     const std::string& ref) {
    Variable v{name, VarKind::Categorical, std::move(levels), 0};
    auto r = v.level_of(ref);
    v.ref = static_cast<std::uint8_t>(r);
    t.var_index.emplace(name, static_cast<std::uint32_t>(t.vars.size()));
    t.vars.push_back(std::move(v));
    t.numeric.emplace_back();
    t.codes.emplace_back();
}

const std::vector<std::string> kRankLevels = {"top50", "top500", "top5000", "beyond5000"};

}  // namespace

PanelTable make_panel_table() {
    PanelTable t;
    add_binary(t, "committee");
    add_binary(t, "bus_committee");
    add_categorical(t, "elite", {"not_in_lc", "lc_only", "broker", "core"}, "not_in_lc");
    add_continuous(t, "coreness");
    add_categorical(t, "company_rank", kRankLevels, "beyond5000");
    add_categorical(t, "corp_rank", kRankLevels, "beyond5000");
    add_binary(t, "top50_linker");
    add_binary(t, "top500_linker");
    add_binary(t, "top50_corp_linker_across");
    add_binary(t, "top500_corp_linker_across");
    add_binary(t, "top50_corp_linker_within");
    add_binary(t, "top500_corp_linker_within");
    add_binary(t, "top50_executive");
    add_binary(t, "top500_executive");
    add_binary(t, "top50_chair");
    add_binary(t, "top500_chair");
    add_categorical(t, "boards", {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10plus"}, "1");
    add_binary(t, "ba_leader_cur");
    add_binary(t, "ba_leader_prev");
    add_binary(t, "union_leader_cur");
    add_binary(t, "union_leader_prev");
    add_binary(t, "politician_cur");
    add_binary(t, "politician_prev");
    add_binary(t, "subsidiary");
    add_binary(t, "listed");
    add_categorical(t, "company_age", {"1_11", "12_25", "26_50", "50plus", "missing"}, "1_11");
    add_categorical(t, "industry",
                    {"nace0", "nace1", "nace2", "nace3", "nace4", "nace5", "nace6", "nace7", "nace8",
                     "nace9", "missing"},
                    "nace0");
    add_binary(t, "female");
    add_categorical(t, "migrant", {"native", "immigrant", "descendant", "missing"}, "native");
    add_categorical(t, "director_age", {"18_30", "31_44", "45_59", "60_74", "75plus", "missing"},
                    "18_30");
    add_binary(t, "college");
    add_binary(t, "master");
    add_binary(t, "top_income");
    add_binary(t, "top_wealth");
    add_categorical(t, "class_origin", {"employer", "manager", "professional", "other", "missing"},
                    "other");
    return t;
}

namespace {

std::uint8_t company_age_code(int year, std::optional<int> founded) {
    if (!founded) return 4;
    int age = year - *founded;
    if (age <= 11) return 0;
    if (age <= 25) return 1;
    if (age <= 50) return 2;
    return 3;
}

std::uint8_t director_age_code(int year, std::optional<int> birth) {
    if (!birth) return 5;
    int age = year - *birth;
    if (age <= 30) return 0;
    if (age <= 44) return 1;
    if (age <= 59) return 2;
    if (age <= 74) return 3;
    return 4;
}

const DirectorAttributes* find_director(const std::vector<DirectorAttributes>& directors,
                                        const std::string& id) {
    auto it = std::lower_bound(directors.begin(), directors.end(), id,
                               [](const DirectorAttributes& d, const std::string& s) {
                                   return d.director_id < s;
                               });
    if (it == directors.end() || it->director_id != id) return nullptr;
    return &*it;
}

}  // namespace

PanelTable assemble_panel(const std::vector<MonthArtifacts>& months,
                          const std::vector<DirectorAttributes>& directors,
                          const CommitteeFlags& committee_flags,
                          const std::vector<PeriodWindow>& period_map, const FinancialTable& fin,
                          PanelQuality* quality) {
    PanelTable t = make_panel_table();

    const std::uint32_t v_committee = t.var("committee"), v_bus = t.var("bus_committee"),
                        v_elite = t.var("elite"), v_coreness = t.var("coreness"),
                        v_crank = t.var("company_rank"), v_grank = t.var("corp_rank"),
                        v_boards = t.var("boards"), v_subsidiary = t.var("subsidiary"),
                        v_listed = t.var("listed"), v_cage = t.var("company_age"),
                        v_ind = t.var("industry"), v_female = t.var("female"),
                        v_migrant = t.var("migrant"), v_dage = t.var("director_age"),
                        v_college = t.var("college"), v_master = t.var("master"),
                        v_income = t.var("top_income"), v_wealth = t.var("top_wealth"),
                        v_class = t.var("class_origin");
    const std::uint32_t v_linkers[10] = {
        t.var("top50_linker"), t.var("top500_linker"),
        t.var("top50_corp_linker_across"), t.var("top500_corp_linker_across"),
        t.var("top50_corp_linker_within"), t.var("top500_corp_linker_within"),
        t.var("top50_executive"), t.var("top500_executive"),
        t.var("top50_chair"), t.var("top500_chair")};
    const std::uint32_t v_roles[6] = {t.var("ba_leader_cur"),    t.var("ba_leader_prev"),
                                      t.var("union_leader_cur"), t.var("union_leader_prev"),
                                      t.var("politician_cur"),   t.var("politician_prev")};

    PanelQuality q;
    for (const MonthArtifacts& m : months) {
        std::int64_t period = -1;
        for (size_t p = 0; p < period_map.size(); ++p)
            if (period_map[p].contains(m.month)) {
                period = static_cast<std::int64_t>(p);
                break;
            }

        std::unordered_set<std::string> lc(m.lc_ids.begin(), m.lc_ids.end());
        std::unordered_set<std::string> survivors(m.survivor_ids.begin(), m.survivor_ids.end());

        for (const DirectorRankProfile& prof : *m.profiles) {
            const std::string& id = prof.director_id;
            ++q.rows;
            t.director_ids.push_back(id);
            t.months.push_back(m.month);

            bool gov = false, bus = false;
            if (period >= 0) {
                gov = committee_flags.government[static_cast<size_t>(period)].count(id) > 0;
                bus = committee_flags.business[static_cast<size_t>(period)].count(id) > 0;
            } else {
                ++q.rows_outside_period_map;
            }
            t.numeric[v_committee].push_back(gov ? 1.0 : 0.0);
            t.numeric[v_bus].push_back(bus ? 1.0 : 0.0);

            EliteCategory cat = classify_elite(id, lc, survivors, *m.coreness);
            t.codes[v_elite].push_back(static_cast<std::uint8_t>(static_cast<int>(cat) - 1));
            double coreness = 0.0;
            if (cat == EliteCategory::LocalBroker || cat == EliteCategory::NetworkCore) {
                std::int64_t u = m.coreness->node_of(id);
                if (u >= 0) coreness = (*m.std_coreness)[static_cast<size_t>(u)].to_double();
            }
            t.numeric[v_coreness].push_back(coreness);

            t.codes[v_crank].push_back(static_cast<std::uint8_t>(prof.company_cat));
            t.codes[v_grank].push_back(static_cast<std::uint8_t>(prof.corp_cat));
            const bool linker_vals[10] = {
                prof.top50_linker, prof.top500_linker,
                prof.top50_corp_linker_across, prof.top500_corp_linker_across,
                prof.top50_corp_linker_within, prof.top500_corp_linker_within,
                prof.top50_executive, prof.top500_executive,
                prof.top50_chair, prof.top500_chair};
            for (int k = 0; k < 10; ++k) t.numeric[v_linkers[k]].push_back(linker_vals[k] ? 1.0 : 0.0);
            std::uint32_t bin = prof.board_count == 0 ? 1 : std::min<std::uint32_t>(prof.board_count, 10);
            t.codes[v_boards].push_back(static_cast<std::uint8_t>(bin - 1));

            const FinancialRecord* rec = fin.find(prof.best_company_id, m.month.year);
            if (!rec) ++q.missing_company_record;
            t.numeric[v_subsidiary].push_back(rec && rec->is_subsidiary ? 1.0 : 0.0);
            t.numeric[v_listed].push_back(rec && rec->is_listed ? 1.0 : 0.0);
            t.codes[v_cage].push_back(rec ? company_age_code(m.month.year, rec->founded_year) : 4);
            std::uint8_t ind = 10;
            if (rec && rec->nace1) ind = static_cast<std::uint8_t>(*rec->nace1);
            t.codes[v_ind].push_back(ind);

            const DirectorAttributes* attr = find_director(directors, id);
            if (!attr) ++q.missing_director_attributes;
            if (attr && !attr->birth_year) ++q.missing_birth_year;
            t.numeric[v_female].push_back(attr && attr->female ? 1.0 : 0.0);
            t.codes[v_migrant].push_back(attr ? static_cast<std::uint8_t>(attr->migrant) : 3);
            t.codes[v_dage].push_back(attr ? director_age_code(m.month.year, attr->birth_year) : 5);
            t.numeric[v_college].push_back(attr && attr->college ? 1.0 : 0.0);
            t.numeric[v_master].push_back(attr && attr->master ? 1.0 : 0.0);
            t.numeric[v_income].push_back(attr && attr->top_income ? 1.0 : 0.0);
            t.numeric[v_wealth].push_back(attr && attr->top_wealth ? 1.0 : 0.0);
            t.codes[v_class].push_back(attr ? static_cast<std::uint8_t>(attr->class_origin) : 4);
            const bool role_vals[6] = {attr && attr->ba_leader_cur,    attr && attr->ba_leader_prev,
                                       attr && attr->union_leader_cur, attr && attr->union_leader_prev,
                                       attr && attr->politician_cur,   attr && attr->politician_prev};
            for (int k = 0; k < 6; ++k) t.numeric[v_roles[k]].push_back(role_vals[k] ? 1.0 : 0.0);
        }
    }
    t.n = t.director_ids.size();
    if (quality) *quality = q;
    return t;
}

ModelSpec ModelSpec::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ModelSpec s;
    if (j.contains("response")) s.response = j.at("response").get<std::string>();
    for (const auto& t : j.at("terms")) s.terms.push_back(t.get<std::string>());
    if (j.contains("references"))
        for (auto& [k, v] : j.at("references").items()) s.references[k] = v.get<std::string>();
    if (j.contains("cluster")) s.cluster = j.at("cluster").get<std::string>();
    if (j.contains("ridge")) s.ridge = j.at("ridge").get<double>();
    return s;
}

std::string ModelSpec::to_json_text() const {
    nlohmann::json j;
    j["response"] = response;
    j["terms"] = terms;
    nlohmann::json refs = nlohmann::json::object();
    for (const auto& [k, v] : references) refs[k] = v;
    j["references"] = refs;
    if (!cluster.empty()) j["cluster"] = cluster;
    if (ridge != 0.0) j["ridge"] = ridge;
    return j.dump(2);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

DesignMatrix encode_design(const PanelTable& panel, const ModelSpec& spec, Warnings* warnings) {
    DesignMatrix d;
    d.panel = &panel;
    d.n = panel.n;

    std::uint32_t rv = panel.var(spec.response);
    if (panel.vars[rv].kind != VarKind::Binary)
        throw std::invalid_argument("response '" + spec.response + "' is not a binary variable");
    d.y.assign(panel.numeric[rv].begin(), panel.numeric[rv].end());

    // expand terms: "a*b" adds a, b and a:b; dedupe by sorted part list
    std::vector<std::vector<std::string>> term_parts;
    std::vector<std::vector<std::string>> seen_keys;
    auto add_term = [&](std::vector<std::string> parts) {
        std::vector<std::string> key = parts;
        std::sort(key.begin(), key.end());
        for (const auto& k : seen_keys)
            if (k == key) return;
        seen_keys.push_back(std::move(key));
        term_parts.push_back(std::move(parts));
    };
    for (const std::string& term : spec.terms) {
        if (term.find('*') != std::string::npos) {
            std::vector<std::string> f = split(term, '*');
            size_t subsets = (size_t{1} << f.size());
            for (size_t mask = 1; mask < subsets; ++mask) {
                std::vector<std::string> parts;
                for (size_t b = 0; b < f.size(); ++b)
                    if (mask & (size_t{1} << b)) parts.push_back(f[b]);
                add_term(std::move(parts));
            }
        } else {
            add_term(split(term, ':'));
        }
    }

    // reference overrides
    std::vector<std::uint8_t> ref_of(panel.vars.size());
    for (size_t v = 0; v < panel.vars.size(); ++v) ref_of[v] = panel.vars[v].ref;
    for (const auto& [name, level] : spec.references) {
        std::uint32_t v = panel.var(name);
        std::int64_t code = panel.vars[v].level_of(level);
        if (code < 0)
            throw std::invalid_argument("variable '" + name + "' has no level '" + level + "'");
        ref_of[v] = static_cast<std::uint8_t>(code);
    }
    d.var_ref = ref_of;

    d.cols.push_back({"intercept", {}});
    for (const auto& parts : term_parts) {
        // per part: the factor choices it contributes
        std::vector<std::vector<DesignFactor>> choices;
        for (const std::string& part : parts) {
            std::uint32_t v = panel.var(part);
            const Variable& var = panel.vars[v];
            std::vector<DesignFactor> c;
            if (var.kind == VarKind::Categorical) {
                for (std::uint8_t lv = 0; lv < var.levels.size(); ++lv)
                    if (lv != ref_of[v]) c.push_back({v, lv});
            } else {
                c.push_back({v, -1});
            }
            choices.push_back(std::move(c));
        }
        std::vector<size_t> pick(choices.size(), 0);
        while (true) {
            DesignColumn col;
            for (size_t k = 0; k < choices.size(); ++k) {
                DesignFactor f = choices[k][pick[k]];
                if (!col.name.empty()) col.name += ":";
                col.name += panel.vars[f.var].name;
                if (f.level >= 0)
                    col.name += "=" + panel.vars[f.var].levels[static_cast<size_t>(f.level)];
                col.factors.push_back(f);
            }
            d.cols.push_back(std::move(col));
            size_t k = 0;
            while (k < choices.size() && ++pick[k] == choices[k].size()) {
                pick[k] = 0;
                ++k;
            }
            if (k == choices.size()) break;
        }
    }

    // materialize columns, dropping empty ones
    std::vector<std::vector<double>> colvals;
    std::vector<DesignColumn> kept;
    for (const DesignColumn& col : d.cols) {
        std::vector<double> vals(d.n, 1.0);
        if (!col.factors.empty()) {
            for (std::uint64_t i = 0; i < d.n; ++i) {
                double prod = 1.0;
                for (const DesignFactor& f : col.factors) {
                    if (f.level < 0) prod *= panel.numeric[f.var][i];
                    else prod *= panel.codes[f.var][i] == f.level ? 1.0 : 0.0;
                    if (prod == 0.0) break;
                }
                vals[i] = prod;
            }
            bool any = false;
            for (double v : vals)
                if (v != 0.0) {
                    any = true;
                    break;
                }
            if (!any) {
                warn(warnings, "design column '" + col.name + "' has no observations; dropped");
                continue;
            }
        }
        colvals.push_back(std::move(vals));
        kept.push_back(col);
    }

    // exact-duplicate detection
    std::unordered_map<std::uint64_t, std::vector<size_t>> by_hash;
    for (size_t c = 0; c < colvals.size(); ++c) {
        std::uint64_t h = fnv1a64(colvals[c].data(), colvals[c].size() * sizeof(double));
        for (size_t other : by_hash[h])
            if (colvals[other] == colvals[c])
                throw RankDeficientError("design columns '" + kept[other].name + "' and '" +
                                         kept[c].name + "' are identical");
        by_hash[h].push_back(c);
    }

    d.cols = std::move(kept);
    d.p = static_cast<std::uint32_t>(d.cols.size());
    d.x.resize(d.n * d.p);
    for (std::uint64_t i = 0; i < d.n; ++i)
        for (std::uint32_t c = 0; c < d.p; ++c) d.x[i * d.p + c] = colvals[c][i];

    if (!spec.cluster.empty() && spec.cluster != "none") {
        if (spec.cluster != "director")
            throw std::invalid_argument("unsupported cluster key '" + spec.cluster +
                                        "' (use 'director')");
        d.cluster.resize(d.n);
        std::unordered_map<std::string, std::uint32_t> seen;
        for (std::uint64_t i = 0; i < d.n; ++i) {
            auto it = seen.emplace(panel.director_ids[i], static_cast<std::uint32_t>(seen.size())).first;
            d.cluster[i] = it->second;
        }
        d.n_clusters = static_cast<std::uint32_t>(seen.size());
    }
    return d;
}

std::vector<EnrichmentRow> coreness_concentration_report(const PanelTable& panel, int bins) {
    if (bins <= 0) throw std::invalid_argument("bins must be positive");
    const std::uint32_t v_elite = panel.var("elite");
    const std::uint32_t v_coreness = panel.var("coreness");
    const std::uint32_t v_flags[3] = {panel.var("committee"), panel.var("bus_committee"), 0};
    const std::uint32_t v_interest[6] = {panel.var("ba_leader_cur"),    panel.var("ba_leader_prev"),
                                         panel.var("union_leader_cur"), panel.var("union_leader_prev"),
                                         panel.var("politician_cur"),   panel.var("politician_prev")};
    const char* flag_names[3] = {"committee", "bus_committee", "interest_leader"};

    // per month: totals and per-bin tallies
    struct MonthTally {
        std::uint64_t total = 0;
        std::uint64_t flagged[3] = {0, 0, 0};
        std::vector<std::uint64_t> bin_total;
        std::vector<std::uint64_t> bin_flagged[3];
    };
    std::map<int, MonthTally> tallies;
    for (std::uint64_t i = 0; i < panel.n; ++i) {
        if (panel.codes[v_elite][i] < 2) continue;  // brokers and core only
        MonthTally& m = tallies[panel.months[i].linear()];
        if (m.bin_total.empty()) {
            m.bin_total.assign(static_cast<size_t>(bins), 0);
            for (int f = 0; f < 3; ++f) m.bin_flagged[f].assign(static_cast<size_t>(bins), 0);
        }
        double c = panel.numeric[v_coreness][i];
        int b = std::min(bins - 1, std::max(0, static_cast<int>(c * bins)));
        bool flagged[3] = {panel.numeric[v_flags[0]][i] != 0.0, panel.numeric[v_flags[1]][i] != 0.0,
                           false};
        for (std::uint32_t v : v_interest) flagged[2] = flagged[2] || panel.numeric[v][i] != 0.0;
        ++m.total;
        ++m.bin_total[static_cast<size_t>(b)];
        for (int f = 0; f < 3; ++f)
            if (flagged[f]) {
                ++m.flagged[f];
                ++m.bin_flagged[f][static_cast<size_t>(b)];
            }
    }

    std::vector<EnrichmentRow> out;
    for (int f = 0; f < 3; ++f) {
        for (int b = 0; b < bins; ++b) {
            double sum = 0;
            std::uint32_t used = 0;
            std::uint64_t rows = 0;
            for (const auto& [month, m] : tallies) {
                if (m.bin_total[static_cast<size_t>(b)] == 0 || m.flagged[f] == 0) continue;
                double bin_share = static_cast<double>(m.bin_flagged[f][static_cast<size_t>(b)]) /
                                   static_cast<double>(m.bin_total[static_cast<size_t>(b)]);
                double base_share =
                    static_cast<double>(m.flagged[f]) / static_cast<double>(m.total);
                sum += bin_share / base_share;
                ++used;
                rows += m.bin_total[static_cast<size_t>(b)];
            }
            if (used == 0) continue;
            EnrichmentRow row;
            row.flag = flag_names[f];
            row.bin_lo = static_cast<double>(b) / bins;
            row.bin_hi = static_cast<double>(b + 1) / bins;
            row.ratio = sum / used;
            row.months = used;
            row.rows = rows;
            out.push_back(row);
        }
    }
    return out;
}

}  // namespace boardcore
