#include "boardcore/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "boardcore/csv.hpp"
#include "boardcore/text_norm.hpp"

namespace boardcore {

std::optional<Role> parse_role(const std::string& token) {
    std::string t;
    t.reserve(token.size());
    for (char c : token) t += (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c;
    if (t == "executive") return Role::Executive;
    if (t == "chair") return Role::Chair;
    if (t == "ordinary_member" || t == "ordinary member") return Role::OrdinaryMember;
    return std::nullopt;
}

std::string to_string(Role r) {
    switch (r) {
        case Role::Executive: return "executive";
        case Role::Chair: return "chair";
        case Role::OrdinaryMember: return "ordinary_member";
    }
    return "?";
}

namespace {

[[noreturn]] void row_error(const CsvTable& t, size_t row, const std::string& what) {
    throw ParseError(t.path + ":" + std::to_string(t.line[row]) + ": " + what);
}

std::optional<double> opt_number(const CsvTable& t, size_t row, size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) return std::nullopt;
    char* endp = nullptr;
    double v = std::strtod(s.c_str(), &endp);
    if (endp == s.c_str() || *endp != '\0') row_error(t, row, "bad number '" + s + "'");
    return v;
}

std::optional<int> opt_int(const CsvTable& t, size_t row, size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) return std::nullopt;
    char* endp = nullptr;
    long v = std::strtol(s.c_str(), &endp, 10);
    if (endp == s.c_str() || *endp != '\0') row_error(t, row, "bad integer '" + s + "'");
    return static_cast<int>(v);
}

bool parse_bool_field(const CsvTable& t, size_t row, size_t col) {
    const std::string& s = t.rows[row][col];
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false" || s.empty()) return false;
    row_error(t, row, "bad flag '" + s + "'");
}

}  // namespace

std::vector<PositionRecord> parse_positions(const std::string& path) {
    CsvTable t = read_csv(path);
    size_t c_dir = t.col("director_id");
    size_t c_com = t.col("company_id");
    size_t c_role = t.col("role");
    size_t c_start = t.col("start_date");
    size_t c_end = t.col("end_date");

    std::vector<PositionRecord> out;
    out.reserve(t.rows.size());
    // key (director, company, role, start) -> index of first occurrence
    std::map<std::tuple<std::string, std::string, int, Date>, std::uint32_t> seen;

    for (size_t r = 0; r < t.rows.size(); ++r) {
        PositionRecord rec;
        rec.director_id = t.rows[r][c_dir];
        rec.company_id = t.rows[r][c_com];
        if (rec.director_id.empty()) row_error(t, r, "empty director_id");
        if (rec.company_id.empty()) row_error(t, r, "empty company_id");

        auto role = parse_role(t.rows[r][c_role]);
        if (!role) row_error(t, r, "unknown role '" + t.rows[r][c_role] + "'");
        rec.role = *role;

        auto start = parse_date(t.rows[r][c_start]);
        if (!start) row_error(t, r, "bad start_date '" + t.rows[r][c_start] + "'");
        rec.start = *start;

        const std::string& ends = t.rows[r][c_end];
        if (!ends.empty()) {
            auto end = parse_date(ends);
            if (!end) row_error(t, r, "bad end_date '" + ends + "'");
            if (*end < rec.start)
                row_error(t, r, "end_date " + ends + " precedes start_date " + t.rows[r][c_start]);
            rec.end = *end;
        }

        auto key = std::make_tuple(rec.director_id, rec.company_id, static_cast<int>(rec.role), rec.start);
        auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(out.size()));
        if (!inserted) {
            const PositionRecord& prev = out[it->second];
            if (prev.end == rec.end) continue;  // identical rows collapse
            row_error(t, r, "conflicting duplicate for (" + rec.director_id + ", " + rec.company_id +
                                ", " + to_string(rec.role) + ", " + t.rows[r][c_start] + ")");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

Snapshot build_snapshot(const std::vector<PositionRecord>& records, MonthIndex month) {
    Snapshot snap;
    snap.month = month;
    for (std::uint32_t i = 0; i < records.size(); ++i)
        if (interval_covers_month(records[i].start, records[i].end, month)) snap.active.push_back(i);
    return snap;
}

std::vector<int> FinancialTable::years() const {
    std::vector<int> ys;
    for (const auto& r : rows) ys.push_back(r.year);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

std::vector<FinancialRecord> FinancialTable::year_rows(int year) const {
    std::vector<FinancialRecord> out;
    for (const auto& r : rows)
        if (r.year == year) out.push_back(r);
    std::sort(out.begin(), out.end(),
              [](const FinancialRecord& a, const FinancialRecord& b) { return a.company_id < b.company_id; });
    return out;
}

std::pair<FinancialTable, GroupForest> load_company_registry(const std::string& financials_path,
                                                             const std::string& groups_path,
                                                             Warnings* warnings) {
    FinancialTable fin;
    {
        CsvTable t = read_csv(financials_path);
        size_t c_com = t.col("company_id");
        size_t c_year = t.col("year");
        size_t c_emp = t.col("employees");
        size_t c_rev = t.col("revenue");
        size_t c_ass = t.col("assets");
        size_t c_sub = t.col("is_subsidiary");
        size_t c_lst = t.col("is_listed");
        size_t c_fnd = t.col("founded_year");
        size_t c_nace = t.col("nace1");

        for (size_t r = 0; r < t.rows.size(); ++r) {
            FinancialRecord rec;
            rec.company_id = t.rows[r][c_com];
            if (rec.company_id.empty()) row_error(t, r, "empty company_id");
            auto year = opt_int(t, r, c_year);
            if (!year) row_error(t, r, "empty year");
            rec.year = *year;
            rec.employees = opt_number(t, r, c_emp);
            rec.revenue = opt_number(t, r, c_rev);
            rec.assets = opt_number(t, r, c_ass);
            rec.is_subsidiary = parse_bool_field(t, r, c_sub);
            rec.is_listed = parse_bool_field(t, r, c_lst);
            rec.founded_year = opt_int(t, r, c_fnd);
            rec.nace1 = opt_int(t, r, c_nace);
            if (rec.nace1 && (*rec.nace1 < 0 || *rec.nace1 > 9))
                row_error(t, r, "nace1 out of range '" + t.rows[r][c_nace] + "'");

            std::string key = FinancialTable::key(rec.company_id, rec.year);
            auto [it, inserted] = fin.index.emplace(key, static_cast<std::uint32_t>(fin.rows.size()));
            if (!inserted)
                row_error(t, r, "duplicate financials for (" + rec.company_id + ", " +
                                    std::to_string(rec.year) + ")");
            fin.rows.push_back(std::move(rec));
        }
    }

    GroupForest forest;
    {
        CsvTable t = read_csv(groups_path);
        size_t c_com = t.col("company_id");
        size_t c_par = t.col("ultimate_parent_id");

        std::unordered_map<std::string, std::string> parent;
        std::unordered_map<std::string, size_t> row_of;
        for (size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& com = t.rows[r][c_com];
            const std::string& par = t.rows[r][c_par];
            if (com.empty()) row_error(t, r, "empty company_id");
            if (par.empty() || par == com) continue;  // root
            auto [it, inserted] = parent.emplace(com, par);
            if (!inserted && it->second != par)
                row_error(t, r, "conflicting parents for " + com + ": " + it->second + " vs " + par);
            row_of.emplace(com, r);
        }

        // Walk each chain to its root; a revisit within one walk is a cycle.
        for (const auto& [com, par] : parent) {
            if (forest.ultimate.count(com)) continue;
            std::vector<std::string> chain;
            std::unordered_set<std::string> on_path;
            std::string cur = com;
            while (true) {
                auto known = forest.ultimate.find(cur);
                if (known != forest.ultimate.end()) {
                    for (const auto& c : chain) forest.ultimate[c] = known->second;
                    break;
                }
                if (!on_path.insert(cur).second) {
                    size_t line = t.line[row_of.at(cur)];
                    throw ParseError(t.path + ":" + std::to_string(line) +
                                     ": ownership cycle through " + cur);
                }
                chain.push_back(cur);
                auto up = parent.find(cur);
                if (up == parent.end()) {
                    for (const auto& c : chain) forest.ultimate[c] = cur;
                    break;
                }
                cur = up->second;
            }
        }
    }

    (void)warnings;
    return {std::move(fin), std::move(forest)};
}

namespace {

MigrantStatus parse_migrant(const CsvTable& t, size_t row, size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) return MigrantStatus::Missing;
    if (s == "native") return MigrantStatus::Native;
    if (s == "immigrant") return MigrantStatus::Immigrant;
    if (s == "descendant") return MigrantStatus::Descendant;
    row_error(t, row, "unknown migrant status '" + s + "'");
}

ClassOrigin parse_class_origin(const CsvTable& t, size_t row, size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) return ClassOrigin::Missing;
    if (s == "employer") return ClassOrigin::Employer;
    if (s == "manager") return ClassOrigin::Manager;
    if (s == "professional") return ClassOrigin::Professional;
    if (s == "other") return ClassOrigin::Other;
    row_error(t, row, "unknown class origin '" + s + "'");
}

}  // namespace

std::vector<DirectorAttributes> parse_directors(const std::string& path) {
    CsvTable t = read_csv(path);
    size_t c_id = t.col("director_id");
    size_t c_name = t.col("name");
    size_t c_addr = t.col("address");
    size_t c_fem = t.col("gender");  // flag, 1 = female
    size_t c_mig = t.col("migrant");
    size_t c_birth = t.col("birth_year");
    size_t c_col = t.col("college");
    size_t c_mas = t.col("master");
    size_t c_inc = t.col("top_income");
    size_t c_wea = t.col("top_wealth");
    size_t c_cls = t.col("class_origin");
    size_t c_ba_c = t.col("ba_leader_cur");
    size_t c_ba_p = t.col("ba_leader_prev");
    size_t c_un_c = t.col("union_leader_cur");
    size_t c_un_p = t.col("union_leader_prev");
    size_t c_po_c = t.col("politician_cur");
    size_t c_po_p = t.col("politician_prev");

    std::vector<DirectorAttributes> out;
    out.reserve(t.rows.size());
    std::unordered_set<std::string> seen;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        DirectorAttributes d;
        d.director_id = t.rows[r][c_id];
        if (d.director_id.empty()) row_error(t, r, "empty director_id");
        if (!seen.insert(d.director_id).second)
            row_error(t, r, "duplicate director_id " + d.director_id);
        d.name = t.rows[r][c_name];
        d.address = t.rows[r][c_addr];
        d.female = parse_bool_field(t, r, c_fem);
        d.migrant = parse_migrant(t, r, c_mig);
        d.birth_year = opt_int(t, r, c_birth);
        d.college = parse_bool_field(t, r, c_col);
        d.master = parse_bool_field(t, r, c_mas);
        d.top_income = parse_bool_field(t, r, c_inc);
        d.top_wealth = parse_bool_field(t, r, c_wea);
        d.class_origin = parse_class_origin(t, r, c_cls);
        d.ba_leader_cur = parse_bool_field(t, r, c_ba_c);
        d.ba_leader_prev = parse_bool_field(t, r, c_ba_p);
        d.union_leader_cur = parse_bool_field(t, r, c_un_c);
        d.union_leader_prev = parse_bool_field(t, r, c_un_p);
        d.politician_cur = parse_bool_field(t, r, c_po_c);
        d.politician_prev = parse_bool_field(t, r, c_po_p);
        d.any_attr_missing = d.migrant == MigrantStatus::Missing || !d.birth_year ||
                             d.class_origin == ClassOrigin::Missing;
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end(), [](const DirectorAttributes& a, const DirectorAttributes& b) {
        return a.director_id < b.director_id;
    });
    return out;
}

std::vector<CommitteeRoster> parse_committees(const std::string& path) {
    CsvTable t = read_csv(path);
    size_t c_id = t.col("committee_id");
    size_t c_kind = t.col("kind");
    size_t c_ws = t.col("window_start");
    size_t c_we = t.col("window_end");
    size_t c_name = t.col("member_name");
    size_t c_addr = t.col("member_address");
    size_t c_dir = t.col("member_director_id");

    std::map<std::string, CommitteeRoster> by_id;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& id = t.rows[r][c_id];
        if (id.empty()) row_error(t, r, "empty committee_id");
        CommitteeKind kind;
        const std::string& ks = t.rows[r][c_kind];
        if (ks == "government") kind = CommitteeKind::Government;
        else if (ks == "business_association") kind = CommitteeKind::BusinessAssociation;
        else row_error(t, r, "unknown committee kind '" + ks + "'");
        auto ws = opt_int(t, r, c_ws);
        auto we = opt_int(t, r, c_we);
        if (!ws || !we) row_error(t, r, "empty committee window");
        if (*we < *ws) row_error(t, r, "window_end precedes window_start");

        auto [it, inserted] = by_id.try_emplace(id);
        CommitteeRoster& ros = it->second;
        if (inserted) {
            ros.committee_id = id;
            ros.kind = kind;
            ros.window_start = *ws;
            ros.window_end = *we;
        } else if (ros.kind != kind || ros.window_start != *ws || ros.window_end != *we) {
            row_error(t, r, "committee " + id + " rows disagree on kind or window");
        }
        CommitteeMember m;
        m.name = t.rows[r][c_name];
        m.address = t.rows[r][c_addr];
        m.director_id = t.rows[r][c_dir];
        if (m.name.empty() && m.director_id.empty())
            row_error(t, r, "member row carries neither name nor director_id");
        ros.members.push_back(std::move(m));
    }

    std::vector<CommitteeRoster> out;
    out.reserve(by_id.size());
    for (auto& [id, ros] : by_id) out.push_back(std::move(ros));
    return out;
}

CommitteeFlags match_committee_members(const std::vector<DirectorAttributes>& directors,
                                       const std::vector<CommitteeRoster>& rosters,
                                       const std::vector<PeriodWindow>& period_map,
                                       Warnings* warnings) {
    CommitteeFlags flags;
    flags.government.resize(period_map.size());
    flags.business.resize(period_map.size());

    std::unordered_set<std::string> known_ids;
    std::unordered_map<std::string, std::vector<const DirectorAttributes*>> by_key;
    for (const auto& d : directors) {
        known_ids.insert(d.director_id);
        if (!d.name.empty()) by_key[person_key(d.name, d.address)].push_back(&d);
    }

    size_t unmatched = 0, ambiguous = 0;
    for (const auto& ros : rosters) {
        std::vector<size_t> periods;
        for (size_t p = 0; p < period_map.size(); ++p) {
            // a roster answers for the windows whose committee years it equals
            if (ros.window_start == period_map[p].committee_start &&
                ros.window_end == period_map[p].committee_end)
                periods.push_back(p);
        }
        if (periods.empty()) {
            warn(warnings, "committee " + ros.committee_id + " window " +
                               std::to_string(ros.window_start) + "-" + std::to_string(ros.window_end) +
                               " matches no observation window; ignored");
            continue;
        }

        for (const auto& m : ros.members) {
            std::string resolved;
            if (!m.director_id.empty()) {
                if (known_ids.count(m.director_id)) {
                    resolved = m.director_id;
                } else {
                    ++unmatched;
                    continue;
                }
            } else {
                auto it = by_key.find(person_key(m.name, m.address));
                if (it == by_key.end()) {
                    ++unmatched;
                    continue;
                }
                if (it->second.size() > 1) {
                    ++ambiguous;
                    continue;
                }
                resolved = it->second.front()->director_id;
            }
            for (size_t p : periods) {
                auto& dest = ros.kind == CommitteeKind::Government ? flags.government[p] : flags.business[p];
                dest.insert(resolved);
            }
        }
    }

    if (warnings && unmatched > 0)
        warn(warnings, "committee members without a registry match: " + std::to_string(unmatched));
    if (warnings && ambiguous > 0)
        warn(warnings, "committee members with ambiguous name/address match: " + std::to_string(ambiguous));
    return flags;
}

}  // namespace boardcore
