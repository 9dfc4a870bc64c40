#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "boardcore/dates.hpp"
#include "boardcore/util.hpp"

namespace boardcore {

enum class Role { Executive, Chair, OrdinaryMember };

std::optional<Role> parse_role(const std::string& token);
std::string to_string(Role r);

struct PositionRecord {
    std::string director_id;
    std::string company_id;
    Role role = Role::OrdinaryMember;
    Date start;
    std::optional<Date> end;  // absent = still active
};

// Indices into the position vector whose interval touches the month.
struct Snapshot {
    MonthIndex month;
    std::vector<std::uint32_t> active;
};

struct FinancialRecord {
    std::string company_id;
    int year = 0;
    std::optional<double> employees;
    std::optional<double> revenue;
    std::optional<double> assets;
    bool is_subsidiary = false;
    bool is_listed = false;
    std::optional<int> founded_year;
    std::optional<int> nace1;
};

struct FinancialTable {
    std::vector<FinancialRecord> rows;
    // (company_id, year) -> row index
    std::unordered_map<std::string, std::uint32_t> index;

    static std::string key(const std::string& company, int year) {
        return company + "\x1f" + std::to_string(year);
    }
    const FinancialRecord* find(const std::string& company, int year) const {
        auto it = index.find(key(company, year));
        return it == index.end() ? nullptr : &rows[it->second];
    }
    std::vector<int> years() const;
    std::vector<FinancialRecord> year_rows(int year) const;
};

// company -> ultimate parent. Roots map to themselves; unknown companies are
// their own parent.
struct GroupForest {
    std::unordered_map<std::string, std::string> ultimate;

    const std::string& parent_of(const std::string& company) const {
        auto it = ultimate.find(company);
        return it == ultimate.end() ? company : it->second;
    }
};

enum class CommitteeKind { Government, BusinessAssociation };

struct CommitteeMember {
    std::string name;
    std::string address;
    std::string director_id;  // empty when only name/address are known
};

struct CommitteeRoster {
    std::string committee_id;
    CommitteeKind kind = CommitteeKind::Government;
    std::vector<CommitteeMember> members;
    int window_start = 0;  // years
    int window_end = 0;
};

enum class MigrantStatus : std::uint8_t { Native = 0, Immigrant = 1, Descendant = 2, Missing = 3 };
enum class ClassOrigin : std::uint8_t { Employer = 0, Manager = 1, Professional = 2, Other = 3, Missing = 4 };

struct DirectorAttributes {
    std::string director_id;
    std::string name;
    std::string address;
    bool female = false;
    MigrantStatus migrant = MigrantStatus::Missing;
    std::optional<int> birth_year;
    bool college = false;
    bool master = false;
    bool top_income = false;
    bool top_wealth = false;
    ClassOrigin class_origin = ClassOrigin::Missing;
    bool ba_leader_cur = false;
    bool ba_leader_prev = false;
    bool union_leader_cur = false;
    bool union_leader_prev = false;
    bool politician_cur = false;
    bool politician_prev = false;
    bool any_attr_missing = false;
};

// One observation window mapped onto the committee collection window whose
// rosters answer for it.
struct PeriodWindow {
    MonthIndex obs_start;
    MonthIndex obs_end;
    int committee_start = 0;  // years
    int committee_end = 0;

    bool contains(MonthIndex m) const { return obs_start <= m && m <= obs_end; }
};

// Per observation window: directors flagged by kind.
struct CommitteeFlags {
    std::vector<std::unordered_set<std::string>> government;
    std::vector<std::unordered_set<std::string>> business;
};

std::vector<PositionRecord> parse_positions(const std::string& path);

Snapshot build_snapshot(const std::vector<PositionRecord>& records, MonthIndex month);

std::pair<FinancialTable, GroupForest> load_company_registry(const std::string& financials_path,
                                                             const std::string& groups_path,
                                                             Warnings* warnings = nullptr);

std::vector<DirectorAttributes> parse_directors(const std::string& path);
std::vector<CommitteeRoster> parse_committees(const std::string& path);

CommitteeFlags match_committee_members(const std::vector<DirectorAttributes>& directors,
                                       const std::vector<CommitteeRoster>& rosters,
                                       const std::vector<PeriodWindow>& period_map,
                                       Warnings* warnings = nullptr);

}  // namespace boardcore
