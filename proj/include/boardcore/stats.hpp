#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "boardcore/dates.hpp"
#include "boardcore/ingest.hpp"
#include "boardcore/kcore.hpp"
#include "boardcore/ranking.hpp"
#include "boardcore/rational.hpp"
#include "boardcore/util.hpp"

namespace boardcore {

enum class VarKind : std::uint8_t { Continuous, Binary, Categorical };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Binary;
    std::vector<std::string> levels;  // categorical only
    std::uint8_t ref = 0;             // index into levels

    std::int64_t level_of(const std::string& label) const;
};

// Column store, one row per director-month. Binary and continuous variables
// live in `numeric`, categorical codes in `codes`.
struct PanelTable {
    std::vector<Variable> vars;
    std::unordered_map<std::string, std::uint32_t> var_index;
    std::uint64_t n = 0;
    std::vector<std::string> director_ids;
    std::vector<MonthIndex> months;
    std::vector<std::vector<double>> numeric;
    std::vector<std::vector<std::uint8_t>> codes;

    std::uint32_t var(const std::string& name) const;
    void reserve(std::uint64_t rows);
};

// The fixed variable catalog every panel uses; var order is the panel.csv
// column order.
PanelTable make_panel_table();

struct MonthArtifacts {
    MonthIndex month;
    std::vector<std::string> lc_ids;        // sorted
    std::vector<std::string> survivor_ids;  // sorted
    const CorenessTable* coreness = nullptr;
    const std::vector<Rat>* std_coreness = nullptr;  // parallel to coreness->ids
    const std::vector<DirectorRankProfile>* profiles = nullptr;  // all active directors
};

struct PanelQuality {
    std::uint64_t rows = 0;
    std::uint64_t missing_director_attributes = 0;
    std::uint64_t missing_company_record = 0;
    std::uint64_t missing_birth_year = 0;
    std::uint64_t rows_outside_period_map = 0;
};

PanelTable assemble_panel(const std::vector<MonthArtifacts>& months,
                          const std::vector<DirectorAttributes>& directors,
                          const CommitteeFlags& committee_flags,
                          const std::vector<PeriodWindow>& period_map, const FinancialTable& fin,
                          PanelQuality* quality = nullptr);

struct ModelSpec {
    std::string response = "committee";
    std::vector<std::string> terms;  // "elite", "coreness:company_rank", "a*b" expands
    std::unordered_map<std::string, std::string> references;
    std::string cluster;  // "" or "director"
    double ridge = 0.0;

    static ModelSpec from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct DesignFactor {
    std::uint32_t var = 0;
    int level = -1;  // -1 reads numeric, otherwise a categorical level code
};

struct DesignColumn {
    std::string name;
    std::vector<DesignFactor> factors;  // empty = intercept
};

struct DesignMatrix {
    const PanelTable* panel = nullptr;
    std::uint64_t n = 0;
    std::uint32_t p = 0;
    std::vector<double> x;  // row-major
    std::vector<double> y;
    std::vector<DesignColumn> cols;
    std::vector<std::uint8_t> var_ref;   // reference level actually used, per panel var
    std::vector<std::uint32_t> cluster;  // per row when clustering, else empty
    std::uint32_t n_clusters = 0;

    double at(std::uint64_t row, std::uint32_t col) const { return x[row * p + col]; }
};

DesignMatrix encode_design(const PanelTable& panel, const ModelSpec& spec,
                           Warnings* warnings = nullptr);

struct FitOptions {
    int max_iter = 100;
    double deviance_tol = 1e-10;
    double gradient_tol = 1e-8;
    double ridge = 0.0;
    int workers = 1;
};

struct FitResult {
    std::vector<double> beta;
    std::vector<double> cov_model;   // p*p row-major, inverse observed information
    std::vector<double> cov_robust;  // filled by robust_covariance
    double ll = 0.0;
    double ll_null = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_max = 0.0;

    double se_model(std::uint32_t k, std::uint32_t p) const;
    double se_robust(std::uint32_t k, std::uint32_t p) const;
};

FitResult fit_logistic(const DesignMatrix& d, const FitOptions& opt = {});

// Sandwich covariance; scores summed per cluster when d carries cluster ids.
std::vector<double> robust_covariance(const FitResult& fit, const DesignMatrix& d, int workers = 1);

struct AmeRow {
    std::string variable;
    std::string level;  // "" for continuous, "1" for binary, level label otherwise
    double estimate = 0.0;
    double se = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct AmeTable {
    std::vector<AmeRow> rows;
};

AmeTable average_marginal_effects(const FitResult& fit, const DesignMatrix& d, int workers = 1);

double mcfadden_pseudo_r2(const FitResult& fit);

struct ProfileSpec {
    std::string var = "coreness";
    std::vector<double> values = {0.0, 0.25, 0.5, 0.75, 1.0};  // first value is the baseline
    std::vector<std::string> by = {"company_rank"};
};

struct ProfileRow {
    std::string group;  // "company_rank=top50" (";"-joined for several by-vars)
    double value = 0.0;
    double mean_p = 0.0;
    double change = 0.0;  // vs the baseline grid value within the group
    double se = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

std::vector<ProfileRow> profile_effects(const FitResult& fit, const DesignMatrix& d,
                                        const ProfileSpec& spec, int workers = 1);

struct EnrichmentRow {
    std::string flag;
    double bin_lo = 0.0;
    double bin_hi = 0.0;
    double ratio = 0.0;      // mean over months of in-bin share / broker-wide share
    std::uint32_t months = 0;
    std::uint64_t rows = 0;
};

// Flags: committee, bus_committee, interest_leader; brokers only.
std::vector<EnrichmentRow> coreness_concentration_report(const PanelTable& panel, int bins = 10);

}  // namespace boardcore
