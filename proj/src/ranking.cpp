#include "boardcore/ranking.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace boardcore {

RankCategory rank_category(std::uint32_t rank, const RankCutoffs& cutoffs) {
    if (rank == 0) return RankCategory::Beyond5000;
    if (rank <= cutoffs.top) return RankCategory::Top1_50;
    if (rank <= cutoffs.mid) return RankCategory::Top51_500;
    if (rank <= cutoffs.broad) return RankCategory::Top501_5000;
    return RankCategory::Beyond5000;
}

std::string to_string(RankCategory c) {
    switch (c) {
        case RankCategory::Top1_50: return "top50";
        case RankCategory::Top51_500: return "top500";
        case RankCategory::Top501_5000: return "top5000";
        case RankCategory::Beyond5000: return "beyond5000";
    }
    return "?";
}

namespace {

struct Indicators {
    std::vector<std::string> ids;
    // column-major: [ids.size()] per indicator
    std::vector<double> cols[3];
    std::vector<std::uint8_t> missing[3];
};

constexpr const char* kIndicatorName[3] = {"employees", "revenue", "assets"};

RankTable rank_indicators(Indicators ind, int year, const RankOptions& opt, Warnings* warnings) {
    size_t n = ind.ids.size();

    if (opt.impute == Impute::Drop) {
        std::vector<size_t> keep;
        for (size_t i = 0; i < n; ++i)
            if (!ind.missing[0][i] && !ind.missing[1][i] && !ind.missing[2][i]) keep.push_back(i);
        if (keep.size() != n) {
            Indicators f;
            for (size_t i : keep) {
                f.ids.push_back(std::move(ind.ids[i]));
                for (int k = 0; k < 3; ++k) {
                    f.cols[k].push_back(ind.cols[k][i]);
                    f.missing[k].push_back(0);
                }
            }
            ind = std::move(f);
            n = ind.ids.size();
        }
    } else {
        for (int k = 0; k < 3; ++k)
            for (size_t i = 0; i < n; ++i)
                if (ind.missing[k][i]) ind.cols[k][i] = 0.0;
    }
    if (n < 3) throw std::invalid_argument("need at least 3 rankable companies for year " +
                                           std::to_string(year));

    if (opt.log1p_transform)
        for (int k = 0; k < 3; ++k)
            for (double& v : ind.cols[k]) v = std::log1p(v);

    // z-score; flat indicators drop out
    std::vector<int> live;
    Eigen::MatrixXd z(n, 3);
    for (int k = 0; k < 3; ++k) {
        double mean = 0;
        for (double v : ind.cols[k]) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0;
        for (double v : ind.cols[k]) ss += (v - mean) * (v - mean);
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd <= 0) {
            warn(warnings, std::string(kIndicatorName[k]) + " has zero variance in " +
                               std::to_string(year) + "; dropped from the rank index");
            continue;
        }
        int col = static_cast<int>(live.size());
        for (size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i), col) = (ind.cols[k][i] - mean) / sd;
        live.push_back(k);
    }
    if (live.empty())
        throw std::invalid_argument("all size indicators have zero variance in " + std::to_string(year));

    int p = static_cast<int>(live.size());
    Eigen::VectorXd score(n);
    double share = 1.0;
    if (p == 1) {
        score = z.col(0);
    } else if (p == 2) {
        // 2x2 correlation: lead eigenpair is closed-form in the off-diagonal
        double rho = z.col(0).dot(z.col(1)) / static_cast<double>(n - 1);
        Eigen::Vector2d v = rho >= 0 ? Eigen::Vector2d(1, 1) : Eigen::Vector2d(1, -1);
        v /= std::sqrt(2.0);
        if (v.sum() < 0 || (v.sum() == 0 && v(0) < 0)) v = -v;
        score = z.leftCols(2) * v;
        share = (1.0 + std::abs(rho)) / 2.0;
    } else {
        Eigen::Matrix3d corr = z.transpose() * z / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
        es.computeDirect(corr);  // closed-form, eigenvalues ascending
        Eigen::Vector3d v = es.eigenvectors().col(2);
        if (v.sum() < 0 || (v.sum() == 0 && v(0) < 0)) v = -v;
        score = z * v;
        share = es.eigenvalues()(2) / 3.0;
    }

    std::vector<std::uint32_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (score(a) != score(b)) return score(a) > score(b);
        return ind.ids[a] < ind.ids[b];
    });

    RankTable rt;
    rt.year = year;
    rt.explained_share = share;
    rt.entity_ids.reserve(n);
    rt.pc1.reserve(n);
    for (size_t k = 0; k < n; ++k) {
        rt.entity_ids.push_back(ind.ids[order[k]]);
        rt.pc1.push_back(score(order[k]));
        rt.rank_of.emplace(ind.ids[order[k]], static_cast<std::uint32_t>(k + 1));
    }
    return rt;
}

}  // namespace

RankTable pca_company_rank(const FinancialTable& fin, int year, const RankOptions& opt,
                           Warnings* warnings) {
    Indicators ind;
    for (const FinancialRecord& r : fin.year_rows(year)) {
        ind.ids.push_back(r.company_id);
        const std::optional<double>* vals[3] = {&r.employees, &r.revenue, &r.assets};
        for (int k = 0; k < 3; ++k) {
            ind.cols[k].push_back(vals[k]->value_or(0.0));
            ind.missing[k].push_back(vals[k]->has_value() ? 0 : 1);
        }
    }
    return rank_indicators(std::move(ind), year, opt, warnings);
}

RankTable corporation_rank(const FinancialTable& fin, int year, const GroupForest& groups,
                           const RankOptions& opt, Warnings* warnings) {
    struct Agg {
        double v[3] = {0, 0, 0};
        bool seen[3] = {false, false, false};
        std::vector<std::string> members;
    };
    std::map<std::string, Agg> by_parent;  // ordered for determinism
    for (const FinancialRecord& r : fin.year_rows(year)) {
        Agg& a = by_parent[groups.parent_of(r.company_id)];
        const std::optional<double>* vals[3] = {&r.employees, &r.revenue, &r.assets};
        for (int k = 0; k < 3; ++k)
            if (vals[k]->has_value()) {
                a.v[k] += **vals[k];
                a.seen[k] = true;
            }
        a.members.push_back(r.company_id);
    }

    Indicators ind;
    for (auto& [parent, a] : by_parent) {
        ind.ids.push_back(parent);
        for (int k = 0; k < 3; ++k) {
            ind.cols[k].push_back(a.v[k]);
            ind.missing[k].push_back(a.seen[k] ? 0 : 1);
        }
    }
    RankTable rt = rank_indicators(std::move(ind), year, opt, warnings);

    for (auto& [parent, a] : by_parent) {
        auto it = rt.rank_of.find(parent);
        if (it == rt.rank_of.end()) continue;  // dropped under Impute::Drop
        for (const std::string& member : a.members) rt.rank_of.emplace(member, it->second);
    }
    return rt;
}

std::vector<DirectorRankProfile> director_rank_profiles(const std::vector<PositionRecord>& records,
                                                        const Snapshot& snapshot,
                                                        const RankTable& company_ranks,
                                                        const RankTable& corp_ranks,
                                                        const GroupForest& groups,
                                                        const RankCutoffs& cutoffs) {
    struct Seat {
        std::string company;
        Role role;
    };
    std::map<std::string, std::vector<Seat>> seats;
    for (std::uint32_t idx : snapshot.active)
        seats[records[idx].director_id].push_back({records[idx].company_id, records[idx].role});

    std::vector<DirectorRankProfile> out;
    out.reserve(seats.size());
    for (auto& [dir, list] : seats) {
        DirectorRankProfile p;
        p.director_id = dir;
        p.month = snapshot.month;

        std::set<std::string> companies;
        std::set<std::string> top50_companies, top500_companies;
        std::set<std::string> top50_parents, top500_parents;
        std::map<std::string, std::set<std::string>> members_by_top50_parent, members_by_top500_parent;

        for (const Seat& s : list) {
            companies.insert(s.company);
            std::uint32_t cr = company_ranks.rank(s.company);
            if (cr != 0 && (p.best_company_rank == 0 || cr < p.best_company_rank)) {
                p.best_company_rank = cr;
                p.best_company_id = s.company;
            }
            const std::string& parent = groups.parent_of(s.company);
            std::uint32_t gr = corp_ranks.rank(parent);
            if (gr != 0 && (p.best_corp_rank == 0 || gr < p.best_corp_rank)) p.best_corp_rank = gr;

            if (cr != 0 && cr <= cutoffs.top) {
                top50_companies.insert(s.company);
                if (s.role == Role::Executive) p.top50_executive = true;
                if (s.role == Role::Chair) p.top50_chair = true;
            }
            if (cr != 0 && cr <= cutoffs.mid) {
                top500_companies.insert(s.company);
                if (s.role == Role::Executive) p.top500_executive = true;
                if (s.role == Role::Chair) p.top500_chair = true;
            }
            if (gr != 0 && gr <= cutoffs.top) {
                top50_parents.insert(parent);
                members_by_top50_parent[parent].insert(s.company);
            }
            if (gr != 0 && gr <= cutoffs.mid) {
                top500_parents.insert(parent);
                members_by_top500_parent[parent].insert(s.company);
            }
        }

        p.board_count = static_cast<std::uint32_t>(companies.size());
        if (p.best_company_id.empty()) p.best_company_id = *companies.begin();
        p.company_cat = rank_category(p.best_company_rank, cutoffs);
        p.corp_cat = rank_category(p.best_corp_rank, cutoffs);
        p.top50_linker = top50_companies.size() >= 2;
        p.top500_linker = top500_companies.size() >= 2;
        p.top50_corp_linker_across = top50_parents.size() >= 2;
        p.top500_corp_linker_across = top500_parents.size() >= 2;
        for (auto& [parent, members] : members_by_top50_parent)
            if (members.size() >= 2) p.top50_corp_linker_within = true;
        for (auto& [parent, members] : members_by_top500_parent)
            if (members.size() >= 2) p.top500_corp_linker_within = true;

        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ConcentrationPoint> concentration_curve(const RankTable& ranks, const FinancialTable& fin,
                                                    Warnings* warnings) {
    size_t n = ranks.entity_ids.size();
    std::vector<ConcentrationPoint> out(n);
    double total[3] = {0, 0, 0};
    std::vector<double> vals[3];
    for (int k = 0; k < 3; ++k) vals[k].assign(n, 0.0);

    for (size_t i = 0; i < n; ++i) {
        const FinancialRecord* r = fin.find(ranks.entity_ids[i], ranks.year);
        if (!r) continue;
        const std::optional<double>* f[3] = {&r->employees, &r->revenue, &r->assets};
        for (int k = 0; k < 3; ++k) {
            vals[k][i] = f[k]->value_or(0.0);
            total[k] += vals[k][i];
        }
    }
    for (int k = 0; k < 3; ++k)
        if (total[k] <= 0)
            warn(warnings, std::string(kIndicatorName[k]) + " total is zero; concentration series flat");

    double run[3] = {0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) run[k] += vals[k][i];
        out[i].rank = static_cast<std::uint32_t>(i + 1);
        out[i].cum_employees = total[0] > 0 ? run[0] / total[0] : 0.0;
        out[i].cum_revenue = total[1] > 0 ? run[1] / total[1] : 0.0;
        out[i].cum_assets = total[2] > 0 ? run[2] / total[2] : 0.0;
    }
    return out;
}

}  // namespace boardcore
