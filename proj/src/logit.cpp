#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boardcore/parallel.hpp"
#include "boardcore/stats.hpp"

namespace boardcore {

namespace {

constexpr size_t kBlock = 8192;
constexpr double kExtremeP = 1e-10;
constexpr double kDivergedBeta = 30.0;
constexpr double kZ95 = 1.959963984540054;

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapX = Eigen::Map<const RowMat>;

double softplus(double eta) {
    return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

struct PassAcc {
    Eigen::MatrixXd xtwx;
    Eigen::VectorXd xtwz;
    Eigen::VectorXd grad;
    double dev = 0.0;
    double min_p = 1.0, max_p = 0.0;
};

// One sweep at the given beta; combining blocks in order keeps the sums
// bit-identical for any worker count.
PassAcc full_pass(const DesignMatrix& d, const Eigen::VectorXd& beta, int workers) {
    std::uint32_t p = d.p;
    PassAcc zero;
    zero.xtwx = Eigen::MatrixXd::Zero(p, p);
    zero.xtwz = Eigen::VectorXd::Zero(p);
    zero.grad = Eigen::VectorXd::Zero(p);
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), p);

    return block_reduce(
        d.n, kBlock, workers, zero,
        [&](size_t lo, size_t hi) {
            PassAcc a = zero;
            Eigen::Index rows = static_cast<Eigen::Index>(hi - lo);
            auto Xb = X.middleRows(static_cast<Eigen::Index>(lo), rows);
            Eigen::VectorXd eta = Xb * beta;
            Eigen::VectorXd wvec(rows), wz(rows), res(rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                double y = d.y[lo + static_cast<size_t>(r)];
                double pr = sigmoid(eta(r));
                double w = pr * (1.0 - pr);
                a.dev += 2.0 * (softplus(eta(r)) - y * eta(r));
                a.min_p = std::min(a.min_p, pr);
                a.max_p = std::max(a.max_p, pr);
                wvec(r) = w;
                res(r) = y - pr;
                wz(r) = w * eta(r) + res(r);
            }
            a.xtwx.noalias() = Xb.transpose() * wvec.asDiagonal() * Xb;
            a.xtwz.noalias() = Xb.transpose() * wz;
            a.grad.noalias() = Xb.transpose() * res;
            return a;
        },
        [](PassAcc& tot, const PassAcc& part) {
            tot.xtwx += part.xtwx;
            tot.xtwz += part.xtwz;
            tot.grad += part.grad;
            tot.dev += part.dev;
            tot.min_p = std::min(tot.min_p, part.min_p);
            tot.max_p = std::max(tot.max_p, part.max_p);
        });
}

struct DevAcc {
    double dev = 0.0;
    double min_p = 1.0, max_p = 0.0;
};

DevAcc deviance_pass(const DesignMatrix& d, const Eigen::VectorXd& beta, int workers) {
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), d.p);
    return block_reduce(
        d.n, kBlock, workers, DevAcc{},
        [&](size_t lo, size_t hi) {
            DevAcc a;
            Eigen::Index rows = static_cast<Eigen::Index>(hi - lo);
            Eigen::VectorXd eta = X.middleRows(static_cast<Eigen::Index>(lo), rows) * beta;
            for (Eigen::Index r = 0; r < rows; ++r) {
                double y = d.y[lo + static_cast<size_t>(r)];
                double pr = sigmoid(eta(r));
                a.dev += 2.0 * (softplus(eta(r)) - y * eta(r));
                a.min_p = std::min(a.min_p, pr);
                a.max_p = std::max(a.max_p, pr);
            }
            return a;
        },
        [](DevAcc& tot, const DevAcc& part) {
            tot.dev += part.dev;
            tot.min_p = std::min(tot.min_p, part.min_p);
            tot.max_p = std::max(tot.max_p, part.max_p);
        });
}

[[noreturn]] void throw_rank_deficient(const DesignMatrix& d,
                                       const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
    auto perm = qr.colsPermutation().indices();
    std::string names;
    for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
        if (!names.empty()) names += ", ";
        names += "'" + d.cols[static_cast<size_t>(perm(k))].name + "'";
    }
    throw RankDeficientError("design matrix is rank deficient; dependent column(s): " + names);
}

}  // namespace

double FitResult::se_model(std::uint32_t k, std::uint32_t p) const {
    return std::sqrt(cov_model[static_cast<size_t>(k) * p + k]);
}

double FitResult::se_robust(std::uint32_t k, std::uint32_t p) const {
    return std::sqrt(cov_robust[static_cast<size_t>(k) * p + k]);
}

FitResult fit_logistic(const DesignMatrix& d, const FitOptions& opt) {
    std::uint32_t p = d.p;
    if (d.n <= p) throw std::invalid_argument("logistic fit needs more rows than columns");
    for (double v : d.y)
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument("response values must be 0 or 1");

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd ridge = Eigen::MatrixXd::Zero(p, p);
    if (opt.ridge > 0)
        for (std::uint32_t k = 1; k < p; ++k) ridge(k, k) = opt.ridge;  // intercept unpenalized

    FitResult fit;
    double dev_prev = std::numeric_limits<double>::infinity();
    PassAcc pass;
    bool have_pass = false;

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        pass = full_pass(d, beta, opt.workers);
        have_pass = true;
        fit.gradient_max = pass.grad.cwiseAbs().maxCoeff();

        if ((pass.min_p < kExtremeP || pass.max_p > 1.0 - kExtremeP) &&
            beta.cwiseAbs().maxCoeff() > kDivergedBeta)
            throw SeparationError(
                "fitted probabilities reached 0/1 with diverging coefficients; data are separated");

        double rel = std::abs(pass.dev - dev_prev) / (std::abs(pass.dev) + 1e-8);
        if (fit.gradient_max < opt.gradient_tol || rel < opt.deviance_tol) {
            fit.converged = true;
            break;
        }

        Eigen::MatrixXd A = pass.xtwx + ridge;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-12);
        if (iter == 0 && qr.rank() < static_cast<Eigen::Index>(p)) throw_rank_deficient(d, qr);

        Eigen::VectorXd beta_new = qr.solve(pass.xtwz);
        DevAcc trial = deviance_pass(d, beta_new, opt.workers);
        int halvings = 0;
        while (trial.dev > pass.dev + 1e-12 && halvings < 30) {
            beta_new = 0.5 * (beta_new + beta);
            trial = deviance_pass(d, beta_new, opt.workers);
            ++halvings;
        }
        if ((trial.min_p < kExtremeP || trial.max_p > 1.0 - kExtremeP) &&
            beta_new.cwiseAbs().maxCoeff() > kDivergedBeta)
            throw SeparationError(
                "fitted probabilities reached 0/1 with diverging coefficients; data are separated");

        dev_prev = pass.dev;
        beta = beta_new;
        fit.iterations = iter + 1;
    }

    if (!fit.converged) {
        pass = full_pass(d, beta, opt.workers);
        fit.gradient_max = pass.grad.cwiseAbs().maxCoeff();
        if (fit.gradient_max < opt.gradient_tol) fit.converged = true;
    } else if (!have_pass) {
        pass = full_pass(d, beta, opt.workers);
    }

    fit.beta.assign(beta.data(), beta.data() + p);
    fit.ll = -pass.dev / 2.0;

    double ybar = 0;
    for (double v : d.y) ybar += v;
    ybar /= static_cast<double>(d.n);
    fit.ll_null = (ybar > 0 && ybar < 1)
                      ? static_cast<double>(d.n) *
                            (ybar * std::log(ybar) + (1 - ybar) * std::log(1 - ybar))
                      : 0.0;

    Eigen::MatrixXd H = pass.xtwx + ridge;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(H);
    qr.setThreshold(1e-12);
    if (qr.rank() < static_cast<Eigen::Index>(p)) throw_rank_deficient(d, qr);
    Eigen::MatrixXd Hinv = qr.inverse();
    // symmetrize against QR round-off
    Hinv = 0.5 * (Hinv + Hinv.transpose()).eval();
    fit.cov_model.assign(Hinv.data(), Hinv.data() + static_cast<size_t>(p) * p);
    fit.cov_robust = robust_covariance(fit, d, opt.workers);
    return fit;
}

std::vector<double> robust_covariance(const FitResult& fit, const DesignMatrix& d, int workers) {
    std::uint32_t p = d.p;
    if (fit.cov_model.size() != static_cast<size_t>(p) * p)
        throw std::invalid_argument("fit does not match design");
    Eigen::Map<const Eigen::VectorXd> beta(fit.beta.data(), p);
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), p);

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
    if (d.cluster.empty()) {
        meat = block_reduce(
            d.n, kBlock, workers, Eigen::MatrixXd(Eigen::MatrixXd::Zero(p, p)),
            [&](size_t lo, size_t hi) {
                Eigen::Index rows = static_cast<Eigen::Index>(hi - lo);
                auto Xb = X.middleRows(static_cast<Eigen::Index>(lo), rows);
                Eigen::VectorXd eta = Xb * beta;
                Eigen::VectorXd res(rows);
                for (Eigen::Index r = 0; r < rows; ++r)
                    res(r) = d.y[lo + static_cast<size_t>(r)] - sigmoid(eta(r));
                Eigen::MatrixXd m(p, p);
                m.noalias() = Xb.transpose() * res.cwiseAbs2().asDiagonal() * Xb;
                return m;
            },
            [](Eigen::MatrixXd& tot, const Eigen::MatrixXd& part) { tot += part; });
    } else {
        // per-cluster score sums, accumulated in row order
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(p, d.n_clusters);
        Eigen::VectorXd eta = X * beta;
        for (std::uint64_t i = 0; i < d.n; ++i) {
            double res = d.y[i] - sigmoid(eta(static_cast<Eigen::Index>(i)));
            sums.col(d.cluster[i]) +=
                res * X.row(static_cast<Eigen::Index>(i)).transpose();
        }
        meat.noalias() = sums * sums.transpose();
    }

    Eigen::Map<const Eigen::MatrixXd> Hinv(fit.cov_model.data(), p, p);
    Eigen::MatrixXd V = Hinv * meat * Hinv;
    V = 0.5 * (V + V.transpose()).eval();
    return std::vector<double>(V.data(), V.data() + static_cast<size_t>(p) * p);
}

namespace {

// Column value with selected variables overridden; factor lists are tiny.
double eval_col_cf(const PanelTable& P, const DesignColumn& col, std::uint64_t row,
                   const std::vector<std::pair<std::uint32_t, double>>& num_over,
                   const std::vector<std::pair<std::uint32_t, int>>& code_over) {
    double prod = 1.0;
    for (const DesignFactor& f : col.factors) {
        double val;
        if (f.level < 0) {
            val = P.numeric[f.var][row];
            for (const auto& [v, x] : num_over)
                if (v == f.var) val = x;
        } else {
            int code = P.codes[f.var][row];
            for (const auto& [v, c] : code_over)
                if (v == f.var) code = c;
            val = code == f.level ? 1.0 : 0.0;
        }
        prod *= val;
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

bool col_uses(const DesignColumn& col, std::uint32_t var) {
    for (const DesignFactor& f : col.factors)
        if (f.var == var) return true;
    return false;
}

struct CfAcc {
    double sum = 0.0;           // Σ (p1 - p0)  or Σ mean-effect terms
    Eigen::VectorXd grad;       // Σ per-row gradient contribution
};

// Discrete contrast: variables forced to "hi" vs "lo" state. Returns the
// mean probability difference and the delta-method gradient.
std::pair<double, Eigen::VectorXd> discrete_contrast(
    const DesignMatrix& d, const Eigen::VectorXd& beta,
    const std::vector<std::pair<std::uint32_t, double>>& num_hi,
    const std::vector<std::pair<std::uint32_t, int>>& code_hi,
    const std::vector<std::pair<std::uint32_t, double>>& num_lo,
    const std::vector<std::pair<std::uint32_t, int>>& code_lo, int workers) {
    const PanelTable& P = *d.panel;
    std::uint32_t p = d.p;
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), p);

    // columns touched by any overridden variable
    std::vector<std::uint32_t> affected;
    for (std::uint32_t c = 0; c < p; ++c) {
        bool hit = false;
        for (const auto& [v, x] : num_hi) hit = hit || col_uses(d.cols[c], v);
        for (const auto& [v, x] : code_hi) hit = hit || col_uses(d.cols[c], v);
        for (const auto& [v, x] : num_lo) hit = hit || col_uses(d.cols[c], v);
        for (const auto& [v, x] : code_lo) hit = hit || col_uses(d.cols[c], v);
        if (hit) affected.push_back(c);
    }

    CfAcc zero;
    zero.grad = Eigen::VectorXd::Zero(p);
    CfAcc acc = block_reduce(
        d.n, kBlock, workers, zero,
        [&](size_t lo_row, size_t hi_row) {
            CfAcc a = zero;
            Eigen::Index rows = static_cast<Eigen::Index>(hi_row - lo_row);
            auto Xb = X.middleRows(static_cast<Eigen::Index>(lo_row), rows);
            Eigen::VectorXd eta = Xb * beta;
            std::vector<double> x_hi(affected.size()), x_lo(affected.size());
            for (Eigen::Index r = 0; r < rows; ++r) {
                std::uint64_t row = lo_row + static_cast<size_t>(r);
                double eta_hi = eta(r), eta_lo = eta(r);
                for (size_t k = 0; k < affected.size(); ++k) {
                    std::uint32_t c = affected[k];
                    x_hi[k] = eval_col_cf(P, d.cols[c], row, num_hi, code_hi);
                    x_lo[k] = eval_col_cf(P, d.cols[c], row, num_lo, code_lo);
                    eta_hi += beta(c) * (x_hi[k] - d.at(row, c));
                    eta_lo += beta(c) * (x_lo[k] - d.at(row, c));
                }
                double p1 = sigmoid(eta_hi), p0 = sigmoid(eta_lo);
                double w1 = p1 * (1 - p1), w0 = p0 * (1 - p0);
                a.sum += p1 - p0;
                // gradient: w1·x(hi) − w0·x(lo), stored x except affected cols
                a.grad += (w1 - w0) * Xb.row(r).transpose();
                for (size_t k = 0; k < affected.size(); ++k) {
                    std::uint32_t c = affected[k];
                    a.grad(c) += w1 * (x_hi[k] - d.at(row, c)) - w0 * (x_lo[k] - d.at(row, c));
                }
            }
            return a;
        },
        [](CfAcc& tot, const CfAcc& part) {
            tot.sum += part.sum;
            tot.grad += part.grad;
        });

    double inv_n = 1.0 / static_cast<double>(d.n);
    return {acc.sum * inv_n, acc.grad * inv_n};
}

// Mean p(1−p)·dη/dv for continuous v plus its delta-method gradient.
std::pair<double, Eigen::VectorXd> continuous_ame(const DesignMatrix& d,
                                                  const Eigen::VectorXd& beta, std::uint32_t var,
                                                  int workers) {
    const PanelTable& P = *d.panel;
    std::uint32_t p = d.p;
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), p);

    // columns where var enters as a numeric factor
    std::vector<std::uint32_t> touched;
    for (std::uint32_t c = 0; c < p; ++c)
        for (const DesignFactor& f : d.cols[c].factors)
            if (f.var == var && f.level < 0) {
                touched.push_back(c);
                break;
            }

    CfAcc zero;
    zero.grad = Eigen::VectorXd::Zero(p);
    CfAcc acc = block_reduce(
        d.n, kBlock, workers, zero,
        [&](size_t lo_row, size_t hi_row) {
            CfAcc a = zero;
            Eigen::Index rows = static_cast<Eigen::Index>(hi_row - lo_row);
            auto Xb = X.middleRows(static_cast<Eigen::Index>(lo_row), rows);
            Eigen::VectorXd eta = Xb * beta;
            for (Eigen::Index r = 0; r < rows; ++r) {
                std::uint64_t row = lo_row + static_cast<size_t>(r);
                double pr = sigmoid(eta(r));
                double w = pr * (1 - pr);
                // dη/dv and per-column dx/dv
                double slope = 0.0;
                std::vector<double> dx(touched.size(), 0.0);
                for (size_t k = 0; k < touched.size(); ++k) {
                    const DesignColumn& col = d.cols[touched[k]];
                    double prod = 1.0;
                    for (const DesignFactor& f : col.factors) {
                        if (f.var == var && f.level < 0) continue;  // differentiated factor
                        prod *= f.level < 0 ? P.numeric[f.var][row]
                                            : (P.codes[f.var][row] == f.level ? 1.0 : 0.0);
                    }
                    dx[k] = prod;
                    slope += beta(touched[k]) * prod;
                }
                a.sum += w * slope;
                a.grad += w * (1 - 2 * pr) * slope * Xb.row(r).transpose();
                for (size_t k = 0; k < touched.size(); ++k) a.grad(touched[k]) += w * dx[k];
            }
            return a;
        },
        [](CfAcc& tot, const CfAcc& part) {
            tot.sum += part.sum;
            tot.grad += part.grad;
        });

    double inv_n = 1.0 / static_cast<double>(d.n);
    return {acc.sum * inv_n, acc.grad * inv_n};
}

double delta_se(const Eigen::VectorXd& grad, const std::vector<double>& cov, std::uint32_t p) {
    Eigen::Map<const Eigen::MatrixXd> V(cov.data(), p, p);
    double var = grad.dot(V * grad);
    return var > 0 ? std::sqrt(var) : 0.0;
}

// Mean σ(η) with the given variables overridden in every row.
double mean_probability(const DesignMatrix& d, const Eigen::VectorXd& beta,
                        const std::vector<std::pair<std::uint32_t, double>>& num_over,
                        const std::vector<std::pair<std::uint32_t, int>>& code_over, int workers) {
    const PanelTable& P = *d.panel;
    std::uint32_t p = d.p;
    MapX X(d.x.data(), static_cast<Eigen::Index>(d.n), p);

    std::vector<std::uint32_t> affected;
    for (std::uint32_t c = 0; c < p; ++c) {
        bool hit = false;
        for (const auto& [v, x] : num_over) hit = hit || col_uses(d.cols[c], v);
        for (const auto& [v, x] : code_over) hit = hit || col_uses(d.cols[c], v);
        if (hit) affected.push_back(c);
    }

    double total = block_reduce(
        d.n, kBlock, workers, 0.0,
        [&](size_t lo_row, size_t hi_row) {
            double s = 0.0;
            Eigen::Index rows = static_cast<Eigen::Index>(hi_row - lo_row);
            Eigen::VectorXd eta = X.middleRows(static_cast<Eigen::Index>(lo_row), rows) * beta;
            for (Eigen::Index r = 0; r < rows; ++r) {
                std::uint64_t row = lo_row + static_cast<size_t>(r);
                double e = eta(r);
                for (std::uint32_t c : affected)
                    e += beta(c) * (eval_col_cf(P, d.cols[c], row, num_over, code_over) -
                                    d.at(row, c));
                s += sigmoid(e);
            }
            return s;
        },
        [](double& tot, const double& part) { tot += part; });
    return total / static_cast<double>(d.n);
}

}  // namespace

AmeTable average_marginal_effects(const FitResult& fit, const DesignMatrix& d, int workers) {
    const PanelTable& P = *d.panel;
    std::uint32_t p = d.p;
    Eigen::Map<const Eigen::VectorXd> beta(fit.beta.data(), p);
    const std::vector<double>& V = fit.cov_robust.empty() ? fit.cov_model : fit.cov_robust;

    // base variables in catalog order
    std::vector<std::uint32_t> used;
    for (std::uint32_t v = 0; v < P.vars.size(); ++v) {
        bool hit = false;
        for (const DesignColumn& col : d.cols) hit = hit || col_uses(col, v);
        if (hit) used.push_back(v);
    }

    AmeTable t;
    for (std::uint32_t v : used) {
        const Variable& var = P.vars[v];
        if (var.kind == VarKind::Continuous) {
            auto [est, grad] = continuous_ame(d, beta, v, workers);
            AmeRow row{var.name, "", est, delta_se(grad, V, p), 0, 0};
            row.ci_lo = row.estimate - kZ95 * row.se;
            row.ci_hi = row.estimate + kZ95 * row.se;
            t.rows.push_back(row);
        } else if (var.kind == VarKind::Binary) {
            auto [est, grad] = discrete_contrast(d, beta, {{v, 1.0}}, {}, {{v, 0.0}}, {}, workers);
            AmeRow row{var.name, "1", est, delta_se(grad, V, p), 0, 0};
            row.ci_lo = row.estimate - kZ95 * row.se;
            row.ci_hi = row.estimate + kZ95 * row.se;
            t.rows.push_back(row);
        } else {
            int ref = d.var_ref.empty() ? var.ref : d.var_ref[v];
            for (int lv = 0; lv < static_cast<int>(var.levels.size()); ++lv) {
                if (lv == ref) continue;
                auto [est, grad] =
                    discrete_contrast(d, beta, {}, {{v, lv}}, {}, {{v, ref}}, workers);
                AmeRow row{var.name, var.levels[static_cast<size_t>(lv)], est,
                           delta_se(grad, V, p), 0, 0};
                row.ci_lo = row.estimate - kZ95 * row.se;
                row.ci_hi = row.estimate + kZ95 * row.se;
                t.rows.push_back(row);
            }
        }
    }
    return t;
}

double mcfadden_pseudo_r2(const FitResult& fit) {
    if (fit.ll_null == 0.0)
        throw std::domain_error("null log-likelihood is zero; response is degenerate");
    return 1.0 - fit.ll / fit.ll_null;
}

std::vector<ProfileRow> profile_effects(const FitResult& fit, const DesignMatrix& d,
                                        const ProfileSpec& spec, int workers) {
    const PanelTable& P = *d.panel;
    std::uint32_t p = d.p;
    Eigen::Map<const Eigen::VectorXd> beta(fit.beta.data(), p);
    const std::vector<double>& V = fit.cov_robust.empty() ? fit.cov_model : fit.cov_robust;
    if (spec.values.empty()) throw std::invalid_argument("profile grid is empty");

    std::uint32_t gv = P.var(spec.var);
    if (P.vars[gv].kind == VarKind::Categorical)
        throw std::invalid_argument("grid variable '" + spec.var + "' is categorical");
    bool in_model = false;
    for (const DesignColumn& col : d.cols) in_model = in_model || col_uses(col, gv);
    if (!in_model)
        throw std::invalid_argument("grid variable '" + spec.var + "' is not in the model");

    std::vector<std::uint32_t> by_vars;
    for (const std::string& name : spec.by) {
        std::uint32_t v = P.var(name);
        if (P.vars[v].kind != VarKind::Categorical)
            throw std::invalid_argument("profile group variable '" + name + "' is not categorical");
        bool used = false;
        for (const DesignColumn& col : d.cols) used = used || col_uses(col, v);
        if (!used)
            throw std::invalid_argument("profile group variable '" + name + "' is not in the model");
        by_vars.push_back(v);
    }

    // cartesian product over group levels
    std::vector<std::vector<int>> combos{{}};
    for (std::uint32_t v : by_vars) {
        std::vector<std::vector<int>> next;
        for (const auto& prefix : combos)
            for (int lv = 0; lv < static_cast<int>(P.vars[v].levels.size()); ++lv) {
                auto c = prefix;
                c.push_back(lv);
                next.push_back(std::move(c));
            }
        combos = std::move(next);
    }

    std::vector<ProfileRow> out;
    for (const auto& combo : combos) {
        std::vector<std::pair<std::uint32_t, int>> codes;
        std::string group;
        for (size_t k = 0; k < by_vars.size(); ++k) {
            codes.push_back({by_vars[k], combo[k]});
            if (!group.empty()) group += ";";
            group += P.vars[by_vars[k]].name + "=" +
                     P.vars[by_vars[k]].levels[static_cast<size_t>(combo[k])];
        }

        double base_value = spec.values.front();
        for (double value : spec.values) {
            auto [change, grad] = discrete_contrast(d, beta, {{gv, value}}, codes,
                                                    {{gv, base_value}}, codes, workers);
            ProfileRow row;
            row.group = group;
            row.value = value;
            row.mean_p = mean_probability(d, beta, {{gv, value}}, codes, workers);
            row.change = change;
            row.se = delta_se(grad, V, p);
            row.ci_lo = row.change - kZ95 * row.se;
            row.ci_hi = row.change + kZ95 * row.se;
            out.push_back(row);
        }
    }
    return out;
}

}  // namespace boardcore
