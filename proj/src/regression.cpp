#include "lonkit/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "lonkit/distributions.hpp"

namespace lonkit {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

RankDeficientError::RankDeficientError(std::vector<std::string> cols)
    : RegressionError("design matrix is rank deficient; collinear columns: " + join(cols, ", ")),
      columns(std::move(cols)) {}

void Dataset::check_length(const std::string& name, std::size_t n) {
    if (has(name)) throw RegressionError("duplicate column '" + name + "'");
    if (empty_) {
        rows_ = n;
        empty_ = false;
    } else if (n != rows_) {
        throw RegressionError("column '" + name + "' has " + std::to_string(n) + " rows, expected " +
                              std::to_string(rows_));
    }
    order_.push_back(name);
}

void Dataset::add_numeric(const std::string& name, std::vector<double> values) {
    check_length(name, values.size());
    numeric_[name] = std::move(values);
}

void Dataset::add_factor(const std::string& name, std::vector<int> levels) {
    check_length(name, levels.size());
    factors_[name] = std::move(levels);
}

std::string Dataset::add_log(const std::string& source) {
    const auto& src = numeric(source);
    std::vector<double> out(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        out[i] = src[i] > 0.0 ? std::log(src[i]) : std::numeric_limits<double>::quiet_NaN();
    }
    const std::string name = "log(" + source + ")";
    add_numeric(name, std::move(out));
    transforms_[name] = source;
    return name;
}

bool Dataset::has(const std::string& name) const { return numeric_.count(name) || factors_.count(name); }

const std::vector<double>& Dataset::numeric(const std::string& name) const {
    const auto it = numeric_.find(name);
    if (it == numeric_.end()) throw RegressionError("no numeric column '" + name + "'");
    return it->second;
}

const std::vector<int>& Dataset::factor(const std::string& name) const {
    const auto it = factors_.find(name);
    if (it == factors_.end()) throw RegressionError("no factor column '" + name + "'");
    return it->second;
}

Dataset Dataset::select(const std::vector<std::size_t>& rows) const {
    Dataset out;
    for (const auto& name : order_) {
        if (const auto it = numeric_.find(name); it != numeric_.end()) {
            std::vector<double> v;
            for (auto r : rows) v.push_back(it->second.at(r));
            out.add_numeric(name, std::move(v));
        } else {
            std::vector<int> v;
            for (auto r : rows) v.push_back(factors_.at(name).at(r));
            out.add_factor(name, std::move(v));
        }
    }
    out.transforms_ = transforms_;
    return out;
}

std::string Formula::to_string() const {
    return response + " ~ " + (terms.empty() ? std::string("1") : join(terms, " + "));
}

const Coefficient& RegressionFit::coefficient(const std::string& name) const {
    for (const auto& c : coefficients) {
        if (c.name == name) return c;
    }
    throw RegressionError("no coefficient '" + name + "'");
}

bool RegressionFit::has_term(const std::string& term) const {
    return std::find(formula.terms.begin(), formula.terms.end(), term) != formula.terms.end();
}

RegressionFit ols_fit(const Dataset& d, const Formula& f) {
    const auto& y_all = d.numeric(f.response);
    for (const auto& t : f.terms) {
        if (!d.has(t)) throw RegressionError("unknown term '" + t + "'");
    }

    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        bool complete = !std::isnan(y_all[i]);
        for (const auto& t : f.terms) {
            if (complete && !d.is_factor(t) && std::isnan(d.numeric(t)[i])) complete = false;
        }
        if (complete) rows.push_back(i);
    }

    RegressionFit fit;
    fit.formula = f;
    fit.m = rows.size();
    fit.dropped_missing = d.rows() - rows.size();

    std::vector<std::string> names{"(Intercept)"};
    std::vector<std::string> owners{""};
    fit.design.emplace_back(fit.m, 1.0);
    for (const auto& t : f.terms) {
        if (d.is_factor(t)) {
            const auto& lv = d.factor(t);
            std::set<int> levels;
            for (auto r : rows) levels.insert(lv[r]);
            for (auto it = levels.begin(); it != levels.end(); ++it) {
                if (it == levels.begin()) continue;  // baseline
                std::vector<double> col(fit.m);
                for (std::size_t i = 0; i < fit.m; ++i) col[i] = lv[rows[i]] == *it ? 1.0 : 0.0;
                fit.design.push_back(std::move(col));
                names.push_back(t + std::to_string(*it));
                owners.push_back(t);
            }
        } else {
            const auto& x = d.numeric(t);
            std::vector<double> col(fit.m);
            for (std::size_t i = 0; i < fit.m; ++i) col[i] = x[rows[i]];
            fit.design.push_back(std::move(col));
            names.push_back(t);
            owners.push_back(t);
        }
    }
    const std::size_t cols = fit.design.size();
    fit.p = cols - 1;
    if (fit.m <= cols) {
        throw RegressionError("need more observations (" + std::to_string(fit.m) + ") than coefficients (" +
                              std::to_string(cols) + ")");
    }

    const auto m = static_cast<Eigen::Index>(fit.m);
    const auto pc = static_cast<Eigen::Index>(cols);
    Eigen::MatrixXd X(m, pc);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        y(i) = y_all[rows[static_cast<std::size_t>(i)]];
        for (Eigen::Index j = 0; j < pc; ++j) X(i, j) = fit.design[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < pc) {
        std::vector<std::string> bad;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index j = qr.rank(); j < pc; ++j) bad.push_back(names[static_cast<std::size_t>(perm(j))]);
        throw RankDeficientError(bad);
    }

    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd fitted = X * beta;
    const Eigen::VectorXd resid = y - fitted;
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(pc, pc).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(pc, pc));
    const Eigen::MatrixXd unscaled =
        qr.colsPermutation() * (Rinv * Rinv.transpose()) * qr.colsPermutation().transpose();
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, pc);

    fit.response.assign(y.data(), y.data() + m);
    fit.fitted.assign(fitted.data(), fitted.data() + m);
    fit.residuals.assign(resid.data(), resid.data() + m);
    fit.leverage.resize(fit.m);
    for (Eigen::Index i = 0; i < m; ++i) fit.leverage[static_cast<std::size_t>(i)] = Q.row(i).squaredNorm();

    fit.rss = resid.squaredNorm();
    // Residuals at rounding level are an exact fit.
    const double floor = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * y.norm();
    if (fit.rss <= floor * floor) fit.rss = 0.0;
    const double ybar = y.mean();
    fit.tss = (y.array() - ybar).square().sum();
    fit.df_residual = static_cast<double>(fit.m - cols);
    fit.sigma = std::sqrt(fit.rss / fit.df_residual);
    fit.r2 = fit.tss > 0.0 ? 1.0 - fit.rss / fit.tss : 0.0;
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (static_cast<double>(fit.m) - 1.0) / fit.df_residual;
    if (fit.p > 0 && fit.rss > 0.0) {
        const double fstat = ((fit.tss - fit.rss) / static_cast<double>(fit.p)) / (fit.rss / fit.df_residual);
        fit.f_stat = fstat;
        fit.f_p_value = dist::f_upper_p(fstat, static_cast<double>(fit.p), fit.df_residual);
    }

    const double s2 = fit.sigma * fit.sigma;
    for (std::size_t j = 0; j < cols; ++j) {
        Coefficient c;
        c.name = names[j];
        c.term = owners[j];
        c.estimate = beta(static_cast<Eigen::Index>(j));
        c.std_error = std::sqrt(s2 * unscaled(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
        c.t_value = c.estimate / c.std_error;
        c.p_value = c.std_error > 0.0 ? dist::student_t_two_sided_p(c.t_value, fit.df_residual) : 0.0;
        fit.coefficients.push_back(c);
    }
    return fit;
}

double aic(const RegressionFit& fit) {
    if (fit.rss <= 0.0) return -std::numeric_limits<double>::infinity();
    const auto m = static_cast<double>(fit.m);
    return m * std::log(fit.rss / m) + 2.0 * (static_cast<double>(fit.p) + 2.0);
}

namespace {

Formula without(const Formula& f, const std::string& term) {
    Formula out = f;
    out.terms.erase(std::remove(out.terms.begin(), out.terms.end(), term), out.terms.end());
    return out;
}

// Rows complete for every variable of the full formula, so that all
// candidate models are compared on the same observations.
Dataset complete_cases(const Dataset& d, const Formula& f, std::size_t& dropped) {
    std::vector<std::size_t> rows;
    const auto& y = d.numeric(f.response);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        bool ok = !std::isnan(y[i]);
        for (const auto& t : f.terms) {
            if (!d.has(t)) throw RegressionError("unknown term '" + t + "'");
            if (ok && !d.is_factor(t) && std::isnan(d.numeric(t)[i])) ok = false;
        }
        if (ok) rows.push_back(i);
    }
    dropped = d.rows() - rows.size();
    return d.select(rows);
}

}  // namespace

double term_p_value(const Dataset& d, const RegressionFit& fit, const std::string& term) {
    const auto reduced = ols_fit(d, without(fit.formula, term));
    const double q = static_cast<double>(fit.p - reduced.p);
    if (q <= 0.0) return 1.0;
    if (fit.rss <= 0.0) return 0.0;
    const double fstat = ((reduced.rss - fit.rss) / q) / (fit.rss / fit.df_residual);
    return dist::f_upper_p(std::max(fstat, 0.0), q, fit.df_residual);
}

EliminationResult backward_eliminate(const Dataset& d, const Formula& full, const EliminationOptions& opts) {
    std::size_t dropped = 0;
    const Dataset data = complete_cases(d, full, dropped);

    EliminationResult out;
    out.fit = ols_fit(data, full);
    double current = aic(out.fit);
    while (!out.fit.formula.terms.empty()) {
        auto candidates = out.fit.formula.terms;
        std::sort(candidates.begin(), candidates.end());
        std::optional<RegressionFit> best;
        std::string best_term;
        double best_aic = std::numeric_limits<double>::infinity();
        for (const auto& t : candidates) {
            auto trial = ols_fit(data, without(out.fit.formula, t));
            const double a = aic(trial);
            if (a < best_aic) {
                best_aic = a;
                best_term = t;
                best = std::move(trial);
            }
        }
        if (!best || !(best_aic < current)) break;
        out.trace.push_back({best_term, current, best_aic, "aic"});
        out.fit = std::move(*best);
        current = best_aic;
    }

    if (opts.significance_pass) {
        while (!out.fit.formula.terms.empty()) {
            std::string worst;
            double worst_p = -1.0;
            auto terms = out.fit.formula.terms;
            std::sort(terms.begin(), terms.end());
            for (const auto& t : terms) {
                const double p = term_p_value(data, out.fit, t);
                if (p > worst_p) {
                    worst_p = p;
                    worst = t;
                }
            }
            if (!(worst_p > opts.alpha)) break;
            auto next = ols_fit(data, without(out.fit.formula, worst));
            out.trace.push_back({worst, current, aic(next), "significance"});
            current = aic(next);
            out.fit = std::move(next);
        }
    }
    out.fit.dropped_missing = dropped;
    return out;
}

std::vector<double> normal_scores(std::size_t m) {
    const double a = m <= 10 ? 3.0 / 8.0 : 0.5;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = dist::normal_quantile((static_cast<double>(i + 1) - a) / (static_cast<double>(m) + 1.0 - 2.0 * a));
    }
    return out;
}

Diagnostics diagnostics(const RegressionFit& fit) {
    Diagnostics out;
    out.fitted = fit.fitted;
    out.residuals = fit.residuals;
    out.leverage = fit.leverage;
    out.studentized.resize(fit.m);
    for (std::size_t i = 0; i < fit.m; ++i) {
        const double h = fit.leverage[i];
        if (fit.sigma > 0.0 && h < 1.0 - 1e-10) {
            const double r = fit.residuals[i] / (fit.sigma * std::sqrt(1.0 - h));
            out.studentized[i] = r;
            out.qq_sample.push_back(r);
        }
    }
    std::sort(out.qq_sample.begin(), out.qq_sample.end());
    out.qq_theoretical = normal_scores(out.qq_sample.size());
    out.degenerate = out.qq_sample.empty();

    for (std::size_t j = 1; j < fit.coefficients.size(); ++j) {
        const auto& c = fit.coefficients[j];
        if (c.name != c.term) continue;  // factor dummies
        PartialResiduals pr;
        pr.term = c.term;
        pr.x = fit.design[j];
        pr.partial.resize(fit.m);
        for (std::size_t i = 0; i < fit.m; ++i) pr.partial[i] = fit.residuals[i] + c.estimate * pr.x[i];
        out.partials.push_back(std::move(pr));
    }
    return out;
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

void write_fit_report(const RegressionFit& fit, std::ostream& out) {
    char line[256];
    out << "Formula: " << fit.formula.to_string() << "\n\n";
    std::snprintf(line, sizeof line, "%-14s %14s %12s %10s %12s\n", "", "Estimate", "Std. Error", "t value", "Pr(>|t|)");
    out << line;
    for (const auto& c : fit.coefficients) {
        const char* stars = c.p_value < 0.001 ? " ***" : c.p_value < 0.01 ? " **" : c.p_value < 0.05 ? " *" : c.p_value < 0.1 ? " ." : "";
        std::snprintf(line, sizeof line, "%-14s %14.6g %12.6g %10.4f %12s%s\n", c.name.c_str(), c.estimate, c.std_error,
                      c.t_value, sci(c.p_value).c_str(), stars);
        out << line;
    }
    out << "---\n";
    std::snprintf(line, sizeof line, "Residual standard error: %.4f on %.0f degrees of freedom\n", fit.sigma,
                  fit.df_residual);
    out << line;
    if (fit.dropped_missing > 0) out << "(" << fit.dropped_missing << " observations deleted due to missingness)\n";
    std::snprintf(line, sizeof line, "Multiple R-squared: %.4f,\tAdjusted R-squared: %.4f\n", fit.r2, fit.adj_r2);
    out << line;
    if (fit.f_stat) {
        std::snprintf(line, sizeof line, "F-statistic: %.4g on %zu and %.0f DF,  p-value: %s\n", *fit.f_stat, fit.p,
                      fit.df_residual, sci(*fit.f_p_value).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "AIC: %.4f\n", aic(fit));
    out << line;
}

}  // namespace lonkit
