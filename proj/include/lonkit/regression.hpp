#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lonkit {

class RegressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collinear design: `columns` names the design columns that the
/// rank-revealing decomposition could not separate from the others.
class RankDeficientError : public RegressionError {
public:
    explicit RankDeficientError(std::vector<std::string> columns);
    std::vector<std::string> columns;
};

/// Named columns of equal length. Numeric columns may hold NaN for missing
/// values. Factor columns hold integer levels and enter a model as
/// treatment-coded dummies against their smallest level.
class Dataset {
public:
    void add_numeric(const std::string& name, std::vector<double> values);
    void add_factor(const std::string& name, std::vector<int> levels);
    /// Adds "log(<source>)" and records the transform.
    std::string add_log(const std::string& source);

    std::size_t rows() const { return rows_; }
    bool has(const std::string& name) const;
    bool is_factor(const std::string& name) const { return factors_.count(name) != 0; }
    const std::vector<double>& numeric(const std::string& name) const;
    const std::vector<int>& factor(const std::string& name) const;
    const std::map<std::string, std::string>& transforms() const { return transforms_; }

    /// Subset of rows.
    Dataset select(const std::vector<std::size_t>& rows) const;

private:
    void check_length(const std::string& name, std::size_t n);

    std::size_t rows_ = 0;
    bool empty_ = true;
    std::vector<std::string> order_;
    std::map<std::string, std::vector<double>> numeric_;
    std::map<std::string, std::vector<int>> factors_;
    std::map<std::string, std::string> transforms_;  // derived -> source
};

/// response ~ 1 + terms. A term names a numeric column or a factor.
struct Formula {
    std::string response;
    std::vector<std::string> terms;

    std::string to_string() const;
};

struct Coefficient {
    std::string name;  // "(Intercept)", a numeric term, or factor+level ("k4")
    std::string term;  // owning term; empty for the intercept
    double estimate = 0.0;
    double std_error = 0.0;
    double t_value = 0.0;
    double p_value = 0.0;
};

struct RegressionFit {
    Formula formula;
    std::vector<Coefficient> coefficients;
    std::vector<std::vector<double>> design;  // column-major, intercept first
    std::vector<double> response;
    std::vector<double> fitted;
    std::vector<double> residuals;
    std::vector<double> leverage;  // hat-matrix diagonal
    std::size_t m = 0;             // observations used
    std::size_t p = 0;             // coefficients excluding the intercept
    std::size_t dropped_missing = 0;
    double rss = 0.0;
    double tss = 0.0;
    double sigma = 0.0;  // residual standard error
    double df_residual = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    std::optional<double> f_stat;  // against the intercept-only model
    std::optional<double> f_p_value;

    const Coefficient& coefficient(const std::string& name) const;
    bool has_term(const std::string& term) const;
};

/// Least squares via column-pivoted Householder QR. Rows with a missing
/// response or predictor are dropped and counted. Throws RankDeficientError
/// for collinear designs and RegressionError when m <= p + 1.
RegressionFit ols_fit(const Dataset& d, const Formula& f);

/// m ln(RSS/m) + 2(p + 2); -infinity for a perfect fit.
double aic(const RegressionFit& fit);

struct EliminationStep {
    std::string dropped;
    double aic_before = 0.0;
    double aic_after = 0.0;
    std::string reason;  // "aic" or "significance"
};

struct EliminationOptions {
    /// After AIC descent stops, keep dropping the least significant term
    /// (partial F test) while its p-value exceeds `alpha`.
    bool significance_pass = false;
    double alpha = 0.05;
};

struct EliminationResult {
    RegressionFit fit;
    std::vector<EliminationStep> trace;
};

/// Backward elimination by AIC. Each step drops the term (a factor counts as
/// one unit) whose removal gives the lowest AIC, while that AIC is strictly
/// below the current one. Ties go to the alphabetically first term.
EliminationResult backward_eliminate(const Dataset& d, const Formula& full, const EliminationOptions& opts = {});

/// p-value of the partial F test for removing `term` from `fit`.
double term_p_value(const Dataset& d, const RegressionFit& fit, const std::string& term);

struct PartialResiduals {
    std::string term;
    std::vector<double> x;
    std::vector<double> partial;  // e_i + beta * x_i
};

struct Diagnostics {
    std::vector<double> fitted;
    std::vector<double> residuals;
    std::vector<double> leverage;
    std::vector<std::optional<double>> studentized;  // nullopt where leverage is 1 or sigma is 0
    std::vector<double> qq_sample;                   // sorted defined studentized residuals
    std::vector<double> qq_theoretical;
    std::vector<PartialResiduals> partials;  // numeric terms only
    bool degenerate = false;                 // no point could be studentized
};

Diagnostics diagnostics(const RegressionFit& fit);

/// Normal plotting positions (i - a) / (m + 1 - 2a), a = 3/8 for m <= 10 else 1/2.
std::vector<double> normal_scores(std::size_t m);

/// Coefficient table plus residual standard error, R^2 and F summary lines.
void write_fit_report(const RegressionFit& fit, std::ostream& out);

}  // namespace lonkit
