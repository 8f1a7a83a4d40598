#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "lonkit/regression.hpp"

using namespace lonkit;

namespace {

struct Sim {
    std::mt19937_64 eng;
    std::normal_distribution<double> g{0.0, 1.0};
    explicit Sim(std::uint64_t seed) : eng(seed) {}
    std::vector<double> normal(std::size_t m, double mean = 0.0, double sd = 1.0) {
        std::vector<double> v(m);
        for (auto& x : v) x = mean + sd * g(eng);
        return v;
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double skewness(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double m2 = 0, m3 = 0;
    for (double x : v) {
        m2 += (x - m) * (x - m);
        m3 += (x - m) * (x - m) * (x - m);
    }
    m2 /= static_cast<double>(v.size());
    m3 /= static_cast<double>(v.size());
    return m3 / std::pow(m2, 1.5);
}

}  // namespace

TEST_CASE("exact line") {
    Dataset d;
    d.add_numeric("x", {0, 1, 2, 3, 4});
    d.add_numeric("y", {1, 3, 5, 7, 9});
    const auto fit = ols_fit(d, {"y", {"x"}});
    CHECK(fit.coefficient("(Intercept)").estimate == doctest::Approx(1.0));
    CHECK(fit.coefficient("x").estimate == doctest::Approx(2.0));
    CHECK(fit.r2 == doctest::Approx(1.0));
    for (double e : fit.residuals) CHECK(std::fabs(e) < 1e-12);
    CHECK(aic(fit) == -std::numeric_limits<double>::infinity());
    const auto diag = diagnostics(fit);
    CHECK(diag.degenerate);
}

TEST_CASE("constant response") {
    Dataset d;
    d.add_numeric("x", {0.3, 1.2, 2.8, 3.1, 4.4, 5.0});
    d.add_numeric("y", std::vector<double>(6, 4.0));
    const auto fit = ols_fit(d, {"y", {"x"}});
    CHECK(std::fabs(fit.coefficient("x").estimate) < 1e-12);
    CHECK(fit.r2 == 0.0);
}

TEST_CASE("noiseless data is recovered to 1e-10") {
    Sim sim(1);
    const std::size_t m = 60;
    auto x1 = sim.normal(m, 100.0, 30.0), x2 = sim.normal(m, 0.0, 0.01), x3 = sim.normal(m, -5.0, 2.0);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 10.3838 + 0.0439 * x1[i] - 7.2831 * x2[i] - 0.7457 * x3[i];
    Dataset d;
    d.add_numeric("x1", x1);
    d.add_numeric("x2", x2);
    d.add_numeric("x3", x3);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"x1", "x2", "x3"}});
    CHECK(std::fabs(fit.coefficient("(Intercept)").estimate - 10.3838) < 1e-10);
    CHECK(std::fabs(fit.coefficient("x1").estimate - 0.0439) < 1e-10);
    CHECK(std::fabs(fit.coefficient("x2").estimate + 7.2831) < 1e-10);
    CHECK(std::fabs(fit.coefficient("x3").estimate + 0.7457) < 1e-10);
}

TEST_CASE("fit invariants on noisy data") {
    Sim sim(2);
    const std::size_t m = 80;
    auto x1 = sim.normal(m), x2 = sim.normal(m, 3.0, 2.0), e = sim.normal(m, 0.0, 0.5);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 1.0 + 0.8 * x1[i] - 0.3 * x2[i] + e[i];
    Dataset d;
    d.add_numeric("x1", x1);
    d.add_numeric("x2", x2);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"x1", "x2"}});

    const double scale = std::sqrt(dot(y, y));
    CHECK(std::fabs(std::accumulate(fit.residuals.begin(), fit.residuals.end(), 0.0)) < 1e-9 * scale);
    CHECK(std::fabs(dot(fit.residuals, x1)) < 1e-8 * scale * std::sqrt(dot(x1, x1)));
    CHECK(std::fabs(dot(fit.residuals, x2)) < 1e-8 * scale * std::sqrt(dot(x2, x2)));

    CHECK(fit.r2 == doctest::Approx(1.0 - fit.rss / fit.tss));
    CHECK(fit.adj_r2 == doctest::Approx(1.0 - (1.0 - fit.r2) * (m - 1.0) / (m - 2.0 - 1.0)));
    for (const auto& c : fit.coefficients) CHECK(c.t_value == c.estimate / c.std_error);
    CHECK(fit.df_residual == m - 3.0);

    const double hsum = std::accumulate(fit.leverage.begin(), fit.leverage.end(), 0.0);
    CHECK(std::fabs(hsum - 3.0) < 1e-9);
    for (double h : fit.leverage) CHECK((h >= 0.0 && h <= 1.0));

    // Row permutation changes nothing.
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), sim.eng);
    const auto pfit = ols_fit(d.select(perm), {"y", {"x1", "x2"}});
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        CHECK(pfit.coefficients[j].estimate == doctest::Approx(fit.coefficients[j].estimate).epsilon(1e-12));
        CHECK(pfit.coefficients[j].std_error == doctest::Approx(fit.coefficients[j].std_error).epsilon(1e-12));
    }
    CHECK(pfit.r2 == doctest::Approx(fit.r2).epsilon(1e-12));
    CHECK(*pfit.f_stat == doctest::Approx(*fit.f_stat).epsilon(1e-12));

    // Standardised predictors leave t-values and R^2 unchanged.
    auto standardise = [](std::vector<double> v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        for (auto& x : v) x = (x - mean) / sd;
        return v;
    };
    Dataset z;
    z.add_numeric("x1", standardise(x1));
    z.add_numeric("x2", standardise(x2));
    z.add_numeric("y", standardise(y));
    const auto zfit = ols_fit(z, {"y", {"x1", "x2"}});
    CHECK(zfit.r2 == doctest::Approx(fit.r2).epsilon(1e-12));
    CHECK(zfit.coefficient("x1").t_value == doctest::Approx(fit.coefficient("x1").t_value).epsilon(1e-10));
    CHECK(zfit.coefficient("x2").t_value == doctest::Approx(fit.coefficient("x2").t_value).epsilon(1e-10));
}

TEST_CASE("F equals t squared with a single predictor") {
    Sim sim(3);
    const std::size_t m = 40;
    auto x = sim.normal(m), e = sim.normal(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 0.4 * x[i] + e[i];
    Dataset d;
    d.add_numeric("x", x);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"x"}});
    const double t = fit.coefficient("x").t_value;
    CHECK(*fit.f_stat == doctest::Approx(t * t).epsilon(1e-9));
    CHECK(*fit.f_p_value == doctest::Approx(fit.coefficient("x").p_value).epsilon(1e-9));
}

TEST_CASE("factor dummies use the smallest level as baseline") {
    Sim sim(4);
    const std::vector<int> k{2, 4, 8, 2, 4, 8, 2, 4, 8, 2, 4, 8};
    std::vector<double> y;
    const auto e = sim.normal(k.size(), 0.0, 0.01);
    for (std::size_t i = 0; i < k.size(); ++i) y.push_back((k[i] == 4 ? 1.0 : k[i] == 8 ? 3.0 : 0.0) + e[i]);
    Dataset d;
    d.add_factor("k", k);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"k"}});
    REQUIRE(fit.coefficients.size() == 3);
    CHECK(fit.coefficients[1].name == "k4");
    CHECK(fit.coefficients[2].name == "k8");
    CHECK(fit.coefficients[1].term == "k");
    CHECK(fit.coefficient("k4").estimate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.coefficient("k8").estimate == doctest::Approx(3.0).epsilon(0.05));
    CHECK(fit.has_term("k"));
    CHECK_THROWS(fit.coefficient("k2"));
}

TEST_CASE("errors: rank deficiency, too few rows, unknown terms") {
    Dataset d;
    d.add_numeric("a", {1, 2, 3, 4, 5});
    d.add_numeric("b", {2, 4, 6, 8, 10});
    d.add_numeric("y", {1, 0, 2, 1, 3});
    try {
        ols_fit(d, {"y", {"a", "b"}});
        FAIL("expected rank deficiency");
    } catch (const RankDeficientError& e) {
        REQUIRE(e.columns.size() == 1);
        CHECK((e.columns[0] == "a" || e.columns[0] == "b"));
    }
    Dataset tiny;
    tiny.add_numeric("a", {1, 2});
    tiny.add_numeric("y", {1, 0});
    CHECK_THROWS_AS(ols_fit(tiny, {"y", {"a"}}), RegressionError);
    CHECK_THROWS_AS(ols_fit(d, {"y", {"nope"}}), RegressionError);
    CHECK_THROWS_AS(d.add_numeric("short", {1.0}), RegressionError);
}

TEST_CASE("rows with missing values are dropped and counted") {
    const double nan = std::nan("");
    Dataset d;
    d.add_numeric("x", {1, 2, 3, nan, 5, 6, 7});
    d.add_numeric("y", {1.1, 2.3, 2.9, 4.0, nan, 6.2, 6.8});
    const auto fit = ols_fit(d, {"y", {"x"}});
    CHECK(fit.m == 5);
    CHECK(fit.dropped_missing == 2);
    const auto logged = d.add_log("x");
    CHECK(logged == "log(x)");
    CHECK(d.transforms().at("log(x)") == "x");
    CHECK(d.numeric("log(x)")[1] == doctest::Approx(std::log(2.0)));
}

TEST_CASE("aic conventions") {
    Sim sim(5);
    const std::size_t m = 50;
    auto x = sim.normal(m), e = sim.normal(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 2.0 * x[i] + e[i];
    Dataset d;
    d.add_numeric("x", x);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"x"}});
    CHECK(aic(fit) == aic(ols_fit(d, {"y", {"x"}})));
    CHECK(aic(fit) == doctest::Approx(m * std::log(fit.rss / m) + 2.0 * 3.0));

    // A column orthogonal to the residuals (and to 1, x) leaves RSS unchanged.
    auto z = sim.normal(m);
    const Formula base{"y", {"x"}};
    Dataset dz = d;
    dz.add_numeric("z0", z);
    const auto zfit = ols_fit(dz, {"z0", {"x"}});
    std::vector<double> zr = zfit.residuals;  // orthogonal to 1 and x
    const double c = dot(zr, fit.residuals) / dot(fit.residuals, fit.residuals);
    for (std::size_t i = 0; i < m; ++i) zr[i] -= c * fit.residuals[i];
    d.add_numeric("z", zr);
    const auto bigger = ols_fit(d, {"y", {"x", "z"}});
    CHECK(bigger.rss == doctest::Approx(fit.rss).epsilon(1e-12));
    CHECK(aic(bigger) - aic(fit) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("a pure-noise column usually raises AIC") {
    Sim sim(6);
    int raised = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        const std::size_t m = 40;
        auto x = sim.normal(m), noise = sim.normal(m), e = sim.normal(m);
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = 1.0 + x[i] + e[i];
        Dataset d;
        d.add_numeric("x", x);
        d.add_numeric("noise", noise);
        d.add_numeric("y", y);
        raised += aic(ols_fit(d, {"y", {"x", "noise"}})) > aic(ols_fit(d, {"y", {"x"}}));
    }
    CHECK(raised > reps * 8 / 10);
}

TEST_CASE("backward elimination drops noise") {
    Sim sim(7);
    int exact = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const std::size_t m = 50;
        auto x1 = sim.normal(m), x2 = sim.normal(m), e = sim.normal(m);
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = 2.0 * x1[i] + e[i];
        Dataset d;
        d.add_numeric("x1", x1);
        d.add_numeric("x2", x2);
        d.add_numeric("y", y);
        const auto res = backward_eliminate(d, {"y", {"x1", "x2"}});
        const bool only_x1 = res.fit.formula.terms == std::vector<std::string>{"x1"};
        exact += only_x1;
        for (const auto& s : res.trace) CHECK(s.aic_after < s.aic_before);

        // Direct oracle: x2 goes iff the smaller model has lower AIC, using
        // residual sums from the normal equations.
        auto rss_of = [&](const std::vector<std::vector<double>>& cols) {
            const std::size_t q = cols.size();
            std::vector<std::vector<double>> a(q, std::vector<double>(q + 1));
            for (std::size_t i = 0; i < q; ++i) {
                for (std::size_t j = 0; j < q; ++j) a[i][j] = dot(cols[i], cols[j]);
                a[i][q] = dot(cols[i], y);
            }
            for (std::size_t c = 0; c < q; ++c) {
                for (std::size_t r2 = c + 1; r2 < q; ++r2) {
                    const double f = a[r2][c] / a[c][c];
                    for (std::size_t j = c; j <= q; ++j) a[r2][j] -= f * a[c][j];
                }
            }
            std::vector<double> b(q);
            for (std::size_t c = q; c-- > 0;) {
                double v = a[c][q];
                for (std::size_t j = c + 1; j < q; ++j) v -= a[c][j] * b[j];
                b[c] = v / a[c][c];
            }
            double rss = 0;
            for (std::size_t i = 0; i < m; ++i) {
                double f = 0;
                for (std::size_t j = 0; j < q; ++j) f += b[j] * cols[j][i];
                rss += (y[i] - f) * (y[i] - f);
            }
            return rss;
        };
        const std::vector<double> one(m, 1.0);
        const double md = static_cast<double>(m);
        const double full = md * std::log(rss_of({one, x1, x2}) / md) + 8.0;
        const double reduced = md * std::log(rss_of({one, x1}) / md) + 6.0;
        CHECK(only_x1 == (reduced < full));
    }
    // A null term survives AIC when F > ~2, about 16% of the time.
    CHECK(exact >= reps * 3 / 4);
}

TEST_CASE("a minimal model is returned unchanged") {
    Sim sim(8);
    const std::size_t m = 60;
    auto x1 = sim.normal(m), x2 = sim.normal(m), e = sim.normal(m, 0.0, 0.2);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = x1[i] - x2[i] + e[i];
    Dataset d;
    d.add_numeric("x1", x1);
    d.add_numeric("x2", x2);
    d.add_numeric("y", y);
    const auto res = backward_eliminate(d, {"y", {"x1", "x2"}});
    CHECK(res.trace.empty());
    CHECK(res.fit.formula.terms == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("a factor is eliminated as one unit") {
    Sim sim(9);
    const std::size_t m = 90;
    std::vector<int> k(m);
    for (std::size_t i = 0; i < m; ++i) k[i] = 2 + 2 * static_cast<int>(i % 3);
    auto x = sim.normal(m), e = sim.normal(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 3.0 * x[i] + e[i];
    Dataset d;
    d.add_factor("k", k);
    d.add_numeric("x", x);
    d.add_numeric("y", y);
    const auto res = backward_eliminate(d, {"y", {"k", "x"}});
    for (const auto& s : res.trace) CHECK((s.dropped == "k" || s.dropped == "x"));
    if (!res.fit.has_term("k")) {
        for (const auto& c : res.fit.coefficients) CHECK(c.name.rfind("k", 0) != 0);
    }
}

TEST_CASE("significance pass drops weak terms that AIC keeps") {
    Sim sim(10);
    const std::size_t m = 120;
    auto x1 = sim.normal(m), x2 = sim.normal(m), e = sim.normal(m);
    std::vector<double> y(m);
    // x2's effect is small enough to sit between the AIC and 5% thresholds for this seed.
    for (std::size_t i = 0; i < m; ++i) y[i] = 1.5 * x1[i] + 0.17 * x2[i] + e[i];
    Dataset d;
    d.add_numeric("x1", x1);
    d.add_numeric("x2", x2);
    d.add_numeric("y", y);
    const auto plain = backward_eliminate(d, {"y", {"x1", "x2"}});
    const auto strict = backward_eliminate(d, {"y", {"x1", "x2"}}, {.significance_pass = true, .alpha = 0.05});
    for (const auto& t : strict.fit.formula.terms) {
        CHECK(term_p_value(d, strict.fit, t) <= 0.05);
    }
    CHECK(strict.fit.formula.terms.size() <= plain.fit.formula.terms.size());
    for (const auto& s : strict.trace) CHECK((s.reason == "aic" || s.reason == "significance"));
}

TEST_CASE("studentized residuals look normal on Gaussian data") {
    Sim sim(11);
    int ok = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const std::size_t m = 500;
        auto x1 = sim.normal(m), x2 = sim.normal(m), e = sim.normal(m);
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = 1.0 + x1[i] + 0.5 * x2[i] + e[i];
        Dataset d;
        d.add_numeric("x1", x1);
        d.add_numeric("x2", x2);
        d.add_numeric("y", y);
        const auto diag = diagnostics(ols_fit(d, {"y", {"x1", "x2"}}));
        REQUIRE(diag.qq_sample.size() == m);
        ok += std::fabs(skewness(diag.qq_sample)) < 0.5;
        CHECK(std::is_sorted(diag.qq_sample.begin(), diag.qq_sample.end()));
        CHECK(std::is_sorted(diag.qq_theoretical.begin(), diag.qq_theoretical.end()));
    }
    CHECK(ok > reps / 2);
}

TEST_CASE("diagnostics contents") {
    Sim sim(12);
    const std::size_t m = 30;
    auto x = sim.normal(m), e = sim.normal(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = 2.0 + 0.5 * x[i] + e[i];
    Dataset d;
    d.add_numeric("x", x);
    d.add_numeric("y", y);
    const auto fit = ols_fit(d, {"y", {"x"}});
    const auto diag = diagnostics(fit);
    CHECK_FALSE(diag.degenerate);
    for (std::size_t i = 0; i < m; ++i) {
        REQUIRE(diag.studentized[i]);
        CHECK(*diag.studentized[i] ==
              doctest::Approx(fit.residuals[i] / (fit.sigma * std::sqrt(1.0 - fit.leverage[i]))));
    }
    REQUIRE(diag.partials.size() == 1);
    CHECK(diag.partials[0].term == "x");
    const double b = fit.coefficient("x").estimate;
    for (std::size_t i = 0; i < m; ++i) CHECK(diag.partials[0].partial[i] == doctest::Approx(fit.residuals[i] + b * x[i]));

    const auto s = normal_scores(4);
    CHECK(s.size() == 4);
    CHECK(s[0] == doctest::Approx(-s[3]));
    const auto s20 = normal_scores(20);
    CHECK(s20[0] < s20[1]);
}

TEST_CASE("fit report layout") {
    Dataset d;
    d.add_numeric("x", {0, 1, 2, 3, 4, 5});
    d.add_numeric("y", {0.1, 0.9, 2.2, 2.8, 4.1, 5.0});
    std::ostringstream out;
    write_fit_report(ols_fit(d, {"y", {"x"}}), out);
    const auto s = out.str();
    for (const char* key : {"Estimate", "Std. Error", "t value", "Pr(>|t|)", "(Intercept)", "Residual standard error",
                            "Multiple R-squared", "F-statistic"}) {
        CHECK(s.find(key) != std::string::npos);
    }
}
