#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "optexec/rng.hpp"
#include "optexec/sim.hpp"

using namespace optexec;

namespace {

ModelParams basic_model(double sigma = 0.5) {
    BasicModelParams p;
    p.sigma = ParamCurve::constant(sigma);
    p.eta = ParamCurve::constant(0.1);
    p.mu = 1.0;
    p.x0 = 100.0;
    p.s0 = 100.0;
    p.horizon = TimeGrid(0.0, 5.0, 1000);
    return p;
}

ModelParams signal_model() {
    SignalModelParams p;
    p.theta = ParamCurve::constant(0.2);
    p.sigma1 = ParamCurve::constant(0.5);
    p.sigma2 = ParamCurve::constant(0.5);
    p.eta = ParamCurve::constant(0.1);
    p.mu = 1.0;
    p.x0 = 100.0;
    p.s0 = 100.0;
    p.alpha0 = 102.0;
    p.horizon = TimeGrid(0.0, 5.0, 1000);
    return p;
}

ModelParams stochvol_model() {
    StochVolModelParams p;
    p.a_xi = ParamCurve::constant(0.0);
    p.b_xi = ParamCurve::constant(0.1);
    p.eta = ParamCurve::constant(0.1);
    p.mu = 1.0;
    p.x0 = 100.0;
    p.s0 = 100.0;
    p.xi0 = 1.0;
    p.horizon = TimeGrid(0.0, 5.0, 1000);
    return p;
}

}  // namespace

TEST_CASE("normal draws are a pure function of (seed, path, step)") {
    const NormalPair a = normal_pair(42, 7, 13);
    const NormalPair b = normal_pair(42, 7, 13);
    CHECK(a.z0 == b.z0);
    CHECK(a.z1 == b.z1);
    CHECK(normal_pair(42, 7, 14).z0 != a.z0);
    CHECK(normal_pair(43, 7, 13).z0 != a.z0);
    CHECK(normal_pair(42, 8, 13).z0 != a.z0);
    CHECK(std::isfinite(a.z0));
    CHECK(std::isfinite(a.z1));
}

TEST_CASE("normal draws have the right first moments") {
    double sum = 0.0, sumsq = 0.0;
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i) {
        const NormalPair z = normal_pair(1, 0, i);
        sum += z.z0 + z.z1;
        sumsq += z.z0 * z.z0 + z.z1 * z.z1;
    }
    const double mean = sum / (2.0 * n);
    const double var = sumsq / (2.0 * n) - mean * mean;
    CHECK(std::abs(mean) < 5e-3);      // SE ~ 1.6e-3
    CHECK(std::abs(var - 1.0) < 1e-2); // SE ~ 2.2e-3
}

TEST_CASE("paths are deterministic given the seed") {
    const auto params = basic_model();
    const auto rule = make_strategy(params, 0.05);
    const auto a = simulate_path(params, rule, 99, 500);
    const auto b = simulate_path(params, rule, 99, 500);
    CHECK(a.S == b.S);
    CHECK(a.X == b.X);
    CHECK(a.v == b.v);
    CHECK(a.Y == b.Y);
    const auto c = simulate_path(params, rule, 100, 500);
    CHECK(a.Y.back() != c.Y.back());
}

TEST_CASE("every path liquidates exactly") {
    for (const auto& params : {basic_model(), signal_model(), stochvol_model()}) {
        const auto rule = make_strategy(params, 0.05);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto path = simulate_path(params, rule, seed, 400);
            CHECK(path.X.front() == 100.0);
            CHECK(path.X.back() == 0.0);
            CHECK(path.Y.front() == 0.0);
        }
    }
}

TEST_CASE("cost increments replay from the recorded columns") {
    // dY_k = eta v_k^2 dt + X_k dS_k holds for every model by construction
    for (const auto& params : {basic_model(), signal_model(), stochvol_model()}) {
        const auto rule = make_strategy(params, 0.05);
        const auto path = simulate_path(params, rule, 7, 400);
        const double dt = path.grid.dt();
        double worst = 0.0;
        for (std::size_t k = 0; k < 400; ++k) {
            const double dY = path.Y[k + 1] - path.Y[k];
            const double dS = path.S[k + 1] - path.S[k];
            const double want = 0.1 * path.v[k] * path.v[k] * dt + path.X[k] * dS;
            worst = std::max(worst, std::abs(dY - want) / (std::abs(dY) + 1.0));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("zero volatility makes the basic path deterministic") {
    const auto params = basic_model(0.0);
    const auto rule = make_strategy(params, 0.05);
    const auto a = simulate_path(params, rule, 1, 1000);
    const auto b = simulate_path(params, rule, 12345, 1000);
    CHECK(a.Y.back() == b.Y.back());
    for (double s : a.S) CHECK(s == 100.0);
    // mu sigma^2 = 0, so the rule is linear liquidation and the cost is
    // eta (x0/T)^2 T up to the cutoff treatment
    CHECK(a.Y.back() == doctest::Approx(0.1 * 20.0 * 20.0 * 5.0).epsilon(1e-4));
}

TEST_CASE("summary statistics behave like Monte Carlo estimates") {
    const auto params = basic_model();
    const auto rule = make_strategy(params, 0.05);
    const auto s1 = estimate_mean_variance(params, rule, 400, 1, 200);
    const auto s4 = estimate_mean_variance(params, rule, 1600, 1, 200);
    CHECK(s1.n_paths == 400);
    CHECK(s1.var_cost > 0.0);
    CHECK(s1.objective == doctest::Approx(s1.mean_cost + s1.var_cost));
    CHECK(s1.std_error_mean == doctest::Approx(std::sqrt(s1.var_cost / 400.0)));
    // 4x the paths halve the standard error, up to sampling noise
    CHECK(s4.std_error_mean / s1.std_error_mean > 0.5 * 0.7);
    CHECK(s4.std_error_mean / s1.std_error_mean < 0.5 * 1.3);
    // the two estimates agree within joint error bars
    CHECK(std::abs(s4.mean_cost - s1.mean_cost) <
          4.0 * std::sqrt(s1.std_error_mean * s1.std_error_mean +
                          s4.std_error_mean * s4.std_error_mean));
}

TEST_CASE("total variance decomposition is exact without noise") {
    const auto params = basic_model(0.0);
    const auto rule = make_strategy(params, 0.05);
    const auto r = total_variance_check(params, rule, 2.5, 20, 20, 1, 200);
    CHECK(r.var_total == doctest::Approx(0.0));
    CHECK(r.mean_inner_var == doctest::Approx(0.0));
    CHECK(r.var_inner_mean == doctest::Approx(0.0));
}

TEST_CASE("argument validation") {
    const auto params = basic_model();
    const auto rule = make_strategy(params, 0.05);
    CHECK_THROWS_AS(simulate_path(params, rule, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(estimate_mean_variance(params, rule, 1, 1, 200), std::invalid_argument);
    CHECK_THROWS_AS(total_variance_check(params, rule, 0.0, 4, 4, 1, 200),
                    std::invalid_argument);
    CHECK_THROWS_AS(total_variance_check(params, rule, 5.0, 4, 4, 1, 200),
                    std::invalid_argument);
}

TEST_CASE("path csv layout") {
    const auto params = signal_model();
    const auto rule = make_strategy(params, 0.05);
    const auto path = simulate_path(params, rule, 3, 50);
    const std::string csv = path_csv(path);
    CHECK(csv.rfind("t,S,extra,X,v,Y\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 52);  // header + 51 rows
    // last row has an empty rate column: ",," before the final Y value
    const auto last_line_start = csv.rfind('\n', csv.size() - 2) + 1;
    const std::string last = csv.substr(last_line_start);
    CHECK(last.find(",,") != std::string::npos);
}

TEST_CASE("summary json echoes the configuration") {
    const auto params = basic_model();
    const auto rule = make_strategy(params, 0.05);
    const auto s = estimate_mean_variance(params, rule, 4, 11, 100);
    const std::string j = summary_json(s, params, 11);
    CHECK(j.find("\"mean_cost\"") != std::string::npos);
    CHECK(j.find("\"seed\": 11") != std::string::npos);
    CHECK(j.find("\"model\"") != std::string::npos);
}
