#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "optexec/closedform.hpp"
#include "optexec/oracle.hpp"

using namespace optexec;

namespace {

BasicModelParams basic_params(std::size_t n_steps = 5000) {
    BasicModelParams p;
    p.sigma = ParamCurve::constant(0.5);
    p.eta = ParamCurve::constant(0.1);
    p.mu = 1.0;
    p.x0 = 100.0;
    p.s0 = 100.0;
    p.horizon = TimeGrid(0.0, 5.0, n_steps);
    return p;
}

}  // namespace

TEST_CASE("linear trajectory endpoints and rates") {
    const auto traj = linear_trajectory(100.0, TimeGrid(0.0, 5.0, 1000));
    CHECK(traj.X.front() == 100.0);
    CHECK(traj.X.back() == 0.0);
    CHECK(traj.rate(0) == doctest::Approx(20.0));
    CHECK(traj.rate(500) == doctest::Approx(20.0));
}

TEST_CASE("objective of the linear schedule matches the exact discrete sum") {
    const auto p = basic_params();
    const std::size_t N = 1000;
    const auto traj = linear_trajectory(p.x0, TimeGrid(0.0, 5.0, N));
    // sum_{k=0}^{N-1} [eta v^2 + mu sigma^2 x0^2 (1 - k/N)^2] dt, with
    // sum_{k=0}^{N-1} (N - k)^2 = N (N + 1) (2N + 1) / 6 in closed form
    const double dt = 5.0 / static_cast<double>(N);
    const double n = static_cast<double>(N);
    const double sum_sq = n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    const double want = 0.1 * 400.0 * 5.0 + 0.25 * 10000.0 / (n * n) * sum_sq * dt;
    CHECK(deterministic_objective(traj, p.mu, p.sigma, p.eta) ==
          doctest::Approx(want).epsilon(1e-12));
    // and it converges to the continuous value 4366.67 from above
    CHECK(want > 4366.0);
    CHECK(want < 4380.0);
}

TEST_CASE("objective degenerate cases") {
    const auto p = basic_params();
    const auto traj = linear_trajectory(p.x0, TimeGrid(0.0, 5.0, 1000));
    CHECK(deterministic_objective(traj, 0.0, p.sigma, p.eta) ==
          doctest::Approx(200.0).epsilon(1e-12));
    const auto zero = linear_trajectory(0.0, TimeGrid(0.0, 5.0, 1000));
    CHECK(deterministic_objective(zero, p.mu, p.sigma, p.eta) == 0.0);
}

TEST_CASE("discrete equilibrium matches the sinh profile") {
    const auto p = basic_params();
    const auto traj = discrete_equilibrium_basic(p, 1000);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 1000; ++k) {
        const double want =
            basic_inventory_closed(traj.grid.point(k), p.x0, p.mu, 0.5, 0.1, 5.0);
        worst = std::max(worst, std::abs(traj.X[k] - want));
    }
    CHECK(worst < 1e-3 * p.x0);
    // its objective approaches x0^2 L(0); the rectangle-rule bias in the
    // objective itself is first order, so this needs the finer grid
    const auto fine = discrete_equilibrium_basic(p, 5000);
    const double obj = deterministic_objective(fine, p.mu, p.sigma, p.eta);
    const double want = p.x0 * p.x0 * basic_L_closed(0.0, p.mu, 0.5, 0.1, 5.0);
    CHECK(std::abs(obj - want) / want < 1e-3);
}

TEST_CASE("equilibrium is odd in the initial position") {
    auto p = basic_params();
    const auto plus = discrete_equilibrium_basic(p, 200);
    p.x0 = -p.x0;
    const auto minus = discrete_equilibrium_basic(p, 200);
    for (std::size_t k = 0; k <= 200; ++k)
        CHECK(minus.X[k] == doctest::Approx(-plus.X[k]).epsilon(1e-13));
}

TEST_CASE("equilibrium beats the linear schedule") {
    const auto p = basic_params();
    const auto eq = discrete_equilibrium_basic(p, 1000);
    const auto lin = linear_trajectory(p.x0, eq.grid);
    CHECK(deterministic_objective(eq, p.mu, p.sigma, p.eta) <
          deterministic_objective(lin, p.mu, p.sigma, p.eta));
}

TEST_CASE("no local perturbation improves the equilibrium") {
    const auto p = basic_params();
    const auto eq = discrete_equilibrium_basic(p, 500);
    const double obj = deterministic_objective(eq, p.mu, p.sigma, p.eta);
    for (std::size_t k : {1ul, 100ul, 250ul, 499ul}) {
        for (double delta : {-0.5, -0.01, 0.01, 0.5}) {
            const double change = perturbation_optimality_check(p, eq, k, delta);
            CHECK(change > -1e-12 * obj);
        }
    }
    // the same bump hurts the linear schedule more: stationarity kills the
    // first-order term only at the equilibrium
    const auto lin = linear_trajectory(p.x0, eq.grid);
    CHECK(perturbation_optimality_check(p, eq, 1, 0.5) <
          perturbation_optimality_check(p, lin, 1, 0.5));
    CHECK_THROWS_AS(perturbation_optimality_check(p, eq, 0, 0.1), std::out_of_range);
    CHECK_THROWS_AS(perturbation_optimality_check(p, eq, 500, 0.1), std::out_of_range);
}

TEST_CASE("equilibrium objective converges first order to x0^2 L(0)") {
    const auto p = basic_params();
    const double want = p.x0 * p.x0 * basic_L_closed(0.0, p.mu, 0.5, 0.1, 5.0);
    const double e1 =
        deterministic_objective(discrete_equilibrium_basic(p, 500), p.mu, p.sigma, p.eta) -
        want;
    const double e2 =
        deterministic_objective(discrete_equilibrium_basic(p, 1000), p.mu, p.sigma, p.eta) -
        want;
    CHECK(e1 / e2 > 1.6);
    CHECK(e1 / e2 < 2.4);
}

TEST_CASE("quadratic ansatz satisfies the pricing equations on samples") {
    const auto p = basic_params();
    const auto table = solve_basic(p, 0.05);
    CHECK(hjb_residual_basic(table, p, 200, 1) < 1e-4);
}
