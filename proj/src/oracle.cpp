#include "optexec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace optexec {

DiscreteTrajectory linear_trajectory(double x0, const TimeGrid& grid) {
    DiscreteTrajectory traj;
    traj.grid = grid;
    traj.X.resize(grid.size());
    for (std::size_t k = 0; k <= grid.n_steps; ++k)
        traj.X[k] = x0 * (1.0 - static_cast<double>(k) / static_cast<double>(grid.n_steps));
    traj.X.back() = 0.0;
    return traj;
}

double deterministic_objective(const DiscreteTrajectory& traj, double mu,
                               const ParamCurve& sigma, const ParamCurve& eta) {
    const double dt = traj.grid.dt();
    double total = 0.0;
    for (std::size_t k = 0; k < traj.grid.n_steps; ++k) {
        const double t = traj.grid.point(k);
        const double v = traj.rate(k);
        const double sig = sigma(t);
        total += (eta(t) * v * v + mu * sig * sig * traj.X[k] * traj.X[k]) * dt;
    }
    return total;
}

DiscreteTrajectory discrete_equilibrium_basic(const BasicModelParams& params, std::size_t N) {
    if (N < 3) throw std::invalid_argument("discrete_equilibrium_basic: N must be >= 3");
    const TimeGrid grid(0.0, params.horizon.t_end, N);
    const double dt = grid.dt();

    // Stationarity in the interior unknowns X_1 .. X_{N-1}:
    //   -eta_{k-1} X_{k-1} + (eta_{k-1} + eta_k + mu sigma_k^2 dt^2) X_k - eta_k X_{k+1} = 0
    const std::size_t n = N - 1;
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = i + 1;
        const double eta_prev = params.eta(grid.point(k - 1));
        const double eta_here = params.eta(grid.point(k));
        const double sig = params.sigma(grid.point(k));
        diag[i] = eta_prev + eta_here + params.mu * sig * sig * dt * dt;
        if (i > 0) lower[i] = -eta_prev;
        if (i + 1 < n) upper[i] = -eta_here;
    }
    rhs[0] = params.eta(grid.point(0)) * params.x0;  // X_0 boundary; X_N = 0 contributes nothing

    // Thomas algorithm; the system is SPD for eta > 0
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
        if (!(diag[i] > 0.0)) throw std::runtime_error("discrete_equilibrium_basic: singular system");
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];

    DiscreteTrajectory traj;
    traj.grid = grid;
    traj.X.resize(N + 1);
    traj.X[0] = params.x0;
    for (std::size_t i = 0; i < n; ++i) traj.X[i + 1] = x[i];
    traj.X[N] = 0.0;
    return traj;
}

double perturbation_optimality_check(const BasicModelParams& params,
                                     const DiscreteTrajectory& traj, std::size_t k,
                                     double delta) {
    const std::size_t N = traj.grid.n_steps;
    if (k < 1 || k > N - 1)
        throw std::out_of_range("perturbation_optimality_check: interior index required");
    const double dt = traj.grid.dt();
    const double eta_prev = params.eta(traj.grid.point(k - 1));
    const double eta_here = params.eta(traj.grid.point(k));
    const double sig = params.sigma(traj.grid.point(k));

    // only the two adjacent rates and the node's variance term move
    auto local = [&](double Xk) {
        const double v_prev = (traj.X[k - 1] - Xk) / dt;
        const double v_here = (Xk - traj.X[k + 1]) / dt;
        return (eta_prev * v_prev * v_prev + eta_here * v_here * v_here +
                params.mu * sig * sig * Xk * Xk) * dt;
    };
    return local(traj.X[k] + delta) - local(traj.X[k]);
}

namespace {

/// Centered difference of a stored coefficient at grid index k.
double ddt(const TimeGrid& grid, const std::vector<double>& a, std::size_t k) {
    return (a[k + 1] - a[k - 1]) / (2.0 * grid.dt());
}

/// Largest index with t_k <= T - 10 eps and a right neighbor available.
template <typename Table>
std::size_t sample_limit(const Table& table) {
    const double t_max = table.grid.t_end - 10.0 * table.cutoff;
    const auto k = static_cast<std::size_t>(std::floor(t_max / table.grid.dt()));
    if (k < 2 || k >= table.cutoff_index)
        throw std::invalid_argument("hjb residual: grid too coarse for the sampling window");
    return k;
}

}  // namespace

double hjb_residual_basic(const BasicCoefficientTable& table, const BasicModelParams& params,
                          std::size_t sample_count, std::uint64_t seed) {
    const std::size_t k_max = sample_limit(table);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick_k(1, k_max);
    const double x_scale = params.x0 != 0.0 ? std::abs(params.x0) : 100.0;
    std::uniform_real_distribution<double> pick_x(-x_scale, x_scale);

    double worst = 0.0;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const std::size_t k = pick_k(gen);
        const double t = table.grid.point(k);
        const double x = pick_x(gen);
        const double eta = params.eta(t);
        const double sig = params.sigma(t);
        const double L = table.L[k], Lf = table.Lf[k];
        const double L_t = ddt(table.grid, table.L, k);
        const double Lf_t = ddt(table.grid, table.Lf, k);

        // C = x^2 L, f = x^2 Lf; no price dependence survives the reduction
        const double res_c = x * x * (L_t - L * L / eta + params.mu * sig * sig);
        const double res_f = x * x * (L * L / eta - 2.0 * L * Lf / eta + Lf_t);
        const double scale = params.mu * sig * sig * x * x + 1.0;
        worst = std::max({worst, std::abs(res_c) / scale, std::abs(res_f) / scale});
    }
    return worst;
}

double hjb_residual_signal(const SignalCoefficientTable& table, const SignalModelParams& params,
                           std::size_t sample_count, std::uint64_t seed) {
    const std::size_t k_max = sample_limit(table);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick_k(1, k_max);
    const double x_scale = params.x0 != 0.0 ? std::abs(params.x0) : 100.0;
    std::uniform_real_distribution<double> pick_x(-x_scale, x_scale);
    std::uniform_real_distribution<double> pick_b(-5.0, 5.0);

    double worst = 0.0;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const std::size_t k = pick_k(gen);
        const double t = table.grid.point(k);
        const double x = pick_x(gen);
        const double b = pick_b(gen);
        const double eta = params.eta(t);
        const double th = params.theta(t);
        const double s1 = params.sigma1(t), s2 = params.sigma2(t);
        const double s12 = s1 * s1, s22 = s2 * s2;
        const double mu = params.mu;

        const double D = table.D[k], E = table.E[k], F = table.F[k], H = table.H[k];
        const double L = table.Lf[k], M = table.M[k], N = table.N[k];

        const double C_x = 2.0 * x * D + b * F;
        const double C_b = 2.0 * b * E + x * F + H;
        const double C_bb = 2.0 * E;
        const double f_x = 2.0 * x * L + b * N;
        const double f_b = 2.0 * b * M + x * N;  // P = 0
        const double f_bb = 2.0 * M;

        const double C_t = x * x * ddt(table.grid, table.D, k) +
                           b * b * ddt(table.grid, table.E, k) +
                           x * b * ddt(table.grid, table.F, k) +
                           b * ddt(table.grid, table.H, k) + ddt(table.grid, table.I, k);
        const double f_t = x * x * ddt(table.grid, table.Lf, k) +
                           b * b * ddt(table.grid, table.M, k) +
                           x * b * ddt(table.grid, table.N, k) + ddt(table.grid, table.Q, k);

        const double res_c = -th * x * b - C_b * th * b + 0.5 * C_bb * (s12 + s22) + C_t -
                             C_x * C_x / (4.0 * eta) + mu * s12 * (x + f_b) * (x + f_b) +
                             mu * s22 * f_b * f_b;
        const double res_f = -th * x * b + C_x * C_x / (4.0 * eta) - f_b * th * b +
                             0.5 * f_bb * (s12 + s22) - C_x * f_x / (2.0 * eta) + f_t;
        const double scale = mu * s12 * x * x + std::abs(th * x * b) + 1.0;
        worst = std::max({worst, std::abs(res_c) / scale, std::abs(res_f) / scale});
    }
    return worst;
}

double hjb_residual_stochvol(const StochVolCoefficientTable& table,
                             const StochVolModelParams& params, std::size_t sample_count,
                             std::uint64_t seed) {
    const std::size_t k_max = sample_limit(table);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick_k(1, k_max);
    const double x_scale = params.x0 != 0.0 ? std::abs(params.x0) : 100.0;
    std::uniform_real_distribution<double> pick_x(-x_scale, x_scale);
    std::uniform_real_distribution<double> pick_xi(-2.0, 2.0);

    const double T = table.grid.t_end;
    double worst = 0.0;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const std::size_t k = pick_k(gen);
        const double t = table.grid.point(k);
        const double x = pick_x(gen);
        const double xi = pick_xi(gen);
        const double eta = params.eta(t);
        const double a = params.a_xi(t);
        const double b2 = params.b_xi(t) * params.b_xi(t);
        const double mu = params.mu;

        const double D = table.D[k], E = table.E[k], F = table.F[k], G = table.G[k],
                     H = table.H[k];
        const double L = table.Lf[k], M = table.M[k], N = table.N[k], O = table.O[k],
                     P = table.P[k];

        const double C_x = 2.0 * x * D + xi * F + G;
        const double C_xi = 2.0 * xi * E + x * F + H;
        const double C_xixi = 2.0 * E;
        const double f_x = 2.0 * x * L + xi * N + O;
        const double f_xi = 2.0 * xi * M + x * N + P;
        const double f_xixi = 2.0 * M;

        const double C_t = x * x * ddt(table.grid, table.D, k) +
                           xi * xi * ddt(table.grid, table.E, k) +
                           x * xi * ddt(table.grid, table.F, k) +
                           x * ddt(table.grid, table.G, k) + xi * ddt(table.grid, table.H, k) +
                           ddt(table.grid, table.I, k);
        const double f_t = x * x * ddt(table.grid, table.Lf, k) +
                           xi * xi * ddt(table.grid, table.M, k) +
                           x * xi * ddt(table.grid, table.N, k) +
                           x * ddt(table.grid, table.O, k) + xi * ddt(table.grid, table.P, k) +
                           ddt(table.grid, table.Q, k);

        // sigma^2 x^2 = xi (T - t) x under the model's volatility structure
        const double var_term = mu * xi * (T - t) * x;
        const double res_c = 0.5 * C_xixi * b2 + C_xi * a + C_t - C_x * C_x / (4.0 * eta) +
                             var_term + mu * f_xi * f_xi * b2;
        const double res_f = C_x * C_x / (4.0 * eta) + 0.5 * f_xixi * b2 + f_xi * a -
                             C_x * f_x / (2.0 * eta) + f_t;
        const double scale = std::abs(var_term) + 1.0;
        worst = std::max({worst, std::abs(res_c) / scale, std::abs(res_f) / scale});
    }
    return worst;
}

}  // namespace optexec
