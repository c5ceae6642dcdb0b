#include "optexec/coeffs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace optexec {

double default_cutoff(const TimeGrid& grid) {
    return std::max(1e-3 * (grid.t_end - grid.t_start), 2.0 * grid.dt());
}

namespace {

struct CutoffInfo {
    std::size_t index;  // last stored grid index
    double eps;         // T - t_index
};

CutoffInfo snap_cutoff(const TimeGrid& grid, double cutoff) {
    if (!(cutoff > 0.0)) throw SolverError("cutoff must be positive");
    const double dt = grid.dt();
    const auto k = static_cast<std::size_t>(std::llround(cutoff / dt));
    if (k < 2) throw SolverError("cutoff too small for the grid: need at least 2 steps");
    if (k >= grid.n_steps) throw SolverError("cutoff must be well below T");
    return {grid.n_steps - k, static_cast<double>(k) * dt};
}

/// Backward RK4 from grid index `start` down to 0, `substeps` stages per
/// interval; records the state at every node via `record(k, y)`.
template <std::size_t K, typename Rhs, typename Record>
void integrate_backward(const TimeGrid& grid, std::size_t start, unsigned substeps,
                        std::array<double, K> y, const Rhs& rhs, const Record& record) {
    record(start, y);
    const double h = -grid.dt() / static_cast<double>(substeps);
    for (std::size_t k = start; k > 0; --k) {
        double t = grid.point(k);
        for (unsigned s = 0; s < substeps; ++s) {
            const auto k1 = rhs(t, y);
            std::array<double, K> y2;
            for (std::size_t i = 0; i < K; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
            const auto k2 = rhs(t + 0.5 * h, y2);
            for (std::size_t i = 0; i < K; ++i) y2[i] = y[i] + 0.5 * h * k2[i];
            const auto k3 = rhs(t + 0.5 * h, y2);
            for (std::size_t i = 0; i < K; ++i) y2[i] = y[i] + h * k3[i];
            const auto k4 = rhs(t + h, y2);
            for (std::size_t i = 0; i < K; ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t += h;
        }
        for (double v : y) {
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite coefficient value at t = " << grid.point(k - 1);
                throw SolverError(msg.str());
            }
        }
        record(k - 1, y);
    }
}

}  // namespace

BasicCoefficientTable solve_basic(const BasicModelParams& params, double cutoff,
                                  unsigned substeps) {
    const TimeGrid& grid = params.horizon;
    const auto cut = snap_cutoff(grid, cutoff);
    const double T = grid.t_end;
    const double te = T - cut.eps;

    BasicCoefficientTable table;
    table.grid = grid;
    table.cutoff = cut.eps;
    table.cutoff_index = cut.index;
    table.L.assign(cut.index + 1, 0.0);
    table.Lf.assign(cut.index + 1, 0.0);

    const double sig_e = params.sigma(te);
    std::array<double, 2> seed = {
        params.eta(te) / cut.eps + params.mu * sig_e * sig_e * cut.eps / 3.0,
        params.eta(te) / cut.eps};

    auto rhs = [&](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
        const double eta = params.eta(t);
        const double sig = params.sigma(t);
        const double L = y[0], Lf = y[1];
        return {L * L / eta - params.mu * sig * sig, (2.0 * L * Lf - L * L) / eta};
    };
    integrate_backward<2>(grid, cut.index, substeps, seed, rhs,
                          [&](std::size_t k, const std::array<double, 2>& y) {
                              table.L[k] = y[0];
                              table.Lf[k] = y[1];
                          });
    return table;
}

SignalCoefficientTable solve_signal(const SignalModelParams& params, double cutoff,
                                    unsigned substeps) {
    const TimeGrid& grid = params.horizon;
    const auto cut = snap_cutoff(grid, cutoff);
    const double T = grid.t_end;
    const double te = T - cut.eps;

    SignalCoefficientTable table;
    table.grid = grid;
    table.cutoff = cut.eps;
    table.cutoff_index = cut.index;
    for (auto* a : {&table.D, &table.E, &table.F, &table.H, &table.I, &table.Lf, &table.M,
                    &table.N, &table.Q})
        a->assign(cut.index + 1, 0.0);

    // State order: D, E, F, H, I, L, M, N, Q.  G = O = P vanish identically
    // and are dropped from the system.
    enum { iD, iE, iF, iH, iI, iL, iM, iN, iQ, kDim };
    const double s1e = params.sigma1(te);
    std::array<double, kDim> seed{};
    seed[iD] = params.eta(te) / cut.eps + params.mu * s1e * s1e * cut.eps / 3.0;
    seed[iL] = params.eta(te) / cut.eps;

    auto rhs = [&](double t, const std::array<double, kDim>& y) -> std::array<double, kDim> {
        const double eta = params.eta(t);
        const double th = params.theta(t);
        const double s1 = params.sigma1(t), s2 = params.sigma2(t);
        const double s12 = s1 * s1, s22 = s2 * s2;
        const double mu = params.mu;
        const double D = y[iD], E = y[iE], F = y[iF], L = y[iL], M = y[iM], N = y[iN];

        std::array<double, kDim> d{};
        d[iD] = D * D / eta - mu * s12 * (1.0 + N) * (1.0 + N) - mu * s22 * N * N;
        d[iE] = 2.0 * th * E + F * F / (4.0 * eta) - 4.0 * mu * (s12 + s22) * M * M;
        d[iF] = th + th * F + D * F / eta - 4.0 * mu * s12 * (1.0 + N) * M -
                4.0 * mu * s22 * M * N;
        d[iH] = th * y[iH];
        d[iI] = -(s12 + s22) * E;
        d[iL] = (2.0 * D * L - D * D) / eta;
        d[iM] = -F * F / (4.0 * eta) + 2.0 * th * M + F * N / (2.0 * eta);
        d[iN] = th - D * F / eta + th * N + (D * N + F * L) / eta;
        d[iQ] = -(s12 + s22) * M;
        return d;
    };
    integrate_backward<kDim>(grid, cut.index, substeps, seed, rhs,
                             [&](std::size_t k, const std::array<double, kDim>& y) {
                                 table.D[k] = y[iD];
                                 table.E[k] = y[iE];
                                 table.F[k] = y[iF];
                                 table.H[k] = y[iH];
                                 table.I[k] = y[iI];
                                 table.Lf[k] = y[iL];
                                 table.M[k] = y[iM];
                                 table.N[k] = y[iN];
                                 table.Q[k] = y[iQ];
                             });
    return table;
}

StochVolCoefficientTable solve_stochvol(const StochVolModelParams& params, double cutoff,
                                        unsigned substeps) {
    const TimeGrid& grid = params.horizon;
    const auto cut = snap_cutoff(grid, cutoff);
    const double T = grid.t_end;
    const double te = T - cut.eps;

    StochVolCoefficientTable table;
    table.grid = grid;
    table.cutoff = cut.eps;
    table.cutoff_index = cut.index;
    for (auto* a : {&table.D, &table.E, &table.F, &table.G, &table.H, &table.I, &table.Lf,
                    &table.M, &table.N, &table.O, &table.P, &table.Q})
        a->assign(cut.index + 1, 0.0);

    enum { iD, iE, iF, iG, iH, iI, iL, iM, iN, iO, iP, iQ, kDim };
    std::array<double, kDim> seed{};
    seed[iD] = params.eta(te) / cut.eps;
    seed[iL] = params.eta(te) / cut.eps;

    auto rhs = [&](double t, const std::array<double, kDim>& y) -> std::array<double, kDim> {
        const double eta = params.eta(t);
        const double a = params.a_xi(t);
        const double b = params.b_xi(t);
        const double b2 = b * b;
        const double mu = params.mu;
        const double D = y[iD], E = y[iE], F = y[iF], G = y[iG], H = y[iH];
        const double L = y[iL], M = y[iM], N = y[iN], O = y[iO], P = y[iP];

        std::array<double, kDim> d{};
        d[iD] = D * D / eta - mu * b2 * N * N;
        d[iE] = F * F / (4.0 * eta) - 4.0 * mu * b2 * M * M;
        d[iF] = D * F / eta - 4.0 * mu * b2 * M * N - mu * (T - t);
        d[iG] = D * G / eta - 2.0 * mu * b2 * N * P - a * F;
        d[iH] = F * G / (2.0 * eta) - 4.0 * mu * b2 * M * P - 2.0 * a * E;
        d[iI] = -b2 * E + G * G / (4.0 * eta) - mu * b2 * P * P - a * H;
        d[iL] = (2.0 * D * L - D * D) / eta;
        d[iM] = -F * F / (4.0 * eta) + F * N / (2.0 * eta);
        d[iN] = -D * F / eta + (D * N + F * L) / eta;
        d[iO] = -(D * G - D * O - G * L) / eta - a * N;
        d[iP] = -(F * G - F * O - G * N) / (2.0 * eta) - 2.0 * a * M;
        d[iQ] = -G * G / (4.0 * eta) + G * O / (2.0 * eta) - a * P - b2 * M;
        return d;
    };
    integrate_backward<kDim>(grid, cut.index, substeps, seed, rhs,
                             [&](std::size_t k, const std::array<double, kDim>& y) {
                                 table.D[k] = y[iD];
                                 table.E[k] = y[iE];
                                 table.F[k] = y[iF];
                                 table.G[k] = y[iG];
                                 table.H[k] = y[iH];
                                 table.I[k] = y[iI];
                                 table.Lf[k] = y[iL];
                                 table.M[k] = y[iM];
                                 table.N[k] = y[iN];
                                 table.O[k] = y[iO];
                                 table.P[k] = y[iP];
                                 table.Q[k] = y[iQ];
                             });
    return table;
}

double interp_coeff(const TimeGrid& grid, const std::vector<double>& values, double t) {
    const double dt = grid.dt();
    const double pos = (t - grid.t_start) / dt;
    if (pos <= 0.0) return values.front();
    const auto last = values.size() - 1;
    if (pos >= static_cast<double>(last)) return values.back();
    const auto k = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(k);
    return values[k] + w * (values[k + 1] - values[k]);
}

namespace {

struct NamedArrays {
    std::vector<std::pair<std::string, const std::vector<double>*>> items;
};

NamedArrays named(const BasicCoefficientTable& t) {
    return {{{"L", &t.L}}};
}
NamedArrays named(const SignalCoefficientTable& t) {
    return {{{"D", &t.D}, {"E", &t.E}, {"F", &t.F}, {"H", &t.H}, {"I", &t.I},
             {"L", &t.Lf}, {"M", &t.M}, {"N", &t.N}, {"Q", &t.Q}}};
}
NamedArrays named(const StochVolCoefficientTable& t) {
    return {{{"D", &t.D}, {"E", &t.E}, {"F", &t.F}, {"G", &t.G}, {"H", &t.H}, {"I", &t.I},
             {"L", &t.Lf}, {"M", &t.M}, {"N", &t.N}, {"O", &t.O}, {"P", &t.P}, {"Q", &t.Q}}};
}

template <typename Table>
std::string table_csv(const Table& table) {
    const auto cols = named(table);
    std::ostringstream out;
    out.precision(17);
    out << "t";
    for (const auto& c : cols.items) out << "," << c.first;
    out << "\n";
    for (std::size_t k = 0; k <= table.cutoff_index; ++k) {
        out << table.grid.point(k);
        for (const auto& c : cols.items) out << "," << (*c.second)[k];
        out << "\n";
    }
    return out.str();
}

template <typename Solve>
ConvergenceReport richardson(const TimeGrid& base, double cutoff, std::size_t n_steps,
                             const Solve& solve) {
    ConvergenceReport report;
    report.n_steps = n_steps;
    report.cutoff = cutoff;

    const auto t1 = solve(TimeGrid(base.t_start, base.t_end, n_steps));
    const auto t2 = solve(TimeGrid(base.t_start, base.t_end, 2 * n_steps));
    const auto t4 = solve(TimeGrid(base.t_start, base.t_end, 4 * n_steps));
    const auto c1 = named(t1), c2 = named(t2), c4 = named(t4);

    for (std::size_t i = 0; i < c1.items.size(); ++i) {
        CoefficientConvergence cc;
        cc.name = c1.items[i].first;
        // compare on the coarse nodes shared by all three grids
        for (std::size_t k = 0; k <= t1.cutoff_index; ++k) {
            const double a = (*c1.items[i].second)[k];
            const double b = (*c2.items[i].second)[2 * k];
            const double c = (*c4.items[i].second)[4 * k];
            cc.diff_coarse = std::max(cc.diff_coarse, std::abs(a - b));
            cc.diff_fine = std::max(cc.diff_fine, std::abs(b - c));
        }
        cc.order = (cc.diff_fine > 0.0) ? std::log2(cc.diff_coarse / cc.diff_fine)
                                        : std::numeric_limits<double>::quiet_NaN();
        report.coefficients.push_back(std::move(cc));
    }
    return report;
}

}  // namespace

ConvergenceReport refine_convergence(const ModelParams& params, double cutoff,
                                     std::size_t n_steps, unsigned substeps) {
    if (n_steps < 4) throw SolverError("refine_convergence: n_steps must be >= 4");
    const TimeGrid& base = model_grid(params);
    return std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            auto solve = [&](const TimeGrid& g) {
                P q = p;
                q.horizon = g;
                if constexpr (std::is_same_v<P, BasicModelParams>)
                    return solve_basic(q, cutoff, substeps);
                else if constexpr (std::is_same_v<P, SignalModelParams>)
                    return solve_signal(q, cutoff, substeps);
                else
                    return solve_stochvol(q, cutoff, substeps);
            };
            return richardson(base, cutoff, n_steps, solve);
        },
        params);
}

std::string to_csv(const BasicCoefficientTable& table) { return table_csv(table); }
std::string to_csv(const SignalCoefficientTable& table) { return table_csv(table); }
std::string to_csv(const StochVolCoefficientTable& table) { return table_csv(table); }

}  // namespace optexec
