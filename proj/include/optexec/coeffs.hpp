#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "optexec/params.hpp"

namespace optexec {

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Value-function coefficients of the basic model, C = x^2 L(t) and
/// f = x^2 Lf(t), sampled on grid points t_0 .. t_{cutoff_index}.
/// The window (T - cutoff, T] is excluded: there the coefficients follow
/// the singular eta/(T-t) asymptotic and the strategy switches to linear
/// liquidation.
struct BasicCoefficientTable {
    TimeGrid grid;
    double cutoff = 0.0;        // effective epsilon, snapped to the grid
    std::size_t cutoff_index = 0;  // last stored grid index, t = T - cutoff
    std::vector<double> L;
    std::vector<double> Lf;  // coefficient of f; used by the HJB residual check
};

/// Signal-model coefficients of
///   C = x^2 D + beta^2 E + x beta F + x G + beta H + I,
///   f = x^2 L + beta^2 M + x beta N + x O + beta P + Q,
/// with G = O = P identically zero and therefore not stored.
struct SignalCoefficientTable {
    TimeGrid grid;
    double cutoff = 0.0;
    std::size_t cutoff_index = 0;
    std::vector<double> D, E, F, H, I;
    std::vector<double> Lf, M, N, Q;
};

/// Stochastic-volatility coefficients, same quadratic forms in (x, xi);
/// all twelve functions are stored.
struct StochVolCoefficientTable {
    TimeGrid grid;
    double cutoff = 0.0;
    std::size_t cutoff_index = 0;
    std::vector<double> D, E, F, G, H, I;
    std::vector<double> Lf, M, N, O, P, Q;
};

/// max(1e-3 T, 2 dt)
double default_cutoff(const TimeGrid& grid);

/// Classical RK4, fixed `substeps` stages per grid interval, backward
/// from t = T - cutoff. The singular coefficients are seeded with the
/// two-term expansion eta/eps + c eps (c from the dominant balance of
/// each system); the regular ones start at their zero terminal values.
BasicCoefficientTable solve_basic(const BasicModelParams& params, double cutoff,
                                  unsigned substeps = 8);
SignalCoefficientTable solve_signal(const SignalModelParams& params, double cutoff,
                                    unsigned substeps = 8);
StochVolCoefficientTable solve_stochvol(const StochVolModelParams& params, double cutoff,
                                        unsigned substeps = 8);

/// Linear interpolation of a stored coefficient array at t within
/// [t_0, t_cutoff_index].
double interp_coeff(const TimeGrid& grid, const std::vector<double>& values, double t);

struct CoefficientConvergence {
    std::string name;
    double diff_coarse = 0.0;  // max-norm, n vs 2n
    double diff_fine = 0.0;    // max-norm, 2n vs 4n
    double order = 0.0;        // log2(diff_coarse / diff_fine); NaN when both vanish
};

struct ConvergenceReport {
    std::size_t n_steps = 0;
    double cutoff = 0.0;
    std::vector<CoefficientConvergence> coefficients;
};

/// Solves at n, 2n and 4n steps with the same cutoff and Richardson-
/// estimates the observed order per coefficient on the shared grid.
ConvergenceReport refine_convergence(const ModelParams& params, double cutoff,
                                     std::size_t n_steps, unsigned substeps = 8);

std::string to_csv(const BasicCoefficientTable& table);
std::string to_csv(const SignalCoefficientTable& table);
std::string to_csv(const StochVolCoefficientTable& table);

}  // namespace optexec
