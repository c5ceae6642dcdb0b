#pragma once

#include <cstdint>

#include "optexec/coeffs.hpp"
#include "optexec/params.hpp"

namespace optexec {

/// Deterministic execution schedule: holdings X_k on the grid with the
/// boundary conditions X_0 = x0, X_N = 0, and rates
/// v_k = (X_k - X_{k+1}) / dt.
struct DiscreteTrajectory {
    TimeGrid grid;
    std::vector<double> X;  // size N+1

    double rate(std::size_t k) const { return (X[k] - X[k + 1]) / grid.dt(); }
};

DiscreteTrajectory linear_trajectory(double x0, const TimeGrid& grid);

/// Sum_k [eta(t_k) v_k^2 + mu sigma(t_k)^2 X_k^2] dt
double deterministic_objective(const DiscreteTrajectory& traj, double mu,
                               const ParamCurve& sigma, const ParamCurve& eta);

/// Unique minimizer of deterministic_objective subject to the boundary
/// conditions, from the tridiagonal stationarity system
///   eta_{k-1} (X_k - X_{k-1}) + eta_k (X_k - X_{k+1}) + mu sigma_k^2 dt^2 X_k = 0,
/// solved by the Thomas algorithm.
DiscreteTrajectory discrete_equilibrium_basic(const BasicModelParams& params, std::size_t N);

/// Objective change when X_k is bumped by delta (the neighboring rates
/// absorb the bump).  Nonnegative at the equilibrium by convexity.
double perturbation_optimality_check(const BasicModelParams& params,
                                     const DiscreteTrajectory& traj, std::size_t k,
                                     double delta);

/// Maximum scaled residual of the quadratic ansatz in the model's pair
/// of PDEs at `sample_count` random (t, x, aux) points with
/// t <= T - 10 cutoff.  Coefficient time derivatives are centered
/// differences on the grid, so the check exercises the stored tables
/// end to end.
double hjb_residual_basic(const BasicCoefficientTable& table, const BasicModelParams& params,
                          std::size_t sample_count, std::uint64_t seed);
double hjb_residual_signal(const SignalCoefficientTable& table, const SignalModelParams& params,
                           std::size_t sample_count, std::uint64_t seed);
double hjb_residual_stochvol(const StochVolCoefficientTable& table,
                             const StochVolModelParams& params, std::size_t sample_count,
                             std::uint64_t seed);

}  // namespace optexec
