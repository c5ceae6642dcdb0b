#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optexec/params.hpp"
#include "optexec/strategy.hpp"

namespace optexec {

/// One simulated trajectory on a uniform grid: price, auxiliary state
/// (signal alpha or market state xi), remaining shares, applied rates and
/// the cumulative cost process Y with C = Y_N.
struct PathRecord {
    ModelKind model = ModelKind::basic;
    TimeGrid grid;
    std::uint64_t seed = 0;
    std::vector<double> S;      // size N+1
    std::vector<double> extra;  // alpha / xi; empty for the basic model
    std::vector<double> X;      // size N+1, X[0] = x0, X[N] = 0
    std::vector<double> v;      // size N, rate applied on [t_k, t_{k+1})
    std::vector<double> Y;      // size N+1, Y[0] = 0
    std::size_t clamp_events = 0;  // stochvol sigma clamp activations

    double cost() const { return Y.back(); }
};

struct SimSummary {
    std::size_t n_paths = 0;
    double mean_cost = 0.0;
    double var_cost = 0.0;       // unbiased sample variance
    double objective = 0.0;      // mean + mu * var
    double std_error_mean = 0.0;
};

struct TotalVarianceReport {
    double split_time = 0.0;
    double var_total = 0.0;       // Var_0(C), independent plain ensemble
    double mean_inner_var = 0.0;  // E_0[Var_tau(C)]
    double var_inner_mean = 0.0;  // Var_0[E_tau(C)]
    double gap = 0.0;  // |var_total - mean_inner_var - var_inner_mean| / var_total
};

/// Explicit first-order time stepping of the model dynamics with the
/// feedback rule held constant over each step.  The final step replaces
/// the rule's rate with X/dt so X_N = 0 exactly, charging the temporary
/// impact cost of the forced trade.  Normal draws come from a
/// counter-based generator keyed by (seed, step), so a path is a pure
/// function of its arguments.
PathRecord simulate_path(const ModelParams& params, const StrategyRule& rule,
                         std::uint64_t seed, std::size_t n_steps);

/// Sample mean / unbiased variance of terminal cost over paths keyed
/// seed, seed+1, ...  Aggregation is order-independent.
SimSummary estimate_mean_variance(const ModelParams& params, const StrategyRule& rule,
                                  std::size_t n_paths, std::uint64_t base_seed,
                                  std::size_t n_steps);

/// Nested-simulation check of
///   Var_0(C) = E_0[Var_tau(C)] + Var_0[E_tau(C)].
/// Var_0 comes from an independent plain ensemble of n_outer * n_inner
/// paths so the reported gap is a genuine statistical consistency test.
TotalVarianceReport total_variance_check(const ModelParams& params, const StrategyRule& rule,
                                         double split_time, std::size_t n_outer,
                                         std::size_t n_inner, std::uint64_t base_seed,
                                         std::size_t n_steps);

/// Columns t,S,extra,X,v,Y (v blank on the last row).
std::string path_csv(const PathRecord& path);

std::string summary_json(const SimSummary& summary, const ModelParams& params,
                         std::uint64_t base_seed);

}  // namespace optexec
