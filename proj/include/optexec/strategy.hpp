#pragma once

#include <variant>

#include "optexec/coeffs.hpp"
#include "optexec/params.hpp"

namespace optexec {

/// Feedback map from state to the rate of buying.  Inside the cutoff
/// window (T - eps, T] every rule degenerates to linear liquidation
/// X / (T - t); before it the quadratic-ansatz coefficients drive the
/// rate:
///   basic:    X L(t) / eta(t)
///   signal:   (2 D(t) X + F(t) beta) / (2 eta(t)),  beta = S - alpha
///   stochvol: (2 D(t) X + F(t) xi + G(t)) / (2 eta(t))
class StrategyRule {
public:
    explicit StrategyRule(BasicCoefficientTable table, ParamCurve eta);
    explicit StrategyRule(SignalCoefficientTable table, ParamCurve eta);
    explicit StrategyRule(StochVolCoefficientTable table, ParamCurve eta);

    ModelKind model() const { return model_; }
    double horizon_T() const { return grid_.t_end; }
    double cutoff() const { return cutoff_; }

    double rate_basic(double t, double X) const;
    double rate_signal(double t, double X, double beta) const;
    double rate_stochvol(double t, double X, double xi) const;

    const BasicCoefficientTable& basic_table() const;
    const SignalCoefficientTable& signal_table() const;
    const StochVolCoefficientTable& stochvol_table() const;

private:
    double check_time(double t) const;  // returns T - t, throws outside [0, T)

    ModelKind model_;
    std::variant<BasicCoefficientTable, SignalCoefficientTable, StochVolCoefficientTable> table_;
    ParamCurve eta_;
    TimeGrid grid_;
    double cutoff_;
};

/// Convenience: solve the model's coefficient system and wrap it.
StrategyRule make_strategy(const ModelParams& params, double cutoff, unsigned substeps = 8);

}  // namespace optexec
