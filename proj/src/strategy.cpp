#include "optexec/strategy.hpp"

#include <stdexcept>
#include <utility>

namespace optexec {

StrategyRule::StrategyRule(BasicCoefficientTable table, ParamCurve eta)
    : model_(ModelKind::basic), table_(std::move(table)), eta_(std::move(eta)) {
    grid_ = basic_table().grid;
    cutoff_ = basic_table().cutoff;
}

StrategyRule::StrategyRule(SignalCoefficientTable table, ParamCurve eta)
    : model_(ModelKind::signal), table_(std::move(table)), eta_(std::move(eta)) {
    grid_ = signal_table().grid;
    cutoff_ = signal_table().cutoff;
}

StrategyRule::StrategyRule(StochVolCoefficientTable table, ParamCurve eta)
    : model_(ModelKind::stochvol), table_(std::move(table)), eta_(std::move(eta)) {
    grid_ = stochvol_table().grid;
    cutoff_ = stochvol_table().cutoff;
}

const BasicCoefficientTable& StrategyRule::basic_table() const {
    return std::get<BasicCoefficientTable>(table_);
}
const SignalCoefficientTable& StrategyRule::signal_table() const {
    return std::get<SignalCoefficientTable>(table_);
}
const StochVolCoefficientTable& StrategyRule::stochvol_table() const {
    return std::get<StochVolCoefficientTable>(table_);
}

double StrategyRule::check_time(double t) const {
    if (t < 0.0) throw std::domain_error("strategy rate: t < 0");
    const double u = grid_.t_end - t;
    if (!(u > 0.0)) throw std::domain_error("strategy rate: t >= T");
    return u;
}

double StrategyRule::rate_basic(double t, double X) const {
    const double u = check_time(t);
    if (u < cutoff_) return X / u;
    const auto& tab = basic_table();
    return X * interp_coeff(tab.grid, tab.L, t) / eta_(t);
}

double StrategyRule::rate_signal(double t, double X, double beta) const {
    const double u = check_time(t);
    if (u < cutoff_) return X / u;
    const auto& tab = signal_table();
    const double D = interp_coeff(tab.grid, tab.D, t);
    const double F = interp_coeff(tab.grid, tab.F, t);
    return (2.0 * D * X + F * beta) / (2.0 * eta_(t));
}

double StrategyRule::rate_stochvol(double t, double X, double xi) const {
    const double u = check_time(t);
    if (u < cutoff_) return X / u;
    const auto& tab = stochvol_table();
    const double D = interp_coeff(tab.grid, tab.D, t);
    const double F = interp_coeff(tab.grid, tab.F, t);
    const double G = interp_coeff(tab.grid, tab.G, t);
    return (2.0 * D * X + F * xi + G) / (2.0 * eta_(t));
}

StrategyRule make_strategy(const ModelParams& params, double cutoff, unsigned substeps) {
    return std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BasicModelParams>)
                return StrategyRule(solve_basic(p, cutoff, substeps), p.eta);
            else if constexpr (std::is_same_v<P, SignalModelParams>)
                return StrategyRule(solve_signal(p, cutoff, substeps), p.eta);
            else
                return StrategyRule(solve_stochvol(p, cutoff, substeps), p.eta);
        },
        params);
}

}  // namespace optexec
