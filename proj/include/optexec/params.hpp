#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace optexec {

/// Uniform grid of n_steps intervals on [t_start, t_end].
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t n_steps = 2;

    TimeGrid() = default;
    TimeGrid(double start, double end, std::size_t steps);

    double dt() const { return (t_end - t_start) / static_cast<double>(n_steps); }
    double point(std::size_t k) const { return t_start + static_cast<double>(k) * dt(); }
    std::size_t size() const { return n_steps + 1; }
};

/// Deterministic time-varying model parameter on [0, T].
/// Either a constant or a piecewise-linear interpolant of (time, value)
/// samples; evaluation outside the sampled range extends the end values.
class ParamCurve {
public:
    ParamCurve() : constant_(0.0) {}
    static ParamCurve constant(double value);
    static ParamCurve sampled(std::vector<std::pair<double, double>> samples);

    bool is_constant() const { return samples_.empty(); }
    double operator()(double t) const;

    double min_on(double a, double b, std::size_t probes = 256) const;
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }
    double constant_value() const { return constant_; }

private:
    double constant_;
    std::vector<std::pair<double, double>> samples_;  // empty for constants
};

/// Range-checked evaluation on the trading interval [0, T].
double eval_curve(const ParamCurve& curve, double t, double T);

struct BasicModelParams {
    ParamCurve sigma;  // price volatility
    ParamCurve eta;    // temporary impact coefficient, > 0
    double mu = 1.0;   // risk-aversion weight, >= 0
    double x0 = 0.0;   // initial share target
    double s0 = 0.0;   // initial price
    TimeGrid horizon;

    void validate() const;
};

struct SignalModelParams {
    ParamCurve theta;   // reversion rate toward the signal, >= 0
    ParamCurve sigma1;  // price volatility
    ParamCurve sigma2;  // signal volatility
    ParamCurve eta;
    double mu = 1.0;
    double x0 = 0.0;
    double s0 = 0.0;
    double alpha0 = 0.0;  // initial signal level
    TimeGrid horizon;

    void validate() const;
};

struct StochVolModelParams {
    ParamCurve a_xi;  // drift of the market state
    ParamCurve b_xi;  // diffusion of the market state, >= 0
    ParamCurve eta;
    double mu = 1.0;
    double x0 = 0.0;
    double s0 = 0.0;
    double xi0 = 0.0;  // initial market state
    TimeGrid horizon;

    void validate() const;
};

using ModelParams = std::variant<BasicModelParams, SignalModelParams, StochVolModelParams>;

enum class ModelKind { basic, signal, stochvol };

ModelKind model_kind(const ModelParams& p);
const char* model_name(ModelKind kind);
double model_horizon_T(const ModelParams& p);
const TimeGrid& model_grid(const ModelParams& p);

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse a JSON config document. The `model` field selects the variant;
/// scalar parameter values denote constant curves, arrays of [t, value]
/// pairs denote sampled curves.
ModelParams load_config(const std::string& json_text);
ModelParams load_config_file(const std::string& path);

/// Inverse of load_config up to JSON formatting.
std::string serialize(const ModelParams& p);

}  // namespace optexec
