#include "optexec/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace optexec {

using nlohmann::json;

TimeGrid::TimeGrid(double start, double end, std::size_t steps)
    : t_start(start), t_end(end), n_steps(steps) {
    if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    if (n_steps < 2) throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
}

ParamCurve ParamCurve::constant(double value) {
    ParamCurve c;
    c.constant_ = value;
    return c;
}

ParamCurve ParamCurve::sampled(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw std::invalid_argument("ParamCurve: no samples");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("ParamCurve: sample times must be strictly increasing");
    }
    if (samples.size() == 1) return constant(samples.front().second);
    ParamCurve c;
    c.constant_ = 0.0;
    c.samples_ = std::move(samples);
    return c;
}

double ParamCurve::operator()(double t) const {
    if (samples_.empty()) return constant_;
    if (t <= samples_.front().first) return samples_.front().second;
    if (t >= samples_.back().first) return samples_.back().second;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const auto& s) { return v < s.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

double ParamCurve::min_on(double a, double b, std::size_t probes) const {
    if (samples_.empty()) return constant_;
    double m = std::min((*this)(a), (*this)(b));
    for (const auto& s : samples_)
        if (s.first > a && s.first < b) m = std::min(m, s.second);
    for (std::size_t i = 1; i < probes; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(probes);
        m = std::min(m, (*this)(t));
    }
    return m;
}

double eval_curve(const ParamCurve& curve, double t, double T) {
    if (t < 0.0 || t > T) throw std::out_of_range("eval_curve: t outside [0, T]");
    return curve(t);
}

namespace {

void require_nonnegative(const ParamCurve& c, double T, const char* name) {
    if (c.min_on(0.0, T) < 0.0)
        throw std::invalid_argument(std::string(name) + " must be nonnegative on [0, T]");
}

void require_positive(const ParamCurve& c, double T, const char* name) {
    if (!(c.min_on(0.0, T) > 0.0))
        throw std::invalid_argument(std::string(name) + " must be strictly positive on [0, T]");
}

void require_mu(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and >= 0");
}

}  // namespace

void BasicModelParams::validate() const {
    require_mu(mu);
    require_nonnegative(sigma, horizon.t_end, "sigma");
    require_positive(eta, horizon.t_end, "eta");
}

void SignalModelParams::validate() const {
    require_mu(mu);
    require_nonnegative(theta, horizon.t_end, "theta");
    require_nonnegative(sigma1, horizon.t_end, "sigma1");
    require_nonnegative(sigma2, horizon.t_end, "sigma2");
    require_positive(eta, horizon.t_end, "eta");
}

void StochVolModelParams::validate() const {
    require_mu(mu);
    require_nonnegative(b_xi, horizon.t_end, "b_xi");
    require_positive(eta, horizon.t_end, "eta");
}

ModelKind model_kind(const ModelParams& p) {
    if (std::holds_alternative<BasicModelParams>(p)) return ModelKind::basic;
    if (std::holds_alternative<SignalModelParams>(p)) return ModelKind::signal;
    return ModelKind::stochvol;
}

const char* model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::basic: return "basic";
        case ModelKind::signal: return "signal";
        default: return "stochvol";
    }
}

double model_horizon_T(const ModelParams& p) {
    return model_grid(p).t_end;
}

const TimeGrid& model_grid(const ModelParams& p) {
    return std::visit([](const auto& m) -> const TimeGrid& { return m.horizon; }, p);
}

namespace {

ParamCurve curve_from_json(const json& j, const char* field) {
    if (j.is_number()) return ParamCurve::constant(j.get<double>());
    if (j.is_array()) {
        std::vector<std::pair<double, double>> samples;
        for (const auto& e : j) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ConfigError(std::string(field) + ": sampled curve entries must be [t, value] pairs");
            samples.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        try {
            return ParamCurve::sampled(std::move(samples));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(field) + ": " + e.what());
        }
    }
    throw ConfigError(std::string(field) + ": expected number or array of [t, value] pairs");
}

ParamCurve get_curve(const json& j, const char* field) {
    if (!j.contains(field)) throw ConfigError(std::string("missing field: ") + field);
    return curve_from_json(j.at(field), field);
}

double get_number(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number())
        throw ConfigError(std::string("missing or non-numeric field: ") + field);
    return j.at(field).get<double>();
}

TimeGrid grid_from_json(const json& j) {
    const double T = get_number(j, "T");
    std::size_t n = 5000;
    if (j.contains("n_steps")) {
        if (!j.at("n_steps").is_number_unsigned())
            throw ConfigError("n_steps: expected positive integer");
        n = j.at("n_steps").get<std::size_t>();
    }
    try {
        return TimeGrid(0.0, T, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json curve_to_json(const ParamCurve& c) {
    if (c.is_constant()) return json(c.constant_value());
    json arr = json::array();
    for (const auto& s : c.samples()) arr.push_back(json::array({s.first, s.second}));
    return arr;
}

}  // namespace

ModelParams load_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    if (!j.contains("model") || !j.at("model").is_string())
        throw ConfigError("missing string field: model");
    const std::string model = j.at("model").get<std::string>();

    try {
        if (model == "basic") {
            BasicModelParams p;
            p.sigma = get_curve(j, "sigma");
            p.eta = get_curve(j, "eta");
            p.mu = get_number(j, "mu");
            p.x0 = get_number(j, "x0");
            p.s0 = get_number(j, "s0");
            p.horizon = grid_from_json(j);
            p.validate();
            return p;
        }
        if (model == "signal") {
            SignalModelParams p;
            p.theta = get_curve(j, "theta");
            p.sigma1 = get_curve(j, "sigma1");
            p.sigma2 = get_curve(j, "sigma2");
            p.eta = get_curve(j, "eta");
            p.mu = get_number(j, "mu");
            p.x0 = get_number(j, "x0");
            p.s0 = get_number(j, "s0");
            p.alpha0 = get_number(j, "alpha0");
            p.horizon = grid_from_json(j);
            p.validate();
            return p;
        }
        if (model == "stochvol") {
            StochVolModelParams p;
            p.a_xi = get_curve(j, "a_xi");
            p.b_xi = get_curve(j, "b_xi");
            p.eta = get_curve(j, "eta");
            p.mu = get_number(j, "mu");
            p.x0 = get_number(j, "x0");
            p.s0 = get_number(j, "s0");
            p.xi0 = get_number(j, "xi0");
            p.horizon = grid_from_json(j);
            p.validate();
            return p;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown model tag: " + model);
}

ModelParams load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

std::string serialize(const ModelParams& p) {
    json j;
    std::visit([&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BasicModelParams>) {
            j["model"] = "basic";
            j["sigma"] = curve_to_json(m.sigma);
        } else if constexpr (std::is_same_v<M, SignalModelParams>) {
            j["model"] = "signal";
            j["theta"] = curve_to_json(m.theta);
            j["sigma1"] = curve_to_json(m.sigma1);
            j["sigma2"] = curve_to_json(m.sigma2);
            j["alpha0"] = m.alpha0;
        } else {
            j["model"] = "stochvol";
            j["a_xi"] = curve_to_json(m.a_xi);
            j["b_xi"] = curve_to_json(m.b_xi);
            j["xi0"] = m.xi0;
        }
        j["eta"] = curve_to_json(m.eta);
        j["mu"] = m.mu;
        j["x0"] = m.x0;
        j["s0"] = m.s0;
        j["T"] = m.horizon.t_end;
        j["n_steps"] = m.horizon.n_steps;
    }, p);
    return j.dump(2);
}

}  // namespace optexec
