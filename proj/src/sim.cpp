#include "optexec/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "optexec/rng.hpp"

namespace optexec {

namespace {

struct SegmentState {
    double X = 0.0;
    double S = 0.0;
    double extra = 0.0;  // alpha / xi
    double Y = 0.0;
};

double pairwise_sum(const std::vector<double>& values, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += values[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

double pairwise_sum(const std::vector<double>& values) {
    return values.empty() ? 0.0 : pairwise_sum(values, 0, values.size());
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased
};

MeanVar mean_var(const std::vector<double>& values) {
    MeanVar mv;
    const auto n = values.size();
    if (n == 0) return mv;
    mv.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return mv;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mv.mean;
        sq[i] = d * d;
    }
    mv.var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return mv;
}

/// Advance one path over grid indices [k0, n_steps).  The same normal
/// draw feeds the price increment and the sigma X dW cost term.
SegmentState run_segment(const ModelParams& params, const StrategyRule& rule,
                         std::uint64_t key, std::uint64_t path_id, const TimeGrid& grid,
                         std::size_t k0, SegmentState st, PathRecord* rec) {
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    const double T = grid.t_end;
    const std::size_t N = grid.n_steps;
    const ModelKind kind = model_kind(params);

    if (rec) {
        rec->S[k0] = st.S;
        rec->X[k0] = st.X;
        rec->Y[k0] = st.Y;
        if (kind != ModelKind::basic) rec->extra[k0] = st.extra;
    }

    for (std::size_t k = k0; k < N; ++k) {
        const double t = grid.point(k);
        double v;
        if (k + 1 == N) {
            v = st.X / dt;  // forced liquidation of the remainder
        } else {
            switch (kind) {
                case ModelKind::basic: v = rule.rate_basic(t, st.X); break;
                case ModelKind::signal: v = rule.rate_signal(t, st.X, st.S - st.extra); break;
                default: v = rule.rate_stochvol(t, st.X, st.extra); break;
            }
        }
        const NormalPair z = normal_pair(key, path_id, k);

        switch (kind) {
            case ModelKind::basic: {
                const auto& p = std::get<BasicModelParams>(params);
                const double sig = p.sigma(t);
                const double eta = p.eta(t);
                st.Y += eta * v * v * dt + sig * st.X * sqdt * z.z0;
                st.S += sig * sqdt * z.z0;
                break;
            }
            case ModelKind::signal: {
                const auto& p = std::get<SignalModelParams>(params);
                const double th = p.theta(t);
                const double s1 = p.sigma1(t), s2 = p.sigma2(t);
                const double eta = p.eta(t);
                const double drift = th * (st.extra - st.S);  // theta (alpha - S)
                st.Y += eta * v * v * dt + drift * st.X * dt + s1 * st.X * sqdt * z.z0;
                st.S += drift * dt + s1 * sqdt * z.z0;
                st.extra += s2 * sqdt * z.z1;
                break;
            }
            default: {
                const auto& p = std::get<StochVolModelParams>(params);
                const double eta = p.eta(t);
                // sigma^2 = xi (T - t) / X, clamped away from xi < 0 and X ~ 0
                const double floor_X = 0.01 * std::abs(p.x0);
                const double denom = std::max(st.X, floor_X);
                double sig = 0.0;
                if (denom > 0.0) {
                    const double s2v = std::max(st.extra, 0.0) * (T - t) / denom;
                    sig = std::sqrt(s2v);
                    if (rec && (st.extra < 0.0 || st.X < floor_X)) ++rec->clamp_events;
                }
                st.Y += eta * v * v * dt + sig * st.X * sqdt * z.z0;
                st.S += sig * sqdt * z.z0;
                st.extra += p.a_xi(t) * dt + p.b_xi(t) * sqdt * z.z1;
                break;
            }
        }
        st.X -= v * dt;
        if (k + 1 == N) st.X = 0.0;  // exact by the forced trade

        if (!std::isfinite(st.Y) || !std::isfinite(st.S) || !std::isfinite(st.X)) {
            std::ostringstream msg;
            msg << "non-finite simulation state at t = " << grid.point(k + 1);
            throw std::runtime_error(msg.str());
        }
        if (rec) {
            rec->v[k] = v;
            rec->S[k + 1] = st.S;
            rec->X[k + 1] = st.X;
            rec->Y[k + 1] = st.Y;
            if (kind != ModelKind::basic) rec->extra[k + 1] = st.extra;
        }
    }
    return st;
}

SegmentState initial_state(const ModelParams& params) {
    SegmentState st;
    std::visit([&](const auto& p) {
        st.X = p.x0;
        st.S = p.s0;
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SignalModelParams>) st.extra = p.alpha0;
        if constexpr (std::is_same_v<P, StochVolModelParams>) st.extra = p.xi0;
    }, params);
    return st;
}

TimeGrid sim_grid(const ModelParams& params, std::size_t n_steps) {
    if (n_steps < 10) throw std::invalid_argument("simulate: n_steps must be >= 10");
    return TimeGrid(0.0, model_horizon_T(params), n_steps);
}

}  // namespace

PathRecord simulate_path(const ModelParams& params, const StrategyRule& rule,
                         std::uint64_t seed, std::size_t n_steps) {
    const TimeGrid grid = sim_grid(params, n_steps);
    PathRecord rec;
    rec.model = model_kind(params);
    rec.grid = grid;
    rec.seed = seed;
    rec.S.assign(n_steps + 1, 0.0);
    rec.X.assign(n_steps + 1, 0.0);
    rec.Y.assign(n_steps + 1, 0.0);
    rec.v.assign(n_steps, 0.0);
    if (rec.model != ModelKind::basic) rec.extra.assign(n_steps + 1, 0.0);
    run_segment(params, rule, seed, 0, grid, 0, initial_state(params), &rec);
    return rec;
}

SimSummary estimate_mean_variance(const ModelParams& params, const StrategyRule& rule,
                                  std::size_t n_paths, std::uint64_t base_seed,
                                  std::size_t n_steps) {
    if (n_paths < 2) throw std::invalid_argument("estimate_mean_variance: n_paths must be >= 2");
    const TimeGrid grid = sim_grid(params, n_steps);
    const SegmentState start = initial_state(params);
    std::vector<double> costs(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i)
        costs[i] = run_segment(params, rule, base_seed + i, 0, grid, 0, start, nullptr).Y;

    const MeanVar mv = mean_var(costs);
    const double mu = std::visit([](const auto& p) { return p.mu; }, params);
    SimSummary s;
    s.n_paths = n_paths;
    s.mean_cost = mv.mean;
    s.var_cost = mv.var;
    s.objective = mv.mean + mu * mv.var;
    s.std_error_mean = std::sqrt(mv.var / static_cast<double>(n_paths));
    return s;
}

TotalVarianceReport total_variance_check(const ModelParams& params, const StrategyRule& rule,
                                         double split_time, std::size_t n_outer,
                                         std::size_t n_inner, std::uint64_t base_seed,
                                         std::size_t n_steps) {
    const TimeGrid grid = sim_grid(params, n_steps);
    const double T = grid.t_end;
    if (!(split_time > 0.0 && split_time < T))
        throw std::invalid_argument("total_variance_check: split time outside (0, T)");
    const auto k_tau = static_cast<std::size_t>(std::llround(split_time / grid.dt()));
    if (k_tau == 0 || k_tau >= grid.n_steps)
        throw std::invalid_argument("total_variance_check: split time too close to 0 or T");

    const SegmentState start = initial_state(params);
    std::vector<double> inner_vars(n_outer), inner_means(n_outer);
    for (std::size_t i = 0; i < n_outer; ++i) {
        const SegmentState mid =
            run_segment(params, rule, base_seed, 1 + i, grid, 0, start, nullptr);
        std::vector<double> costs(n_inner);
        for (std::size_t j = 0; j < n_inner; ++j) {
            const std::uint64_t pid = 1 + n_outer + i * n_inner + j;
            costs[j] = run_segment(params, rule, base_seed, pid, grid, k_tau, mid, nullptr).Y;
        }
        const MeanVar mv = mean_var(costs);
        inner_vars[i] = mv.var;
        inner_means[i] = mv.mean;
    }

    // independent plain ensemble for the left-hand side
    const std::size_t n_plain = n_outer * n_inner;
    std::vector<double> plain(n_plain);
    const std::uint64_t offset = 1 + n_outer + n_plain;
    for (std::size_t m = 0; m < n_plain; ++m)
        plain[m] = run_segment(params, rule, base_seed, offset + m, grid, 0, start, nullptr).Y;

    TotalVarianceReport r;
    r.split_time = grid.point(k_tau);
    r.var_total = mean_var(plain).var;
    r.mean_inner_var = pairwise_sum(inner_vars) / static_cast<double>(n_outer);
    r.var_inner_mean = mean_var(inner_means).var;
    r.gap = std::abs(r.var_total - r.mean_inner_var - r.var_inner_mean) /
            (r.var_total > 0.0 ? r.var_total : 1.0);
    return r;
}

std::string path_csv(const PathRecord& path) {
    std::ostringstream out;
    out.precision(17);
    out << "t,S,extra,X,v,Y\n";
    const std::size_t N = path.grid.n_steps;
    for (std::size_t k = 0; k <= N; ++k) {
        out << path.grid.point(k) << "," << path.S[k] << ",";
        if (!path.extra.empty()) out << path.extra[k];
        out << "," << path.X[k] << ",";
        if (k < N) out << path.v[k];
        out << "," << path.Y[k] << "\n";
    }
    return out.str();
}

std::string summary_json(const SimSummary& summary, const ModelParams& params,
                         std::uint64_t base_seed) {
    nlohmann::json j;
    j["n_paths"] = summary.n_paths;
    j["mean_cost"] = summary.mean_cost;
    j["var_cost"] = summary.var_cost;
    j["objective"] = summary.objective;
    j["std_error_mean"] = summary.std_error_mean;
    j["seed"] = base_seed;
    j["config"] = nlohmann::json::parse(serialize(params));
    return j.dump(2);
}

}  // namespace optexec
