#include "optexec/closedform.hpp"

#include <cmath>
#include <stdexcept>

namespace optexec {

double coth(double u) {
    if (!(u > 0.0)) throw std::domain_error("coth: argument must be positive");
    if (u < 1e-8) return 1.0 / u + u / 3.0;
    if (u > 20.0) {
        const double e = std::exp(-2.0 * u);
        return 1.0 + 2.0 * e / (1.0 - e);
    }
    return 1.0 / std::tanh(u);
}

double basic_L_closed(double t, double mu, double sigma, double eta, double T) {
    if (!(t < T)) throw std::domain_error("basic_L_closed: t must be below T");
    if (!(eta > 0.0)) throw std::domain_error("basic_L_closed: eta must be positive");
    const double ms2 = mu * sigma * sigma;
    if (ms2 == 0.0) return eta / (T - t);
    const double kappa = std::sqrt(ms2 / eta);
    return std::sqrt(mu * eta * sigma * sigma) * coth(kappa * (T - t));
}

double basic_rate_closed(double t, double X, double mu, double sigma, double eta, double T) {
    return X * basic_L_closed(t, mu, sigma, eta, T) / eta;
}

double basic_inventory_closed(double t, double x0, double mu, double sigma, double eta, double T) {
    if (t < 0.0 || t > T) throw std::domain_error("basic_inventory_closed: t outside [0, T]");
    const double ms2 = mu * sigma * sigma;
    if (ms2 == 0.0) return x0 * (1.0 - t / T);
    const double kappa = std::sqrt(ms2 / eta);
    const double a = kappa * (T - t);
    const double b = kappa * T;
    // sinh(a)/sinh(b) = exp(a-b) (1 - exp(-2a)) / (1 - exp(-2b)), overflow-free
    return x0 * std::exp(a - b) * (1.0 - std::exp(-2.0 * a)) / (1.0 - std::exp(-2.0 * b));
}

}  // namespace optexec
