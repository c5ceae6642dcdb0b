#pragma once

namespace optexec {

/// coth(u) for u > 0, stable at both extremes: Laurent expansion below
/// 1e-8, exp-based branch above 20 to avoid overflow.
double coth(double u);

/// Constant-parameter Riccati coefficient
///   L(t) = sqrt(mu eta sigma^2) coth(kappa (T - t)),  kappa = sqrt(mu sigma^2 / eta).
/// The mu sigma^2 = 0 limit is eta / (T - t).
double basic_L_closed(double t, double mu, double sigma, double eta, double T);

/// Feedback rate X kappa coth(kappa (T - t)) = X L(t) / eta.
double basic_rate_closed(double t, double X, double mu, double sigma, double eta, double T);

/// Inventory trajectory implied by the constant-parameter feedback rate:
///   X(t) = x0 sinh(kappa (T - t)) / sinh(kappa T),
/// the x0 (1 - t/T) line when mu sigma^2 = 0.
double basic_inventory_closed(double t, double x0, double mu, double sigma, double eta, double T);

}  // namespace optexec
