#ifndef PROXNAG_CERTIFICATES_HPP
#define PROXNAG_CERTIFICATES_HPP

#include "proxnag/problem.hpp"
#include "proxnag/trace.hpp"
#include "proxnag/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace proxnag {

/// Raised when mu_f = mu_F = 0 leaves no admissible c; the convex-case
/// energy certificate applies instead.
struct DegenerateIntervalError : ConfigError {
  using ConfigError::ConfigError;
};

/// Constants of the contraction certificate:
///   b = mu_hat/(2a), beta = (mu_hat - mu_f)/2,
///   c in (beta(1-a)/a, (mu_hat + mu_F)/(2a) - beta),
///   theta = max{ (b(1-a) + a(beta+c))/(b + mu_F/2), (1-a)(beta+c)/c }.
struct LyapunovParams {
  double a = 0.0;
  double mu_hat = 0.0;
  double L = 0.0;
  double mu_f = 0.0;
  double mu_F = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double c = 0.0;
  double theta = 0.0;
  double c_lower = 0.0;  // admissible interval for c
  double c_upper = 0.0;
  bool theory_regime = true;  // mu_hat >= L; false means warn-and-proceed
};

/// c_choice empty selects the interval midpoint. Endpoint choices give
/// theta = 1 exactly; interior choices give theta < 1.
LyapunovParams compute_params(double a, double mu_hat, double L, double mu_f,
                              double mu_F,
                              std::optional<double> c_choice = std::nullopt);

/// G + b*V + c*X.
double lyapunov_value(const LyapunovParams& params, double F_v_gap, double V,
                      double X);

/// G + (mu_hat/2a) V + (mu_hat(1-a)/2a) X.
double convex_energy(double mu_hat, double a, double F_v_gap, double V,
                     double X);

/// Fills row.lyap / row.energy from the stored gap_v, V, X columns.
void annotate_lyapunov(Trace& trace, const LyapunovParams& params);
void annotate_convex_energy(Trace& trace, double mu_hat, double a);

struct Violation {
  long k = 0;
  std::string kind;
  double slack = 0.0;
};

/// Flags every k with L_{k+1} > theta*L_k + rel_tol*max(1, L_k), and every k
/// with L_k above the envelope L_0 theta^k at the same tolerance.
std::vector<Violation> check_contraction(const Trace& trace,
                                         const LyapunovParams& params,
                                         double rel_tol = 1e-10);

/// Flags every k where
///   -(mu_hat(1-a)^3/2) D_k - (mu_hat/2a) R_{k+1} + (L/2) M_{k+1}
/// exceeds abs_tol*max(1, mu_hat*(D+R+M)).
std::vector<Violation> check_mismatch_absorption(const Trace& trace,
                                                 double mu_hat, double L,
                                                 double a,
                                                 double abs_tol = 1e-12);

struct ConvexDescentReport {
  std::vector<Violation> violations;  // per-step energy descent
  double energy0 = 0.0;
  bool sum_gap_ok = true;      // sum of gaps bounded by the initial energy
  bool best_rate_ok = true;    // running-min gap <= energy0/k for every k
  bool ergodic_rate_ok = true; // averaged iterate, at the given checkpoints
  std::vector<std::pair<long, double>> ergodic_values;  // (k, F(vbar_k)-F*)
};

/// Energy descent E_{k+1} <= E_k - G_k - (mu_hat(1-a)/2) D_k plus the summed
/// and 1/k consequences. The ergodic check needs the v-iterate history and
/// the problem to evaluate F at averaged points; pass nullptr to skip it.
ConvexDescentReport check_convex_descent(
    const Trace& trace, double mu_hat, double a, double rel_tol = 1e-10,
    const CompositeProblem* p = nullptr,
    const std::vector<Vector>* v_history = nullptr,
    const std::vector<long>& ergodic_checkpoints = {10, 100, 1000});

/// Smallest K0 such that |gap_x - gap_v| <= rel * max(|gap_x|, eps) on every
/// row from K0 to the end; empty when even the final row violates. Measures
/// how quickly the two objective-gap curves collapse onto each other.
std::optional<long> gap_coupling_burn_in(const Trace& trace, double rel = 0.1,
                                         double eps = 1e-12);

struct CertificateReport {
  LyapunovParams params;
  std::vector<Violation> contraction_violations;
  std::vector<Violation> mismatch_violations;
  std::vector<Violation> convex_descent_violations;
  bool best_rate_ok = true;
  bool ergodic_rate_ok = true;
  double max_slack = 0.0;  // worst margin seen across all checks
  bool outside_theory_regime = false;

  bool passed() const {
    return contraction_violations.empty() && mismatch_violations.empty() &&
           convex_descent_violations.empty() && best_rate_ok && ergodic_rate_ok;
  }
};

}  // namespace proxnag

#endif  // PROXNAG_CERTIFICATES_HPP
