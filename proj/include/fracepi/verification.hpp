#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracepi/fode_solver.hpp"
#include "fracepi/model.hpp"

namespace fracepi {

struct NonnegativityReport {
  bool passed = true;
  double tol = 0.0;
  // max(0, -min_t x_i(t)) per component
  Eigen::VectorXd worst_undershoot;
  std::vector<std::size_t> offending_nodes;
};

NonnegativityReport check_nonnegativity(const Trajectory& traj, double tol);

// V = S + I + (m/theta) P stays below l/eta, l = K (r + eta)^2 / (4 r).
struct BoundednessCertificate {
  double eta = 0.0;
  double l = 0.0;
  double bound = 0.0;  // l / eta
  double epsilon_margin = 0.0;
  double v0 = 0.0;
  double max_v = 0.0;
  bool envelope_checked = false;  // only when V(0) > l/eta
  std::vector<std::pair<double, double>> violated_nodes;  // (t, V)
  bool passed = true;
};

double boundedness_function(const ModelParams& p, const State& x);

// Checks V(t) <= max(V(0), l/eta) + epsilon at every node, plus the
// Mittag-Leffler envelope (V(0) - l/eta) E_alpha(-eta t^alpha) + l/eta when
// V(0) > l/eta. Throws ValidationError unless 0 < eta < min(mu, d).
BoundednessCertificate boundedness_certificate(const ModelParams& p,
                                               const Trajectory& traj,
                                               double eta,
                                               double epsilon_margin = 1e-9);

// Lyapunov functions of the global-stability results:
//   E1: (S - K - K ln(S/K)) + I + (m/theta) P
//   E2: (S - S1 - S1 ln(S/S1)) + (I - I1 - I1 ln(I/I1)) + (m/theta) P
//   E*: all three components in the x - x* - x* ln(x/x*) form, P weighted
//       by m/theta.
// Throws ValidationError for E0, a non-existing target, or a state where a
// required logarithm diverges.
double lyapunov_value(const ModelParams& p, const Equilibrium& target,
                      const State& x);

struct LyapunovReport {
  EquilibriumKind target = EquilibriumKind::E1;
  std::vector<double> values;  // NaN at skipped nodes
  double max_increase = 0.0;
  bool monotone = true;
  std::size_t skipped = 0;
  std::string hypothesis;       // e.g. "R0 < 1"
  bool hypothesis_holds = false;
};

// theta2_reference is passed through to thresholds() for the E* hypothesis
// theta1 < theta < theta2; when given, the reference theta2 is used.
LyapunovReport lyapunov_monotonicity(
    const ModelParams& p, const Equilibrium& target, const Trajectory& traj,
    double slack, const std::optional<State>& theta2_reference = {});

struct ConvergenceReport {
  bool converged = false;
  double max_tail_distance = 0.0;  // max-norm
};

ConvergenceReport convergence_check(const Trajectory& traj, const State& target,
                                    double tol, double tail_fraction = 0.1);

// Lipschitz constant of the vector field on max(|S|,|I|,|P|) <= M in the
// 1-norm, from the per-component bounds of the existence argument.
double lipschitz_bound(const ModelParams& p, double M);

struct LipschitzSample {
  double max_quotient = 0.0;  // max ||f(X)-f(Y)||_1 / ||X-Y||_1
  double bound = 0.0;
  std::size_t samples = 0;
  bool passed = true;
};

// Random pairs drawn uniformly from [0, M]^3, where trajectories live.
LipschitzSample empirical_lipschitz(const ModelParams& p, double M,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace fracepi
