#include "fracepi/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fracepi/mittag_leffler.hpp"

namespace fracepi {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// x - x* - x* ln(x/x*) = x* (u - 1 - ln u), u = x/x*, written to keep
// accuracy near u = 1.
double log_deviation(double x, double x_star) {
  const double du = (x - x_star) / x_star;
  return x_star * (du - std::log1p(du));
}

State row_state(const Trajectory& traj, Eigen::Index j) {
  return traj.states.row(j).transpose().head<3>();
}

void require_model_trajectory(const Trajectory& traj) {
  if (traj.states.cols() != 3) {
    throw ValidationError("trajectory must have three components (S, I, P)");
  }
}

}  // namespace

NonnegativityReport check_nonnegativity(const Trajectory& traj, double tol) {
  NonnegativityReport r;
  r.tol = tol;
  r.worst_undershoot = Eigen::VectorXd::Zero(traj.states.cols());
  for (Eigen::Index j = 0; j < traj.states.rows(); ++j) {
    bool bad = false;
    for (Eigen::Index c = 0; c < traj.states.cols(); ++c) {
      const double v = traj.states(j, c);
      r.worst_undershoot[c] = std::max(r.worst_undershoot[c], -v);
      if (v < -tol) bad = true;
    }
    if (bad) r.offending_nodes.push_back(static_cast<std::size_t>(j));
  }
  r.passed = r.offending_nodes.empty();
  return r;
}

double boundedness_function(const ModelParams& p, const State& x) {
  return x[0] + x[1] + p.m / p.theta * x[2];
}

BoundednessCertificate boundedness_certificate(const ModelParams& p,
                                               const Trajectory& traj,
                                               double eta,
                                               double epsilon_margin) {
  p.validate();
  require_model_trajectory(traj);
  if (!(eta > 0.0 && eta < std::min(p.mu, p.d))) {
    throw ValidationError("eta must lie in (0, min(mu, d))");
  }
  BoundednessCertificate c;
  c.eta = eta;
  c.l = p.K * (p.r + eta) * (p.r + eta) / (4.0 * p.r);
  c.bound = c.l / eta;
  c.epsilon_margin = epsilon_margin;
  if (traj.nodes() == 0) return c;

  c.v0 = boundedness_function(p, row_state(traj, 0));
  c.envelope_checked = c.v0 > c.bound;
  const double cap = std::max(c.v0, c.bound) + epsilon_margin;
  const double t0 = traj.times[0];
  for (Eigen::Index j = 0; j < traj.nodes(); ++j) {
    const double v = boundedness_function(p, row_state(traj, j));
    c.max_v = std::max(c.max_v, v);
    bool violated = !(v <= cap);
    if (!violated && c.envelope_checked && j > 0) {
      const double tt = traj.times[j] - t0;
      const double envelope =
          (c.v0 - c.bound) *
              mittag_leffler(traj.alpha, -eta * std::pow(tt, traj.alpha)) +
          c.bound;
      violated = v > envelope + epsilon_margin;
    }
    if (violated) c.violated_nodes.emplace_back(traj.times[j], v);
  }
  c.passed = c.violated_nodes.empty();
  return c;
}

double lyapunov_value(const ModelParams& p, const Equilibrium& target,
                      const State& x) {
  if (!target.exists) {
    throw ValidationError("Lyapunov target " + std::string(to_string(target.kind)) +
                          " does not exist");
  }
  const State& e = target.coords;
  const double wP = p.m / p.theta;
  switch (target.kind) {
    case EquilibriumKind::E0:
      throw ValidationError("no Lyapunov function for E0");
    case EquilibriumKind::E1:
      if (!(x[0] > 0.0)) throw ValidationError("Lyapunov(E1) needs S > 0");
      return log_deviation(x[0], e[0]) + x[1] + wP * x[2];
    case EquilibriumKind::E2:
      if (!(x[0] > 0.0 && x[1] > 0.0)) {
        throw ValidationError("Lyapunov(E2) needs S > 0 and I > 0");
      }
      return log_deviation(x[0], e[0]) + log_deviation(x[1], e[1]) + wP * x[2];
    case EquilibriumKind::EStar:
      if (!(x.array() > 0.0).all()) {
        throw ValidationError("Lyapunov(E*) needs S, I, P > 0");
      }
      return log_deviation(x[0], e[0]) + log_deviation(x[1], e[1]) +
             wP * log_deviation(x[2], e[2]);
  }
  return kNaN;
}

LyapunovReport lyapunov_monotonicity(const ModelParams& p,
                                     const Equilibrium& target,
                                     const Trajectory& traj, double slack,
                                     const std::optional<State>& theta2_reference) {
  require_model_trajectory(traj);
  LyapunovReport r;
  r.target = target.kind;

  const Thresholds th = thresholds(p, theta2_reference);
  switch (target.kind) {
    case EquilibriumKind::E0:
      throw ValidationError("no Lyapunov function for E0");
    case EquilibriumKind::E1:
      r.hypothesis = "R0 < 1";
      r.hypothesis_holds = th.R0 < 1.0;
      break;
    case EquilibriumKind::E2:
      r.hypothesis = "d > d2";
      r.hypothesis_holds = th.d2 && p.d > *th.d2;
      break;
    case EquilibriumKind::EStar: {
      const auto& t2 = theta2_reference ? th.theta2_reference : th.theta2;
      r.hypothesis = theta2_reference ? "theta1 < theta < theta2 (reference S*)"
                                      : "theta1 < theta < theta2";
      r.hypothesis_holds =
          th.theta1 && t2 && *th.theta1 < p.theta && p.theta < *t2;
      break;
    }
  }

  r.values.reserve(static_cast<std::size_t>(traj.nodes()));
  double prev = kNaN;
  for (Eigen::Index j = 0; j < traj.nodes(); ++j) {
    double v = kNaN;
    try {
      v = lyapunov_value(p, target, row_state(traj, j));
    } catch (const ValidationError&) {
      ++r.skipped;
    }
    r.values.push_back(v);
    if (std::isfinite(v) && std::isfinite(prev)) {
      r.max_increase = std::max(r.max_increase, v - prev);
    }
    if (std::isfinite(v)) prev = v;
  }
  const bool few_skipped =
      static_cast<double>(r.skipped) <= 0.01 * static_cast<double>(traj.nodes());
  r.monotone = r.max_increase <= slack && few_skipped;
  return r;
}

ConvergenceReport convergence_check(const Trajectory& traj, const State& target,
                                    double tol, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ValidationError("tail_fraction must lie in (0, 1]");
  }
  require_model_trajectory(traj);
  ConvergenceReport r;
  const Eigen::Index n = traj.nodes();
  if (n == 0) return r;
  const Eigen::Index tail = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(tail_fraction * static_cast<double>(n))),
      1, n);
  for (Eigen::Index j = n - tail; j < n; ++j) {
    const double dist = (row_state(traj, j) - target).cwiseAbs().maxCoeff();
    r.max_tail_distance = std::max(r.max_tail_distance, dist);
  }
  r.converged = r.max_tail_distance <= tol;
  return r;
}

double lipschitz_bound(const ModelParams& p, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw ValidationError("domain radius M must be positive");
  }
  const double sat2 = (p.a + M) * (p.a + M);
  const double cross = (2.0 * p.lambda + p.r / p.K) * M;
  const double holling = p.a * M * (p.m + p.theta) / sat2;
  const double s_col = p.r + 2.0 * p.r * M / p.K + cross;
  const double i_col = cross + p.mu + holling;
  const double p_col = holling + p.d + M * M * (p.m + p.theta) / sat2;
  return std::max({s_col, i_col, p_col});
}

LipschitzSample empirical_lipschitz(const ModelParams& p, double M,
                                    std::size_t samples, std::uint64_t seed) {
  LipschitzSample out;
  out.bound = lipschitz_bound(p, M);
  out.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, M);
  for (std::size_t k = 0; k < samples; ++k) {
    const State x(u(rng), u(rng), u(rng));
    const State y(u(rng), u(rng), u(rng));
    const double dx = (x - y).lpNorm<1>();
    if (dx == 0.0) continue;
    const double df = (rhs(p, x) - rhs(p, y)).lpNorm<1>();
    out.max_quotient = std::max(out.max_quotient, df / dx);
  }
  out.passed = out.max_quotient <= out.bound;
  return out;
}

}  // namespace fracepi
