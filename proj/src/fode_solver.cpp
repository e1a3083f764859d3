#include "fracepi/fode_solver.hpp"

#include <cmath>
#include <sstream>

#include "fracepi/errors.hpp"
#include "fracepi/special_functions.hpp"

namespace fracepi {
namespace {

// (k+1)^alpha - k^alpha without cancellation.
double predictor_coefficient(double alpha, double k) {
  if (k == 0.0) return 1.0;
  return std::pow(k, alpha) * std::expm1(alpha * std::log1p(1.0 / k));
}

// (k+2)^p + k^p - 2 (k+1)^p with p = alpha + 1: a second difference, so
// written relative to (k+1)^p.
double corrector_coefficient(double alpha, double k) {
  const double p = alpha + 1.0;
  const double u = 1.0 / (k + 1.0);
  return std::pow(k + 1.0, p) *
         (std::expm1(p * std::log1p(u)) + std::expm1(p * std::log1p(-u)));
}

// n^p - (n - alpha)(n+1)^alpha, the weight of the initial node.
double corrector_first(double alpha, double n) {
  if (n == 0.0) return alpha;
  return std::pow(n + 1.0, alpha) *
         (n * std::expm1(alpha * std::log1p(-1.0 / (n + 1.0))) + alpha);
}

std::string magnitude_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string format_node_message(const std::string& what, std::size_t node, double t) {
  std::ostringstream os;
  os << "diverged: " << what << " at node " << node << " (t = " << t << ")";
  return os.str();
}

}  // namespace

FodeProblem::FodeProblem(double alpha, Eigen::VectorXd initial_state,
                         VectorField rhs, double t0)
    : alpha_(alpha),
      initial_state_(std::move(initial_state)),
      rhs_(std::move(rhs)),
      t0_(t0) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("order must lie in (0,1]");
  }
  if (initial_state_.size() == 0) {
    throw ValidationError("initial state must be non-empty");
  }
  if (!initial_state_.allFinite()) {
    throw ValidationError("initial state must be finite");
  }
  if (!std::isfinite(t0) || t0 < 0.0) {
    throw ValidationError("t0 must be finite and non-negative");
  }
  if (!rhs_) throw ValidationError("right-hand side is empty");
}

std::size_t SolverConfig::steps(double t0) const {
  const double span = (t_end - t0) / step;
  const double nearest = std::round(span);
  if (std::abs(span - nearest) <= 1e-9 * std::max(1.0, span)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(span));
}

void SolverConfig::validate(double t0) const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError("step must be positive");
  }
  if (!std::isfinite(t_end) || t_end < t0) {
    throw ValidationError("t_end must be finite and not before t0");
  }
  if (corrector_iterations < 1) {
    throw ValidationError("corrector_iterations must be at least 1");
  }
  if (memory_truncation && *memory_truncation == 0) {
    throw ValidationError("memory_truncation must be positive");
  }
  if ((t_end - t0) / step + 1.0 > static_cast<double>(max_nodes)) {
    std::ostringstream os;
    os << "grid of " << (t_end - t0) / step + 1.0 << " nodes exceeds the cap of "
       << max_nodes;
    throw ValidationError(os.str());
  }
}

AbmWeights abm_weights(double alpha, std::size_t n, double h) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("order must lie in (0,1]");
  }
  if (!(h > 0.0)) throw ValidationError("step must be positive");
  const double hp = std::pow(h, alpha);
  const double pred_scale = hp / alpha;
  const double corr_scale = hp / (alpha * (alpha + 1.0));

  AbmWeights w;
  w.predictor.resize(static_cast<Eigen::Index>(n + 1));
  w.corrector.resize(static_cast<Eigen::Index>(n + 2));
  for (std::size_t j = 0; j <= n; ++j) {
    w.predictor[static_cast<Eigen::Index>(j)] =
        pred_scale * predictor_coefficient(alpha, static_cast<double>(n - j));
  }
  w.corrector[0] = corr_scale * corrector_first(alpha, static_cast<double>(n));
  for (std::size_t j = 1; j <= n; ++j) {
    w.corrector[static_cast<Eigen::Index>(j)] =
        corr_scale * corrector_coefficient(alpha, static_cast<double>(n - j));
  }
  w.corrector[static_cast<Eigen::Index>(n + 1)] = corr_scale;
  return w;
}

Trajectory solve_pece(const FodeProblem& problem, const SolverConfig& config) {
  const double t0 = problem.t0();
  config.validate(t0);

  const double alpha = problem.alpha();
  const double h = config.step;
  const std::size_t steps = config.steps(t0);
  const Eigen::Index nodes = static_cast<Eigen::Index>(steps) + 1;
  const Eigen::Index dim = problem.dimension();
  const Eigen::Index N = static_cast<Eigen::Index>(steps);

  Trajectory traj;
  traj.alpha = alpha;
  traj.step = h;
  traj.times.resize(nodes);
  for (Eigen::Index j = 0; j < nodes; ++j) {
    traj.times[j] = t0 + static_cast<double>(j) * h;
  }
  traj.states.resize(nodes, dim);
  traj.states.row(0) = problem.initial_state().transpose();

  std::ostringstream meta;
  meta << alpha;
  traj.metadata.emplace_back("alpha", meta.str());
  meta.str("");
  meta << h;
  traj.metadata.emplace_back("step", meta.str());
  traj.metadata.emplace_back("corrector_iterations",
                             std::to_string(config.corrector_iterations));
  traj.metadata.emplace_back(
      "memory_truncation",
      config.memory_truncation ? std::to_string(*config.memory_truncation)
                               : std::string("none"));

  if (steps == 0) return traj;

  const Eigen::VectorXd x0 = problem.initial_state();
  const auto& f = problem.rhs();
  const double inv_gamma = reciprocal_gamma(alpha);
  const double pred_scale = inv_gamma * std::pow(h, alpha) / alpha;
  const double corr_scale =
      inv_gamma * std::pow(h, alpha) / (alpha * (alpha + 1.0));

  // Lag-indexed coefficients stored reversed: rev[N-1-k] holds lag k, so the
  // weights for history nodes j = lo..n form one contiguous segment.
  Eigen::VectorXd pred_rev(N), corr_rev(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    pred_rev[N - 1 - k] = predictor_coefficient(alpha, static_cast<double>(k));
    corr_rev[N - 1 - k] = corrector_coefficient(alpha, static_cast<double>(k));
  }

  // History of f(t_j, x_j), one row per node.
  Eigen::MatrixXd history(nodes, dim);
  history.row(0) = f(t0, x0).transpose();

  Eigen::VectorXd pred_sum(dim), corr_sum(dim), x(dim), fx(dim);
  const double limit = config.divergence_threshold;
  const std::size_t window =
      config.memory_truncation.value_or(static_cast<std::size_t>(nodes));

  for (Eigen::Index n = 0; n < N; ++n) {
    const Eigen::Index lo =
        (static_cast<std::size_t>(n + 1) > window)
            ? n + 1 - static_cast<Eigen::Index>(window)
            : 0;
    const Eigen::Index len = n + 1 - lo;
    pred_sum.noalias() = history.middleRows(lo, len).transpose() *
                         pred_rev.segment(N - 1 - n + lo, len);

    const Eigen::Index clo = std::max<Eigen::Index>(lo, 1);
    const Eigen::Index clen = n + 1 - clo;
    if (clen > 0) {
      corr_sum.noalias() = history.middleRows(clo, clen).transpose() *
                           corr_rev.segment(N - 1 - n + clo, clen);
    } else {
      corr_sum.setZero();
    }
    if (lo == 0) {
      corr_sum += corrector_first(alpha, static_cast<double>(n)) *
                  history.row(0).transpose();
    }

    const double t_next = traj.times[n + 1];
    x = x0 + pred_scale * pred_sum;
    for (int it = 0; it < config.corrector_iterations; ++it) {
      fx = f(t_next, x);
      x = x0 + corr_scale * (corr_sum + fx);
    }

    if (!x.allFinite()) {
      throw DivergenceError(static_cast<std::size_t>(n + 1), t_next,
                            format_node_message("non-finite state",
                                                static_cast<std::size_t>(n + 1),
                                                t_next));
    }
    if (x.cwiseAbs().maxCoeff() > limit) {
      throw DivergenceError(static_cast<std::size_t>(n + 1), t_next,
                            format_node_message("state magnitude exceeds " + magnitude_text(limit),
                                                static_cast<std::size_t>(n + 1),
                                                t_next));
    }
    traj.states.row(n + 1) = x.transpose();
    history.row(n + 1) = f(t_next, x).transpose();
  }
  return traj;
}

}  // namespace fracepi
