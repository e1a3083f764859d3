#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fracepi {

// Vector field f(t, x) of a commensurate Caputo system D^alpha x = f(t, x).
using VectorField =
    std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x)>;

// Caputo initial value problem of order alpha in (0, 1].
class FodeProblem {
 public:
  FodeProblem(double alpha, Eigen::VectorXd initial_state, VectorField rhs,
              double t0 = 0.0);

  double alpha() const { return alpha_; }
  double t0() const { return t0_; }
  Eigen::Index dimension() const { return initial_state_.size(); }
  const Eigen::VectorXd& initial_state() const { return initial_state_; }
  const VectorField& rhs() const { return rhs_; }

 private:
  double alpha_;
  Eigen::VectorXd initial_state_;
  VectorField rhs_;
  double t0_;
};

struct SolverConfig {
  double step = 0.05;
  double t_end = 1.0;
  int corrector_iterations = 1;
  // Short-memory window in nodes; nullopt keeps the full history.
  std::optional<std::size_t> memory_truncation;
  std::size_t max_nodes = 2'000'000;
  double divergence_threshold = 1e12;

  // Number of uniform steps covering [t0, t_end]; the last node may
  // overshoot t_end by less than one step when the span is not a multiple.
  std::size_t steps(double t0) const;
  void validate(double t0) const;
};

struct Trajectory {
  Eigen::VectorXd times;
  // One row per time node, one column per state component.
  Eigen::MatrixXd states;
  double alpha = 1.0;
  double step = 0.0;
  std::vector<std::pair<std::string, std::string>> metadata;

  Eigen::Index nodes() const { return times.size(); }
};

// Fractional Adams weights for the step producing node n+1 on a uniform grid
// of spacing h, scaled so that the scheme reads
//   x_{n+1}^P = x_0 + (1/Gamma(alpha)) sum_j predictor[j] f_j
//   x_{n+1}   = x_0 + (1/Gamma(alpha)) (sum_{j<=n} corrector[j] f_j
//                                       + corrector[n+1] f(x_{n+1}^P)).
// predictor has n+1 entries (j = 0..n), corrector n+2 (j = 0..n+1). Each set
// sums to h^alpha (n+1)^alpha / alpha.
struct AbmWeights {
  Eigen::VectorXd predictor;
  Eigen::VectorXd corrector;
};

AbmWeights abm_weights(double alpha, std::size_t n, double h = 1.0);

// Predict-evaluate-correct-evaluate fractional Adams-Bashforth-Moulton
// integration of the Volterra form
//   x(t) = x_0 + (1/Gamma(alpha)) int_{t0}^t (t - s)^(alpha-1) f(s, x(s)) ds.
// No positivity clipping is applied. Throws ValidationError on a bad config
// and DivergenceError when a component turns non-finite or exceeds the
// divergence threshold.
Trajectory solve_pece(const FodeProblem& problem, const SolverConfig& config);

}  // namespace fracepi
