#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fracepi/errors.hpp"

namespace fracepi {

// Susceptible prey S, infected prey I, predator P.
template <class Scalar>
using State3 = Eigen::Matrix<Scalar, 3, 1>;
using State = State3<double>;

// Logistic prey with horizontal infection; predators eat infected prey with
// a Holling type II response. All rates are per unit time, densities are
// dimensionless.
struct ModelParams {
  double r = 2.0;         // intrinsic prey birth rate
  double K = 40.0;        // carrying capacity
  double lambda = 0.015;  // force of infection
  double m = 0.52;        // maximum predation rate
  double mu = 0.28;       // infected prey death rate
  double a = 15.0;        // half-saturation constant
  double theta = 0.189;   // conversion efficiency, 0 < theta <= 1
  double d = 0.09;        // predator death rate

  // Throws ValidationError unless every value is finite and positive and
  // theta <= 1.
  void validate() const;
};

// Named parameter access, used by configs and sweeps.
double& param_ref(ModelParams& p, std::string_view name);
double param_value(const ModelParams& p, std::string_view name);
const std::array<std::string_view, 8>& param_names();

inline bool is_nonnegative(const State& x) { return (x.array() >= 0.0).all(); }

template <class Scalar>
State3<Scalar> rhs(const ModelParams& p, const State3<Scalar>& x) {
  const Scalar& S = x[0];
  const Scalar& I = x[1];
  const Scalar& P = x[2];
  const Scalar sat = p.a + I;
  if (sat == Scalar(0)) throw ValidationError("rhs: a + I vanishes");
  const Scalar predation = I * P / sat;
  State3<Scalar> dx;
  dx[0] = p.r * S * (Scalar(1) - (S + I) / p.K) - p.lambda * I * S;
  dx[1] = p.lambda * I * S - p.m * predation - p.mu * I;
  dx[2] = p.theta * predation - p.d * P;
  return dx;
}

enum class EquilibriumKind { E0, E1, E2, EStar };

std::string_view to_string(EquilibriumKind kind);

struct ExistenceCondition {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;  // positive when satisfied
};

struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::E0;
  State coords = State::Zero();  // NaN where undefined
  bool exists = false;
  std::vector<ExistenceCondition> conditions;
  std::string reason;  // why it does not exist, empty otherwise
};

// E0 = (0,0,0), E1 = (K,0,0), E2 = (mu/lambda, I1, 0), E* = (S*, I*, P*).
std::array<Equilibrium, 4> equilibria(const ModelParams& p);

const Equilibrium& find_equilibrium(const std::array<Equilibrium, 4>& eqs,
                                    EquilibriumKind kind);

struct Thresholds {
  double R0 = 0.0;
  // nullopt when not applicable (R0 <= 1, or an empty bracket for theta2).
  std::optional<double> d1;
  std::optional<double> d2;
  std::optional<double> theta1;
  // theta2 with S* taken at params.theta.
  std::optional<double> theta2;
  // theta2 with S* taken from the caller-supplied reference state.
  std::optional<double> theta2_reference;
  double r_focus = 0.0;  // 1 + r/4
};

// theta2_reference supplies the S* used in the reference theta2; its S
// component is read.
Thresholds thresholds(const ModelParams& p,
                      const std::optional<State>& theta2_reference = {});

// Interior equilibrium of p with theta replaced; NaN coordinates when
// theta <= d. Handy for building theta2 reference states.
State interior_point(const ModelParams& p, double theta);

struct Preset {
  std::string name;
  std::string description;
  ModelParams params;
  std::vector<State> initial_states;
  double t_end = 500.0;
  // theta at which S* is evaluated for the reference theta2.
  std::optional<double> theta2_reference_theta;
};

// Built-in parameter sets: example1, example1-coexist, example1-unstable,
// example2, example3.
const std::vector<Preset>& presets();
// Throws ValidationError for unknown names.
const Preset& find_preset(std::string_view name);

}  // namespace fracepi
