#include "fracepi/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fracepi {
namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void ModelParams::validate() const {
  for (auto name : param_names()) {
    const double v = param_value(*this, name);
    if (!std::isfinite(v) || !(v > 0.0)) {
      std::ostringstream os;
      os << "parameter " << name << " must be positive (got " << v << ")";
      throw ValidationError(os.str());
    }
  }
  if (theta > 1.0) {
    std::ostringstream os;
    os << "parameter theta must not exceed 1 (got " << theta << ")";
    throw ValidationError(os.str());
  }
}

const std::array<std::string_view, 8>& param_names() {
  static const std::array<std::string_view, 8> names = {
      "r", "K", "lambda", "m", "mu", "a", "theta", "d"};
  return names;
}

double& param_ref(ModelParams& p, std::string_view name) {
  if (name == "r") return p.r;
  if (name == "K") return p.K;
  if (name == "lambda") return p.lambda;
  if (name == "m") return p.m;
  if (name == "mu") return p.mu;
  if (name == "a") return p.a;
  if (name == "theta") return p.theta;
  if (name == "d") return p.d;
  throw ValidationError("unknown model parameter '" + std::string(name) + "'");
}

double param_value(const ModelParams& p, std::string_view name) {
  return param_ref(const_cast<ModelParams&>(p), name);
}

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::E0: return "E0";
    case EquilibriumKind::E1: return "E1";
    case EquilibriumKind::E2: return "E2";
    case EquilibriumKind::EStar: return "E*";
  }
  return "?";
}

State interior_point(const ModelParams& p, double theta) {
  if (!(theta > p.d)) return State::Constant(kNaN);
  const double I = p.a * p.d / (theta - p.d);
  const double S = p.K - (1.0 + p.lambda * p.K / p.r) * I;
  const double P = (p.a + I) * (p.lambda * S - p.mu) / p.m;
  return {S, I, P};
}

std::array<Equilibrium, 4> equilibria(const ModelParams& p) {
  p.validate();
  const double R0 = p.lambda * p.K / p.mu;

  Equilibrium e0{EquilibriumKind::E0, State::Zero(), true, {}, {}};
  Equilibrium e1{EquilibriumKind::E1, State(p.K, 0.0, 0.0), true, {}, {}};

  Equilibrium e2;
  e2.kind = EquilibriumKind::E2;
  e2.coords = State(p.mu / p.lambda,
                    p.r * (p.lambda * p.K - p.mu) /
                        (p.lambda * (p.r + p.lambda * p.K)),
                    0.0);
  e2.conditions.push_back({"R0 > 1", R0 > 1.0, R0 - 1.0});
  e2.exists = R0 > 1.0;
  if (!e2.exists) e2.reason = "R0 <= 1";

  Equilibrium es;
  es.kind = EquilibriumKind::EStar;
  es.conditions.push_back({"R0 > 1", R0 > 1.0, R0 - 1.0});
  if (!(p.theta > p.d)) {
    es.coords = State::Constant(kNaN);
    es.conditions.push_back({"theta > d", false, p.theta - p.d});
    es.exists = false;
    es.reason = "theta <= d makes I* nonpositive/singular";
  } else {
    es.coords = interior_point(p, p.theta);
    if (R0 > 1.0) {
      const Thresholds th = thresholds(p);
      const double margin = p.theta - *th.theta1;
      es.conditions.push_back({"theta > theta1", margin > 0.0, margin});
      es.exists = margin > 0.0;
      if (!es.exists) es.reason = "theta <= theta1";
    } else {
      es.exists = false;
      es.reason = "R0 <= 1";
    }
  }
  return {e0, e1, e2, es};
}

const Equilibrium& find_equilibrium(const std::array<Equilibrium, 4>& eqs,
                                    EquilibriumKind kind) {
  for (const auto& e : eqs) {
    if (e.kind == kind) return e;
  }
  throw ValidationError("equilibrium not found");
}

Thresholds thresholds(const ModelParams& p,
                      const std::optional<State>& theta2_reference) {
  p.validate();
  Thresholds t;
  const double excess = p.lambda * p.K - p.mu;  // > 0 iff R0 > 1
  t.R0 = p.lambda * p.K / p.mu;
  t.r_focus = 1.0 + p.r / 4.0;

  auto theta2_at = [&](double s_star) -> std::optional<double> {
    const double den = 2.0 * p.K * (p.lambda * s_star - p.mu) - p.r;
    if (!std::isfinite(den) || den <= 0.0) return std::nullopt;
    return p.m * p.d * p.K / den;
  };

  if (excess > 0.0) {
    const double num = p.theta * p.r * excess;
    t.d1 = num / (p.a * p.lambda * (p.lambda * p.K + p.r) + p.r * excess);
    t.d2 = num / (p.a * p.lambda * (p.r + p.lambda * p.K));
    t.theta1 = p.d + p.lambda * p.a * p.d * (p.r + p.lambda * p.K) /
                         (p.r * excess);
    t.theta2 = theta2_at(interior_point(p, p.theta)[0]);
    if (theta2_reference) t.theta2_reference = theta2_at((*theta2_reference)[0]);
  }
  return t;
}

}  // namespace fracepi
