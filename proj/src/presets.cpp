#include <algorithm>

#include "fracepi/model.hpp"

namespace fracepi {
namespace {

// Figure initial points; only (30, 5, 10) is fixed by the source example,
// the other two spread the start across the positive orthant.
std::vector<State> figure_initial_states() {
  return {State(30.0, 5.0, 10.0), State(10.0, 20.0, 5.0),
          State(50.0, 2.0, 15.0)};
}

std::vector<Preset> build() {
  const ModelParams base{};  // r=2, K=40, lambda=0.015, m=0.52, mu=0.28,
                             // a=15, theta=0.189, d=0.09
  std::vector<Preset> out;

  out.push_back({"example1", "stable interior equilibrium, theta = 0.189",
                 base, figure_initial_states(), 500.0, 0.189});

  ModelParams coexist = base;
  coexist.theta = 0.5;
  out.push_back({"example1-coexist",
                 "globally attracting interior equilibrium, theta = 0.5",
                 coexist, figure_initial_states(), 500.0, 0.189});

  ModelParams unstable = base;
  unstable.K = 200.0;
  unstable.lambda = 0.15;
  unstable.a = 5.0;
  unstable.theta = 0.9;
  out.push_back({"example1-unstable",
                 "unstable interior equilibrium for alpha > 2/3", unstable,
                 figure_initial_states(), 1000.0, std::nullopt});

  ModelParams planar = base;
  planar.theta = 0.08;
  out.push_back({"example2", "predator-free equilibrium E2, theta = 0.08",
                 planar, figure_initial_states(), 500.0, std::nullopt});

  ModelParams disease_free = base;
  disease_free.lambda = 0.005;
  out.push_back({"example3", "axial equilibrium E1, lambda = 0.005 (R0 < 1)",
                 disease_free, figure_initial_states(), 500.0, std::nullopt});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(std::string_view name) {
  const auto& all = presets();
  auto it = std::find_if(all.begin(), all.end(),
                         [&](const Preset& p) { return p.name == name; });
  if (it == all.end()) {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return *it;
}

}  // namespace fracepi
