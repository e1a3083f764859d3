#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracepi/model.hpp"

namespace fracepi {

// Everything a run needs. Built from a preset, then overridden by a config
// file, then by command-line flags.
struct RunConfig {
  std::string preset;  // empty when parameters come only from the file
  ModelParams params;
  std::vector<double> alphas = {0.95};
  std::vector<State> initial_states = {State(30.0, 5.0, 10.0)};
  double step = 0.05;
  double t_end = 500.0;
  int corrector_iterations = 1;
  std::optional<std::size_t> memory_truncation;
  std::string out_dir = "out";
  std::string format = "csv";
  std::optional<double> theta2_reference_theta;

  // Throws ValidationError: alphas in (0,1], states non-negative, params
  // valid, solver settings sane.
  void validate() const;
};

// Starts from the named preset's parameters, initial states and span.
RunConfig config_from_preset(const std::string& name);

// Config file grammar (one entry per line):
//
//   # comment                      blank lines and '#' comments are ignored
//   key = value                    keys are dotted: section.name
//
//   value := number | string | list
//   list  := '[' [item (',' item)*] ']'     item := number | list
//   string: bare word ([A-Za-z0-9_.-]+) or "double quoted"
//
// Recognised keys:
//   model.preset                   preset name; applied before other keys
//   model.{r,K,lambda,m,mu,a,theta,d}
//   solver.alpha                   number or list of numbers
//   solver.step, solver.t_end, solver.corrector_iterations,
//   solver.memory_truncation       positive integer or "none"
//   run.initial_states             list of [S, I, P] triples
//   output.dir, output.format      format must be "csv"
//   analysis.theta2_reference_theta
//
// Errors are ValidationError with "<source>:<line>: message".
RunConfig parse_config(std::istream& is, const std::string& source = "config");
RunConfig load_config(const std::string& path);

}  // namespace fracepi
