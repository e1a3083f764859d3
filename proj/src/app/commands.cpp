#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fracepi/app.hpp"
#include "fracepi/csv.hpp"
#include "fracepi/errors.hpp"
#include "fracepi/stability.hpp"
#include "fracepi/verification.hpp"

namespace fracepi::app {
namespace {

std::string num(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string opt_num(const std::optional<double>& v, int digits = 6) {
  return v ? num(*v, digits) : "n/a";
}

std::string point(const State& x, int digits = 6) {
  return "(" + num(x[0], digits) + ", " + num(x[1], digits) + ", " +
         num(x[2], digits) + ")";
}

std::string params_line(const ModelParams& p) {
  std::string s;
  for (auto name : param_names()) {
    if (!s.empty()) s += ' ';
    s += std::string(name) + "=" + num(param_value(p, name), 10);
  }
  return s;
}

std::optional<State> reference_state(const ModelParams& p,
                                     std::optional<double> theta) {
  if (!theta) return std::nullopt;
  return interior_point(p, *theta);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ValidationError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
  }
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write '" + path.string() + "'");
  body(os);
}

// Targets whose global-stability hypothesis holds for p.
std::vector<EquilibriumKind> global_targets(const ModelParams& p,
                                            const std::optional<State>& ref) {
  const Thresholds th = thresholds(p, ref);
  std::vector<EquilibriumKind> out;
  if (th.R0 < 1.0) out.push_back(EquilibriumKind::E1);
  if (th.R0 > 1.0 && th.d2 && p.d > *th.d2) out.push_back(EquilibriumKind::E2);
  const auto theta2 = ref ? th.theta2_reference : th.theta2;
  if (th.theta1 && theta2 && p.theta > *th.theta1 && p.theta < *theta2) {
    out.push_back(EquilibriumKind::EStar);
  }
  return out;
}

}  // namespace

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.step = cfg.step;
  s.t_end = cfg.t_end;
  s.corrector_iterations = cfg.corrector_iterations;
  s.memory_truncation = cfg.memory_truncation;
  return s;
}

Trajectory solve_model(const ModelParams& p, double alpha, const State& x0,
                       const SolverConfig& solver) {
  FodeProblem problem(alpha, x0, [p](double, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(rhs<double>(p, State(x)));
  });
  Trajectory traj = solve_pece(problem, solver);
  for (auto name : param_names()) {
    traj.metadata.emplace_back(std::string(name),
                               format_double(param_value(p, name)));
  }
  return traj;
}

std::vector<RunResult> solve_grid(const RunConfig& cfg) {
  cfg.validate();
  const SolverConfig solver = solver_config(cfg);
  const std::size_t ns = cfg.initial_states.size();
  const std::size_t count = cfg.alphas.size() * ns;
  return run_parallel<RunResult>(count, [&](std::size_t i) {
    const double alpha = cfg.alphas[i / ns];
    const std::size_t k = i % ns;
    try {
      return RunResult{alpha, k,
                       solve_model(cfg.params, alpha, cfg.initial_states[k], solver)};
    } catch (const DivergenceError& e) {
      std::ostringstream msg;
      msg << "alpha=" << num(alpha) << " initial state "
          << point(cfg.initial_states[k]) << ": " << e.what();
      throw DivergenceError(e.node(), e.time(), msg.str());
    }
  });
}

std::string trajectory_file_name(std::string_view prefix, double alpha,
                                 std::size_t state_index) {
  return std::string(prefix) + "_a" + num(alpha) + "_x" +
         std::to_string(state_index + 1) + ".csv";
}

void simulate(const RunConfig& cfg, double tolerance, std::ostream& out) {
  const auto runs = solve_grid(cfg);
  ensure_dir(cfg.out_dir);
  const auto eqs = equilibria(cfg.params);
  const double eta = 0.5 * std::min(cfg.params.mu, cfg.params.d);

  out << "parameters: " << params_line(cfg.params) << "\n";
  out << "solver: step=" << num(cfg.step) << " t_end=" << num(cfg.t_end)
      << " corrector_iterations=" << cfg.corrector_iterations << "\n";
  for (const auto& run : runs) {
    const auto name = trajectory_file_name("traj", run.alpha, run.state_index);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    write_file(path, [&](std::ostream& os) { write_trajectory_csv(os, run.trajectory); });

    const auto& tr = run.trajectory;
    const State last = tr.states.row(tr.nodes() - 1).transpose();
    const auto nn = check_nonnegativity(tr, 1e-8);
    const auto bc = boundedness_certificate(cfg.params, tr, eta);
    out << path.string() << "\n";
    out << "  alpha=" << num(run.alpha) << " x0="
        << point(cfg.initial_states[run.state_index]) << " nodes=" << tr.nodes()
        << "\n";
    out << "  final t=" << num(tr.times[tr.nodes() - 1]) << " state="
        << point(last) << "\n";
    out << "  non-negativity: " << (nn.passed ? "pass" : "FAIL") << "\n";
    out << "  boundedness (eta=" << num(eta) << ", l/eta=" << num(bc.bound)
        << "): " << (bc.passed ? "pass" : "FAIL") << "\n";
    for (const auto& eq : eqs) {
      if (!eq.exists) continue;
      const auto cr = convergence_check(tr, eq.coords, tolerance);
      if (cr.converged) {
        out << "  tail within " << num(tolerance) << " of "
            << to_string(eq.kind) << " " << point(eq.coords) << "\n";
      }
    }
  }
}

void print_equilibria(const ModelParams& p, std::ostream& out) {
  p.validate();
  for (const auto& eq : equilibria(p)) {
    out << to_string(eq.kind) << " " << (eq.exists ? "exists" : "absent");
    if (eq.coords.allFinite()) out << " " << point(eq.coords, 8);
    if (eq.exists) {
      const State res = rhs<double>(p, eq.coords);
      out << " residual=" << num(res.cwiseAbs().maxCoeff(), 3);
    }
    out << "\n";
    for (const auto& c : eq.conditions) {
      out << "  " << c.name << ": " << (c.satisfied ? "yes" : "no")
          << " (margin " << num(c.margin) << ")\n";
    }
    if (!eq.reason.empty()) out << "  " << eq.reason << "\n";
  }
}

void report(const ModelParams& p, const std::vector<double>& alphas,
            std::optional<double> theta2_reference_theta, std::ostream& out) {
  p.validate();
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("order must lie in (0,1]");
  }
  const auto ref = reference_state(p, theta2_reference_theta);
  const Thresholds th = thresholds(p, ref);

  out << "parameters: " << params_line(p) << "\n\n";
  out << "thresholds\n";
  out << "  R0       " << num(th.R0) << "\n";
  out << "  1+r/4    " << num(th.r_focus) << "\n";
  out << "  d1       " << opt_num(th.d1) << "\n";
  out << "  d2       " << opt_num(th.d2) << "\n";
  out << "  theta1   " << opt_num(th.theta1) << "\n";
  out << "  theta2   " << opt_num(th.theta2) << "  (S* at theta=" << num(p.theta)
      << ")\n";
  if (theta2_reference_theta && *theta2_reference_theta != p.theta) {
    out << "  theta2   " << opt_num(th.theta2_reference) << "  (S* at theta="
        << num(*theta2_reference_theta) << ")\n";
  }
  out << "\nequilibria\n";
  const auto eqs = equilibria(p);
  for (const auto& eq : eqs) {
    out << "  " << to_string(eq.kind) << "  " << (eq.exists ? "exists " : "absent ");
    if (eq.coords.allFinite()) out << " " << point(eq.coords);
    if (!eq.reason.empty()) out << "  " << eq.reason;
    out << "\n";
  }

  out << "\nstability\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-8s %-4s %-16s %12s %10s %s\n", "alpha",
                "eq", "label", "margin", "alpha*", "case");
  out << line;
  for (double a : alphas) {
    for (const auto& eq : eqs) {
      if (!eq.exists) continue;
      const auto v = classify_equilibrium(p, eq, a);
      std::string tag = "-";
      if (v.proposition1_case) tag = std::string(to_string(*v.proposition1_case));
      std::snprintf(line, sizeof line, "  %-8s %-4s %-16s %12s %10s %s",
                    num(a).c_str(), std::string(to_string(eq.kind)).c_str(),
                    std::string(to_string(v.label)).c_str(),
                    num(v.margin).c_str(), num(v.critical_order).c_str(),
                    tag.c_str());
      out << line;
      if (!v.note.empty()) out << "  " << v.note;
      out << "\n";
    }
  }
}

void write_sweep_csv(const SweepRequest& req, std::ostream& out) {
  for (double a : req.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("order must lie in (0,1]");
  }
  std::vector<ModelParams> grid;
  grid.reserve(req.values.size());
  for (double v : req.values) {
    ModelParams p = req.base;
    param_ref(p, req.parameter) = v;
    try {
      p.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("sweep value " + req.parameter + "=" + num(v, 17) +
                            " leaves the valid region: " + e.what());
    }
    grid.push_back(p);
  }

  out << req.parameter << ",alpha";
  for (auto kind : {EquilibriumKind::E0, EquilibriumKind::E1, EquilibriumKind::E2,
                    EquilibriumKind::EStar}) {
    const std::string k = kind == EquilibriumKind::EStar ? "Es" : std::string(to_string(kind));
    out << "," << k << "_exists," << k << "_S," << k << "_I," << k << "_P," << k
        << "_label," << k << "_margin," << k << "_critical_order";
  }
  out << "\n";

  const std::size_t na = req.alphas.size();
  const auto rows = run_parallel<std::string>(grid.size() * na, [&](std::size_t i) {
    const ModelParams& p = grid[i / na];
    const double alpha = req.alphas[i % na];
    std::string row = format_double(req.values[i / na]) + "," + format_double(alpha);
    for (const auto& eq : equilibria(p)) {
      row += eq.exists ? ",1" : ",0";
      for (int c = 0; c < 3; ++c) {
        row += "," + (eq.exists ? format_double(eq.coords[c]) : std::string());
      }
      if (eq.exists) {
        const auto v = classify_equilibrium(p, eq, alpha);
        row += "," + std::string(to_string(v.label)) + "," +
               format_double(v.margin) + "," + format_double(v.critical_order);
      } else {
        row += ",,,";
      }
    }
    return row + "\n";
  });
  for (const auto& r : rows) out << r;
}

bool verify(const RunConfig& cfg, const std::optional<std::filesystem::path>& csv,
            double tolerance, std::ostream& out) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  std::vector<RunResult> runs;
  if (csv) {
    std::ifstream in(*csv);
    if (!in) throw ValidationError("cannot open trajectory '" + csv->string() + "'");
    Trajectory tr = read_trajectory_csv(in);
    if (cfg.alphas.size() != 1) {
      throw ValidationError("verifying a trajectory file needs exactly one --alpha");
    }
    tr.alpha = cfg.alphas.front();
    runs.push_back({tr.alpha, 0, std::move(tr)});
  } else {
    runs = solve_grid(cfg);
  }

  const auto ref = reference_state(p, cfg.theta2_reference_theta);
  const auto eqs = equilibria(p);
  const auto targets = global_targets(p, ref);
  const double eta = 0.5 * std::min(p.mu, p.d);
  bool all_ok = true;
  auto verdict = [&](bool ok) {
    all_ok = all_ok && ok;
    return ok ? "pass" : "FAIL";
  };

  out << "parameters: " << params_line(p) << "\n";
  double radius = 0.0;
  for (const auto& run : runs) {
    const auto& tr = run.trajectory;
    radius = std::max(radius, tr.states.cwiseAbs().maxCoeff());
    out << "run alpha=" << num(run.alpha);
    if (!csv) out << " x0=" << point(cfg.initial_states[run.state_index]);
    out << " nodes=" << tr.nodes() << "\n";

    const auto nn = check_nonnegativity(tr, 1e-8);
    out << "  non-negativity (tol 1e-8): " << verdict(nn.passed)
        << "  worst undershoot " << point(State(nn.worst_undershoot), 3) << "\n";

    const auto bc = boundedness_certificate(p, tr, eta);
    out << "  boundedness eta=" << num(eta) << " l/eta=" << num(bc.bound)
        << " max V=" << num(bc.max_v) << (bc.envelope_checked ? " (with envelope)" : "")
        << ": " << verdict(bc.passed) << "\n";

    for (auto kind : targets) {
      const auto& target = find_equilibrium(eqs, kind);
      const auto ly = lyapunov_monotonicity(p, target, tr, 1e-3, ref);
      out << "  lyapunov " << to_string(kind) << " [" << ly.hypothesis
          << "] max increase " << num(ly.max_increase, 3) << " skipped "
          << ly.skipped << ": " << verdict(ly.monotone) << "\n";
      const auto cr = convergence_check(tr, target.coords, tolerance);
      out << "  tail distance to " << to_string(kind) << " "
          << num(cr.max_tail_distance, 4) << " (tol " << num(tolerance) << "): "
          << (cr.converged ? "converged" : "not yet converged") << "\n";
    }
  }

  const double M = std::max(radius, 1.0);
  const auto lip = empirical_lipschitz(p, M, 10000, 20240601);
  out << "lipschitz M=" << num(M) << " L=" << num(lip.bound)
      << " max quotient=" << num(lip.max_quotient) << ": " << verdict(lip.passed)
      << "\n";
  out << (all_ok ? "all checks passed" : "some checks failed") << "\n";
  return all_ok;
}

}  // namespace fracepi::app
