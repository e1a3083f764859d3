#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fracepi/app.hpp"
#include "fracepi/errors.hpp"

namespace fracepi::app {
namespace {

struct Flags {
  std::string preset;
  std::string config;
  std::vector<double> alphas;
  std::optional<double> step;
  std::optional<double> t_end;
  std::string out;
  std::string format = "csv";
  double tolerance = 0.05;

  // sweep
  std::string vary;
  std::optional<std::string> values;
  std::optional<double> from;
  std::optional<double> to;
  std::size_t count = 0;

  // verify
  std::string trajectory;

  // reproduce
  std::string example;
};

void add_model_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--preset", f.preset, "built-in parameter set");
  cmd->add_option("--config", f.config, "config file");
}

void add_alpha_option(CLI::App* cmd, Flags& f) {
  cmd->add_option("--alpha", f.alphas, "fractional orders, comma separated")
      ->delimiter(',');
}

void add_solver_options(CLI::App* cmd, Flags& f) {
  add_alpha_option(cmd, f);
  cmd->add_option("--step", f.step, "grid spacing h");
  cmd->add_option("--t-end", f.t_end, "end of the time span");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));
  cmd->add_option("--tolerance", f.tolerance, "convergence tolerance (max-norm)");
}

RunConfig build_config(const Flags& f) {
  if (!f.preset.empty() && !f.config.empty()) {
    throw ValidationError("use either --preset or --config, not both");
  }
  RunConfig cfg;
  if (!f.config.empty()) {
    cfg = load_config(f.config);
  } else {
    cfg = config_from_preset(f.preset.empty() ? "example1" : f.preset);
  }
  if (!f.alphas.empty()) cfg.alphas = f.alphas;
  if (f.step) cfg.step = *f.step;
  if (f.t_end) cfg.t_end = *f.t_end;
  if (!f.out.empty()) cfg.out_dir = f.out;
  cfg.format = f.format;
  cfg.validate();
  return cfg;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string word = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size() || !std::isfinite(v)) {
      throw ValidationError("--values: '" + word + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> sweep_grid(const Flags& f) {
  if (f.values) {
    if (f.from || f.to || f.count) {
      throw ValidationError("use either --values or --from/--to/--count");
    }
    return parse_values(*f.values);
  }
  if (!f.from || !f.to) {
    throw ValidationError("sweep needs --values or --from, --to and --count");
  }
  std::vector<double> grid;
  for (std::size_t i = 0; i < f.count; ++i) {
    const double s = f.count == 1 ? 0.0 : double(i) / double(f.count - 1);
    grid.push_back(*f.from + s * (*f.to - *f.from));
  }
  return grid;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracepi: fractional-order eco-epidemiological model toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate_cmd = app.add_subcommand("simulate", "solve and write trajectory CSVs");
  add_model_options(simulate_cmd, f);
  add_solver_options(simulate_cmd, f);

  auto* report_cmd = app.add_subcommand("report", "thresholds, equilibria and stability");
  add_model_options(report_cmd, f);
  add_alpha_option(report_cmd, f);

  auto* eq_cmd = app.add_subcommand("equilibria", "equilibria with existence conditions");
  add_model_options(eq_cmd, f);

  auto* sweep_cmd = app.add_subcommand("sweep", "classification over a parameter grid");
  add_model_options(sweep_cmd, f);
  add_alpha_option(sweep_cmd, f);
  sweep_cmd->add_option("--vary", f.vary, "parameter name")->required();
  sweep_cmd->add_option("--values", f.values, "comma separated grid");
  sweep_cmd->add_option("--from", f.from, "first grid value");
  sweep_cmd->add_option("--to", f.to, "last grid value");
  sweep_cmd->add_option("--count", f.count, "number of grid values");
  sweep_cmd->add_option("--out", f.out, "output directory (default: stdout)");
  sweep_cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));

  auto* repro_cmd = app.add_subcommand("reproduce", "rerun a paper example or figure");
  repro_cmd->add_option("example", f.example, "ex1, ex1-unstable, ex2, ex3, fig1..fig5")
      ->required();
  repro_cmd->add_option("--step", f.step, "grid spacing h");
  repro_cmd->add_option("--t-end", f.t_end, "override the scenario span");
  repro_cmd->add_option("--out", f.out, "output directory");
  repro_cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));
  repro_cmd->add_option("--tolerance", f.tolerance, "convergence tolerance for observations");

  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  add_model_options(verify_cmd, f);
  add_solver_options(verify_cmd, f);
  verify_cmd->add_option("--trajectory", f.trajectory, "verify this CSV instead of solving");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (!(f.tolerance > 0.0)) throw ValidationError("--tolerance must be positive");
    if (*simulate_cmd) {
      simulate(build_config(f), f.tolerance, out);
    } else if (*report_cmd) {
      const RunConfig cfg = build_config(f);
      report(cfg.params, f.alphas.empty() ? default_report_alphas() : f.alphas,
             cfg.theta2_reference_theta, out);
    } else if (*eq_cmd) {
      print_equilibria(build_config(f).params, out);
    } else if (*sweep_cmd) {
      Flags model_only = f;
      model_only.alphas.clear();
      SweepRequest req;
      req.base = build_config(model_only).params;
      req.parameter = f.vary;
      param_value(req.base, req.parameter);  // rejects unknown names
      req.values = sweep_grid(f);
      req.alphas = f.alphas.empty() ? default_report_alphas() : f.alphas;
      if (f.out.empty()) {
        write_sweep_csv(req, out);
      } else {
        std::filesystem::create_directories(f.out);
        const auto path = std::filesystem::path(f.out) / ("sweep_" + f.vary + ".csv");
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ValidationError("cannot write '" + path.string() + "'");
        write_sweep_csv(req, os);
        out << path.string() << "\n";
      }
    } else if (*repro_cmd) {
      ReproOptions opts;
      opts.out_dir = f.out.empty() ? "out" : f.out;
      opts.convergence_tolerance = f.tolerance;
      if (f.step) opts.step = *f.step;
      opts.t_end = f.t_end;
      const ReproReport rep = reproduce(f.example, opts);
      print_report(rep, out);
      if (rep.failures() > 0) return kExitCheckFailed;
    } else if (*verify_cmd) {
      std::optional<std::filesystem::path> csv;
      if (!f.trajectory.empty()) csv = f.trajectory;
      if (!verify(build_config(f), csv, f.tolerance, out)) return kExitCheckFailed;
    }
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace fracepi::app
