#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "fracepi/app.hpp"
#include "fracepi/csv.hpp"
#include "fracepi/errors.hpp"
#include "fracepi/stability.hpp"
#include "fracepi/verification.hpp"

namespace fracepi::app {

std::string_view to_string(ItemStatus s) {
  switch (s) {
    case ItemStatus::pass: return "pass";
    case ItemStatus::fail: return "fail";
    case ItemStatus::known_paper_discrepancy: return "known-paper-discrepancy";
  }
  return "?";
}

std::size_t ReproReport::failures() const {
  std::size_t n = 0;
  for (const auto& it : items) n += it.status == ItemStatus::fail;
  return n;
}

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids = {
      "ex1", "ex1-unstable", "ex2", "ex3", "fig1", "fig2", "fig3", "fig4", "fig5"};
  return ids;
}

namespace {

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Compares against a value printed in the paper. The paper text is kept
// verbatim; the computed value is shown to two more decimals than printed.
ReproItem numeric(std::string quantity, std::string paper, double computed,
                  double tol, std::string note = {}) {
  const double stated = std::stod(paper);
  const auto dot = paper.find('.');
  const int decimals = dot == std::string::npos ? 0 : int(paper.size() - dot - 1);
  ReproItem it;
  it.quantity = std::move(quantity);
  it.computed = fixed(computed, decimals + 2);
  it.abs_diff = std::abs(computed - stated);
  it.tolerance = tol;
  it.status = *it.abs_diff <= tol ? ItemStatus::pass : ItemStatus::fail;
  it.paper = std::move(paper);
  it.note = std::move(note);
  return it;
}

ReproItem claim(std::string quantity, std::string paper, std::string computed,
                bool holds, std::string note = {}) {
  ReproItem it;
  it.quantity = std::move(quantity);
  it.paper = std::move(paper);
  it.computed = std::move(computed);
  it.status = holds ? ItemStatus::pass : ItemStatus::fail;
  it.note = std::move(note);
  return it;
}

struct Figure {
  std::string preset;
  std::vector<double> alphas;
  std::vector<std::size_t> states;  // indices into the preset's list
  std::optional<EquilibriumKind> target;
  bool phase = false;  // add a phase portrait panel
  std::string caption;
};

Figure figure(const std::string& id) {
  if (id == "fig1") {
    return {"example1", {0.7, 0.8, 0.9, 1.0}, {0}, EquilibriumKind::EStar, false,
            "Example 1: solutions for several orders, theta = 0.189"};
  }
  if (id == "fig2") {
    return {"example1-coexist", {0.85, 0.95}, {0, 1, 2}, EquilibriumKind::EStar, true,
            "trajectories from different initial values approach E*, theta = 0.5"};
  }
  if (id == "fig3") {
    return {"example1-unstable", {0.85}, {0}, EquilibriumKind::EStar, false,
            "unstable solutions, K = 200, lambda = 0.15, a = 5, theta = 0.9"};
  }
  if (id == "fig4") {
    return {"example2", {0.85, 0.95}, {0, 1, 2}, EquilibriumKind::E2, true,
            "Example 2: predator-free equilibrium E2, theta = 0.08"};
  }
  return {"example3", {0.85, 0.95}, {0, 1, 2}, EquilibriumKind::E1, true,
          "Example 3: axial equilibrium E1, lambda = 0.005"};
}

void interior_claims(ReproReport& rep) {
  const ModelParams p = find_preset("example1").params;
  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  const auto c = characteristic_cubic(p, es.coords);
  rep.items.push_back(numeric("D(F)", "0.0077", c.discriminant, 5e-4));
  rep.items.push_back(numeric("A1", "1.0879", c.A1, 5e-4));
  rep.items.push_back(numeric("A3", "0.0028", c.A3, 5e-4));
  rep.items.push_back(numeric("A1A2 - A3", "0.2909", c.routh_product, 5e-4));

  bool all_stable = true;
  bool all_case_i = true;
  double worst_margin = INFINITY;
  for (int k = 1; k <= 20; ++k) {
    const auto v = classify_equilibrium(p, es, 0.05 * k);
    all_stable = all_stable && v.status == MatignonStatus::stable;
    all_case_i = all_case_i && v.proposition1_case == Prop1Case::i;
    worst_margin = std::min(worst_margin, v.margin);
  }
  rep.items.push_back(claim("E* stable for 0 < alpha <= 1", "stable",
                            all_stable ? "stable" : "not stable", all_stable,
                            "alpha = 0.05..1 step 0.05, smallest margin " +
                                num(worst_margin, 4) + " rad"));
  rep.items.push_back(claim("proposition case", "(i)", all_case_i ? "(i)" : "other",
                            all_case_i));
}

void threshold_claims(ReproReport& rep) {
  const Preset& pr = find_preset("example1-coexist");
  const ModelParams& p = pr.params;
  const State ref = interior_point(p, *pr.theta2_reference_theta);
  const Thresholds th = thresholds(p, ref);
  rep.items.push_back(numeric("theta1", "0.1723", th.theta1.value_or(NAN), 5e-4));
  rep.items.push_back(numeric(
      "theta2", "0.8044", th.theta2_reference.value_or(NAN), 5e-4,
      "S* taken at theta = 0.189; with S* at theta = 0.5 theta2 = " +
          (th.theta2 ? num(*th.theta2, 4) : std::string("n/a"))));
  const bool inside = th.theta1 && th.theta2_reference &&
                      p.theta > *th.theta1 && p.theta < *th.theta2_reference;
  rep.items.push_back(claim("theta1 < theta = 0.5 < theta2", "holds",
                            inside ? "holds" : "does not hold", inside));

  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  rep.items.push_back(numeric("E* S", "35.7195", es.coords[0], 5e-4));
  rep.items.push_back(numeric("E* I", "3.2927", es.coords[1], 5e-4));
  rep.items.push_back(numeric("E* P", "8.9983", es.coords[2], 5e-4));
}

void unstable_claims(ReproReport& rep) {
  const ModelParams p = find_preset("example1-unstable").params;
  const Equilibrium es = find_equilibrium(equilibria(p), EquilibriumKind::EStar);
  const auto c = characteristic_cubic(p, es.coords);
  rep.items.push_back(numeric("D(F)", "-463.8995", c.discriminant, 0.05));
  rep.items.push_back(numeric("A1", "-0.9276", c.A1, 5e-4));
  rep.items.push_back(numeric("A2", "-0.5775", c.A2, 5e-4));

  const auto v = classify_equilibrium(p, es, 0.85);
  rep.items.push_back(claim("E* at alpha = 0.85", "unstable",
                            std::string(to_string(v.status)),
                            v.status == MatignonStatus::unstable,
                            "label " + std::string(to_string(v.label)) +
                                ", critical order " + num(v.critical_order, 4)));
  const std::string tag =
      v.proposition1_case ? std::string(to_string(*v.proposition1_case)) : "none";
  rep.items.push_back(claim("proposition case at alpha = 0.85", "(iii)", tag,
                            v.proposition1_case == Prop1Case::iii));

  bool unstable_above = true;
  for (double a : {0.7, 0.8, 0.9, 1.0}) {
    unstable_above = unstable_above &&
                     classify_equilibrium(p, es, a).status == MatignonStatus::unstable;
  }
  rep.items.push_back(claim("E* unstable for alpha > 2/3", "unstable",
                            unstable_above ? "unstable" : "not unstable",
                            unstable_above, "checked at alpha = 0.7, 0.8, 0.9, 1"));

  const auto low = classify_equilibrium(p, es, 0.6);
  const auto& ii = low.case_checks[1];
  rep.observations.push_back(
      "alpha = 0.6: case (ii) hypotheses " + std::string(ii.holds ? "hold" : "do not hold") +
      " (needs A1 >= 0, A2 >= 0, A3 > 0, D < 0); Matignon verdict " +
      std::string(to_string(low.status)) + ", margin " + num(low.margin, 4) +
      " rad, critical order " + num(low.critical_order, 4));
}

void planar_claims(ReproReport& rep) {
  const ModelParams p = find_preset("example2").params;
  const Thresholds th = thresholds(p);
  rep.items.push_back(numeric("R0", "2.142", th.R0, 1e-3,
                              "paper truncates 2.142857 to three decimals"));
  {
    ReproItem it;
    it.quantity = "d - d1";
    it.paper = "0.0025";
    const double dd = p.d - th.d1.value_or(NAN);
    it.computed = fixed(dd, 6);
    it.abs_diff = std::abs(dd - 0.0025);
    it.tolerance = 5e-4;
    it.status = *it.abs_diff <= *it.tolerance ? ItemStatus::pass
                                              : ItemStatus::known_paper_discrepancy;
    it.note = "d1 = " + num(th.d1.value_or(NAN), 6) +
              " from the closed form; the sign agrees, the magnitude does not";
    rep.items.push_back(it);
  }
  const auto eqs = equilibria(p);
  const auto& e2 = find_equilibrium(eqs, EquilibriumKind::E2);
  rep.items.push_back(numeric("E2 S", "18.67", e2.coords[0], 5e-3));
  rep.items.push_back(numeric("E2 I", "16.4", e2.coords[1], 5e-2,
                              "printed to one decimal"));
  rep.items.push_back(numeric("E2 P", "0", e2.coords[2], 0.0));

  const bool global = th.d2 && p.d > *th.d2;
  rep.items.push_back(claim("d > d2", "holds",
                            "d2 = " + num(th.d2.value_or(NAN), 6), global));
  bool stable = true;
  for (double a : {0.85, 0.95, 1.0}) {
    stable = stable && classify_equilibrium(p, e2, a).status == MatignonStatus::stable;
  }
  rep.items.push_back(claim("E2 stable", "stable", stable ? "stable" : "not stable",
                            stable, "checked at alpha = 0.85, 0.95, 1"));
}

void axial_claims(ReproReport& rep) {
  const ModelParams p = find_preset("example3").params;
  const Thresholds th = thresholds(p);
  rep.items.push_back(numeric("R0", "0.7143", th.R0, 5e-4));
  const auto eqs = equilibria(p);
  const auto& e1 = find_equilibrium(eqs, EquilibriumKind::E1);
  rep.items.push_back(numeric("E1 S", "40", e1.coords[0], 5e-3));
  rep.items.push_back(numeric("E1 I", "0", e1.coords[1], 0.0));
  rep.items.push_back(numeric("E1 P", "0", e1.coords[2], 0.0));
  bool stable = true;
  for (double a : {0.85, 0.95, 1.0}) {
    stable = stable && classify_equilibrium(p, e1, a).status == MatignonStatus::stable;
  }
  rep.items.push_back(claim("E1 stable", "stable", stable ? "stable" : "not stable",
                            stable, "checked at alpha = 0.85, 0.95, 1"));
  const bool none = !find_equilibrium(eqs, EquilibriumKind::E2).exists &&
                    !find_equilibrium(eqs, EquilibriumKind::EStar).exists;
  rep.items.push_back(claim("E2, E* exist", "no (R0 < 1)", none ? "no" : "yes", none));
}

std::string plot_script(const std::string& id, const Figure& fig,
                        const std::vector<std::string>& files) {
  std::string s;
  s += "# " + id + ": " + fig.caption + "\n";
  s += "# gnuplot " + id + ".gp\n";
  s += "set datafile separator ','\n";
  s += "set terminal pngcairo size 1500,"
       + std::string(fig.phase ? "900" : "450") + "\n";
  s += "set output '" + id + ".png'\n";
  s += "set multiplot layout " + std::string(fig.phase ? "2" : "1") + ",3\n";
  s += "set xlabel 't'\n";
  const char* cols[] = {"S", "I", "P"};
  for (int c = 0; c < 3; ++c) {
    s += "set title '" + std::string(cols[c]) + "(t)'\n";
    s += "plot ";
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (i) s += ", \\\n     ";
      s += "'" + files[i] + "' using 1:" + std::to_string(c + 2) +
           " with lines title '" + files[i] + "'";
    }
    s += "\n";
  }
  if (fig.phase) {
    const char* pairs[][2] = {{"S", "I"}, {"I", "P"}, {"S", "P"}};
    const int idx[][2] = {{2, 3}, {3, 4}, {2, 4}};
    for (int k = 0; k < 3; ++k) {
      s += "set title '" + std::string(pairs[k][0]) + "-" + pairs[k][1] + " phase'\n";
      s += "set xlabel '" + std::string(pairs[k][0]) + "'\n";
      s += "plot ";
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (i) s += ", \\\n     ";
        s += "'" + files[i] + "' using " + std::to_string(idx[k][0]) + ":" +
             std::to_string(idx[k][1]) + " with lines notitle";
      }
      s += "\n";
    }
  }
  s += "unset multiplot\n";
  return s;
}

void run_figure(ReproReport& rep, const std::string& id, const ReproOptions& opts) {
  const Figure fig = figure(id);
  const Preset& pr = find_preset(fig.preset);
  RunConfig cfg;
  cfg.params = pr.params;
  cfg.alphas = fig.alphas;
  cfg.initial_states.clear();
  for (auto k : fig.states) cfg.initial_states.push_back(pr.initial_states[k]);
  cfg.step = opts.step;
  cfg.t_end = opts.t_end.value_or(pr.t_end);
  const auto runs = solve_grid(cfg);

  State target = State::Constant(NAN);
  if (fig.target) target = find_equilibrium(equilibria(pr.params), *fig.target).coords;

  std::vector<std::string> files;
  for (const auto& run : runs) {
    const auto name = trajectory_file_name(id, run.alpha, fig.states[run.state_index]);
    files.push_back(name);
    if (opts.write_files) {
      std::ofstream os(opts.out_dir / name, std::ios::binary);
      if (!os) throw ValidationError("cannot write '" + (opts.out_dir / name).string() + "'");
      write_trajectory_csv(os, run.trajectory);
    }
    const auto cr = convergence_check(run.trajectory, target, opts.convergence_tolerance);
    const State& x0 = cfg.initial_states[run.state_index];
    std::string line = "alpha = " + num(run.alpha) + ", x0 = (" + num(x0[0]) + ", " +
                       num(x0[1]) + ", " + num(x0[2]) + "): max tail distance to " +
                       std::string(to_string(*fig.target)) + " " +
                       num(cr.max_tail_distance, 4) + " at t_end = " + num(cfg.t_end);
    line += cr.converged ? " (within " : " (not within ";
    line += num(opts.convergence_tolerance) + ")";
    rep.observations.push_back(line);

    if (id == "fig3") {
      rep.items.push_back(claim("trajectory approaches E*", "no (unstable)",
                                cr.converged ? "yes" : "no", !cr.converged,
                                "max tail distance " + num(cr.max_tail_distance, 4)));
    }
  }
  if (opts.write_files) {
    const auto gp = opts.out_dir / (id + ".gp");
    std::ofstream os(gp, std::ios::binary);
    if (!os) throw ValidationError("cannot write '" + gp.string() + "'");
    os << plot_script(id, fig, files);
    files.push_back(id + ".gp");
  }
  for (auto& f : files) rep.files.push_back((opts.out_dir / f).string());
}

}  // namespace

ReproReport reproduce(const std::string& id, const ReproOptions& opts) {
  const auto& ids = reproduce_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    std::string known;
    for (const auto& k : ids) known += (known.empty() ? "" : ", ") + k;
    throw ValidationError("unknown example id '" + id + "' (known: " + known + ")");
  }
  if (opts.write_files) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw ValidationError("cannot create '" + opts.out_dir.string() + "'");
  }

  ReproReport rep;
  rep.id = id;
  if (id == "ex1") {
    rep.title = "Example 1: stable interior equilibrium and the theta thresholds";
    interior_claims(rep);
    threshold_claims(rep);
    run_figure(rep, "fig1", opts);
    run_figure(rep, "fig2", opts);
  } else if (id == "ex1-unstable" || id == "fig3") {
    rep.title = "unstable interior equilibrium for alpha > 2/3";
    unstable_claims(rep);
    run_figure(rep, "fig3", opts);
  } else if (id == "ex2" || id == "fig4") {
    rep.title = "Example 2: predator-free equilibrium E2";
    planar_claims(rep);
    run_figure(rep, "fig4", opts);
  } else if (id == "ex3" || id == "fig5") {
    rep.title = "Example 3: axial equilibrium E1";
    axial_claims(rep);
    run_figure(rep, "fig5", opts);
  } else if (id == "fig1") {
    rep.title = figure(id).caption;
    interior_claims(rep);
    run_figure(rep, id, opts);
  } else {
    rep.title = figure(id).caption;
    threshold_claims(rep);
    run_figure(rep, id, opts);
  }

  if (opts.write_files) {
    const auto path = opts.out_dir / (id + "_report.csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot write '" + path.string() + "'");
    write_report_csv(rep, os);
    rep.files.push_back(path.string());
  }
  return rep;
}

void print_report(const ReproReport& rep, std::ostream& out) {
  out << "reproduce " << rep.id << ": " << rep.title << "\n";
  char line[512];
  std::snprintf(line, sizeof line, "  %-32s %-14s %-16s %-10s %-8s %s\n",
                "quantity", "paper", "computed", "|diff|", "tol", "status");
  out << line;
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& it : rep.items) {
    ++counts[static_cast<int>(it.status)];
    std::snprintf(line, sizeof line, "  %-32s %-14s %-16s %-10s %-8s %s",
                  it.quantity.c_str(), it.paper.c_str(), it.computed.c_str(),
                  it.abs_diff ? num(*it.abs_diff, 3).c_str() : "-",
                  it.tolerance ? num(*it.tolerance, 3).c_str() : "-",
                  std::string(to_string(it.status)).c_str());
    out << line;
    if (!it.note.empty()) out << "  # " << it.note;
    out << "\n";
  }
  if (!rep.observations.empty()) {
    out << "  observations\n";
    for (const auto& o : rep.observations) out << "    " << o << "\n";
  }
  if (!rep.files.empty()) {
    out << "  files\n";
    for (const auto& f : rep.files) out << "    " << f << "\n";
  }
  out << "  " << counts[0] << " pass, " << counts[2] << " known-paper-discrepancy, "
      << counts[1] << " fail\n";
}

void write_report_csv(const ReproReport& rep, std::ostream& out) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  out << "id,quantity,paper,computed,abs_diff,tolerance,status,note\n";
  for (const auto& it : rep.items) {
    out << quote(rep.id) << ',' << quote(it.quantity) << ',' << quote(it.paper) << ','
        << quote(it.computed) << ',' << (it.abs_diff ? format_double(*it.abs_diff) : "")
        << ',' << (it.tolerance ? format_double(*it.tolerance) : "") << ','
        << to_string(it.status) << ',' << quote(it.note) << '\n';
  }
}

}  // namespace fracepi::app
