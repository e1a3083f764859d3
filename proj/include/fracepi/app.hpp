#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fracepi/config.hpp"
#include "fracepi/fode_solver.hpp"
#include "fracepi/model.hpp"

namespace fracepi::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitCheckFailed = 3;

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Runs task(0..count-1) on worker threads and returns the results in index
// order. When several tasks throw, the lowest index wins.
template <class T>
std::vector<T> run_parallel(std::size_t count,
                            const std::function<T(std::size_t)>& task) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const std::size_t workers = std::min<std::size_t>(
      count, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          slots[i].emplace(task(i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

// One solve of the model: order and index into the initial-state list.
struct RunResult {
  double alpha = 1.0;
  std::size_t state_index = 0;
  Trajectory trajectory;
};

SolverConfig solver_config(const RunConfig& cfg);
Trajectory solve_model(const ModelParams& p, double alpha, const State& x0,
                       const SolverConfig& solver);
// Every (alpha, initial state) pair, alpha-major.
std::vector<RunResult> solve_grid(const RunConfig& cfg);

// e.g. "traj_a0.95_x1.csv"; x is 1-based.
std::string trajectory_file_name(std::string_view prefix, double alpha,
                                 std::size_t state_index);

// Writes one CSV per run into cfg.out_dir and prints a summary.
void simulate(const RunConfig& cfg, double tolerance, std::ostream& out);

inline const std::vector<double>& default_report_alphas() {
  static const std::vector<double> a = {0.6, 2.0 / 3.0, 0.85, 0.95, 1.0};
  return a;
}

void report(const ModelParams& p, const std::vector<double>& alphas,
            std::optional<double> theta2_reference_theta, std::ostream& out);
void print_equilibria(const ModelParams& p, std::ostream& out);

struct SweepRequest {
  ModelParams base;
  std::string parameter;
  std::vector<double> values;
  std::vector<double> alphas;
};
// One row per (value, alpha). Throws ValidationError naming the first
// value that leaves the valid parameter region.
void write_sweep_csv(const SweepRequest& req, std::ostream& out);

// Runs the verification suite on fresh solves, or on a trajectory read from
// a CSV when one is given. Returns false when any check fails.
bool verify(const RunConfig& cfg, const std::optional<std::filesystem::path>& csv,
            double tolerance, std::ostream& out);

enum class ItemStatus { pass, fail, known_paper_discrepancy };
std::string_view to_string(ItemStatus s);

struct ReproItem {
  std::string quantity;
  std::string paper;     // as printed in the paper
  std::string computed;
  std::optional<double> abs_diff;
  std::optional<double> tolerance;
  ItemStatus status = ItemStatus::pass;
  std::string note;
};

struct ReproReport {
  std::string id;
  std::string title;
  std::vector<ReproItem> items;
  std::vector<std::string> observations;  // trajectory facts, not graded
  std::vector<std::string> files;
  std::size_t failures() const;
};

const std::vector<std::string>& reproduce_ids();

struct ReproOptions {
  std::filesystem::path out_dir = "out";
  bool write_files = true;
  double convergence_tolerance = 0.05;
  double step = 0.05;
  std::optional<double> t_end;  // overrides the scenario span
};

ReproReport reproduce(const std::string& id, const ReproOptions& opts);
void print_report(const ReproReport& rep, std::ostream& out);
void write_report_csv(const ReproReport& rep, std::ostream& out);

}  // namespace fracepi::app
