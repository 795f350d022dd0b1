#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsurr/controller.hpp"
#include "qsurr/engine.hpp"
#include "qsurr/instances.hpp"

namespace qsurr {

// Parameter-transfer angles for heavy-hex Ising models, p in {3, 4, 5}.
const std::map<int, AngleVector>& heuristic_angle_table();

// r = (c_max - value) / (c_max - c_min); 1 at the ground state, 0 at the top.
double approximation_ratio(double value, const SpectrumExtrema& extrema);

struct ExactCurvePoint {
  long long evals = 0;
  long long cumulative_shots = 0;
  double exact_value = 0.0;  // infinite-shot cost at the best-so-far angles
};

// Re-evaluates each learning-curve prefix exactly: the best-so-far angles are
// chosen by the archived finite-shot values, then costed with infinite shots.
// The result need not be monotone.
std::vector<ExactCurvePoint> reevaluate_exact(const RunResult& result,
                                              const QaoaEvaluator& eval);

struct AggregateCurve {
  std::vector<long long> grid;  // cumulative-shot values covered by all curves
  std::vector<double> mean;
  std::vector<double> half_width;  // 2 * (population sigma / sqrt(m))
};

// Right-continuous step interpolation of each best-so-far curve onto the shot
// grid, then pointwise mean and two-standard-error half-widths. Grid points
// preceding any curve's first evaluation are excluded.
AggregateCurve aggregate(const std::vector<std::vector<CurvePoint>>& curves,
                         const std::vector<long long>& grid);

// Convenience: the union of x-values across curves.
std::vector<long long> shot_grid(const std::vector<std::vector<CurvePoint>>& curves);

struct TransferRow {
  std::string instance_id;
  double sampled = 0.0;          // finite-shot cost of the transferred angles
  double exact = 0.0;            // infinite-shot cost of the transferred angles
  double heuristic_exact = 0.0;  // infinite-shot cost of the Table angles
  double margin = 0.0;           // heuristic_exact - exact; > 0 means improvement
};

// Evaluates fixed angles on unseen instances and compares them against the
// parameter-transfer angles for the same p.
std::vector<TransferRow> transfer_eval(
    const AngleVector& angles,
    const std::vector<std::pair<std::string, ProblemInstance>>& instances,
    int shots, std::uint64_t seed);

struct JobSpec {
  std::string id;
  RunConfig base;  // master_seed is derived per repeat
  int repeats = 1;
};

struct ExperimentSpec {
  std::filesystem::path manifest;
  std::filesystem::path output_dir;
  int workers = 0;  // 0 = OpenMP default
  std::uint64_t master_seed = 0;
  std::vector<JobSpec> jobs;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& spec_dir);
ExperimentSpec load_experiment(const std::filesystem::path& path);

// Runs every (job, repeat) pair, scheduling independent runs concurrently.
// Existing summaries are skipped (per-run resume); an archive without its
// summary is reported as a partial-run conflict unless overwrite is set.
// Returns the number of failed runs.
int run_experiment(const ExperimentSpec& spec, bool overwrite = false);

// Per-repeat output paths and the derived per-run seed.
std::filesystem::path run_archive_path(const ExperimentSpec& spec,
                                       const JobSpec& job, int repeat);
std::filesystem::path run_summary_path(const ExperimentSpec& spec,
                                       const JobSpec& job, int repeat);
std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t job_index,
                       int repeat);

// Loads the learning curves of all completed repeats of a job.
std::vector<std::vector<CurvePoint>> load_job_curves(const ExperimentSpec& spec,
                                                     const JobSpec& job);

// Writes <id>.csv (shots,mean_r,half_width), <id>_energy.csv
// (shots,mean_value,half_width) and <id>.svg under out_dir for each job, plus
// a summary.csv row per job. Approximation ratios use brute-force extrema.
void write_report(const ExperimentSpec& spec,
                  const std::filesystem::path& out_dir);

// Writes per-job exact re-evaluation curves (aggregated) as
// <id>_exact.csv (shots,mean_exact,half_width).
void write_reeval(const ExperimentSpec& spec,
                  const std::filesystem::path& out_dir);

// CSV cell formatting used across reports: shortest round-trip decimal.
std::string csv_double(double v);

}  // namespace qsurr
