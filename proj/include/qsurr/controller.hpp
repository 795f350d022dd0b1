#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsurr/engine.hpp"
#include "qsurr/optim.hpp"
#include "qsurr/surrogate.hpp"

namespace qsurr {

enum class EvalSource { random_init, heuristic_init, candidate };

std::string to_string(EvalSource s);
EvalSource eval_source_from_string(const std::string& s);

struct EvaluationRecord {
  std::vector<double> theta;  // flat (gamma..., beta...)
  double value = 0.0;         // finite-shot estimate, archived as-is
  int shots = 0;
  int iteration = -1;  // -1 for initial samples, else >= 1
  EvalSource source = EvalSource::random_init;
  std::uint64_t seed = 0;  // shot-stream seed used for this evaluation
  double wall_time_s = 0.0;
};

nlohmann::json to_json(const EvaluationRecord& rec);
EvaluationRecord record_from_json(const nlohmann::json& j);

// Append-only evaluation archive, optionally backed by a JSON-lines file.
// Every append is written and flushed before returning, so a crashed run
// leaves a loadable prefix on disk.
class Archive {
 public:
  Archive() = default;  // in-memory only
  explicit Archive(const std::filesystem::path& file);  // creates/truncates

  static Archive load(const std::filesystem::path& file);

  void append(const EvaluationRecord& rec);
  const std::vector<EvaluationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const std::filesystem::path& file() const { return file_; }

 private:
  std::vector<EvaluationRecord> records_;
  std::filesystem::path file_;
};

enum class InnerSolver { de, multistart };

struct RunConfig {
  std::string instance_id;
  int p = 1;
  BoundBox bounds;
  int n_init = 0;
  int n_it = 0;
  int shots = 0;  // 0 selects the exact (infinite-shot) truth
  std::vector<AngleVector> heuristic_angles;  // evaluated first, verbatim
  InnerSolver inner = InnerSolver::de;
  DeConfig de;         // seed is derived per iteration from master_seed
  int n_starts = 10;   // multistart starts per iteration
  std::uint64_t master_seed = 0;
  int rescale_n = 1;   // vertex count used to rescale the inner objective
  RbfConfig surrogate;

  int dim() const { return 2 * p; }
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);

struct CurvePoint {
  long long evals = 0;             // truth evaluations so far
  long long cumulative_shots = 0;  // shots * evals
  double best_value = 0.0;         // min archived value so far
};

struct RunResult {
  RunConfig config;
  std::vector<EvaluationRecord> records;
  std::vector<double> theta_opt;
  double c_opt = 0.0;
  std::vector<CurvePoint> learning_curve;
  int surrogate_failures = 0;  // iterations that fell back to a random point
};

nlohmann::json summary_json(const RunResult& result);
void save_summary(const RunResult& result, const std::filesystem::path& path);

// Truth oracle: finite-shot (or exact) cost at theta, using `seed` for the
// shot RNG stream. Must be safe to call concurrently from different runs.
using TruthFn =
    std::function<double(const std::vector<double>& theta, std::uint64_t seed)>;

TruthFn make_truth(const QaoaEvaluator& eval, int shots);

// Truth at configured heuristic angles first, then at uniform random points
// in the box until n_init evaluations; all appended to the archive.
void initial_sample(const RunConfig& cfg, const TruthFn& truth, Archive& archive);

// One refinement iteration: fit the surrogate on the deduplicated archive,
// minimize it (rescaled by the vertex count) with the inner solver, evaluate
// truth at the candidate and append. A singular surrogate fit falls back to
// one uniform random point so the shot budget stays exact.
EvaluationRecord step(const RunConfig& cfg, const TruthFn& truth,
                      Archive& archive, int iteration,
                      int* surrogate_failures = nullptr);

// initial_sample followed by exactly n_it steps; total truth evaluations are
// n_init + n_it and total shots are shots * (n_init + n_it).
RunResult run(const RunConfig& cfg, const TruthFn& truth,
              const std::filesystem::path& archive_file);
RunResult run(const RunConfig& cfg, const TruthFn& truth);  // in-memory archive

// Best (lowest finite-shot value) record index; first occurrence wins ties.
std::size_t argmin_record(const std::vector<EvaluationRecord>& records);

}  // namespace qsurr
