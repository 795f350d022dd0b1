#include "qsurr/controller.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "qsurr/rng.hpp"

namespace qsurr {

namespace {

// Seed-derivation tags; one stream per purpose so runs replay exactly.
constexpr std::uint64_t kTagInitPoints = 1;
constexpr std::uint64_t kTagShotSeed = 2;
constexpr std::uint64_t kTagInnerSolver = 3;
constexpr std::uint64_t kTagFallbackPoint = 4;

double timed_truth(const TruthFn& truth, const std::vector<double>& theta,
                   std::uint64_t seed, double& wall_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const double value = truth(theta, seed);
  wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
               .count();
  if (!std::isfinite(value))
    throw std::runtime_error("truth evaluation returned a non-finite value");
  return value;
}

}  // namespace

std::string to_string(EvalSource s) {
  switch (s) {
    case EvalSource::random_init: return "random_init";
    case EvalSource::heuristic_init: return "heuristic_init";
    case EvalSource::candidate: return "candidate";
  }
  throw std::logic_error("unknown EvalSource");
}

EvalSource eval_source_from_string(const std::string& s) {
  if (s == "random_init") return EvalSource::random_init;
  if (s == "heuristic_init") return EvalSource::heuristic_init;
  if (s == "candidate") return EvalSource::candidate;
  throw std::invalid_argument("unknown evaluation source: " + s);
}

nlohmann::json to_json(const EvaluationRecord& rec) {
  return {{"theta", rec.theta},       {"value", rec.value},
          {"shots", rec.shots},       {"iteration", rec.iteration},
          {"source", to_string(rec.source)}, {"seed", rec.seed},
          {"wall_time_s", rec.wall_time_s}};
}

EvaluationRecord record_from_json(const nlohmann::json& j) {
  EvaluationRecord rec;
  rec.theta = j.at("theta").get<std::vector<double>>();
  rec.value = j.at("value").get<double>();
  rec.shots = j.at("shots").get<int>();
  rec.iteration = j.at("iteration").get<int>();
  rec.source = eval_source_from_string(j.at("source").get<std::string>());
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.wall_time_s = j.at("wall_time_s").get<double>();
  return rec;
}

Archive::Archive(const std::filesystem::path& file) : file_(file) {
  if (!file_.parent_path().empty())
    std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create archive " + file_.string());
}

Archive Archive::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read archive " + file.string());
  Archive a;
  a.file_ = file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    a.records_.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return a;
}

void Archive::append(const EvaluationRecord& rec) {
  records_.push_back(rec);
  if (file_.empty()) return;
  std::ofstream out(file_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to archive " + file_.string());
  out << to_json(rec).dump() << '\n';
  out.flush();
}

void RunConfig::validate() const {
  bounds.validate();
  if (p < 1) throw std::invalid_argument("config needs p >= 1");
  if (bounds.dim() != dim())
    throw std::invalid_argument("bound box dimension must equal 2p");
  if (n_init < dim() + 2)
    throw std::invalid_argument("n_init must be at least dimension + 2");
  if (n_it < 0) throw std::invalid_argument("n_it must be >= 0");
  if (shots < 0) throw std::invalid_argument("shots must be >= 0 (0 = exact)");
  if (static_cast<int>(heuristic_angles.size()) > n_init)
    throw std::invalid_argument("more heuristic angles than n_init");
  for (const auto& a : heuristic_angles) {
    a.validate();
    if (a.p() != p)
      throw std::invalid_argument("heuristic angle p does not match config");
  }
  if (rescale_n < 1) throw std::invalid_argument("rescale_n must be >= 1");
  if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"instance_id", cfg.instance_id},
          {"p", cfg.p},
          {"bounds", {{"lower", cfg.bounds.lower}, {"upper", cfg.bounds.upper}}},
          {"n_init", cfg.n_init},
          {"n_it", cfg.n_it},
          {"shots", cfg.shots},
          {"heuristic_angles",
           [&] {
             auto arr = nlohmann::json::array();
             for (const auto& a : cfg.heuristic_angles)
               arr.push_back({{"gamma", a.gamma}, {"beta", a.beta}});
             return arr;
           }()},
          {"inner", cfg.inner == InnerSolver::de ? "de" : "multistart"},
          {"de",
           {{"npop", cfg.de.npop},
            {"gtol", cfg.de.gtol},
            {"ftol", cfg.de.ftol},
            {"max_gens", cfg.de.max_gens},
            {"mutation", cfg.de.mutation},
            {"crossover", cfg.de.crossover}}},
          {"n_starts", cfg.n_starts},
          {"master_seed", cfg.master_seed},
          {"rescale_n", cfg.rescale_n},
          {"affine_tail", cfg.surrogate.affine_tail}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.instance_id = j.at("instance_id").get<std::string>();
  cfg.p = j.at("p").get<int>();
  cfg.bounds.lower = j.at("bounds").at("lower").get<std::vector<double>>();
  cfg.bounds.upper = j.at("bounds").at("upper").get<std::vector<double>>();
  cfg.n_init = j.at("n_init").get<int>();
  cfg.n_it = j.at("n_it").get<int>();
  cfg.shots = j.at("shots").get<int>();
  for (const auto& a : j.at("heuristic_angles")) {
    AngleVector av;
    av.gamma = a.at("gamma").get<std::vector<double>>();
    av.beta = a.at("beta").get<std::vector<double>>();
    cfg.heuristic_angles.push_back(std::move(av));
  }
  cfg.inner = j.at("inner").get<std::string>() == "multistart"
                  ? InnerSolver::multistart
                  : InnerSolver::de;
  const auto& de = j.at("de");
  cfg.de.npop = de.at("npop").get<int>();
  cfg.de.gtol = de.at("gtol").get<int>();
  cfg.de.ftol = de.at("ftol").get<double>();
  cfg.de.max_gens = de.at("max_gens").get<int>();
  cfg.de.mutation = de.at("mutation").get<double>();
  cfg.de.crossover = de.at("crossover").get<double>();
  cfg.n_starts = j.at("n_starts").get<int>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.rescale_n = j.at("rescale_n").get<int>();
  cfg.surrogate.affine_tail = j.at("affine_tail").get<bool>();
  return cfg;
}

TruthFn make_truth(const QaoaEvaluator& eval, int shots) {
  return [&eval, shots](const std::vector<double>& theta, std::uint64_t seed) {
    return eval.cost(AngleVector::from_flat(theta), shots, seed);
  };
}

void initial_sample(const RunConfig& cfg, const TruthFn& truth,
                    Archive& archive) {
  cfg.validate();
  const int d = cfg.dim();
  Rng point_rng(derive_seed(cfg.master_seed, kTagInitPoints));

  for (int k = 0; k < cfg.n_init; ++k) {
    EvaluationRecord rec;
    rec.iteration = -1;
    rec.shots = cfg.shots;
    rec.seed = derive_seed(cfg.master_seed, kTagShotSeed, archive.size());
    if (k < static_cast<int>(cfg.heuristic_angles.size())) {
      rec.source = EvalSource::heuristic_init;
      rec.theta = cfg.heuristic_angles[k].flat();
    } else {
      rec.source = EvalSource::random_init;
      rec.theta.resize(d);
      // half-open [lower, upper) sampling
      for (int c = 0; c < d; ++c)
        rec.theta[c] = point_rng.uniform(cfg.bounds.lower[c], cfg.bounds.upper[c]);
    }
    rec.value = timed_truth(truth, rec.theta, rec.seed, rec.wall_time_s);
    archive.append(rec);
  }
}

EvaluationRecord step(const RunConfig& cfg, const TruthFn& truth,
                      Archive& archive, int iteration,
                      int* surrogate_failures) {
  const int d = cfg.dim();

  std::vector<TrainingPoint> points;
  points.reserve(archive.size());
  for (const auto& rec : archive.records()) points.push_back({rec.theta, rec.value});
  const TrainingSet training = dedupe(points, d);

  EvaluationRecord rec;
  rec.iteration = iteration;
  rec.shots = cfg.shots;
  rec.source = EvalSource::candidate;
  rec.seed = derive_seed(cfg.master_seed, kTagShotSeed, archive.size());

  try {
    const RbfSurrogate surrogate = RbfSurrogate::fit(training, cfg.surrogate);
    const Objective objective = rescale_objective(
        [&surrogate](const std::vector<double>& theta) {
          return surrogate.evaluate(theta);
        },
        cfg.rescale_n);
    const std::uint64_t solver_seed =
        derive_seed(cfg.master_seed, kTagInnerSolver, iteration);
    OptimizerReport report;
    if (cfg.inner == InnerSolver::de) {
      DeConfig de = cfg.de;
      de.seed = solver_seed;
      if (de.npop == 0) de.npop = 20 * cfg.p;
      report = differential_evolution(objective, cfg.bounds, de);
    } else {
      report = multistart_local(objective, cfg.bounds, cfg.n_starts, solver_seed);
    }
    rec.theta = report.best_theta;
  } catch (const std::runtime_error& e) {
    // SingularSystem or TooFewPoints (duplicates can shrink the deduplicated
    // archive below dim + 2). Keep the shot budget exact: spend this
    // iteration's evaluation on one uniform random point instead.
    if (dynamic_cast<const SingularSystem*>(&e) == nullptr &&
        dynamic_cast<const TooFewPoints*>(&e) == nullptr)
      throw;
    if (surrogate_failures) ++(*surrogate_failures);
    std::cerr << "[qsurr] iteration " << iteration
              << ": surrogate fit failed (" << e.what()
              << "); sampling a random point\n";
    Rng rng(derive_seed(cfg.master_seed, kTagFallbackPoint, iteration));
    rec.theta.resize(d);
    for (int c = 0; c < d; ++c)
      rec.theta[c] = rng.uniform(cfg.bounds.lower[c], cfg.bounds.upper[c]);
  }

  rec.value = timed_truth(truth, rec.theta, rec.seed, rec.wall_time_s);
  archive.append(rec);
  return rec;
}

std::size_t argmin_record(const std::vector<EvaluationRecord>& records) {
  if (records.empty()) throw std::invalid_argument("empty archive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].value < records[best].value) best = i;
  return best;
}

namespace {

RunResult finish_run(const RunConfig& cfg, const Archive& archive,
                     int surrogate_failures) {
  RunResult result;
  result.config = cfg;
  result.records = archive.records();
  result.surrogate_failures = surrogate_failures;

  const std::size_t best = argmin_record(result.records);
  result.theta_opt = result.records[best].theta;
  result.c_opt = result.records[best].value;

  double running = result.records.front().value;
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    running = std::min(running, result.records[k].value);
    const long long evals = static_cast<long long>(k) + 1;
    result.learning_curve.push_back(
        {evals, static_cast<long long>(cfg.shots) * evals, running});
  }
  return result;
}

}  // namespace

RunResult run(const RunConfig& cfg, const TruthFn& truth,
              const std::filesystem::path& archive_file) {
  cfg.validate();
  Archive archive =
      archive_file.empty() ? Archive{} : Archive{archive_file};
  initial_sample(cfg, truth, archive);
  int surrogate_failures = 0;
  for (int i = 1; i <= cfg.n_it; ++i)
    step(cfg, truth, archive, i, &surrogate_failures);
  return finish_run(cfg, archive, surrogate_failures);
}

RunResult run(const RunConfig& cfg, const TruthFn& truth) {
  return run(cfg, truth, std::filesystem::path{});
}

nlohmann::json summary_json(const RunResult& result) {
  auto curve = nlohmann::json::array();
  for (const auto& pt : result.learning_curve)
    curve.push_back({pt.evals, pt.cumulative_shots, pt.best_value});
  return {{"config", to_json(result.config)},
          {"theta_opt", result.theta_opt},
          {"c_opt", result.c_opt},
          {"evaluations", result.records.size()},
          {"surrogate_failures", result.surrogate_failures},
          {"learning_curve", curve}};
}

void save_summary(const RunResult& result, const std::filesystem::path& path) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary " + path.string());
  out << summary_json(result).dump(2) << '\n';
}

}  // namespace qsurr
