#include "qsurr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

#include "qsurr/rng.hpp"
#include "qsurr/svgplot.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsurr {

const std::map<int, AngleVector>& heuristic_angle_table() {
  static const std::map<int, AngleVector> table = {
      {3,
       {{-0.14264, -0.26589, -0.34195},
        {0.50502, 0.35713, 0.19264}}},
      {4,
       {{-0.12077, -0.22360, -0.29902, -0.35329},
        {0.54321, 0.41806, 0.28615, 0.16041}}},
      {5,
       {{-0.11764, -0.19946, -0.268736, -0.321586, -0.34583},
        {0.53822, 0.44776, 0.32923, 0.23056, 0.12587}}},
  };
  return table;
}

double approximation_ratio(double value, const SpectrumExtrema& extrema) {
  const double span = extrema.c_max - extrema.c_min;
  if (!(span > 0.0))
    throw std::invalid_argument("degenerate spectrum: c_max must exceed c_min");
  return (extrema.c_max - value) / span;
}

std::vector<ExactCurvePoint> reevaluate_exact(const RunResult& result,
                                              const QaoaEvaluator& eval) {
  std::vector<ExactCurvePoint> curve;
  curve.reserve(result.records.size());
  std::size_t best = 0;
  double exact = 0.0;
  bool have_exact = false;
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    if (k == 0 || result.records[k].value < result.records[best].value) {
      best = k;
      have_exact = false;
    }
    if (!have_exact) {
      exact = eval.exact_cost(AngleVector::from_flat(result.records[best].theta));
      have_exact = true;
    }
    const long long evals = static_cast<long long>(k) + 1;
    curve.push_back(
        {evals, static_cast<long long>(result.config.shots) * evals, exact});
  }
  return curve;
}

std::vector<long long> shot_grid(
    const std::vector<std::vector<CurvePoint>>& curves) {
  std::set<long long> xs;
  for (const auto& c : curves)
    for (const auto& pt : c) xs.insert(pt.cumulative_shots);
  return {xs.begin(), xs.end()};
}

AggregateCurve aggregate(const std::vector<std::vector<CurvePoint>>& curves,
                         const std::vector<long long>& grid) {
  if (curves.empty()) throw std::invalid_argument("aggregate needs curves");
  for (const auto& c : curves)
    if (c.empty()) throw std::invalid_argument("aggregate got an empty curve");

  const double m = static_cast<double>(curves.size());
  AggregateCurve out;
  std::vector<double> vals(curves.size());
  for (long long g : grid) {
    bool covered = true;
    for (std::size_t c = 0; c < curves.size() && covered; ++c) {
      const auto& curve = curves[c];
      // last point at or before g (right-continuous step interpolation)
      auto it = std::upper_bound(
          curve.begin(), curve.end(), g,
          [](long long x, const CurvePoint& pt) { return x < pt.cumulative_shots; });
      if (it == curve.begin())
        covered = false;  // grid point precedes this curve's first evaluation
      else
        vals[c] = std::prev(it)->best_value;
    }
    if (!covered) continue;

    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= m;  // population variance
    out.grid.push_back(g);
    out.mean.push_back(mean);
    out.half_width.push_back(2.0 * std::sqrt(var / m));
  }
  return out;
}

std::vector<TransferRow> transfer_eval(
    const AngleVector& angles,
    const std::vector<std::pair<std::string, ProblemInstance>>& instances,
    int shots, std::uint64_t seed) {
  angles.validate();
  const auto& table = heuristic_angle_table();
  const auto heur = table.find(angles.p());
  if (heur == table.end())
    throw std::invalid_argument("no parameter-transfer angles for p = " +
                                std::to_string(angles.p()));

  std::vector<TransferRow> rows;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const QaoaEvaluator eval(instances[k].second);
    TransferRow row;
    row.instance_id = instances[k].first;
    row.exact = eval.exact_cost(angles);
    row.sampled = shots > 0
                      ? eval.sampled_cost(angles, shots,
                                          derive_seed(seed, /*tag=*/7, k))
                            .value
                      : row.exact;
    row.heuristic_exact = eval.exact_cost(heur->second);
    row.margin = row.heuristic_exact - row.exact;
    rows.push_back(row);
  }
  return rows;
}

namespace {

BoundBox default_bounds(const std::string& kind, int p) {
  return kind == "maxcut" ? BoundBox::maxcut_default(p)
                          : BoundBox::heavy_hex_default(p);
}

}  // namespace

ExperimentSpec experiment_from_json(const nlohmann::json& j,
                                    const std::filesystem::path& spec_dir) {
  ExperimentSpec spec;
  spec.manifest = spec_dir / j.at("manifest").get<std::string>();
  spec.output_dir = spec_dir / j.at("output_dir").get<std::string>();
  spec.workers = j.value("workers", 0);
  spec.master_seed = j.value("master_seed", 0ull);

  const Manifest manifest = load_manifest(spec.manifest);
  for (const auto& job : j.at("jobs")) {
    JobSpec js;
    const std::string instance_id = job.at("instance").get<std::string>();
    const auto& entry = manifest.find(instance_id);

    RunConfig cfg;
    cfg.instance_id = instance_id;
    cfg.p = job.at("p").get<int>();
    cfg.shots = job.at("shots").get<int>();
    cfg.n_init = job.at("n_init").get<int>();
    cfg.n_it = job.at("n_it").get<int>();
    cfg.rescale_n = entry.n;
    if (job.contains("bounds")) {
      if (job.at("bounds").is_object()) {
        cfg.bounds.lower = job.at("bounds").at("lower").get<std::vector<double>>();
        cfg.bounds.upper = job.at("bounds").at("upper").get<std::vector<double>>();
      } else {
        cfg.bounds = default_bounds(job.at("bounds").get<std::string>(), cfg.p);
      }
    } else {
      cfg.bounds = default_bounds(entry.kind, cfg.p);
    }
    if (job.value("heuristic", false)) {
      const auto& table = heuristic_angle_table();
      const auto it = table.find(cfg.p);
      if (it == table.end())
        throw std::invalid_argument("no heuristic angles for p = " +
                                    std::to_string(cfg.p));
      cfg.heuristic_angles.push_back(it->second);
    }
    cfg.inner = job.value("inner", std::string("de")) == "multistart"
                    ? InnerSolver::multistart
                    : InnerSolver::de;
    if (job.contains("de")) {
      const auto& de = job.at("de");
      cfg.de.npop = de.value("npop", cfg.de.npop);
      cfg.de.gtol = de.value("gtol", cfg.de.gtol);
      cfg.de.ftol = de.value("ftol", cfg.de.ftol);
      cfg.de.max_gens = de.value("max_gens", cfg.de.max_gens);
      cfg.de.mutation = de.value("mutation", cfg.de.mutation);
      cfg.de.crossover = de.value("crossover", cfg.de.crossover);
    }
    cfg.n_starts = job.value("n_starts", 10);
    cfg.surrogate.affine_tail = job.value("affine_tail", true);

    js.id = job.value("id", instance_id + "_p" + std::to_string(cfg.p) + "_ns" +
                                std::to_string(cfg.shots));
    js.base = cfg;
    js.repeats = job.value("repeats", 1);
    if (js.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    spec.jobs.push_back(std::move(js));
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read experiment spec " + path.string());
  nlohmann::json j;
  in >> j;
  return experiment_from_json(j, path.parent_path());
}

std::filesystem::path run_archive_path(const ExperimentSpec& spec,
                                       const JobSpec& job, int repeat) {
  return spec.output_dir / job.id / ("run_" + std::to_string(repeat) + ".jsonl");
}

std::filesystem::path run_summary_path(const ExperimentSpec& spec,
                                       const JobSpec& job, int repeat) {
  return spec.output_dir / job.id / ("run_" + std::to_string(repeat) + ".json");
}

std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t job_index,
                       int repeat) {
  return derive_seed(spec.master_seed, 1000 + job_index, repeat);
}

int run_experiment(const ExperimentSpec& spec, bool overwrite) {
  const Manifest manifest = load_manifest(spec.manifest);

  // One shared evaluator per distinct instance; read-only after construction.
  std::map<std::string, QaoaEvaluator> evaluators;
  for (const auto& job : spec.jobs)
    if (!evaluators.count(job.base.instance_id))
      evaluators.emplace(job.base.instance_id,
                         QaoaEvaluator(load_manifest_instance(
                             spec.manifest, manifest, job.base.instance_id)));

  struct Task {
    std::size_t job_index;
    int repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t ji = 0; ji < spec.jobs.size(); ++ji)
    for (int r = 0; r < spec.jobs[ji].repeats; ++r) tasks.push_back({ji, r});

  std::atomic<int> failures{0};
  const int workers = spec.workers > 0 ? spec.workers :
#ifdef _OPENMP
                                       omp_get_max_threads();
#else
                                       1;
#endif

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    const auto& task = tasks[t];
    const JobSpec& job = spec.jobs[task.job_index];
    const auto summary_path = run_summary_path(spec, job, task.repeat);
    const auto archive_path = run_archive_path(spec, job, task.repeat);
    try {
      if (std::filesystem::exists(summary_path) && !overwrite) continue;
      if (std::filesystem::exists(archive_path) && !overwrite)
        throw std::runtime_error("partial run (archive without summary): " +
                                 archive_path.string() +
                                 "; rerun with --overwrite");
      RunConfig cfg = job.base;
      cfg.master_seed = run_seed(spec, task.job_index, task.repeat);
      const auto& eval = evaluators.at(cfg.instance_id);
      const RunResult result =
          run(cfg, make_truth(eval, cfg.shots), archive_path);
      save_summary(result, summary_path);
    } catch (const std::exception& e) {
#pragma omp critical
      std::cerr << "[qsurr] run failed (" << job.id << ", repeat "
                << task.repeat << "): " << e.what() << '\n';
      ++failures;
    }
  }
  return failures.load();
}

namespace {

std::vector<CurvePoint> curve_from_summary(const nlohmann::json& summary) {
  std::vector<CurvePoint> curve;
  for (const auto& row : summary.at("learning_curve"))
    curve.push_back({row.at(0).get<long long>(), row.at(1).get<long long>(),
                     row.at(2).get<double>()});
  return curve;
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

// Exact-mode runs have zero cumulative shots; fall back to the evaluation
// index as the curve abscissa.
void use_eval_axis(std::vector<CurvePoint>& curve) {
  for (auto& pt : curve) pt.cumulative_shots = pt.evals;
}

}  // namespace

std::vector<std::vector<CurvePoint>> load_job_curves(const ExperimentSpec& spec,
                                                     const JobSpec& job) {
  std::vector<std::vector<CurvePoint>> curves;
  for (int r = 0; r < job.repeats; ++r) {
    const auto path = run_summary_path(spec, job, r);
    if (!std::filesystem::exists(path)) continue;
    curves.push_back(curve_from_summary(load_json(path)));
    if (job.base.shots == 0) use_eval_axis(curves.back());
  }
  if (curves.empty())
    throw std::runtime_error("no completed runs for job " + job.id);
  return curves;
}

std::string csv_double(double v) { return nlohmann::json(v).dump(); }

namespace {

void write_curve_csv(const std::filesystem::path& path, const char* value_col,
                     const AggregateCurve& agg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "shots," << value_col << ",half_width\n";
  for (std::size_t i = 0; i < agg.grid.size(); ++i)
    out << agg.grid[i] << ',' << csv_double(agg.mean[i]) << ','
        << csv_double(agg.half_width[i]) << '\n';
}

}  // namespace

void write_report(const ExperimentSpec& spec,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Manifest manifest = load_manifest(spec.manifest);
  std::map<std::string, SpectrumExtrema> extrema_cache;

  std::ofstream summary(out_dir / "summary.csv");
  summary << "job,final_shots,final_mean_r,final_half_width,final_mean_value\n";

  for (const auto& job : spec.jobs) {
    auto curves = load_job_curves(spec, job);
    const auto grid = shot_grid(curves);
    const AggregateCurve value_agg = aggregate(curves, grid);
    write_curve_csv(out_dir / (job.id + "_energy.csv"), "mean_value", value_agg);

    const std::string x_label =
        job.base.shots > 0 ? "cumulative shots" : "evaluations";
    {
      PlotSeries series;
      series.label = job.id;
      series.color = "#d95f02";
      for (std::size_t i = 0; i < value_agg.grid.size(); ++i) {
        series.x.push_back(static_cast<double>(value_agg.grid[i]));
        series.y.push_back(value_agg.mean[i]);
        series.yerr.push_back(value_agg.half_width[i]);
      }
      PlotSpec plot;
      plot.title = job.id + " (best cost)";
      plot.x_label = x_label;
      plot.y_label = "best cost so far";
      plot.log_x = job.base.shots > 0;
      write_svg_plot(out_dir / (job.id + "_energy.svg"), plot, {series});
    }

    if (!extrema_cache.count(job.base.instance_id))
      extrema_cache.emplace(job.base.instance_id,
                            brute_force_extrema(load_manifest_instance(
                                spec.manifest, manifest, job.base.instance_id)));
    const auto& ext = extrema_cache.at(job.base.instance_id);

    auto r_curves = curves;
    for (auto& curve : r_curves)
      for (auto& pt : curve) pt.best_value = approximation_ratio(pt.best_value, ext);
    const AggregateCurve r_agg = aggregate(r_curves, grid);
    write_curve_csv(out_dir / (job.id + ".csv"), "mean_r", r_agg);

    PlotSeries series;
    series.label = job.id;
    for (std::size_t i = 0; i < r_agg.grid.size(); ++i) {
      series.x.push_back(static_cast<double>(r_agg.grid[i]));
      series.y.push_back(r_agg.mean[i]);
      series.yerr.push_back(r_agg.half_width[i]);
    }
    PlotSpec plot;
    plot.title = job.id;
    plot.x_label = x_label;
    plot.y_label = "approximation ratio";
    plot.log_x = job.base.shots > 0;
    write_svg_plot(out_dir / (job.id + ".svg"), plot, {series});

    summary << job.id << ',' << (r_agg.grid.empty() ? 0 : r_agg.grid.back())
            << ',' << csv_double(r_agg.mean.empty() ? 0.0 : r_agg.mean.back())
            << ','
            << csv_double(r_agg.half_width.empty() ? 0.0
                                                   : r_agg.half_width.back())
            << ','
            << csv_double(value_agg.mean.empty() ? 0.0 : value_agg.mean.back())
            << '\n';
  }
}

void write_reeval(const ExperimentSpec& spec,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Manifest manifest = load_manifest(spec.manifest);
  std::map<std::string, QaoaEvaluator> evaluators;

  for (const auto& job : spec.jobs) {
    if (!evaluators.count(job.base.instance_id))
      evaluators.emplace(job.base.instance_id,
                         QaoaEvaluator(load_manifest_instance(
                             spec.manifest, manifest, job.base.instance_id)));
    const auto& eval = evaluators.at(job.base.instance_id);

    std::vector<std::vector<CurvePoint>> exact_curves;
    for (int r = 0; r < job.repeats; ++r) {
      const auto summary_path = run_summary_path(spec, job, r);
      const auto archive_path = run_archive_path(spec, job, r);
      if (!std::filesystem::exists(summary_path)) continue;
      RunResult result;
      result.config =
          run_config_from_json(load_json(summary_path).at("config"));
      result.records = Archive::load(archive_path).records();
      auto exact = reevaluate_exact(result, eval);
      std::vector<CurvePoint> curve;
      for (const auto& pt : exact)
        curve.push_back({pt.evals, pt.cumulative_shots, pt.exact_value});
      if (job.base.shots == 0) use_eval_axis(curve);
      exact_curves.push_back(std::move(curve));
    }
    if (exact_curves.empty())
      throw std::runtime_error("no completed runs for job " + job.id);
    const AggregateCurve agg = aggregate(exact_curves, shot_grid(exact_curves));
    write_curve_csv(out_dir / (job.id + "_exact.csv"), "mean_exact", agg);
  }
}

}  // namespace qsurr
