// Command-line front end: instance generation, batch experiment runs,
// aggregation, exact re-evaluation, parameter transfer and report emission.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsurr/controller.hpp"
#include "qsurr/harness.hpp"
#include "qsurr/instances.hpp"

namespace fs = std::filesystem;
using namespace qsurr;

namespace {

struct GenOptions {
  bool maxcut = false;
  bool heavyhex = false;
  int n = 16;
  int rows = 1;
  int cols = 1;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int cmd_gen(const GenOptions& opt) {
  if (opt.maxcut == opt.heavyhex) {
    std::cerr << "gen: pass exactly one of --maxcut / --heavyhex\n";
    return 1;
  }
  fs::create_directories(opt.out);
  const fs::path manifest_path = fs::path(opt.out) / "manifest.json";
  Manifest manifest;
  if (fs::exists(manifest_path)) manifest = load_manifest(manifest_path);

  for (int k = 0; k < opt.count; ++k) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(k);
    ProblemInstance inst;
    std::string id;
    if (opt.maxcut) {
      inst = generate_3regular_maxcut(opt.n, seed);
      id = "mc" + std::to_string(opt.n) + "_s" + std::to_string(seed);
    } else {
      inst = generate_heavy_hex_instance(generate_heavy_hex(opt.rows, opt.cols),
                                         seed);
      id = "hh_r" + std::to_string(opt.rows) + "c" + std::to_string(opt.cols) +
           "_s" + std::to_string(seed);
    }
    for (const auto& e : manifest.instances)
      if (e.id == id) {
        std::cerr << "gen: instance id already in manifest: " << id << '\n';
        return 1;
      }
    const std::string file = id + ".json";
    save_instance(inst, fs::path(opt.out) / file);
    manifest.instances.push_back(
        {id, file, instance_kind(inst), seed, instance_size(inst)});
    std::cout << "wrote " << (fs::path(opt.out) / file).string() << '\n';
  }
  save_manifest(manifest, manifest_path);
  std::cout << "manifest: " << manifest_path.string() << " ("
            << manifest.instances.size() << " instances)\n";
  return 0;
}

ExperimentSpec load_spec(const std::string& path, std::uint64_t* seed_override,
                         int* workers_override) {
  ExperimentSpec spec = load_experiment(path);
  if (seed_override) spec.master_seed = *seed_override;
  if (workers_override) spec.workers = *workers_override;
  return spec;
}

int cmd_transfer(const std::string& manifest_path, int p,
                 const std::string& summary, const std::string& instances_csv,
                 int shots, std::uint64_t seed, const std::string& out) {
  const Manifest manifest = load_manifest(manifest_path);

  AngleVector angles;
  if (summary.empty()) {
    const auto& table = heuristic_angle_table();
    const auto it = table.find(p);
    if (it == table.end()) {
      std::cerr << "transfer: no parameter-transfer angles for p = " << p << '\n';
      return 1;
    }
    angles = it->second;
  } else {
    std::ifstream in(summary);
    if (!in) {
      std::cerr << "transfer: cannot read " << summary << '\n';
      return 1;
    }
    nlohmann::json j;
    in >> j;
    angles = AngleVector::from_flat(j.at("theta_opt").get<std::vector<double>>());
  }

  std::vector<std::pair<std::string, ProblemInstance>> instances;
  std::string id;
  std::stringstream ss(instances_csv);
  while (std::getline(ss, id, ','))
    if (!id.empty())
      instances.emplace_back(
          id, load_manifest_instance(manifest_path, manifest, id));
  if (instances.empty()) {
    std::cerr << "transfer: no instance ids given\n";
    return 1;
  }

  const auto rows = transfer_eval(angles, instances, shots, seed);
  std::ofstream csv(out);
  if (!csv) {
    std::cerr << "transfer: cannot write " << out << '\n';
    return 1;
  }
  csv << "instance,sampled,exact,heuristic_exact,margin\n";
  for (const auto& row : rows)
    csv << row.instance_id << ',' << csv_double(row.sampled) << ','
        << csv_double(row.exact) << ',' << csv_double(row.heuristic_exact)
        << ',' << csv_double(row.margin) << '\n';
  std::cout << "wrote " << out << " (" << rows.size() << " instances)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-based QAOA optimization"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate instances and a manifest");
  gen_cmd->add_flag("--maxcut", gen.maxcut, "3-regular weighted Max-Cut");
  gen_cmd->add_flag("--heavyhex", gen.heavyhex, "heavy-hex random Ising model");
  gen_cmd->add_option("--n", gen.n, "vertex count (maxcut)");
  gen_cmd->add_option("--rows", gen.rows, "hexagon rows (heavyhex)");
  gen_cmd->add_option("--cols", gen.cols, "hexagon columns (heavyhex)");
  gen_cmd->add_option("--count", gen.count, "number of instances");
  gen_cmd->add_option("--seed", gen.seed, "base seed; instance k uses seed + k");
  gen_cmd->add_option("--out", gen.out, "output directory");

  std::string spec_path;
  std::uint64_t master_seed = 0;
  int workers = 0;
  bool overwrite = false;
  bool have_seed = false, have_workers = false;
  auto add_spec_opts = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "experiment spec JSON")->required();
  };

  auto* run_cmd = app.add_subcommand("run", "execute an experiment spec");
  add_spec_opts(run_cmd);
  run_cmd->add_option("--master-seed", master_seed, "override the spec seed")
      ->each([&](const std::string&) { have_seed = true; });
  run_cmd->add_option("--workers", workers, "concurrent runs")
      ->each([&](const std::string&) { have_workers = true; });
  run_cmd->add_flag("--overwrite", overwrite, "redo existing/partial runs");

  std::string out_dir;
  auto* agg_cmd = app.add_subcommand("aggregate", "aggregate run curves to CSV");
  add_spec_opts(agg_cmd);
  agg_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* reeval_cmd =
      app.add_subcommand("reeval", "infinite-shot re-evaluation of best angles");
  add_spec_opts(reeval_cmd);
  reeval_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* report_cmd =
      app.add_subcommand("report", "CSV tables and SVG learning-curve plots");
  add_spec_opts(report_cmd);
  report_cmd->add_option("--out-dir", out_dir, "output directory");

  std::string manifest_path, summary_path, instance_ids, transfer_out = "transfer.csv";
  int transfer_p = 3, transfer_shots = 1000;
  std::uint64_t transfer_seed = 0;
  auto* transfer_cmd =
      app.add_subcommand("transfer", "evaluate fixed angles on unseen instances");
  transfer_cmd->add_option("--manifest", manifest_path)->required();
  transfer_cmd->add_option("--instances", instance_ids, "comma-separated ids")
      ->required();
  transfer_cmd->add_option("--p", transfer_p, "rounds (picks table angles)");
  transfer_cmd->add_option("--summary", summary_path,
                           "take theta_opt from a run summary instead");
  transfer_cmd->add_option("--shots", transfer_shots);
  transfer_cmd->add_option("--seed", transfer_seed);
  transfer_cmd->add_option("--out", transfer_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*run_cmd) {
      ExperimentSpec spec = load_spec(spec_path, have_seed ? &master_seed : nullptr,
                                      have_workers ? &workers : nullptr);
      const int failures = run_experiment(spec, overwrite);
      if (failures > 0) {
        std::cerr << failures << " run(s) failed\n";
        return 1;
      }
      std::cout << "all runs completed under " << spec.output_dir.string() << '\n';
      return 0;
    }
    if (*agg_cmd || *report_cmd || *reeval_cmd) {
      ExperimentSpec spec = load_spec(spec_path, nullptr, nullptr);
      const fs::path out =
          out_dir.empty() ? spec.output_dir / "report" : fs::path(out_dir);
      if (*agg_cmd) {
        fs::create_directories(out);
        for (const auto& job : spec.jobs) {
          auto curves = load_job_curves(spec, job);
          const auto agg = aggregate(curves, shot_grid(curves));
          std::ofstream csv(out / (job.id + "_energy.csv"));
          csv << "shots,mean_value,half_width\n";
          for (std::size_t i = 0; i < agg.grid.size(); ++i)
            csv << agg.grid[i] << ',' << csv_double(agg.mean[i]) << ','
                << csv_double(agg.half_width[i]) << '\n';
        }
      } else if (*report_cmd) {
        write_report(spec, out);
      } else {
        write_reeval(spec, out);
      }
      std::cout << "wrote " << out.string() << '\n';
      return 0;
    }
    if (*transfer_cmd)
      return cmd_transfer(manifest_path, transfer_p, summary_path, instance_ids,
                          transfer_shots, transfer_seed, transfer_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
