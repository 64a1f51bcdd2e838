// seek: train, evaluate and inspect source-seeking policies.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "seek/baselines.hpp"
#include "seek/config.hpp"
#include "seek/dqn.hpp"
#include "seek/eval.hpp"
#include "seek/parity.hpp"
#include "seek/plot.hpp"
#include "seek/policy_blob.hpp"
#include "seek/scene.hpp"
#include "seek/trajectory.hpp"

namespace fs = std::filesystem;
using namespace seek;

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kCheckFailed = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

struct Common {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::optional<unsigned> workers;
  std::string blob;
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (c.out_dir) cfg.io.output_dir = *c.out_dir;
  if (c.episodes) cfg.eval.n_episodes = *c.episodes;
  if (c.workers) cfg.eval.workers = *c.workers;
  return cfg;
}

fs::path blob_path(const Common& c, const RunConfig& cfg) {
  return c.blob.empty() ? fs::path(cfg.io.output_dir) / "policy.bin" : fs::path(c.blob);
}

PolicyFactory make_factory(const std::string& name, const RunConfig& cfg, const fs::path& blob) {
  if (name == "random") return [] { return std::make_unique<RandomPolicy>(); };
  if (name == "fsm") {
    const auto fsm = FsmPolicy::for_episode(cfg.env, cfg.eval.fsm_front_threshold);
    return [fsm] { return std::make_unique<FsmPolicy>(fsm); };
  }
  if (name == "dqn") {
    if (!fs::exists(blob)) throw IoError("policy blob not found: " + blob.string());
    return greedy_factory(load_policy(blob));
  }
  throw ConfigError("cli", 0, "policy", "unknown policy '" + name + "' (dqn | fsm | random)");
}

EvalSettings eval_settings(const RunConfig& cfg, std::optional<std::uint64_t> seed) {
  EvalSettings s;
  s.n_episodes = cfg.eval.n_episodes;
  s.base_seed = seed.value_or(cfg.eval.base_seed);
  s.obstacle_counts = cfg.eval.obstacle_counts;
  s.workers = cfg.eval.workers;
  return s;
}

int cmd_train(const Common& c, std::optional<std::uint64_t> steps, bool ablation) {
  RunConfig cfg = load(c);
  if (c.seed) cfg.train.seed = *c.seed;
  if (steps) cfg.train.total_steps = *steps;
  if (ablation) cfg.env.ablation_raw_gradient = true;
  const fs::path out = cfg.io.output_dir;
  const int verbosity = cfg.io.verbosity;

  auto result = train(cfg.env, cfg.train, [&](const EpisodeLog& e) {
    if (verbosity > 0 && (e.episode + 1) % 100 == 0)
      fmt::print("episode {:>6}  rolling success {:.3f}  rolling steps {:.2f}\n", e.episode + 1,
                 e.rolling_success, e.rolling_steps);
  });
  fs::create_directories(out);
  save_policy(result.net, out / "policy.bin");
  write_text(out / "train_log.csv", result.log.episodes_csv());
  write_text(out / "train_evals.csv", result.log.evaluations_csv());
  fmt::print("trained {} steps over {} episodes\n", result.log.total_steps, result.log.episodes.size());
  for (const auto& e : result.log.evaluations)
    if (e.selected)
      fmt::print("selected snapshot at episode {} (greedy success {:.3f}, steps {:.2f})\n", e.episode,
                 e.summary.success_rate, e.summary.mean_steps);
  fmt::print("wrote {}\n", (out / "policy.bin").string());
  return kOk;
}

int cmd_eval(const Common& c, const std::string& policy) {
  const RunConfig cfg = load(c);
  const auto result = evaluate(make_factory(policy, cfg, blob_path(c, cfg)), cfg.env, eval_settings(cfg, c.seed));
  std::cout << comparison_table({{policy, result.summary}});
  write_text(fs::path(cfg.io.output_dir) / fmt::format("eval_{}.csv", policy), records_csv(result.records));
  return kOk;
}

int cmd_compare(const Common& c, std::vector<std::string> policies) {
  const RunConfig cfg = load(c);
  if (policies.empty()) policies = cfg.eval.policies;
  std::vector<NamedPolicy> named;
  for (const auto& p : policies) named.push_back({p, make_factory(p, cfg, blob_path(c, cfg))});
  const auto rows = compare(named, cfg.env, eval_settings(cfg, c.seed));
  std::cout << comparison_table(rows);
  write_text(fs::path(cfg.io.output_dir) / "compare.csv", comparison_csv(rows));
  return kOk;
}

int cmd_export(const Common& c, const std::string& policy) {
  const RunConfig cfg = load(c);
  EvalSettings s = eval_settings(cfg, c.seed);
  s.log_trajectories = true;
  const auto result = evaluate(make_factory(policy, cfg, blob_path(c, cfg)), cfg.env, s);
  const fs::path dir = fs::path(cfg.io.output_dir) / "trajectories" / policy;
  for (const auto& r : result.records) {
    const std::string stem = fmt::format("episode_{}", r.seed);
    write_text(dir / (stem + ".csv"), trajectory_csv(r.trajectory));
    write_text(dir / (stem + ".scene.yaml"), scene_yaml(*r.world));
  }
  fmt::print("wrote {} trajectories to {}\n", result.records.size(), dir.string());
  return kOk;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& scene_override,
             const std::string& out_dir, double success_radius) {
  for (const auto& file : files) {
    const fs::path path = file;
    const auto rows = load_trajectory(path);
    std::optional<Scenario> scene;
    fs::path scene_path = scene_override;
    if (scene_path.empty()) scene_path = path.parent_path() / (path.stem().string() + ".scene.yaml");
    if (fs::exists(scene_path)) {
      const auto sf = load_scene(scene_path);
      if (sf.source) scene = Scenario{sf.arena, sf.start.value_or(Pose{}), *sf.source};
    }
    PlotOptions opt;
    opt.success_radius = success_radius;
    const fs::path svg =
        (out_dir.empty() ? path.parent_path() : fs::path(out_dir)) / (path.stem().string() + ".svg");
    write_text(svg, render_svg(rows, scene, opt));
    fmt::print("wrote {}\n", svg.string());
  }
  return kOk;
}

int cmd_parity(const Common& c, std::size_t cases, std::uint64_t seed) {
  const RunConfig cfg = load(c);
  const fs::path blob = blob_path(c, cfg);
  load_policy(blob);  // reports load errors against the file name
  const auto bytes = read_file_bytes(blob);
  tinyinfer::SensorConfig sensors;
  sensors.laser_max_range = cfg.env.laser_max_range;
  sensors.normalize_lasers = cfg.env.normalize_lasers;
  sensors.filter_alpha = cfg.env.filter_alpha;
  sensors.raw_gradient = cfg.env.ablation_raw_gradient;
  const auto rep = run_parity(bytes, cases, seed, sensors);
  fmt::print("cases            {}\n", rep.cases);
  fmt::print("max |dQ|         {:.3e} (limit {:.0e})\n", rep.max_deviation, kParityTolerance);
  fmt::print("argmax agreement {}/{} off-tie, {}/{} overall\n", rep.off_tie_agreement, rep.off_tie, rep.agreement,
             rep.cases);
  fmt::print("footprint        {} bytes (budget {})\n", rep.footprint, kFootprintBudget);
  const bool ok = rep.parity_ok() && rep.footprint_ok();
  fmt::print("{}\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source-seeking policy training and evaluation"};
  app.require_subcommand(1);
  Common common;

  const auto add_common = [&](CLI::App* sub, bool eval_opts) {
    sub->add_option("-c,--config", common.config_path, "YAML config file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", common.out_dir, "output directory (overrides io.output_dir)");
    sub->add_option("-s,--seed", common.seed, "seed (training seed or evaluation base seed)");
    if (eval_opts) {
      sub->add_option("-n,--episodes", common.episodes, "number of evaluation episodes");
      sub->add_option("-w,--workers", common.workers, "evaluation worker threads");
      sub->add_option("-b,--blob", common.blob, "policy blob (default <out>/policy.bin)");
    }
  };

  std::optional<std::uint64_t> steps;
  bool ablation = false;
  auto* train_cmd = app.add_subcommand("train", "train a DQN policy");
  add_common(train_cmd, false);
  train_cmd->add_option("--steps", steps, "total environment steps");
  train_cmd->add_flag("--ablation", ablation, "feed the raw one-step light difference instead of filtered features");

  std::string policy = "dqn";
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one policy");
  add_common(eval_cmd, true);
  eval_cmd->add_option("-p,--policy", policy, "dqn | fsm | random");

  std::vector<std::string> policies;
  auto* compare_cmd = app.add_subcommand("compare", "paired-seed comparison table");
  add_common(compare_cmd, true);
  compare_cmd->add_option("-p,--policies", policies, "policies to compare")->delimiter(',');

  auto* export_cmd = app.add_subcommand("export", "write trajectory logs and scene files");
  add_common(export_cmd, true);
  export_cmd->add_option("-p,--policy", policy, "dqn | fsm | random");

  std::vector<std::string> files;
  std::string scene_override, plot_out;
  double plot_radius = 1.0;
  auto* plot_cmd = app.add_subcommand("plot", "render trajectory logs as SVG");
  plot_cmd->add_option("files", files, "trajectory CSV files")->required();
  plot_cmd->add_option("--scene", scene_override, "scene file (default <stem>.scene.yaml next to each log)");
  plot_cmd->add_option("-o,--out", plot_out, "output directory (default next to each log)");
  plot_cmd->add_option("--success-radius", plot_radius, "radius of the drawn success disc");

  std::size_t cases = 10'000;
  std::uint64_t parity_seed = 7;
  auto* parity_cmd = app.add_subcommand("parity", "check inference kernel against the trainer forward pass");
  add_common(parity_cmd, true);
  parity_cmd->add_option("--cases", cases, "random sensor cases");
  parity_cmd->add_option("--parity-seed", parity_seed, "seed for the random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*train_cmd) return cmd_train(common, steps, ablation);
    if (*eval_cmd) return cmd_eval(common, policy);
    if (*compare_cmd) return cmd_compare(common, policies);
    if (*export_cmd) return cmd_export(common, policy);
    if (*plot_cmd) return cmd_plot(files, scene_override, plot_out, plot_radius);
    if (*parity_cmd) return cmd_parity(common, cases, parity_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BlobError& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return kIoError;
  } catch (const TrajectoryParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}
