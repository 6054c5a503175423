// Command-line front end: single runs, the full experiment suite, and
// re-rendering of saved runs as SVG.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "taskplan/harness.hpp"
#include "taskplan/serialize.hpp"
#include "taskplan/svg.hpp"

namespace fs = std::filesystem;
using namespace taskplan;

namespace {

std::string run_stem(const RunRecord& r) {
  return r.scenario + "_s" + std::to_string(static_cast<int>(r.strategy)) +
         "_v" + std::to_string(r.variant) + "_r" + std::to_string(r.repetition);
}

void write_run_art(const fs::path& dir, const ScenarioSpec& scenario,
                   const RunRecord& rec) {
  write_text_file((dir / (run_stem(rec) + "_trajectory.svg")).string(),
                  svg_trajectory(scenario, rec));
  if (rec.map) {
    write_text_file((dir / (run_stem(rec) + "_map.svg")).string(),
                    svg_map(scenario, *rec.map));
  }
}

void print_run(const RunRecord& r) {
  std::printf(
      "%-10s strategy=%d variant=%d rep=%d  states=%-3d objects=%-3d "
      "plan=%d success=%d collided=%d final=(%.2f, %.2f)\n",
      r.scenario.c_str(), static_cast<int>(r.strategy), r.variant, r.repetition,
      r.n_states, r.n_objects, r.plan_found ? 1 : 0, r.success ? 1 : 0,
      r.collided ? 1 : 0, r.final_pose.x, r.final_pose.y);
}

int cmd_run(const std::string& scenario_arg, int strategy, int variant,
            unsigned seed, const std::string& out_dir) {
  const ScenarioSpec scenario = load_scenario(scenario_arg);
  ExperimentConfig cfg;
  RunRecord rec = run_experiment(scenario, strategy_from_int(strategy), variant,
                                 seed, cfg);
  print_run(rec);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_runs_json((fs::path(out_dir) / "runs.json").string(), {rec});
    write_run_art(out_dir, scenario, rec);
    std::printf("wrote %s/runs.json\n", out_dir.c_str());
  }
  return 0;
}

int cmd_suite(const std::string& out_dir, int repetitions) {
  ExperimentConfig cfg;
  cfg.repetitions = repetitions;
  std::vector<RunRecord> runs;
  for (const std::string& name : {std::string("culdesac"), std::string("overtaking")}) {
    const ScenarioSpec scenario = builtin_scenario(name);
    for (int strat = 0; strat <= 4; ++strat) {
      for (int variant = 0; variant < static_cast<int>(scenario.starts.size());
           ++variant) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
          const unsigned seed =
              static_cast<unsigned>(1000 * strat + 100 * variant + rep);
          RunRecord rec = run_experiment(scenario, strategy_from_int(strat),
                                         variant, seed, cfg);
          rec.repetition = rep;
          print_run(rec);
          runs.push_back(std::move(rec));
        }
      }
    }
  }

  const std::vector<GroupSummary> groups = summarize(runs);
  std::printf("\n%s", format_summary_csv(groups).c_str());

  // How planning effort scales: correlate map size and perceived body
  // count with wall-clock planning time over all planned runs.
  std::vector<double> states, objects, times;
  for (const RunRecord& r : runs) {
    if (r.strategy == Strategy::Reactive) continue;
    states.push_back(r.n_states);
    objects.push_back(r.n_objects);
    times.push_back(r.planning_time_s);
  }
  std::printf("\npearson(states, objects) = %.4f\n", pearson(states, objects));
  std::printf("pearson(states, time)    = %.4f\n", pearson(states, times));
  std::printf("pearson(objects, time)   = %.4f\n", pearson(objects, times));

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_runs_json((fs::path(out_dir) / "runs.json").string(), runs);
    write_summary_csv((fs::path(out_dir) / "summary.csv").string(), groups);
    for (const RunRecord& r : runs) {
      write_run_art(out_dir, builtin_scenario(r.scenario), r);
    }
    std::printf("wrote %s/runs.json and %s/summary.csv\n", out_dir.c_str(),
                out_dir.c_str());
  }
  return 0;
}

int cmd_plot(const std::string& run_file, const std::string& out_dir) {
  std::ifstream in(run_file);
  if (!in) throw Error("cannot open: " + run_file);
  Json arr;
  in >> arr;
  fs::create_directories(out_dir);
  for (const Json& j : arr) {
    RunRecord rec;
    rec.scenario = j.at("scenario").get<std::string>();
    rec.strategy = strategy_from_int(j.at("strategy").get<int>());
    rec.variant = j.at("variant").get<int>();
    rec.repetition = j.at("repetition").get<int>();
    rec.collided = j.at("collided").get<bool>();
    for (const Json& p : j.at("trajectory"))
      rec.trajectory.push_back(pose_from_json(p));
    const ScenarioSpec scenario = builtin_scenario(rec.scenario);
    write_text_file(
        (fs::path(out_dir) / (run_stem(rec) + "_trajectory.svg")).string(),
        svg_trajectory(scenario, rec));
  }
  std::printf("rendered %zu run(s) into %s\n", arr.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop task planning over a hybrid automaton"};
  app.require_subcommand(1);

  std::string scenario = "culdesac";
  int strategy = 1;
  int variant = 0;
  unsigned seed = 0;
  std::string out_dir;
  int repetitions = 3;
  std::string run_file;

  CLI::App* run = app.add_subcommand("run", "run one scenario/strategy/variant");
  run->add_option("--scenario", scenario,
                  "builtin name (culdesac, overtaking) or JSON file");
  run->add_option("--strategy", strategy, "0..4")->check(CLI::Range(0, 4));
  run->add_option("--variant", variant, "start-pose variant");
  run->add_option("--seed", seed, "scan noise seed");
  run->add_option("--out", out_dir, "output directory");

  CLI::App* suite = app.add_subcommand("suite", "run the full experiment matrix");
  suite->add_option("--out", out_dir, "output directory");
  suite->add_option("--repetitions", repetitions, "repetitions per variant");

  CLI::App* plot = app.add_subcommand("plot", "render saved runs as SVG");
  plot->add_option("--run", run_file, "runs.json produced by run/suite")
      ->required();
  plot->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(scenario, strategy, variant, seed, out_dir);
    if (suite->parsed()) return cmd_suite(out_dir, repetitions);
    if (plot->parsed()) return cmd_plot(run_file, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
