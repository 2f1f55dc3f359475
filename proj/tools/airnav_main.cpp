#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "airnav/bridge.hpp"
#include "airnav/runner.hpp"
#include "airnav/serialization.hpp"
#include "airnav/trainer.hpp"

namespace {

using namespace airnav;

std::optional<std::uint64_t> env_seed_override() {
  const char* raw = std::getenv("AIRNAV_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw CLI::ValidationError("AIRNAV_SEED", "must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

struct GenArgs {
  int episodes = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<double> split_ratios;
  std::string config_path;
};

int run_gen(const GenArgs& args) {
  AppConfig app;
  if (!args.config_path.empty()) app = load_app_config(args.config_path);
  GenConfig cfg = app.gen;
  cfg.episodes = args.episodes;
  cfg.seed = args.seed;
  if (!args.split_ratios.empty()) {
    if (args.split_ratios.size() != 4) {
      std::cerr << "error: --split-ratios needs exactly 4 values\n";
      return 2;
    }
    for (std::size_t i = 0; i < 4; ++i) cfg.split_ratios[i] = args.split_ratios[i];
  }
  if (const auto env = env_seed_override()) cfg.seed = *env;
  cfg.validate();

  const Dataset dataset = generate_dataset(cfg);
  write_dataset(dataset, args.out);
  int total = 0;
  for (const auto& [split, eps] : dataset.splits) {
    std::cout << split << ": " << eps.size() << " episodes\n";
    total += static_cast<int>(eps.size());
  }
  std::cout << "wrote " << total << " episodes to " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string agent = "random";
  std::string dataset_dir;
  std::string split = "all";
  std::string memory = "pis";
  int frames = 4;
  std::string out;
  int parallelism = 0;
  std::uint64_t seed = 0;
  double timeout_s = 30.0;
};

int run_eval(const EvalArgs& args) {
  Dataset dataset = load_dataset(args.dataset_dir);

  std::vector<std::string> splits;
  if (args.split == "all") {
    for (const char* name : kSplitNames) {
      if (dataset.splits.count(name) && !dataset.splits[name].empty()) {
        splits.push_back(name);
      }
    }
  } else {
    if (!dataset.splits.count(args.split)) {
      std::cerr << "error: dataset has no split named '" << args.split << "'\n";
      return 2;
    }
    splits.push_back(args.split);
  }

  std::map<std::uint64_t, WorldMap> worlds;
  for (const std::string& split : splits) {
    const std::uint64_t wseed = dataset.world_seeds.at(split);
    if (!worlds.count(wseed)) {
      worlds.emplace(wseed, generate_world(dataset.config.world, wseed));
    }
  }

  std::vector<RunItem> items;
  for (const std::string& split : splits) {
    for (const Episode& ep : dataset.splits.at(split)) {
      items.push_back(RunItem{&ep, &worlds.at(dataset.world_seeds.at(split)),
                              split});
    }
  }
  if (items.empty()) {
    std::cerr << "error: nothing to evaluate\n";
    return 2;
  }

  RunConfig cfg;
  cfg.success_threshold_m = dataset.config.synth.success_threshold_m;
  const auto kind = memory_kind_from_name(args.memory);
  if (!kind) {
    std::cerr << "error: unknown memory policy '" << args.memory << "'\n";
    return 2;
  }
  cfg.memory = MemoryPolicy::make(*kind, args.frames);
  cfg.parallelism = args.parallelism;
  cfg.seed = args.seed;
  cfg.bridge_timeout_s = args.timeout_s;
  if (const auto env = env_seed_override()) cfg.seed = *env;

  AgentFactory factory;
  if (args.agent.rfind("bridge:", 0) == 0) {
    const std::string command = args.agent.substr(7);
    if (command.empty()) {
      std::cerr << "error: bridge agent needs a command, e.g. bridge:python3 agent.py\n";
      return 2;
    }
    const double timeout = cfg.bridge_timeout_s;
    factory = [command, timeout] {
      return std::unique_ptr<Agent>(new BridgeAgent(command, timeout));
    };
  } else {
    const auto agent_kind = agent_kind_from_name(args.agent);
    if (!agent_kind) {
      std::cerr << "error: unknown agent '" << args.agent << "'\n";
      return 2;
    }
    const std::uint64_t seed = cfg.seed;
    const AgentKind k = *agent_kind;
    factory = [k, seed] { return make_builtin_agent(k, seed); };
  }

  const SuiteOutcome outcome = run_suite(factory, items, cfg);
  const nlohmann::json report = report_to_json(outcome.report);
  std::cout << report.dump(2) << "\n";
  if (!args.out.empty()) {
    write_results(outcome.results, outcome.report, args.out);
    std::cout << "wrote results to " << args.out << "\n";
  }
  return 0;
}

struct TrainArgs {
  std::string stage = "bc+grpo";
  std::string config_path;
  std::string out;
  std::uint64_t seed = 1;
  bool seed_set = false;
};

int run_train(const TrainArgs& args) {
  AppConfig app;
  if (!args.config_path.empty()) app = load_app_config(args.config_path);
  const auto stage = train_stage_from_name(args.stage);
  if (!stage) {
    std::cerr << "error: unknown stage '" << args.stage << "'\n";
    return 2;
  }
  if (args.seed_set) app.train.seed = args.seed;
  if (const auto env = env_seed_override()) app.train.seed = *env;

  const TrainResult result =
      train(app.world, app.synth, app.reward, app.train, *stage);

  if (!args.out.empty()) {
    std::filesystem::create_directories(args.out);
    write_curve(result.curve, std::filesystem::path(args.out) / "curve.jsonl");
    write_params(result.params,
                 std::filesystem::path(args.out) / "params.json");
  }
  double final_sr = 0.0;
  for (const CurvePoint& p : result.curve) {
    if (p.eval_sr) final_sr = *p.eval_sr;
  }
  std::cout << "stage " << args.stage << " finished; held-out SR " << final_sr
            << "%\n";
  return 0;
}

struct MetricsArgs {
  std::string results_path;
  std::string out;
};

int run_metrics(const MetricsArgs& args) {
  const std::vector<EpisodeResult> results = load_results(args.results_path);
  if (results.empty()) {
    std::cerr << "error: results file is empty\n";
    return 2;
  }
  const EvalReport report = aggregate(results);
  const nlohmann::json j = report_to_json(report);
  std::cout << j.dump(2) << "\n";
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << args.out << "\n";
      return 1;
    }
    out << j.dump(2) << "\n";
  }
  return 0;
}

struct MemoryDebugArgs {
  std::string policy = "pis";
  int t = 1;
  int frames = 4;
};

int run_memory_debug(const MemoryDebugArgs& args) {
  const auto kind = memory_kind_from_name(args.policy);
  if (!kind) {
    std::cerr << "error: unknown memory policy '" << args.policy << "'\n";
    return 2;
  }
  const MemoryPolicy policy = MemoryPolicy::make(*kind, args.frames);
  const std::vector<int> indices = select_history(policy, args.t);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) std::cout << ' ';
    std::cout << indices[i];
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic aerial navigation benchmark and trainer"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Synthesize a dataset");
  gen->add_option("--episodes", gen_args.episodes, "Total episode count")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_args.seed, "Generation seed");
  gen->add_option("--out", gen_args.out, "Output directory")->required();
  gen->add_option("--split-ratios", gen_args.split_ratios,
                  "train,val_seen,val_unseen,test_unseen ratios");
  gen->add_option("--config", gen_args.config_path, "Experiment config JSON");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate an agent on a dataset");
  eval->add_option("--agent", eval_args.agent,
                   "random | expert | oracle | bridge:CMD");
  eval->add_option("--dataset", eval_args.dataset_dir, "Dataset directory")
      ->required();
  eval->add_option("--split", eval_args.split,
                   "Split name or 'all'");
  eval->add_option("--memory", eval_args.memory, "pis | last | uniform | none");
  eval->add_option("--frames", eval_args.frames, "Max history frames")
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--out", eval_args.out, "Results output directory");
  eval->add_option("--parallelism", eval_args.parallelism,
                   "Worker threads (0 = cores)")
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--seed", eval_args.seed, "Agent seed");
  eval->add_option("--timeout", eval_args.timeout_s,
                   "Bridge response timeout in seconds");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the compact policy");
  train_cmd->add_option("--stage", train_args.stage, "bc | grpo | bc+grpo");
  train_cmd->add_option("--config", train_args.config_path,
                        "Experiment config JSON");
  train_cmd->add_option("--out", train_args.out, "Output directory");
  auto* seed_opt = train_cmd->add_option("--seed", train_args.seed, "Training seed");

  MetricsArgs metrics_args;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Recompute a report from a results file");
  metrics->add_option("--results", metrics_args.results_path,
                      "results.jsonl path")
      ->required();
  metrics->add_option("--out", metrics_args.out, "Report output path");

  MemoryDebugArgs mem_args;
  CLI::App* mem = app.add_subcommand("memory-debug",
                                     "Print selected history step indices");
  mem->add_option("--policy", mem_args.policy, "pis | last | uniform | none");
  mem->add_option("--t", mem_args.t, "Current step")->check(CLI::PositiveNumber);
  mem->add_option("--frames", mem_args.frames, "Max history frames")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_gen(gen_args);
    if (*eval) return run_eval(eval_args);
    if (*train_cmd) {
      train_args.seed_set = seed_opt->count() > 0;
      return run_train(train_args);
    }
    if (*metrics) return run_metrics(metrics_args);
    if (*mem) return run_memory_debug(mem_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
