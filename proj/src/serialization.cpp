#include "airnav/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace airnav {

using nlohmann::json;

namespace {

json state_to_json(const UAVState& s) {
  return json{{"x", s.position.x()},
              {"y", s.position.y()},
              {"heading", s.heading.degrees}};
}

UAVState state_from_json(const json& j) {
  UAVState s;
  s.position = Position(j.at("x").get<double>(), j.at("y").get<double>());
  s.heading = Heading{j.at("heading").get<double>()};
  return s;
}

json landmark_to_json(const Landmark& lm) {
  return json{{"id", lm.id},
              {"x", lm.position.x()},
              {"y", lm.position.y()},
              {"radius_m", lm.radius_m},
              {"label", lm.label}};
}

Landmark landmark_from_json(const json& j) {
  Landmark lm;
  lm.id = j.at("id").get<std::string>();
  lm.position = Position(j.at("x").get<double>(), j.at("y").get<double>());
  lm.radius_m = j.at("radius_m").get<double>();
  lm.label = j.at("label").get<std::string>();
  return lm;
}

json actions_to_json(const std::vector<Action>& actions) {
  json arr = json::array();
  for (Action a : actions) arr.push_back(action_token(a));
  return arr;
}

std::vector<Action> actions_from_json(const json& arr) {
  std::vector<Action> out;
  for (const json& t : arr) {
    const std::optional<Action> a = action_from_token(t.get<std::string>());
    if (!a) throw std::invalid_argument("bad action token in episode file");
    out.push_back(*a);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("short write to " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

}  // namespace

json episode_to_json(const Episode& episode) {
  json chunks = json::array();
  for (const ActionSequence& c : episode.expert_chunks) {
    chunks.push_back(actions_to_json(c.actions));
  }
  json nodes = json::array();
  for (const UAVState& s : episode.node_states) nodes.push_back(state_to_json(s));
  json inter = json::array();
  for (const Landmark& lm : episode.chain.intermediate) {
    inter.push_back(landmark_to_json(lm));
  }
  return json{{"id", episode.id},
              {"seed", episode.seed},
              {"world", episode.world_seed},
              {"chain",
               {{"start", state_to_json(episode.chain.start)},
                {"intermediate", std::move(inter)},
                {"target", landmark_to_json(episode.chain.target)}}},
              {"expert", actions_to_json(episode.expert)},
              {"expert_chunks", std::move(chunks)},
              {"node_states", std::move(nodes)},
              {"instruction", episode.instruction},
              {"difficulty", std::string(difficulty_name(episode.difficulty))},
              {"path_length_m", episode.path_length_m}};
}

Episode episode_from_json(const json& j, double node_threshold_m,
                          double success_threshold_m) {
  Episode ep;
  ep.id = j.at("id").get<std::string>();
  ep.seed = j.at("seed").get<std::uint64_t>();
  ep.world_seed = j.at("world").get<std::uint64_t>();
  const json& chain = j.at("chain");
  ep.chain.start = state_from_json(chain.at("start"));
  for (const json& lm : chain.at("intermediate")) {
    ep.chain.intermediate.push_back(landmark_from_json(lm));
  }
  ep.chain.target = landmark_from_json(chain.at("target"));
  ep.expert = actions_from_json(j.at("expert"));
  for (const json& c : j.at("expert_chunks")) {
    ActionSequence seq;
    seq.actions = actions_from_json(c);
    ep.expert_chunks.push_back(std::move(seq));
  }
  for (const json& s : j.at("node_states")) {
    ep.node_states.push_back(state_from_json(s));
  }
  ep.instruction = j.at("instruction").get<std::string>();
  const std::optional<Difficulty> d =
      difficulty_from_name(j.at("difficulty").get<std::string>());
  if (!d) throw std::invalid_argument("bad difficulty in episode file");
  ep.difficulty = *d;
  ep.path_length_m = j.at("path_length_m").get<double>();
  ep.node_threshold_m = node_threshold_m;
  ep.success_threshold_m = success_threshold_m;

  std::vector<Action> flattened;
  for (const ActionSequence& c : ep.expert_chunks) {
    flattened.insert(flattened.end(), c.actions.begin(), c.actions.end());
  }
  if (flattened != ep.expert) {
    throw std::invalid_argument("episode file: chunks do not flatten to expert");
  }
  return ep;
}

void GenConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("gen: episodes must be >= 1");
  double sum = 0.0;
  for (double r : split_ratios) {
    if (r < 0.0) throw std::invalid_argument("gen: negative split ratio");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("gen: split ratios must sum to 1");
  }
}

namespace {

json world_config_to_json(const WorldConfig& w) {
  return json{{"width_m", w.width_m},
              {"height_m", w.height_m},
              {"landmark_count", w.landmark_count},
              {"min_landmark_radius_m", w.min_landmark_radius_m},
              {"max_landmark_radius_m", w.max_landmark_radius_m}};
}

WorldConfig world_config_from_json(const json& j) {
  WorldConfig w;
  if (j.contains("width_m")) w.width_m = j.at("width_m").get<double>();
  if (j.contains("height_m")) w.height_m = j.at("height_m").get<double>();
  if (j.contains("landmark_count")) {
    w.landmark_count = j.at("landmark_count").get<int>();
  }
  if (j.contains("min_landmark_radius_m")) {
    w.min_landmark_radius_m = j.at("min_landmark_radius_m").get<double>();
  }
  if (j.contains("max_landmark_radius_m")) {
    w.max_landmark_radius_m = j.at("max_landmark_radius_m").get<double>();
  }
  return w;
}

json synth_config_to_json(const SynthConfig& s) {
  return json{{"d_max_m", s.d_max_m},
              {"min_landmarks", s.min_landmarks},
              {"max_landmarks", s.max_landmarks},
              {"node_threshold_m", s.node_threshold_m},
              {"success_threshold_m", s.success_threshold_m},
              {"horizon", s.horizon},
              {"max_segment_actions", s.max_segment_actions},
              {"min_start_target_m", s.min_start_target_m},
              {"max_start_target_m", s.max_start_target_m},
              {"max_detour_ratio", s.max_detour_ratio},
              {"max_sample_attempts", s.max_sample_attempts}};
}

SynthConfig synth_config_from_json(const json& j) {
  SynthConfig s;
  if (j.contains("d_max_m")) s.d_max_m = j.at("d_max_m").get<double>();
  if (j.contains("min_landmarks")) s.min_landmarks = j.at("min_landmarks").get<int>();
  if (j.contains("max_landmarks")) s.max_landmarks = j.at("max_landmarks").get<int>();
  if (j.contains("node_threshold_m")) {
    s.node_threshold_m = j.at("node_threshold_m").get<double>();
  }
  if (j.contains("success_threshold_m")) {
    s.success_threshold_m = j.at("success_threshold_m").get<double>();
  }
  if (j.contains("horizon")) s.horizon = j.at("horizon").get<int>();
  if (j.contains("max_segment_actions")) {
    s.max_segment_actions = j.at("max_segment_actions").get<int>();
  }
  if (j.contains("min_start_target_m")) {
    s.min_start_target_m = j.at("min_start_target_m").get<double>();
  }
  if (j.contains("max_start_target_m")) {
    s.max_start_target_m = j.at("max_start_target_m").get<double>();
  }
  if (j.contains("max_detour_ratio")) {
    s.max_detour_ratio = j.at("max_detour_ratio").get<double>();
  }
  if (j.contains("max_sample_attempts")) {
    s.max_sample_attempts = j.at("max_sample_attempts").get<int>();
  }
  return s;
}

constexpr std::uint64_t kSeenWorldSalt = 0x5eedULL;
constexpr std::uint64_t kValUnseenWorldSalt = 0xa11a5ULL;
constexpr std::uint64_t kTestUnseenWorldSalt = 0x7e57ULL;

}  // namespace

Dataset generate_dataset(const GenConfig& cfg) {
  cfg.validate();
  Dataset ds;
  ds.config = cfg;

  const std::uint64_t seen = mix_seed(cfg.seed, kSeenWorldSalt);
  ds.world_seeds["train"] = seen;
  ds.world_seeds["val_seen"] = seen;
  ds.world_seeds["val_unseen"] = mix_seed(cfg.seed, kValUnseenWorldSalt);
  ds.world_seeds["test_unseen"] = mix_seed(cfg.seed, kTestUnseenWorldSalt);

  std::array<int, 4> counts{};
  int assigned = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    counts[i] = static_cast<int>(cfg.episodes * cfg.split_ratios[i]);
    assigned += counts[i];
  }
  counts[0] += cfg.episodes - assigned;  // remainder goes to train

  std::map<std::uint64_t, WorldMap> worlds;
  for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
    const std::string split = kSplitNames[i];
    const std::uint64_t wseed = ds.world_seeds.at(split);
    if (worlds.find(wseed) == worlds.end()) {
      worlds.emplace(wseed, generate_world(cfg.world, wseed));
    }
    const WorldMap& world = worlds.at(wseed);

    std::vector<Episode> episodes;
    episodes.reserve(static_cast<std::size_t>(counts[i]));
    std::uint64_t attempt = 0;
    const std::uint64_t split_salt = mix_seed(cfg.seed, fnv1a64(split));
    const std::uint64_t give_up =
        static_cast<std::uint64_t>(counts[i]) * 400ULL + 4000ULL;
    while (static_cast<int>(episodes.size()) < counts[i]) {
      if (attempt > give_up) {
        throw std::runtime_error("dataset generation stalled on split " + split);
      }
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%04zu", split.c_str(), episodes.size());
      std::optional<Episode> ep = synthesize_episode(
          world, cfg.synth, mix_seed(split_salt, attempt), id);
      ++attempt;
      if (!ep) continue;
      episodes.push_back(std::move(*ep));
    }
    ds.splits[split] = std::move(episodes);
  }
  return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "episodes");

  json splits = json::object();
  for (const char* name : kSplitNames) {
    json ids = json::array();
    const auto it = dataset.splits.find(name);
    if (it != dataset.splits.end()) {
      for (const Episode& ep : it->second) ids.push_back(ep.id);
    }
    splits[name] = std::move(ids);
  }
  json world_seeds = json::object();
  for (const auto& [split, seed] : dataset.world_seeds) {
    world_seeds[split] = seed;
  }
  const json manifest{{"seed", dataset.config.seed},
                      {"episodes", dataset.config.episodes},
                      {"split_ratios", dataset.config.split_ratios},
                      {"world", world_config_to_json(dataset.config.world)},
                      {"synth", synth_config_to_json(dataset.config.synth)},
                      {"world_seeds", std::move(world_seeds)},
                      {"splits", std::move(splits)}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& [split, episodes] : dataset.splits) {
    for (const Episode& ep : episodes) {
      write_text_file(dir / "episodes" / (ep.id + ".json"),
                      episode_to_json(ep).dump(2) + "\n");
    }
  }
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  Dataset ds;
  ds.config.seed = manifest.at("seed").get<std::uint64_t>();
  ds.config.episodes = manifest.at("episodes").get<int>();
  if (manifest.contains("split_ratios")) {
    const auto ratios = manifest.at("split_ratios");
    for (std::size_t i = 0; i < 4 && i < ratios.size(); ++i) {
      ds.config.split_ratios[i] = ratios[i].get<double>();
    }
  }
  ds.config.world = world_config_from_json(manifest.at("world"));
  ds.config.synth = synth_config_from_json(manifest.at("synth"));
  for (const auto& [split, seed] : manifest.at("world_seeds").items()) {
    ds.world_seeds[split] = seed.get<std::uint64_t>();
  }
  for (const auto& [split, ids] : manifest.at("splits").items()) {
    std::vector<Episode> episodes;
    episodes.reserve(ids.size());
    for (const json& id : ids) {
      const json j = json::parse(read_text_file(
          dir / "episodes" / (id.get<std::string>() + ".json")));
      episodes.push_back(episode_from_json(j,
                                           ds.config.synth.node_threshold_m,
                                           ds.config.synth.success_threshold_m));
    }
    ds.splits[split] = std::move(episodes);
  }
  return ds;
}

json result_to_json(const EpisodeResult& r) {
  return json{{"episode_id", r.episode_id},
              {"split", r.split},
              {"difficulty", std::string(difficulty_name(r.difficulty))},
              {"ne_m", r.ne_m},
              {"success", r.success},
              {"oracle_success", r.oracle_success},
              {"spl", r.spl},
              {"stop_class", std::string(stop_class_name(r.stop_class))},
              {"cause", std::string(termination_cause_name(r.cause))},
              {"path_length_m", r.path_length_m},
              {"shortest_path_m", r.shortest_path_m},
              {"decision_steps", r.decision_steps}};
}

namespace {

json summary_to_json(const MetricSummary& s) {
  return json{{"count", s.count},
              {"NE", s.mean_ne_m},
              {"SR", s.sr_pct},
              {"OSR", s.osr_pct},
              {"SPL", s.spl_pct}};
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json by_split = json::object();
  for (const auto& [k, v] : report.by_split) by_split[k] = summary_to_json(v);
  json by_difficulty = json::object();
  for (const auto& [k, v] : report.by_difficulty) {
    by_difficulty[k] = summary_to_json(v);
  }
  return json{{"overall", summary_to_json(report.overall)},
              {"by_split", std::move(by_split)},
              {"by_difficulty", std::move(by_difficulty)}};
}

void write_results(const std::vector<EpisodeResult>& results,
                   const EvalReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string lines;
  for (const EpisodeResult& r : results) {
    lines += result_to_json(r).dump();
    lines += '\n';
  }
  write_text_file(dir / "results.jsonl", lines);
  write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
}

std::vector<EpisodeResult> load_results(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::vector<EpisodeResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    EpisodeResult r;
    r.episode_id = j.at("episode_id").get<std::string>();
    r.split = j.at("split").get<std::string>();
    const auto d = difficulty_from_name(j.at("difficulty").get<std::string>());
    if (!d) throw std::invalid_argument("bad difficulty in results file");
    r.difficulty = *d;
    r.ne_m = j.at("ne_m").get<double>();
    r.success = j.at("success").get<bool>();
    r.oracle_success = j.at("oracle_success").get<bool>();
    r.spl = j.at("spl").get<double>();
    r.path_length_m = j.at("path_length_m").get<double>();
    r.shortest_path_m = j.at("shortest_path_m").get<double>();
    r.decision_steps = j.at("decision_steps").get<int>();
    const std::string sc = j.at("stop_class").get<std::string>();
    if (sc == "correct") r.stop_class = StopClass::kCorrect;
    else if (sc == "early_stop") r.stop_class = StopClass::kEarlyStop;
    else if (sc == "missed_stop") r.stop_class = StopClass::kMissedStop;
    else throw std::invalid_argument("bad stop class in results file");
    const std::string c = j.at("cause").get<std::string>();
    if (c == "stop") r.cause = TerminationCause::kStop;
    else if (c == "max-steps") r.cause = TerminationCause::kMaxSteps;
    else if (c == "format-abort") r.cause = TerminationCause::kFormatAbort;
    else throw std::invalid_argument("bad cause in results file");
    results.push_back(std::move(r));
  }
  return results;
}

void write_curve(const std::vector<CurvePoint>& curve,
                 const std::filesystem::path& file) {
  std::string lines;
  for (const CurvePoint& p : curve) {
    json j{{"stage", p.stage}, {"update", p.update}};
    if (p.mean_reward) j["mean_reward"] = *p.mean_reward;
    if (p.mean_loss) j["mean_loss"] = *p.mean_loss;
    if (p.eval_sr) j["eval_sr"] = *p.eval_sr;
    lines += j.dump();
    lines += '\n';
  }
  write_text_file(file, lines);
}

void write_params(const PolicyParams& params,
                  const std::filesystem::path& file) {
  const json j = params.flatten();
  write_text_file(file, j.dump() + "\n");
}

PolicyParams load_params(const std::filesystem::path& file) {
  const json j = json::parse(read_text_file(file));
  if (!j.is_array()) throw std::invalid_argument("params file must be an array");
  return PolicyParams::from_flat(j.get<std::vector<double>>());
}

AppConfig parse_app_config(const json& j) {
  AppConfig cfg;
  if (j.contains("world")) cfg.world = world_config_from_json(j.at("world"));
  if (j.contains("synth")) cfg.synth = synth_config_from_json(j.at("synth"));
  if (j.contains("memory")) {
    const json& m = j.at("memory");
    MemoryKind kind = MemoryKind::kPis;
    if (m.contains("policy")) {
      const auto k = memory_kind_from_name(m.at("policy").get<std::string>());
      if (!k) throw std::invalid_argument("config: unknown memory policy");
      kind = *k;
    }
    int frames = 4;
    if (m.contains("frames")) frames = m.at("frames").get<int>();
    cfg.memory = MemoryPolicy::make(kind, frames);
  }
  if (j.contains("reward")) {
    const json& r = j.at("reward");
    if (r.contains("epsilon")) cfg.reward.epsilon = r.at("epsilon").get<double>();
    if (r.contains("tau_yaw")) cfg.reward.tau_yaw = r.at("tau_yaw").get<double>();
    if (r.contains("alpha")) cfg.reward.alpha = r.at("alpha").get<double>();
    if (r.contains("beta")) cfg.reward.beta = r.at("beta").get<double>();
    if (r.contains("gamma")) cfg.reward.gamma = r.at("gamma").get<double>();
    if (r.contains("lambda1")) cfg.reward.lambda1 = r.at("lambda1").get<double>();
    if (r.contains("lambda2")) cfg.reward.lambda2 = r.at("lambda2").get<double>();
    if (r.contains("ablation")) {
      const json& a = r.at("ablation");
      if (a.contains("subgoal")) cfg.reward.ablation.subgoal = a.at("subgoal").get<bool>();
      if (a.contains("stop")) cfg.reward.ablation.stop = a.at("stop").get<bool>();
      if (a.contains("format")) cfg.reward.ablation.format = a.at("format").get<bool>();
    }
    cfg.reward.validate();
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    if (t.contains("group_size")) cfg.train.group_size = t.at("group_size").get<int>();
    if (t.contains("learning_rate")) {
      cfg.train.learning_rate = t.at("learning_rate").get<double>();
    }
    if (t.contains("updates")) cfg.train.updates = t.at("updates").get<int>();
    if (t.contains("clip_ratio")) cfg.train.clip_ratio = t.at("clip_ratio").get<double>();
    if (t.contains("max_decision_steps")) {
      cfg.train.max_decision_steps = t.at("max_decision_steps").get<int>();
    }
    if (t.contains("seed")) cfg.train.seed = t.at("seed").get<std::uint64_t>();
    if (t.contains("temperature")) {
      cfg.train.temperature = t.at("temperature").get<double>();
    }
    if (t.contains("d_norm_m")) cfg.train.d_norm_m = t.at("d_norm_m").get<double>();
    if (t.contains("bc_epochs")) cfg.train.bc_epochs = t.at("bc_epochs").get<int>();
    if (t.contains("bc_lr")) cfg.train.bc_lr = t.at("bc_lr").get<double>();
    if (t.contains("train_episodes")) {
      cfg.train.train_episodes = t.at("train_episodes").get<int>();
    }
    if (t.contains("holdout_episodes")) {
      cfg.train.holdout_episodes = t.at("holdout_episodes").get<int>();
    }
    if (t.contains("exclude_hard")) {
      cfg.train.exclude_hard = t.at("exclude_hard").get<bool>();
    }
    if (t.contains("eval_every")) cfg.train.eval_every = t.at("eval_every").get<int>();
    cfg.train.validate();
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    if (r.contains("success_threshold_m")) {
      cfg.run.success_threshold_m = r.at("success_threshold_m").get<double>();
    }
    if (r.contains("max_decision_steps")) {
      cfg.run.max_decision_steps = r.at("max_decision_steps").get<int>();
    }
    if (r.contains("sensor_radius_m")) {
      cfg.run.sensor_radius_m = r.at("sensor_radius_m").get<double>();
    }
    if (r.contains("format_retries")) {
      cfg.run.format_retries = r.at("format_retries").get<int>();
    }
    if (r.contains("parallelism")) cfg.run.parallelism = r.at("parallelism").get<int>();
    if (r.contains("seed")) cfg.run.seed = r.at("seed").get<std::uint64_t>();
    if (r.contains("bridge_timeout_s")) {
      cfg.run.bridge_timeout_s = r.at("bridge_timeout_s").get<double>();
    }
    cfg.run.validate();
  }
  if (j.contains("gen")) {
    const json& g = j.at("gen");
    cfg.gen.world = cfg.world;
    cfg.gen.synth = cfg.synth;
    if (g.contains("episodes")) cfg.gen.episodes = g.at("episodes").get<int>();
    if (g.contains("seed")) cfg.gen.seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("split_ratios")) {
      const auto ratios = g.at("split_ratios");
      if (ratios.size() != 4) {
        throw std::invalid_argument("config: split_ratios needs 4 entries");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        cfg.gen.split_ratios[i] = ratios[i].get<double>();
      }
    }
    cfg.gen.validate();
  } else {
    cfg.gen.world = cfg.world;
    cfg.gen.synth = cfg.synth;
  }
  return cfg;
}

AppConfig load_app_config(const std::filesystem::path& file) {
  return parse_app_config(json::parse(read_text_file(file)));
}

}  // namespace airnav
