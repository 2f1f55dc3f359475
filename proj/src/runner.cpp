#include "airnav/runner.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "airnav/bridge.hpp"
#include "airnav/reward.hpp"

namespace airnav {

void RunConfig::validate() const {
  if (!(success_threshold_m > 0.0)) {
    throw std::invalid_argument("run: success threshold must be > 0");
  }
  if (max_decision_steps < 1) {
    throw std::invalid_argument("run: max_decision_steps must be >= 1");
  }
  if (!(sensor_radius_m > 0.0)) {
    throw std::invalid_argument("run: sensor radius must be > 0");
  }
  if (format_retries < 0) {
    throw std::invalid_argument("run: format_retries must be >= 0");
  }
  if (parallelism < 0) {
    throw std::invalid_argument("run: parallelism must be >= 0");
  }
  if (!(bridge_timeout_s > 0.0)) {
    throw std::invalid_argument("run: bridge timeout must be > 0");
  }
}

std::pair<TrajectoryLog, EpisodeResult> run_episode(Agent& agent,
                                                    const Episode& episode,
                                                    const WorldMap& world,
                                                    const RunConfig& cfg,
                                                    const std::string& split) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  TrajectoryLog log;
  log.episode_id = episode.id;
  log.states.push_back(episode.chain.start);
  log.cause = TerminationCause::kMaxSteps;

  agent.begin_episode(episode);
  FrameStore store;
  UAVState state = episode.chain.start;
  std::vector<Action> action_history;

  for (int t = 1; t <= cfg.max_decision_steps; ++t) {
    store.append(render_frame(world, state, t, cfg.sensor_radius_m));
    const Observation obs = [&] {
      Observation o = assemble_observation(store, cfg.memory, t,
                                           episode.instruction, state,
                                           action_history);
      o.episode_id = episode.id;
      return o;
    }();

    std::optional<ActionSequence> parsed;
    std::string raw;
    bool transport_failed = false;
    for (int attempt = 0; attempt <= cfg.format_retries; ++attempt) {
      try {
        raw = agent.decide(obs);
      } catch (const BridgeError&) {
        transport_failed = true;
        break;
      }
      parsed = parse_action_sequence(raw);
      if (parsed) break;
    }
    log.raw_outputs.push_back(raw);

    if (transport_failed || !parsed) {
      log.cause = TerminationCause::kFormatAbort;
      break;
    }

    const SequenceExecution exec = apply_sequence(state, *parsed);
    for (const UAVState& s : exec.visited) log.states.push_back(s);
    log.executed.insert(log.executed.end(), parsed->actions.begin(),
                        parsed->actions.end());
    action_history.insert(action_history.end(), parsed->actions.begin(),
                          parsed->actions.end());
    state = exec.final;

    if (exec.terminated) {
      log.cause = TerminationCause::kStop;
      break;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  log.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

  EpisodeResult result =
      score_episode(log, episode, cfg.success_threshold_m, split);
  return {std::move(log), std::move(result)};
}

SuiteOutcome run_suite(const AgentFactory& factory,
                       const std::vector<RunItem>& items,
                       const RunConfig& cfg) {
  cfg.validate();
  if (items.empty()) throw std::invalid_argument("run_suite: empty suite");
  for (const RunItem& item : items) {
    if (item.episode == nullptr || item.world == nullptr) {
      throw std::invalid_argument("run_suite: null item");
    }
  }

  SuiteOutcome outcome;
  outcome.results.resize(items.size());
  outcome.logs.resize(items.size());

  int workers = cfg.parallelism;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(items.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mu;

  auto work = [&] {
    std::unique_ptr<Agent> agent = factory();
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size() || failed.load()) return;
      try {
        auto [log, result] = run_episode(*agent, *items[i].episode,
                                         *items[i].world, cfg, items[i].split);
        outcome.logs[i] = std::move(log);
        outcome.results[i] = std::move(result);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mu);
        failure = e.what();
        failed.store(true);
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) {
    throw std::runtime_error("run_suite: episode failed: " + failure);
  }

  outcome.report = aggregate(outcome.results);
  return outcome;
}

}  // namespace airnav
