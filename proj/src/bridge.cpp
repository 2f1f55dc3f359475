#include "airnav/bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "json.hpp"

namespace airnav {

using nlohmann::json;

namespace {

json frame_to_json(const SensorFrame& frame) {
  json visible = json::array();
  for (const FrameEntry& e : frame.visible) {
    visible.push_back({{"landmark_id", e.landmark_id},
                       {"bearing_deg", e.bearing_deg},
                       {"distance_m", e.distance_m}});
  }
  return json{{"step", frame.step},
              {"heading", frame.heading.degrees},
              {"visible", std::move(visible)}};
}

SensorFrame frame_from_json(const json& j) {
  SensorFrame frame;
  frame.step = j.at("step").get<int>();
  frame.heading = Heading{j.at("heading").get<double>()};
  for (const json& e : j.at("visible")) {
    FrameEntry entry;
    entry.landmark_id = e.at("landmark_id").get<std::string>();
    entry.bearing_deg = e.at("bearing_deg").get<double>();
    entry.distance_m = e.at("distance_m").get<double>();
    frame.visible.push_back(std::move(entry));
  }
  return frame;
}

}  // namespace

std::string encode_observe(const Observation& obs) {
  json history = json::array();
  for (const SensorFrame& f : obs.history_frames) history.push_back(frame_to_json(f));
  json actions = json::array();
  for (Action a : obs.action_history) actions.push_back(action_token(a));
  json j{{"type", "observe"},
         {"episode_id", obs.episode_id},
         {"step", obs.step},
         {"instruction", obs.instruction},
         {"state",
          {{"x", obs.state.position.x()},
           {"y", obs.state.position.y()},
           {"heading", obs.state.heading.degrees}}},
         {"action_history", std::move(actions)},
         {"current_frame", frame_to_json(obs.current_frame)},
         {"history_frames", std::move(history)}};
  return j.dump();
}

Observation decode_observe(const std::string& line) {
  const json j = json::parse(line);
  if (j.at("type").get<std::string>() != "observe") {
    throw std::invalid_argument("decode_observe: wrong envelope type");
  }
  Observation obs;
  obs.episode_id = j.at("episode_id").get<std::string>();
  obs.step = j.at("step").get<int>();
  obs.instruction = j.at("instruction").get<std::string>();
  const json& s = j.at("state");
  obs.state.position = Position(s.at("x").get<double>(), s.at("y").get<double>());
  obs.state.heading = Heading{s.at("heading").get<double>()};
  for (const json& t : j.at("action_history")) {
    const std::optional<Action> a = action_from_token(t.get<std::string>());
    if (!a) throw std::invalid_argument("decode_observe: bad action token");
    obs.action_history.push_back(*a);
  }
  obs.current_frame = frame_from_json(j.at("current_frame"));
  for (const json& f : j.at("history_frames")) {
    obs.history_frames.push_back(frame_from_json(f));
  }
  return obs;
}

std::string encode_act(const std::string& output) {
  return json{{"type", "act"}, {"output", output}}.dump();
}

std::optional<std::string> decode_act(const std::string& line) {
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("type") || !j.at("type").is_string() ||
      j.at("type").get<std::string>() != "act") {
    return std::nullopt;
  }
  if (!j.contains("output") || !j.at("output").is_string()) return std::nullopt;
  return j.at("output").get<std::string>();
}

Subprocess::Subprocess(const std::string& command) {
  // A write to a dead agent must fail with EPIPE, not kill the host.
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw BridgeError("pipe failed: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    throw BridgeError("fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
}

Subprocess::~Subprocess() {
  if (in_fd_ >= 0) close(in_fd_);
  if (out_fd_ >= 0) close(out_fd_);
  if (pid_ > 0 && !reaped_) {
    kill(pid_, SIGTERM);
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      const pid_t r = waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) return;
      usleep(10'000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
}

void Subprocess::write_line(const std::string& line) {
  std::string payload = line;
  payload.push_back('\n');
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n =
        write(in_fd_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BridgeError("write to agent failed: " +
                        std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string Subprocess::read_line(double timeout_s) {
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s);
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) throw BridgeError("agent response timed out");
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    struct pollfd pfd{};
    pfd.fd = out_fd_;
    pfd.events = POLLIN;
    const int pr = poll(&pfd, 1, static_cast<int>(remaining.count()) + 1);
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw BridgeError("poll failed: " + std::string(std::strerror(errno)));
    }
    if (pr == 0) throw BridgeError("agent response timed out");
    char chunk[4096];
    const ssize_t n = read(out_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BridgeError("read from agent failed: " +
                        std::string(std::strerror(errno)));
    }
    if (n == 0) throw BridgeError("agent closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

bool Subprocess::running() const {
  if (pid_ <= 0 || reaped_) return false;
  // kill(pid, 0) would report zombies as alive; poll the exit status instead.
  int status = 0;
  const pid_t r = waitpid(pid_, &status, WNOHANG);
  if (r == 0) return true;
  reaped_ = true;
  return false;
}

BridgeAgent::BridgeAgent(const std::string& command, double timeout_s)
    : command_(command), timeout_s_(timeout_s) {
  process_ = std::make_unique<Subprocess>(command_);
}

void BridgeAgent::begin_episode(const Episode& episode) {
  episode_id_ = episode.id;
  if (process_ == nullptr || !process_->running()) {
    process_ = std::make_unique<Subprocess>(command_);
  }
}

std::string BridgeAgent::decide(const Observation& obs) {
  Observation tagged = obs;
  tagged.episode_id = episode_id_;
  process_->write_line(encode_observe(tagged));
  const std::string reply = process_->read_line(timeout_s_);
  const std::optional<std::string> output = decode_act(reply);
  if (!output) {
    return "";  // malformed envelope: unparseable, subject to format retry
  }
  return *output;
}

}  // namespace airnav
