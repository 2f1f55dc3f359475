#ifndef AIRNAV_BRIDGE_HPP_
#define AIRNAV_BRIDGE_HPP_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "airnav/agents.hpp"
#include "airnav/observation.hpp"

namespace airnav {

// Transport-level failure (timeout, broken pipe, dead process). The runner
// records it as a failed episode; it is not a format problem the agent can
// retry its way out of.
class BridgeError : public std::runtime_error {
 public:
  explicit BridgeError(const std::string& what) : std::runtime_error(what) {}
};

// Wire codec. One JSON object per line in both directions.
std::string encode_observe(const Observation& obs);
Observation decode_observe(const std::string& line);
std::string encode_act(const std::string& output);
// nullopt on a malformed envelope (wrong type, missing output).
std::optional<std::string> decode_act(const std::string& line);

// Line-oriented child process: spawns `command` through the shell, writes
// request lines to its stdin and reads response lines from its stdout.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command);
  ~Subprocess();
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void write_line(const std::string& line);
  // Blocks up to timeout_s; throws BridgeError on timeout, EOF, or error.
  std::string read_line(double timeout_s);
  // Reaps the child if it has exited; false once it is gone.
  bool running() const;

 private:
  int pid_ = -1;
  int in_fd_ = -1;   // child stdin (we write)
  int out_fd_ = -1;  // child stdout (we read)
  std::string buffer_;
  mutable bool reaped_ = false;
};

// Hosts an external agent process behind the Agent interface. A malformed
// reply envelope yields an unparseable output (the runner's format-retry
// handles it); transport failures surface as BridgeError.
class BridgeAgent : public Agent {
 public:
  BridgeAgent(const std::string& command, double timeout_s);
  void begin_episode(const Episode& episode) override;
  std::string decide(const Observation& obs) override;

 private:
  std::unique_ptr<Subprocess> process_;
  std::string command_;
  double timeout_s_;
  std::string episode_id_;
};

}  // namespace airnav

#endif  // AIRNAV_BRIDGE_HPP_
