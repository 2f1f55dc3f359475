#ifndef AIRNAV_MEMORY_HPP_
#define AIRNAV_MEMORY_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airnav/observation.hpp"
#include "airnav/world.hpp"

namespace airnav {

enum class MemoryKind { kPis, kLastK, kUniformK, kNoHistory };

std::string_view memory_kind_name(MemoryKind kind);
std::optional<MemoryKind> memory_kind_from_name(std::string_view name);

struct MemoryPolicy {
  MemoryKind kind = MemoryKind::kPis;
  int max_frames = 4;

  static MemoryPolicy make(MemoryKind kind, int max_frames);
};

// Append-only per-episode frame pool, indexed by step starting at 1.
class FrameStore {
 public:
  void append(const SensorFrame& frame);
  const SensorFrame& at(int step) const;
  int size() const { return static_cast<int>(frames_.size()); }

 private:
  std::vector<SensorFrame> frames_;
};

// Offsets s_0..s_{N-1} with s_0 = 1, s_i = s_{i-1} + i: 1, 2, 4, 7, 11, ...
std::vector<int> pis_offsets(int n);

// Step indices of the historical frames to attach at step t, newest first.
// All indices lie in [1, t-1] and are distinct.
std::vector<int> select_history(const MemoryPolicy& policy, int t);

// Bundles the full observation; history frames are attached oldest first.
Observation assemble_observation(const FrameStore& store,
                                 const MemoryPolicy& policy, int t,
                                 const std::string& instruction,
                                 const UAVState& state,
                                 const std::vector<Action>& action_history);

}  // namespace airnav

#endif  // AIRNAV_MEMORY_HPP_
