#include "airnav/memory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airnav {

std::string_view memory_kind_name(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::kPis: return "pis";
    case MemoryKind::kLastK: return "last";
    case MemoryKind::kUniformK: return "uniform";
    case MemoryKind::kNoHistory: return "none";
  }
  throw std::invalid_argument("unknown memory kind");
}

std::optional<MemoryKind> memory_kind_from_name(std::string_view name) {
  if (name == "pis") return MemoryKind::kPis;
  if (name == "last") return MemoryKind::kLastK;
  if (name == "uniform") return MemoryKind::kUniformK;
  if (name == "none") return MemoryKind::kNoHistory;
  return std::nullopt;
}

MemoryPolicy MemoryPolicy::make(MemoryKind kind, int max_frames) {
  if (max_frames < 0) {
    throw std::invalid_argument("memory policy: max_frames must be >= 0");
  }
  MemoryPolicy p;
  p.kind = kind;
  p.max_frames = kind == MemoryKind::kNoHistory ? 0 : max_frames;
  return p;
}

void FrameStore::append(const SensorFrame& frame) {
  const int expected = static_cast<int>(frames_.size()) + 1;
  if (frame.step != expected) {
    throw std::invalid_argument("frame store: steps must be appended in order");
  }
  frames_.push_back(frame);
}

const SensorFrame& FrameStore::at(int step) const {
  if (step < 1 || step > size()) {
    throw std::out_of_range("frame store: no frame for step " +
                            std::to_string(step));
  }
  return frames_[static_cast<std::size_t>(step - 1)];
}

std::vector<int> pis_offsets(int n) {
  if (n < 0) throw std::invalid_argument("pis_offsets: n must be >= 0");
  std::vector<int> offsets;
  offsets.reserve(static_cast<std::size_t>(n));
  int s = 1;
  for (int i = 0; i < n; ++i) {
    if (i > 0) s += i;
    offsets.push_back(s);
  }
  return offsets;
}

std::vector<int> select_history(const MemoryPolicy& policy, int t) {
  if (t < 1) throw std::invalid_argument("select_history: t must be >= 1");
  const int n = policy.max_frames;
  std::vector<int> indices;
  if (n == 0 || t == 1 || policy.kind == MemoryKind::kNoHistory) {
    return indices;
  }
  switch (policy.kind) {
    case MemoryKind::kPis: {
      for (int s : pis_offsets(n)) {
        const int idx = t - s;
        if (idx >= 1) indices.push_back(idx);
      }
      break;
    }
    case MemoryKind::kLastK: {
      for (int s = 1; s <= n; ++s) {
        const int idx = t - s;
        if (idx >= 1) indices.push_back(idx);
      }
      break;
    }
    case MemoryKind::kUniformK: {
      // n slots evenly spaced across the full window [1, t-1]; a single slot
      // takes the most recent frame.
      if (n == 1) {
        indices.push_back(t - 1);
        break;
      }
      const double span = static_cast<double>(t - 2);
      for (int k = n - 1; k >= 0; --k) {
        const double pos = 1.0 + span * k / (n - 1);
        const int idx = static_cast<int>(std::llround(pos));
        if (indices.empty() || indices.back() != idx) indices.push_back(idx);
      }
      break;
    }
    case MemoryKind::kNoHistory:
      break;
  }
  return indices;
}

Observation assemble_observation(const FrameStore& store,
                                 const MemoryPolicy& policy, int t,
                                 const std::string& instruction,
                                 const UAVState& state,
                                 const std::vector<Action>& action_history) {
  if (store.size() < t) {
    throw std::logic_error("assemble_observation: frame store is behind step");
  }
  Observation obs;
  obs.step = t;
  obs.instruction = instruction;
  obs.state = state;
  obs.action_history = action_history;
  obs.current_frame = store.at(t);

  std::vector<int> picked = select_history(policy, t);
  std::reverse(picked.begin(), picked.end());  // oldest first
  obs.history_frames.reserve(picked.size());
  for (int idx : picked) obs.history_frames.push_back(store.at(idx));
  return obs;
}

}  // namespace airnav
