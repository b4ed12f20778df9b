#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mobo/objectives.hpp"
#include "mobo/search_space.hpp"

namespace mobo {

enum class Phase { init, bo };

std::string_view phase_name(Phase phase);
Phase phase_from_name(std::string_view name);

struct ArchiveEntry {
  std::size_t eval_index = 0;
  Configuration config;
  ObjectiveVector objectives;
  double elapsed_s = 0.0;
  Phase phase = Phase::init;
};

/// Append-only evaluation log. eval_index runs 1, 2, 3, ... and elapsed time
/// never decreases; append() rejects anything else.
class Archive {
 public:
  const ArchiveEntry& append(const Configuration& config, const ObjectiveVector& objectives, double elapsed_s,
                             Phase phase);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ArchiveEntry& operator[](std::size_t i) const { return entries_[i]; }
  const ArchiveEntry& back() const { return entries_.back(); }

  bool contains(std::uint64_t config_id) const { return ids_.contains(config_id); }
  std::vector<ObjectiveVector> objectives() const;
  double elapsed_s() const { return entries_.empty() ? 0.0 : entries_.back().elapsed_s; }

 private:
  std::vector<ArchiveEntry> entries_;
  std::unordered_set<std::uint64_t> ids_;
};

}  // namespace mobo
