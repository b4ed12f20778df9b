#include "mobo/archive.hpp"

#include <stdexcept>
#include <string>

namespace mobo {

std::string_view phase_name(Phase phase) { return phase == Phase::init ? "init" : "bo"; }

Phase phase_from_name(std::string_view name) {
  if (name == "init") return Phase::init;
  if (name == "bo") return Phase::bo;
  throw std::invalid_argument("unknown phase: " + std::string(name));
}

const ArchiveEntry& Archive::append(const Configuration& config, const ObjectiveVector& objectives,
                                    double elapsed_s, Phase phase) {
  if (elapsed_s < this->elapsed_s()) {
    throw std::invalid_argument("archive elapsed time must be nondecreasing");
  }
  entries_.push_back({entries_.size() + 1, config, objectives, elapsed_s, phase});
  ids_.insert(config.id());
  return entries_.back();
}

std::vector<ObjectiveVector> Archive::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.objectives);
  return out;
}

}  // namespace mobo
