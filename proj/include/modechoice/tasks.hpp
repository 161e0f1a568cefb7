#pragma once

#include <array>
#include <string>
#include <vector>

#include "modechoice/travel_mode.hpp"

namespace modechoice {

// A prediction task: how travel modes map onto task classes, which rows are
// kept, and which predictor columns are withheld. class_for == -1 filters the
// mode's rows out entirely.
struct TaskSpec {
  std::string id;
  std::array<int, kNumModes> class_for{};  // indexed by mode
  int n_classes = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> excluded_features;

  int class_of(TravelMode mode) const { return class_for[mode_index(mode)]; }
};

// Built-in tasks:
//   T1 active (walking, cycling) vs non-active (car, public transport)
//   T2 car vs all other modes
//   T3 car vs all other modes, distance_km withheld
//   T4 all four modes
//   T5 walking vs all other modes
//   T6 car vs public transport (other rows dropped)
const TaskSpec& task_by_id(const std::string& id);  // throws ConfigError when unknown
const std::vector<std::string>& task_ids();

}  // namespace modechoice
