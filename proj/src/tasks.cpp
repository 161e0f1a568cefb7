#include "modechoice/tasks.hpp"

#include <map>

#include "modechoice/errors.hpp"

namespace modechoice {

namespace {

// class_for order: walking, cycling, car, public_transport.
const std::map<std::string, TaskSpec>& registry() {
  static const std::map<std::string, TaskSpec> tasks = {
      {"T1", {"T1", {0, 0, 1, 1}, 2, {"active", "non_active"}, {}}},
      {"T2", {"T2", {1, 1, 0, 1}, 2, {"car", "other"}, {}}},
      {"T3", {"T3", {1, 1, 0, 1}, 2, {"car", "other"}, {"distance_km"}}},
      {"T4", {"T4", {0, 1, 2, 3}, 4, {"walking", "cycling", "car", "public_transport"}, {}}},
      {"T5", {"T5", {0, 1, 1, 1}, 2, {"walking", "other"}, {}}},
      {"T6", {"T6", {-1, -1, 0, 1}, 2, {"car", "public_transport"}, {}}},
  };
  return tasks;
}

}  // namespace

const TaskSpec& task_by_id(const std::string& id) {
  const auto& tasks = registry();
  auto it = tasks.find(id);
  if (it == tasks.end()) throw ConfigError("unknown task: " + id);
  return it->second;
}

const std::vector<std::string>& task_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, task] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

}  // namespace modechoice
