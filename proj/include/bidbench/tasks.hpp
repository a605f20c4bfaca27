#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bidbench/error.hpp"
#include "bidbench/scenario.hpp"

namespace bidbench {

enum class Task { kTask1, kTask2A, kTask2B, kTask3 };

inline std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::kTask1: return "task1";
    case Task::kTask2A: return "task2a";
    case Task::kTask2B: return "task2b";
    case Task::kTask3: return "task3";
  }
  return "task1";
}

inline Task parse_task(std::string_view s) {
  if (s == "task1") return Task::kTask1;
  if (s == "task2a") return Task::kTask2A;
  if (s == "task2b") return Task::kTask2B;
  if (s == "task3") return Task::kTask3;
  throw InvalidArgument("unknown task: " + std::string(s));
}

// Target names reserved for non-component files.
inline constexpr std::string_view kCleanName = "clean";
inline constexpr std::string_view kRegionName = "region";

/// Components, default policy and mixing order of one task.
struct TaskDefinition {
  Task task = Task::kTask1;
  std::vector<ComponentSpec> components;
  SelectionPolicy policy{{1.0}};

  [[nodiscard]] int size() const noexcept { return static_cast<int>(components.size()); }

  [[nodiscard]] const ComponentSpec& component(int index) const { return components.at(index - 1); }

  [[nodiscard]] int index_of(std::string_view name) const {
    for (const auto& c : components)
      if (c.name == name) return c.index;
    throw InvalidArgument("unknown component: " + std::string(name));
  }

  [[nodiscard]] int index_of(ComponentKind kind) const noexcept {
    for (const auto& c : components)
      if (c.kind == kind) return c.index;
    return 0;
  }

  [[nodiscard]] bool has_clean_target() const noexcept { return task != Task::kTask1; }
};

// Task I inclusion probability for N = 2..8.
inline double task1_probability(int n) {
  static constexpr double kProbs[] = {0.9, 0.8, 0.7, 0.6, 0.5, 0.5, 0.5};
  if (n < 2 || n > 8) throw InvalidArgument("task1: no default probability for N outside [2, 8]");
  return kProbs[n - 2];
}

inline TaskDefinition make_task(Task task, const std::vector<std::string>& task1_names = {}) {
  TaskDefinition def;
  def.task = task;
  auto add = [&def](std::string name, ComponentKind kind, double p) {
    const int index = static_cast<int>(def.components.size()) + 1;
    def.components.push_back({index, std::move(name), kind, {}, p});
  };
  switch (task) {
    case Task::kTask1: {
      const int n = static_cast<int>(task1_names.size());
      const double p = task1_probability(n);
      for (const auto& name : task1_names) add(name, ComponentKind::kImageDomain, p);
      break;
    }
    case Task::kTask2A:
      add("rain_streak", ComponentKind::kRainStreak, 1.0);
      add("snow", ComponentKind::kSnow, 0.5);
      add("haze", ComponentKind::kHaze, 0.5);
      add("raindrop", ComponentKind::kRaindrop, 0.5);
      break;
    case Task::kTask2B:
      add("rain_streak", ComponentKind::kRainStreak, 0.6);
      add("snow", ComponentKind::kSnow, 0.5);
      add("raindrop", ComponentKind::kRaindrop, 0.5);
      break;
    case Task::kTask3:
      add("shadow", ComponentKind::kShadow, 0.6);
      add("reflection", ComponentKind::kReflection, 0.5);
      add("watermark", ComponentKind::kWatermark, 0.5);
      break;
  }
  for (const auto& c : def.components) {
    if (c.name == kCleanName || c.name == kRegionName || c.name.empty()) {
      throw InvalidArgument("component name is reserved or empty: '" + c.name + "'");
    }
    for (const auto& other : def.components)
      if (&other != &c && other.name == c.name) throw InvalidArgument("duplicate component name: " + c.name);
  }
  std::vector<double> probs;
  for (const auto& c : def.components) probs.push_back(c.selection_prob);
  // Mixing order is index order for every task: streak -> snow -> haze ->
  // raindrop, shadow -> reflection -> watermark; Task I is order-free.
  def.policy = SelectionPolicy(std::move(probs));
  return def;
}

// Replace the inclusion probabilities, keeping the mixing order.
inline void override_probabilities(TaskDefinition& def, const std::vector<double>& probs) {
  if (static_cast<int>(probs.size()) != def.size()) {
    throw InvalidArgument("probability override has wrong length");
  }
  def.policy = SelectionPolicy(probs, def.policy.mixing_order());
  for (int i = 0; i < def.size(); ++i) def.components[i].selection_prob = probs[i];
}

}  // namespace bidbench
