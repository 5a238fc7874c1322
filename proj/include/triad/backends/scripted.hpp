#pragma once

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "triad/backends/task.hpp"

namespace triad::backends {

inline constexpr int kFixtureSchemaVersion = 1;

// Replays canned generations from a fixture file: one ordered list of
// candidate texts per (instance, task kind). Attempt n returns the n-th
// entry; running past the list is a backend error, not a rejection.
class ScriptedBackend : public Backend {
 public:
  static ScriptedBackend from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != kFixtureSchemaVersion)
      throw StructuralError("fixture file: unsupported schema_version");
    ScriptedBackend b;
    for (const auto& [inst, kinds] : j.at("instances").items())
      for (const auto& [kind, entries] : kinds.items()) {
        auto& list = b.fixtures_[inst][kind];
        for (const auto& e : entries) list.push_back(e.get<std::string>());
      }
    return b;
  }

  static ScriptedBackend from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw StructuralError("cannot open fixture file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(nlohmann::json::parse(ss.str()));
  }

  void add(const std::string& instance, TaskKind kind, std::string text) {
    fixtures_[instance][to_string(kind)].push_back(std::move(text));
  }

  std::string name() const override { return "scripted"; }

  std::string generate(const GenerationTask& task, std::uint64_t) override {
    auto inst = fixtures_.find(task.instance_name);
    if (inst == fixtures_.end())
      throw BackendFailure("fixture miss: no entries for instance " + task.instance_name);
    auto kind = inst->second.find(to_string(task.kind));
    if (kind == inst->second.end())
      throw BackendFailure("fixture miss: no " + std::string(to_string(task.kind)) +
                           " entries for " + task.instance_name);
    if (task.attempt < 1 || static_cast<std::size_t>(task.attempt) > kind->second.size())
      throw BackendFailure("fixture exhausted: " + task.instance_name + "/" +
                           to_string(task.kind) + " attempt " + std::to_string(task.attempt));
    return kind->second[static_cast<std::size_t>(task.attempt - 1)];
  }

 private:
  std::map<std::string, std::map<std::string, std::vector<std::string>>> fixtures_;
};

}  // namespace triad::backends
