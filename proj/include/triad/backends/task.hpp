#pragma once

#include <string>
#include <utility>
#include <vector>

#include "triad/core/types.hpp"
#include "triad/util/strings.hpp"

namespace triad::backends {

enum class TaskKind {
  CodeFromAnnotations,
  AnnotationsFromDocstring,
  DocstringFromAnnotations,
  DocstringFromCode,
  CodeFromDocstring,
  DocstringEquivalenceJudgment,
};

inline const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::CodeFromAnnotations: return "code_from_annotations";
    case TaskKind::AnnotationsFromDocstring: return "annotations_from_docstring";
    case TaskKind::DocstringFromAnnotations: return "docstring_from_annotations";
    case TaskKind::DocstringFromCode: return "docstring_from_code";
    case TaskKind::CodeFromDocstring: return "code_from_docstring";
    case TaskKind::DocstringEquivalenceJudgment: return "docstring_judgment";
  }
  return "?";
}

// One reconstruction request. The context carries only the source components
// the task kind permits (a code-from-docstring context never contains
// annotations or the original body); tasks hold no session state, so
// consecutive calls share no memory.
struct GenerationTask {
  TaskKind kind{};
  std::string instance_name;
  std::string context;
  // (prior candidate, diagnostics) pairs from failed compile attempts.
  std::vector<std::pair<std::string, std::string>> feedback_history;
  int attempt = 1;  // 1-based
};

// Transport/backing failure, distinct from a rejected check.
struct BackendFailure : std::runtime_error {
  bool retryable;
  explicit BackendFailure(const std::string& msg, bool retryable_ = false)
      : std::runtime_error(msg), retryable(retryable_) {}
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // Produces one candidate text. Deterministic backends depend only on the
  // task and the attempt seed.
  virtual std::string generate(const GenerationTask& task, std::uint64_t attempt_seed) = 0;
};

// Pulls the first fenced code block out of a reply, if any; live models wrap
// code in markdown fences, scripted fixtures do not.
inline std::string strip_code_fences(const std::string& text) {
  std::size_t open = text.find("```");
  if (open == std::string::npos) return text;
  std::size_t line_end = text.find('\n', open);
  if (line_end == std::string::npos) return text;
  std::size_t close = text.find("```", line_end + 1);
  if (close == std::string::npos) return trim(text.substr(line_end + 1));
  return trim(text.substr(line_end + 1, close - line_end - 1));
}

}  // namespace triad::backends
