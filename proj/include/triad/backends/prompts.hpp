#pragma once

#include <map>
#include <string>

#include "triad/backends/task.hpp"

namespace triad::backends {

// Default system prompts for the live backend, keyed by task kind and
// parameterized by the verifier language name. Overridable per deployment;
// the offline backends never see them.
inline std::map<TaskKind, std::string> default_prompts(const std::string& language = "Dafny") {
  std::map<TaskKind, std::string> p;
  p[TaskKind::CodeFromAnnotations] =
      "You are an expert in " + language + ". You are given a " + language +
      " program with annotations. Replace //TOFILL with the actual " + language +
      " code so that it can be verified. Return the whole program. If a loop is needed, use "
      "while instead of for. Do not use helper functions. DO NOT modify the function signature "
      "and annotations.";
  p[TaskKind::AnnotationsFromDocstring] =
      "You are an expert in " + language +
      ". Generate the weakest preconditions and strongest postconditions for the program based "
      "on the docstring. Do not change the provided code. Exclude trivial clauses such as "
      "\"requires true\". Do not assume the input array is non-empty. Do not use self-defined "
      "functions. Do not assume input integers are non-negative unless necessary. Return only "
      "the annotations in code format starting with ``` and ending with ```. Do not return a "
      "method implementation.";
  p[TaskKind::DocstringFromAnnotations] =
      "You are an expert in " + language +
      ". Give one docstring for the given annotations. Make sure to capture all details "
      "described in the annotations.";
  p[TaskKind::DocstringFromCode] =
      "You are an expert in " + language +
      ". Give one docstring for the given code's functional behavior. Do not mention "
      "implementation details. Treat 'assert' statements at the top of the body as "
      "preconditions.";
  p[TaskKind::CodeFromDocstring] =
      "You are an expert in " + language + ". You are given a " + language +
      " program docstring. Replace //TOFILL with the actual " + language +
      " code without annotations. Return the whole program.";
  p[TaskKind::DocstringEquivalenceJudgment] =
      "Determine if two docstrings describe the exact same functional behavior of a " +
      language + " program. Make sure all details are exactly the same. Return 'Yes' or 'No'.";
  return p;
}

}  // namespace triad::backends
