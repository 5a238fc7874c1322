#pragma once

#include <span>
#include <string>
#include <vector>

#include "triad/core/types.hpp"

namespace triad {

// Folds six per-edge results, one per check kind, into a verdict. The overall
// outcome is the plain conjunction of the six accepted flags.
inline ConsistencyVerdict combine_verdict(const std::string& instance_name,
                                          VariantLabel variant,
                                          std::span<const CheckResult> results) {
  if (results.size() != kAllCheckKinds.size())
    throw StructuralError("combine_verdict: expected 6 results, got " +
                          std::to_string(results.size()));
  ConsistencyVerdict v;
  v.instance_name = instance_name;
  v.variant = variant;
  std::array<bool, 6> seen{};
  for (const CheckResult& r : results) {
    int idx = static_cast<int>(r.kind);
    if (seen[idx])
      throw StructuralError(std::string("combine_verdict: duplicate result for ") +
                            to_string(r.kind));
    seen[idx] = true;
    v.results[idx] = r;
  }
  v.overall_accept = true;
  for (const CheckResult& r : v.results) v.overall_accept = v.overall_accept && r.accepted;
  return v;
}

struct Violation {
  std::string field;
  std::string rule;
};

// Invariant checks on an instance. Violations are data, not errors: an empty
// list means the instance is well formed.
inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  if (inst.name.empty()) out.push_back({"name", "must be non-empty"});
  if (inst.io_tests.empty())
    out.push_back({"io_tests", "at least one test is required for code equivalence"});
  for (const IOTest& t : inst.io_tests) {
    if (t.inputs.size() != inst.signature.params.size()) {
      out.push_back({"io_tests", "test arity differs from signature"});
      break;
    }
  }
  // Pre/postconditions hold single clauses; loop invariants and asserts belong
  // to the code body and may not leak into the annotation record.
  for (const std::string& p : inst.preconditions)
    if (p.find("invariant") != std::string::npos || p.find("assert") != std::string::npos)
      out.push_back({"preconditions", "loop invariants/asserts belong to code_body"});
  for (const std::string& p : inst.postconditions)
    if (p.find("invariant") != std::string::npos || p.find("assert") != std::string::npos)
      out.push_back({"postconditions", "loop invariants/asserts belong to code_body"});
  {
    std::vector<std::string> names;
    for (const Param& p : inst.signature.params) names.push_back(p.name);
    for (const Param& p : inst.signature.returns) names.push_back(p.name);
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j]) {
          out.push_back({"signature", "duplicate parameter name: " + names[i]});
          i = names.size();
          break;
        }
  }
  return out;
}

}  // namespace triad
