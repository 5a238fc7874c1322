#pragma once

#include <optional>
#include <string>
#include <variant>

#include "triad/backends/task.hpp"
#include "triad/backends/verifier.hpp"
#include "triad/equivalence/anno_template.hpp"
#include "triad/minilang/verify.hpp"
#include "triad/util/hash.hpp"
#include "triad/util/strings.hpp"

namespace triad::equivalence {

struct EquivOutcome {
  bool accepted = false;
  std::string detail;  // which lemma / test / point failed, or adapter output
};

// Annotation equivalence: the pre pair and the post pair are checked
// independently, mirroring the two lemmas of the template. With the bundled
// verifier this is grid equivalence; with an external adapter the filled
// template is handed to the prover.
inline EquivOutcome check_anno_equiv(backends::VerifierAdapter& adapter, const Instance& inst,
                                     const std::vector<std::string>& generated_pre,
                                     const std::vector<std::string>& generated_post) {
  if (auto* mini = dynamic_cast<backends::MiniLangAdapter*>(&adapter)) {
    std::string orig_frag, gen_frag;
    for (const std::string& c : inst.preconditions) orig_frag += "requires " + c + "\n";
    for (const std::string& c : inst.postconditions) orig_frag += "ensures " + c + "\n";
    for (const std::string& c : generated_pre) gen_frag += "requires " + c + "\n";
    for (const std::string& c : generated_post) gen_frag += "ensures " + c + "\n";
    auto orig = minilang::compile_annotations(inst.signature, orig_frag);
    if (!orig.ok())
      throw StructuralError("instance annotations do not compile: " + orig.render());
    auto gen = minilang::compile_annotations(inst.signature, gen_frag);
    if (!gen.ok()) return {false, "generated annotations do not compile: " + gen.render()};

    // pre_eq: the preconditions alone must agree at every point.
    minilang::MiniSpec pre1{orig.value->pre, {}};
    minilang::MiniSpec pre2{gen.value->pre, {}};
    auto d = minilang::spec_equivalent(inst.signature, pre1, pre2, mini->grid());
    if (d)
      return {false, "pre_eq fails at " + minilang::render_outputs(d->point) + " (" +
                         d->direction + ")"};

    // post_eq: under both preconditions, the postconditions must agree.
    std::vector<minilang::ExprPtr> joint_pre = orig.value->pre;
    joint_pre.insert(joint_pre.end(), gen.value->pre.begin(), gen.value->pre.end());
    minilang::MiniSpec post1{joint_pre, orig.value->post};
    minilang::MiniSpec post2{joint_pre, gen.value->post};
    d = minilang::spec_equivalent(inst.signature, post1, post2, mini->grid());
    if (d)
      return {false, "post_eq fails at " + minilang::render_outputs(d->point) + " (" +
                         d->direction + ")"};
    return {true, ""};
  }

  AnnoEquivTemplate tmpl =
      build_anno_equiv_template(inst, generated_pre, generated_post, inst.template_skeleton);
  backends::VerifyOutcome out = adapter.verify(tmpl.text);
  switch (out.status) {
    case backends::VerifyStatus::Verified: return {true, ""};
    case backends::VerifyStatus::Rejected: return {false, out.diagnostics};
    case backends::VerifyStatus::Timeout: return {false, "Timeout"};
    case backends::VerifyStatus::Unknown: return {false, "Unknown: " + out.diagnostics};
  }
  return {false, "unreachable"};
}

// Code equivalence via the recorded I/O tests: the candidate must reproduce
// the expected output of every test, in order. A candidate runtime fault is a
// rejection, not an error.
inline EquivOutcome check_code_equiv(const Instance& inst, const std::string& candidate_body,
                                     long long fuel = minilang::kDefaultFuel) {
  if (inst.language_tag != LanguageTag::MiniLang)
    return {false, "code equivalence needs a runnable language"};
  auto compiled = minilang::compile_body(inst.signature, candidate_body);
  if (!compiled.ok()) return {false, "candidate does not compile: " + compiled.render()};
  minilang::MiniProgram prog{inst.signature, *compiled.value};
  auto mismatch = minilang::run_io_tests(prog, inst.io_tests, fuel);
  if (!mismatch) return {true, ""};
  return {false, "test " + std::to_string(mismatch->index + 1) + ": got " + mismatch->got +
                     ", want " + mismatch->want};
}

// Docstring oracles. The exact-match oracle is the strict offline default; a
// backend judge asks a model the yes/no question instead.
struct NormalizedExactMatch {};

struct BackendJudge {
  backends::Backend* backend = nullptr;
  std::string instance_name;  // used for fixture addressing
  std::uint64_t seed = 0;
};

using DocEquivOracle = std::variant<NormalizedExactMatch, BackendJudge>;

inline bool check_doc_equiv(const DocEquivOracle& oracle, const std::string& d1,
                            const std::string& d2) {
  if (d1.empty() || d2.empty()) throw StructuralError("check_doc_equiv: docstrings are required");
  if (std::holds_alternative<NormalizedExactMatch>(oracle))
    return normalize_doc(d1) == normalize_doc(d2);

  const BackendJudge& judge = std::get<BackendJudge>(oracle);
  if (!judge.backend) throw StructuralError("check_doc_equiv: judge backend missing");
  backends::GenerationTask task;
  task.kind = backends::TaskKind::DocstringEquivalenceJudgment;
  task.instance_name = judge.instance_name;
  task.context = "Docstring A: " + d1 + "\nDocstring B: " + d2;
  // A judge that answers neither yes nor no gets one retry, then the
  // comparison is rejected; garbage may never turn into an accept.
  for (int attempt = 1; attempt <= 2; ++attempt) {
    task.attempt = attempt;
    std::string answer = judge.backend->generate(
        task, derive_seed(judge.seed, judge.instance_name, "doc-judge", attempt));
    std::string norm = normalize_doc(answer);
    if (norm.rfind("yes", 0) == 0) return true;
    if (norm.rfind("no", 0) == 0) return false;
  }
  return false;
}

}  // namespace triad::equivalence
