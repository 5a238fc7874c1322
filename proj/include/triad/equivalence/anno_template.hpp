#pragma once

#include <string>
#include <vector>

#include "triad/core/types.hpp"
#include "triad/minilang/compile.hpp"
#include "triad/util/strings.hpp"

namespace triad::equivalence {

inline constexpr const char* kPreSlot = "true // (#PRE) && ... (#PRE)";
inline constexpr const char* kPostSlot = "true // (#POST) && ... (#POST)";

// The rendered annotation-equivalence source: four predicates and two lemmas.
// pre_eq asserts the two preconditions agree everywhere; post_eq asserts the
// postconditions agree wherever both preconditions hold.
struct AnnoEquivTemplate {
  std::string text;
};

namespace detail {

inline std::string arg_decls(const FunctionSignature& sig) {
  std::string s;
  bool first = true;
  for (const std::vector<Param>* group : {&sig.params, &sig.returns})
    for (const Param& p : *group) {
      if (!first) s += ", ";
      s += p.name + ": " + to_string(p.type);
      first = false;
    }
  return s;
}

inline std::string arg_names(const FunctionSignature& sig) {
  std::string s;
  bool first = true;
  for (const std::vector<Param>* group : {&sig.params, &sig.returns})
    for (const Param& p : *group) {
      if (!first) s += ", ";
      s += p.name;
      first = false;
    }
  return s;
}

inline std::string conjunction(const std::vector<std::string>& clauses) {
  if (clauses.empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) s += " &&\n  ";
    s += "(" + clauses[i] + ")";
  }
  return s;
}

}  // namespace detail

// Renders the reusable per-example skeleton: the instance's own annotations
// fill the *_original predicates, the *_gen bodies stay as marked slots.
inline std::string render_template_skeleton(const FunctionSignature& sig,
                                            const std::vector<std::string>& pre,
                                            const std::vector<std::string>& post) {
  const std::string decls = detail::arg_decls(sig);
  const std::string names = detail::arg_names(sig);
  std::string t;
  t += "predicate pre_original(" + decls + ")\n{\n  " + detail::conjunction(pre) + "\n}\n\n";
  t += "predicate pre_gen(" + decls + ")\n{\n  " + std::string(kPreSlot) + "\n}\n\n";
  t += "lemma pre_eq(" + decls + ")\n  ensures pre_original(" + names + ") <==> pre_gen(" +
       names + ")\n{\n}\n\n";
  t += "predicate post_original(" + decls + ")\n  requires pre_original(" + names + ")\n{\n  " +
       detail::conjunction(post) + "\n}\n\n";
  t += "predicate post_gen(" + decls + ")\n  requires pre_original(" + names + ")\n{\n  " +
       std::string(kPostSlot) + "\n}\n\n";
  t += "lemma post_eq(" + decls + ")\n  requires pre_original(" + names + ")\n  requires pre_gen(" +
       names + ")\n  ensures post_original(" + names + ") <==> post_gen(" + names + ")\n{\n}\n";
  return t;
}

namespace detail {

inline void substitute_slot(std::string& text, const char* slot, const std::string& replacement,
                            const char* what) {
  std::size_t first = text.find(slot);
  if (first == std::string::npos)
    throw StructuralError(std::string("template skeleton is missing its ") + what + " slot");
  if (text.find(slot, first + 1) != std::string::npos)
    throw StructuralError(std::string("template skeleton has a duplicate ") + what + " slot");
  text.replace(first, std::string(slot).size(), replacement);
}

}  // namespace detail

// Fills the two generated-annotation slots of a skeleton. Each slot is
// single-use; an empty clause list renders as the literal `true`.
inline AnnoEquivTemplate fill_template(std::string skeleton,
                                       const std::vector<std::string>& generated_pre,
                                       const std::vector<std::string>& generated_post) {
  detail::substitute_slot(skeleton, kPreSlot, detail::conjunction(generated_pre), "(#PRE)");
  detail::substitute_slot(skeleton, kPostSlot, detail::conjunction(generated_post), "(#POST)");
  return {std::move(skeleton)};
}

// Instantiates the equivalence template for an instance. For bundled-language
// instances the generated fragments are re-validated against the signature
// (a generated precondition naming a return value, for example, cannot fill
// the slot); external-language fragments are taken as already compiled.
inline AnnoEquivTemplate build_anno_equiv_template(const Instance& inst,
                                                   const std::vector<std::string>& generated_pre,
                                                   const std::vector<std::string>& generated_post,
                                                   const std::string& stored_skeleton = "") {
  if (inst.language_tag == LanguageTag::MiniLang) {
    std::string fragment;
    for (const std::string& c : generated_pre) fragment += "requires " + c + "\n";
    for (const std::string& c : generated_post) fragment += "ensures " + c + "\n";
    auto compiled = minilang::compile_annotations(inst.signature, fragment);
    if (!compiled.ok())
      throw StructuralError("generated annotations cannot fill the template: " +
                            compiled.render());
  }
  std::string skeleton =
      !stored_skeleton.empty()
          ? stored_skeleton
          : render_template_skeleton(inst.signature, inst.preconditions, inst.postconditions);
  return fill_template(std::move(skeleton), generated_pre, generated_post);
}

}  // namespace triad::equivalence
