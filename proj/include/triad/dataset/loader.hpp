#pragma once

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "triad/core/verdict.hpp"
#include "triad/equivalence/anno_template.hpp"
#include "triad/minilang/compile.hpp"
#include "triad/minilang/verify.hpp"
#include "triad/util/strings.hpp"

namespace triad::dataset {

namespace fs = std::filesystem;

inline constexpr int kManifestSchemaVersion = 1;

// Loading problems always name the file and the violated rule.
struct LoadError : StructuralError {
  using StructuralError::StructuralError;
};

struct LoadedDataset {
  std::vector<Instance> instances;  // ground truth first, then variants, per example
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in.good()) throw LoadError("missing file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Clause files: one expression per line; blank lines and // comments skipped.
inline std::vector<std::string> parse_clause_file(const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line.rfind("//", 0) == 0) continue;
    out.push_back(line);
  }
  return out;
}

inline std::vector<IOTest> parse_tests_json(const std::string& text, const fs::path& where) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw LoadError(where.string() + ": bad JSON: " + e.what());
  }
  std::vector<IOTest> tests;
  for (const auto& t : j.at("tests")) {
    IOTest io;
    for (const auto& v : t.at("inputs")) {
      if (v.is_array()) {
        std::vector<Int> xs;
        for (const auto& x : v) xs.push_back(x.get<Int>());
        io.inputs.push_back(xs);
      } else {
        io.inputs.push_back(v.get<Int>());
      }
    }
    io.expected_output = t.at("expected_output").get<std::string>();
    tests.push_back(std::move(io));
  }
  return tests;
}

inline nlohmann::json tests_to_json(const std::vector<IOTest>& tests) {
  nlohmann::json arr = nlohmann::json::array();
  for (const IOTest& t : tests) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const Value& v : t.inputs) {
      if (const Int* i = std::get_if<Int>(&v)) inputs.push_back(*i);
      else inputs.push_back(std::get<std::vector<Int>>(v));
    }
    arr.push_back({{"inputs", inputs}, {"expected_output", t.expected_output}});
  }
  return nlohmann::json{{"tests", arr}};
}

// Which files a variant directory may override. Derived collateral follows
// its source component: tests.json moves with the code, template.skel with
// the annotations.
inline std::set<std::string> allowed_overrides(VariantLabel v) {
  switch (v) {
    case VariantLabel::C1: return {"docstring.txt"};
    case VariantLabel::C2: return {"pre.spec", "post.spec", "template.skel"};
    case VariantLabel::C3: return {"pre.spec", "post.spec", "template.skel", "docstring.txt"};
    case VariantLabel::C6:
      return {"body.code", "pre.spec", "post.spec", "template.skel", "tests.json"};
    case VariantLabel::C0_GroundTruth: break;
  }
  return {};
}

inline void check_minilang_instance(const Instance& inst, const fs::path& dir) {
  auto compiled = minilang::compile_method(
      minilang::assemble_method(inst.signature, inst.preconditions, inst.postconditions,
                                inst.code_body));
  if (!compiled.ok())
    throw LoadError(dir.string() + ": assembled method does not compile: " + compiled.render());

  // Stored expected outputs must match what the instance's own code computes.
  minilang::MiniProgram prog{inst.signature, compiled.value->body};
  for (std::size_t i = 0; i < inst.io_tests.size(); ++i) {
    auto out = minilang::evaluate(prog, inst.io_tests[i].inputs);
    std::string got = std::holds_alternative<minilang::RuntimeFault>(out)
                          ? minilang::render_fault(std::get<minilang::RuntimeFault>(out))
                          : minilang::render_outputs(std::get<std::vector<Value>>(out));
    if (got != inst.io_tests[i].expected_output)
      throw LoadError(dir.string() + "/tests.json: test " + std::to_string(i + 1) +
                      ": stored expected_output '" + inst.io_tests[i].expected_output +
                      "' differs from recomputed '" + got + "'");
  }

  // Same self-consistency rule for the equivalence-template skeleton.
  std::string skel = equivalence::render_template_skeleton(inst.signature, inst.preconditions,
                                                           inst.postconditions);
  if (inst.template_skeleton != skel)
    throw LoadError(dir.string() +
                    "/template.skel: stored skeleton differs from the one derived from the "
                    "instance annotations");

  auto violations = validate_instance(inst);
  if (!violations.empty())
    throw LoadError(dir.string() + ": invariant violation: " + violations.front().field + " " +
                    violations.front().rule);
}

}  // namespace detail

// Loads one example directory: the ground-truth instance plus its adversarial
// variants, each overriding only the files its category permits.
inline void load_example(const fs::path& dir, LoadedDataset& out) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(detail::read_file(dir / "manifest.json"));
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError((dir / "manifest.json").string() + ": bad JSON: " + e.what());
  }
  if (manifest.value("schema_version", 0) != kManifestSchemaVersion)
    throw LoadError((dir / "manifest.json").string() + ": unsupported schema_version");
  std::string name = manifest.at("name").get<std::string>();
  if (name != dir.filename().string())
    throw LoadError((dir / "manifest.json").string() + ": name '" + name +
                    "' does not match directory name");
  std::string language = manifest.value("language", "minilang");

  Instance base;
  base.name = name;
  base.language_tag = language == "minilang" ? LanguageTag::MiniLang : LanguageTag::External;
  try {
    base.signature = minilang::parse_signature(manifest.at("signature").get<std::string>());
  } catch (const minilang::ParseError& e) {
    throw LoadError((dir / "manifest.json").string() + ": bad signature: " + e.message);
  }
  base.docstring = trim(detail::read_file(dir / "docstring.txt"));
  base.preconditions = detail::parse_clause_file(detail::read_file(dir / "pre.spec"));
  base.postconditions = detail::parse_clause_file(detail::read_file(dir / "post.spec"));
  base.code_body = detail::read_file(dir / "body.code");
  base.io_tests = detail::parse_tests_json(detail::read_file(dir / "tests.json"), dir / "tests.json");
  base.template_skeleton = detail::read_file(dir / "template.skel");
  base.variant = VariantLabel::C0_GroundTruth;

  if (base.language_tag == LanguageTag::MiniLang) {
    detail::check_minilang_instance(base, dir);
  } else {
    out.warnings.push_back(dir.string() + ": external language, recomputation disabled");
  }
  out.instances.push_back(base);

  for (const auto& v : manifest.value("variants", nlohmann::json::array())) {
    VariantLabel label = parse_variant_label(v.get<std::string>());
    fs::path vdir = dir / v.get<std::string>();
    if (!fs::is_directory(vdir)) throw LoadError("missing variant directory: " + vdir.string());
    std::set<std::string> allowed = detail::allowed_overrides(label);
    std::set<std::string> present;
    for (const auto& entry : fs::directory_iterator(vdir)) {
      std::string fname = entry.path().filename().string();
      if (!allowed.count(fname))
        throw LoadError(vdir.string() + ": category " + to_string(label) +
                        " may not override " + fname);
      present.insert(fname);
    }
    Instance inst = base;
    inst.name = name + "::" + to_string(label);
    inst.variant = label;
    if (present.count("docstring.txt"))
      inst.docstring = trim(detail::read_file(vdir / "docstring.txt"));
    if (present.count("pre.spec"))
      inst.preconditions = detail::parse_clause_file(detail::read_file(vdir / "pre.spec"));
    if (present.count("post.spec"))
      inst.postconditions = detail::parse_clause_file(detail::read_file(vdir / "post.spec"));
    if (present.count("body.code")) inst.code_body = detail::read_file(vdir / "body.code");
    if (present.count("tests.json"))
      inst.io_tests =
          detail::parse_tests_json(detail::read_file(vdir / "tests.json"), vdir / "tests.json");
    if (present.count("template.skel"))
      inst.template_skeleton = detail::read_file(vdir / "template.skel");
    if (inst.language_tag == LanguageTag::MiniLang) detail::check_minilang_instance(inst, vdir);
    out.instances.push_back(std::move(inst));
  }
}

// Loads every example under a root, sorted by name so directory iteration
// order never matters.
inline LoadedDataset load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw LoadError("dataset root does not exist: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  LoadedDataset out;
  std::set<std::string> names;
  for (const fs::path& dir : dirs) {
    load_example(dir, out);
  }
  for (const Instance& inst : out.instances)
    if (!names.insert(inst.name).second)
      throw LoadError("duplicate instance name: " + inst.name);
  return out;
}

// Writes a ground-truth instance as an example directory (the round-trip
// inverse of load_example for C0).
inline void write_example(const fs::path& dir, const Instance& inst,
                          const std::vector<std::string>& variants = {}) {
  fs::create_directories(dir);
  nlohmann::json manifest;
  manifest["schema_version"] = kManifestSchemaVersion;
  manifest["name"] = inst.name;
  manifest["language"] = inst.language_tag == LanguageTag::MiniLang ? "minilang" : "external";
  manifest["signature"] = minilang::render_signature(inst.signature);
  manifest["variants"] = variants;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  std::ofstream(dir / "docstring.txt") << inst.docstring << "\n";
  auto write_clauses = [&](const char* file, const std::vector<std::string>& clauses) {
    std::ofstream out(dir / file);
    for (const std::string& c : clauses) out << c << "\n";
  };
  write_clauses("pre.spec", inst.preconditions);
  write_clauses("post.spec", inst.postconditions);
  std::ofstream(dir / "body.code") << inst.code_body;
  std::ofstream(dir / "tests.json") << detail::tests_to_json(inst.io_tests).dump(2) << "\n";
  std::string skel = inst.template_skeleton.empty()
                         ? equivalence::render_template_skeleton(
                               inst.signature, inst.preconditions, inst.postconditions)
                         : inst.template_skeleton;
  std::ofstream(dir / "template.skel") << skel;
}

// Writes a variant override directory containing exactly the files that
// differ from the ground truth.
inline void write_variant(const fs::path& example_dir, const Instance& ground_truth,
                          const Instance& variant) {
  fs::path vdir = example_dir / to_string(variant.variant);
  fs::create_directories(vdir);
  if (variant.docstring != ground_truth.docstring)
    std::ofstream(vdir / "docstring.txt") << variant.docstring << "\n";
  auto write_clauses = [&](const char* file, const std::vector<std::string>& clauses) {
    std::ofstream out(vdir / file);
    for (const std::string& c : clauses) out << c << "\n";
  };
  bool annos_changed = variant.preconditions != ground_truth.preconditions ||
                       variant.postconditions != ground_truth.postconditions;
  if (variant.preconditions != ground_truth.preconditions)
    write_clauses("pre.spec", variant.preconditions);
  if (variant.postconditions != ground_truth.postconditions)
    write_clauses("post.spec", variant.postconditions);
  if (annos_changed)
    std::ofstream(vdir / "template.skel") << equivalence::render_template_skeleton(
        variant.signature, variant.preconditions, variant.postconditions);
  if (variant.code_body != ground_truth.code_body) {
    std::ofstream(vdir / "body.code") << variant.code_body;
    if (variant.io_tests != ground_truth.io_tests)
      std::ofstream(vdir / "tests.json") << detail::tests_to_json(variant.io_tests).dump(2)
                                         << "\n";
  }
}

// ---------- variant audit ----------------------------------------------------

// Checks the dataset-level contract of each adversarial category: C2/C3/C6
// still pass the soundness gate, and every variant actually mutates the
// components its category names.
inline std::vector<std::string> audit_variants(const std::vector<Instance>& instances,
                                               const minilang::InputGrid& grid) {
  std::vector<std::string> failures;
  std::map<std::string, const Instance*> ground_truth;
  for (const Instance& inst : instances)
    if (inst.variant == VariantLabel::C0_GroundTruth) ground_truth[inst.name] = &inst;

  for (const Instance& inst : instances) {
    if (inst.variant == VariantLabel::C0_GroundTruth || inst.language_tag != LanguageTag::MiniLang)
      continue;
    std::string base_name = inst.name.substr(0, inst.name.find("::"));
    auto it = ground_truth.find(base_name);
    if (it == ground_truth.end()) {
      failures.push_back(inst.name + ": no ground-truth sibling");
      continue;
    }
    const Instance& gt = *it->second;

    bool expect_doc_mutation =
        inst.variant == VariantLabel::C1 || inst.variant == VariantLabel::C3;
    bool expect_anno_mutation = inst.variant != VariantLabel::C1;
    bool expect_code_mutation = inst.variant == VariantLabel::C6;

    if (expect_doc_mutation && normalize_doc(inst.docstring) == normalize_doc(gt.docstring))
      failures.push_back(inst.name + ": docstring must differ from ground truth");
    if (!expect_doc_mutation && inst.docstring != gt.docstring)
      failures.push_back(inst.name + ": docstring may not change in this category");
    if (expect_anno_mutation && inst.preconditions == gt.preconditions &&
        inst.postconditions == gt.postconditions)
      failures.push_back(inst.name + ": annotations must differ from ground truth");
    if (expect_code_mutation && inst.code_body == gt.code_body)
      failures.push_back(inst.name + ": code must differ from ground truth");
    if (!expect_code_mutation && inst.code_body != gt.code_body)
      failures.push_back(inst.name + ": code may not change in this category");

    // Survival of the soundness gate is what makes the variant adversarial.
    auto compiled = minilang::compile_method(minilang::assemble_method(
        inst.signature, inst.preconditions, inst.postconditions, inst.code_body));
    if (!compiled.ok()) {
      failures.push_back(inst.name + ": does not compile");
      continue;
    }
    minilang::MiniProgram prog{inst.signature, compiled.value->body};
    auto cex = minilang::bounded_verify(prog, compiled.value->spec, grid);
    if (cex)
      failures.push_back(inst.name + ": fails the soundness gate at " +
                         minilang::render_outputs(cex->inputs) + " (" + cex->reason + ")");
  }
  return failures;
}

}  // namespace triad::dataset
