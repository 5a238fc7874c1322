#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace triad {

// Raised on malformed input that violates a contract (duplicate check kinds,
// unknown identifiers, bad configuration). Distinct from domain outcomes such
// as rejected checks or counterexamples, which are ordinary return values.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Int = long long;

// A literal value: an integer or an integer array.
using Value = std::variant<Int, std::vector<Int>>;

enum class SemType { Int, IntArray };

inline const char* to_string(SemType t) {
  return t == SemType::Int ? "int" : "array<int>";
}

struct Param {
  std::string name;
  SemType type = SemType::Int;
  bool operator==(const Param&) const = default;
};

struct FunctionSignature {
  std::string method_name;
  std::vector<Param> params;
  std::vector<Param> returns;

  bool operator==(const FunctionSignature&) const = default;

  // Rendering with the method name replaced by a generic identifier, used in
  // every generation context so descriptive names leak no information.
  FunctionSignature anonymized() const {
    FunctionSignature s = *this;
    s.method_name = "foo";
    return s;
  }
};

struct IOTest {
  std::vector<Value> inputs;
  std::string expected_output;
  bool operator==(const IOTest&) const = default;
};

enum class VariantLabel { C0_GroundTruth, C1, C2, C3, C6 };

inline const char* to_string(VariantLabel v) {
  switch (v) {
    case VariantLabel::C0_GroundTruth: return "C0";
    case VariantLabel::C1: return "C1";
    case VariantLabel::C2: return "C2";
    case VariantLabel::C3: return "C3";
    case VariantLabel::C6: return "C6";
  }
  return "?";
}

// C4/C5/C7 are rejected outright: triples in those categories cannot survive
// the soundness gate (or are degenerate), so no dataset may carry them.
inline VariantLabel parse_variant_label(const std::string& s) {
  if (s == "C0" || s == "ground-truth" || s == "ground_truth") return VariantLabel::C0_GroundTruth;
  if (s == "C1") return VariantLabel::C1;
  if (s == "C2") return VariantLabel::C2;
  if (s == "C3") return VariantLabel::C3;
  if (s == "C6") return VariantLabel::C6;
  throw StructuralError("unsupported variant category: " + s);
}

enum class LanguageTag { MiniLang, External };

enum class CheckKind : int {
  AnnoSound = 0,
  AnnoComplete = 1,
  Doc2Anno = 2,
  Anno2Doc = 3,
  Code2Doc = 4,
  Doc2Code = 5,
};

inline constexpr std::array<CheckKind, 6> kAllCheckKinds = {
    CheckKind::AnnoSound,  CheckKind::AnnoComplete, CheckKind::Doc2Anno,
    CheckKind::Anno2Doc,   CheckKind::Code2Doc,     CheckKind::Doc2Code,
};

inline const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::AnnoSound: return "anno-sound";
    case CheckKind::AnnoComplete: return "anno-complete";
    case CheckKind::Doc2Anno: return "doc2anno";
    case CheckKind::Anno2Doc: return "anno2doc";
    case CheckKind::Code2Doc: return "code2doc";
    case CheckKind::Doc2Code: return "doc2code";
  }
  return "?";
}

inline CheckKind parse_check_kind(const std::string& s) {
  for (CheckKind k : kAllCheckKinds)
    if (s == to_string(k)) return k;
  throw StructuralError("unknown check kind: " + s);
}

struct Instance {
  std::string name;
  std::string docstring;
  std::vector<std::string> preconditions;   // annotation-expression text, one clause each
  std::vector<std::string> postconditions;  // likewise
  std::string code_body;  // statements only; loop invariants and asserts live here
  FunctionSignature signature;
  std::vector<IOTest> io_tests;
  VariantLabel variant = VariantLabel::C0_GroundTruth;
  LanguageTag language_tag = LanguageTag::MiniLang;
  // Annotation-equivalence skeleton with the *_gen slots unfilled. Empty for
  // bundled-language instances means "derive from the annotations".
  std::string template_skeleton;

  bool operator==(const Instance&) const = default;
};

struct EngineConfig {
  int m = 3;  // feedback tries per generation loop
  int k = 1;  // independent repetitions; any success passes the check
  std::uint64_t seed = 0;
  std::chrono::milliseconds per_call_timeout{30000};
  std::string backend_id = "scripted";
  std::string verifier_id = "minilang";
  std::size_t transcript_byte_cap = 1 << 16;  // per check; oldest entries keep room

  void validate() const {
    if (m < 1) throw StructuralError("config: m must be >= 1");
    if (k < 1) throw StructuralError("config: k must be >= 1");
    if (per_call_timeout.count() <= 0) throw StructuralError("config: timeout must be positive");
  }
};

enum class FailureReason {
  GenerationFailed,
  CompileFailed,
  EquivalenceFailed,
  VerifierRejected,
  Timeout,
  BackendError,
};

inline const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::GenerationFailed: return "GenerationFailed";
    case FailureReason::CompileFailed: return "CompileFailed";
    case FailureReason::EquivalenceFailed: return "EquivalenceFailed";
    case FailureReason::VerifierRejected: return "VerifierRejected";
    case FailureReason::Timeout: return "Timeout";
    case FailureReason::BackendError: return "BackendError";
  }
  return "?";
}

inline FailureReason parse_failure_reason(const std::string& s) {
  for (FailureReason r :
       {FailureReason::GenerationFailed, FailureReason::CompileFailed,
        FailureReason::EquivalenceFailed, FailureReason::VerifierRejected,
        FailureReason::Timeout, FailureReason::BackendError})
    if (s == to_string(r)) return r;
  throw StructuralError("unknown failure reason: " + s);
}

// One generation attempt (or verifier call) as recorded in a check result.
struct Transcript {
  std::string task;       // compact task descriptor, e.g. "doc2anno attempt 2"
  std::string generated;  // candidate text (possibly truncated to the byte cap)
  std::string feedback;   // compiler/verifier/equivalence diagnostics
  bool operator==(const Transcript&) const = default;
};

struct CheckResult {
  CheckKind kind = CheckKind::AnnoSound;
  bool accepted = false;
  int attempts_used = 0;
  std::vector<Transcript> transcripts;
  std::optional<FailureReason> failure_reason;

  bool operator==(const CheckResult&) const = default;
};

struct ConsistencyVerdict {
  std::string instance_name;
  VariantLabel variant = VariantLabel::C0_GroundTruth;
  std::array<CheckResult, 6> results{};  // indexed by CheckKind
  bool overall_accept = false;

  const CheckResult& result(CheckKind k) const { return results[static_cast<int>(k)]; }
};

}  // namespace triad
