#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "triad/backends/task.hpp"
#include "triad/backends/verifier.hpp"
#include "triad/core/verdict.hpp"
#include "triad/equivalence/checkers.hpp"
#include "triad/util/hash.hpp"

namespace triad::engine {

struct EngineBackends {
  backends::Backend* generator = nullptr;
  backends::VerifierAdapter* verifier = nullptr;
  equivalence::DocEquivOracle doc_oracle = equivalence::NormalizedExactMatch{};
  // Compile hook for external-language instances (the bundled language
  // compiles in-process). Absent: candidates skip the repair loop.
  std::function<std::pair<bool, std::string>(const Instance&, CheckKind, const std::string&)>
      external_compile;
};

// How each edge uses its tries. CompileRepair feeds compiler diagnostics back
// and breaks on the first compiling candidate, which then faces exactly one
// equivalence check; BestOfM samples candidates independently and accepts on
// any equivalent one; the soundness edge is a single verifier call.
enum class LoopStrategy { SingleVerify, CompileRepair, BestOfM };

inline LoopStrategy loop_strategy_for(CheckKind kind) {
  switch (kind) {
    case CheckKind::AnnoSound: return LoopStrategy::SingleVerify;
    case CheckKind::AnnoComplete:
    case CheckKind::Doc2Anno:
    case CheckKind::Doc2Code: return LoopStrategy::CompileRepair;
    case CheckKind::Anno2Doc:
    case CheckKind::Code2Doc: return LoopStrategy::BestOfM;
  }
  throw StructuralError("bad check kind");
}

// ---------- context rendering ----------------------------------------------
// Context isolation is enforced here by construction: each builder sees only
// the components its edge is allowed to read, and every signature is
// anonymized before it reaches a generator.

namespace detail {

inline std::string clause_block(const Instance& inst) {
  std::string s;
  for (const std::string& c : inst.preconditions) s += "  requires " + c + "\n";
  for (const std::string& c : inst.postconditions) s += "  ensures " + c + "\n";
  return s;
}

inline std::string anon_signature(const Instance& inst) {
  return minilang::render_signature(inst.signature.anonymized());
}

}  // namespace detail

inline std::string context_code_from_annotations(const Instance& inst) {
  return detail::anon_signature(inst) + "\n" + detail::clause_block(inst) + "{\n//TOFILL\n}\n";
}

inline std::string context_annotations_from_docstring(const Instance& inst) {
  return "// specification: " + inst.docstring + "\n" + detail::anon_signature(inst) +
         "\n//TOFILL\n";
}

inline std::string context_code_from_docstring(const Instance& inst) {
  return "// specification: " + inst.docstring + "\n" + detail::anon_signature(inst) +
         "\n{\n//TOFILL\n}\n";
}

inline std::string context_docstring_from_annotations(const Instance& inst) {
  return detail::anon_signature(inst) + "\n" + detail::clause_block(inst);
}

// Preconditions ride along as assert statements so the code alone carries all
// information the docstring needs.
inline std::string context_docstring_from_code(const Instance& inst) {
  std::string body;
  for (const std::string& c : inst.preconditions) body += "  assert " + c + ";\n";
  body += inst.code_body;
  if (!body.empty() && body.back() != '\n') body += "\n";
  return detail::anon_signature(inst) + "\n{\n" + body + "}\n";
}

// Full annotated method text, the input of the soundness edge.
inline std::string assemble_annotated_method(const Instance& inst) {
  return minilang::assemble_method(inst.signature, inst.preconditions, inst.postconditions,
                                   inst.code_body);
}

// ---------- per-check execution ---------------------------------------------

namespace detail {

class TranscriptRecorder {
 public:
  TranscriptRecorder(CheckResult& result, std::size_t byte_cap)
      : result_(result), remaining_(byte_cap) {}

  void add(std::string task, std::string generated, std::string feedback) {
    result_.transcripts.push_back(
        {clip(std::move(task)), clip(std::move(generated)), clip(std::move(feedback))});
  }

 private:
  CheckResult& result_;
  std::size_t remaining_;

  std::string clip(std::string s) {
    if (s.size() <= remaining_) {
      remaining_ -= s.size();
      return s;
    }
    std::string out = s.substr(0, remaining_) + "...[truncated]";
    remaining_ = 0;
    return out;
  }
};

struct GenOutcome {
  std::optional<std::string> text;  // nullopt: backend failed permanently
};

inline GenOutcome generate_with_retry(backends::Backend& backend,
                                      const backends::GenerationTask& task, std::uint64_t seed,
                                      TranscriptRecorder& rec, const std::string& descr) {
  for (int round = 0; round < 2; ++round) {
    try {
      std::string text = backend.generate(task, splitmix64(seed + round));
      return {backends::strip_code_fences(text)};
    } catch (const backends::BackendFailure& e) {
      rec.add(descr + (round ? " (retry)" : ""), "", std::string("backend error: ") + e.what());
      if (!e.retryable) break;
    }
  }
  return {std::nullopt};
}

inline std::pair<bool, std::string> compile_candidate(const EngineBackends& b,
                                                      const Instance& inst, CheckKind kind,
                                                      const std::string& text) {
  if (inst.language_tag == LanguageTag::MiniLang) {
    if (kind == CheckKind::Doc2Anno) {
      auto r = minilang::compile_annotations(inst.signature, text);
      return {r.ok(), r.render()};
    }
    auto r = minilang::compile_body(inst.signature, text);
    return {r.ok(), r.render()};
  }
  if (b.external_compile) return b.external_compile(inst, kind, text);
  return {true, ""};  // no compiler available: single-shot generation
}

inline backends::TaskKind task_kind_for(CheckKind kind) {
  switch (kind) {
    case CheckKind::AnnoComplete: return backends::TaskKind::CodeFromAnnotations;
    case CheckKind::Doc2Anno: return backends::TaskKind::AnnotationsFromDocstring;
    case CheckKind::Anno2Doc: return backends::TaskKind::DocstringFromAnnotations;
    case CheckKind::Code2Doc: return backends::TaskKind::DocstringFromCode;
    case CheckKind::Doc2Code: return backends::TaskKind::CodeFromDocstring;
    case CheckKind::AnnoSound: break;
  }
  throw StructuralError("no generation task for anno-sound");
}

inline std::string context_for(const Instance& inst, CheckKind kind) {
  switch (kind) {
    case CheckKind::AnnoComplete: return context_code_from_annotations(inst);
    case CheckKind::Doc2Anno: return context_annotations_from_docstring(inst);
    case CheckKind::Anno2Doc: return context_docstring_from_annotations(inst);
    case CheckKind::Code2Doc: return context_docstring_from_code(inst);
    case CheckKind::Doc2Code: return context_code_from_docstring(inst);
    case CheckKind::AnnoSound: break;
  }
  throw StructuralError("no generation context for anno-sound");
}

// Splits a generated annotation fragment into pre/post clause texts. Bundled
// instances go through the parser; external fragments split on keywords.
inline std::pair<std::vector<std::string>, std::vector<std::string>> split_annotation_clauses(
    const Instance& inst, const std::string& text) {
  if (inst.language_tag == LanguageTag::MiniLang) {
    auto parsed = minilang::parse_clauses(text);  // already compiled in the loop
    return {parsed.pre_texts, parsed.post_texts};
  }
  std::vector<std::string> pre, post;
  for (std::string line : split_lines(text)) {
    std::string t = trim(line);
    if (!t.empty() && t.back() == ';') t.pop_back();
    if (t.rfind("requires ", 0) == 0) pre.push_back(trim(t.substr(9)));
    else if (t.rfind("ensures ", 0) == 0) post.push_back(trim(t.substr(8)));
  }
  return {pre, post};
}

}  // namespace detail

// One repetition of one directed edge. `rep` tags the seed stream so that
// amplified repetitions are independent yet reproducible.
inline CheckResult run_check_once(const Instance& inst, CheckKind kind, const EngineConfig& cfg,
                                  const EngineBackends& b, int rep = 1) {
  cfg.validate();
  CheckResult res;
  res.kind = kind;
  detail::TranscriptRecorder rec(res, cfg.transcript_byte_cap);
  const std::string rep_tag = "rep " + std::to_string(rep) + " ";

  // anno-sound: a single verifier call, no generation and no tries.
  if (kind == CheckKind::AnnoSound) {
    if (!b.verifier) throw StructuralError("engine: verifier adapter is required");
    std::string source = assemble_annotated_method(inst);
    backends::VerifyOutcome out;
    try {
      out = b.verifier->verify(source);
    } catch (const backends::BackendFailure& e) {
      rec.add(rep_tag + "anno-sound verify", source, std::string("backend error: ") + e.what());
      res.failure_reason = FailureReason::BackendError;
      return res;
    }
    res.attempts_used = 1;
    rec.add(rep_tag + "anno-sound verify", source,
            std::string(backends::to_string(out.status)) +
                (out.diagnostics.empty() ? "" : ": " + out.diagnostics));
    if (out.status == backends::VerifyStatus::Verified) {
      res.accepted = true;
    } else if (out.status == backends::VerifyStatus::Timeout) {
      res.failure_reason = FailureReason::Timeout;
    } else {
      // Unknown counts as a rejection; the transcript keeps the distinction.
      res.failure_reason = FailureReason::VerifierRejected;
    }
    return res;
  }

  if (!b.generator) throw StructuralError("engine: generator backend is required");
  backends::GenerationTask task;
  task.kind = detail::task_kind_for(kind);
  task.instance_name = inst.name;
  task.context = detail::context_for(inst, kind);

  if (loop_strategy_for(kind) == LoopStrategy::BestOfM) {
    // Independent candidates; any equivalent docstring accepts.
    for (int attempt = 1; attempt <= cfg.m; ++attempt) {
      task.attempt = attempt;
      std::uint64_t seed = derive_seed(
          cfg.seed, inst.name, std::string(to_string(kind)) + "/" + std::to_string(attempt), rep);
      // The transcript's task descriptor carries the rendered prompt, so
      // context isolation is checkable from the record alone.
      std::string descr = rep_tag + to_string(kind) + " attempt " + std::to_string(attempt) +
                          "\n" + task.context;
      auto gen = detail::generate_with_retry(*b.generator, task, seed, rec, descr);
      if (!gen.text) {
        res.attempts_used = attempt;
        res.failure_reason = FailureReason::BackendError;
        return res;
      }
      res.attempts_used = attempt;
      bool equal = equivalence::check_doc_equiv(b.doc_oracle, inst.docstring, *gen.text);
      rec.add(descr, *gen.text, equal ? "docstrings equivalent" : "docstrings differ");
      if (equal) {
        res.accepted = true;
        return res;
      }
    }
    res.failure_reason = FailureReason::EquivalenceFailed;
    return res;
  }

  // Compile-repair: generate, compile, feed diagnostics back; the loop breaks
  // on the first compiling candidate and equivalence is checked exactly once.
  std::optional<std::string> candidate;
  for (int attempt = 1; attempt <= cfg.m; ++attempt) {
    task.attempt = attempt;
    std::uint64_t seed = derive_seed(
        cfg.seed, inst.name, std::string(to_string(kind)) + "/" + std::to_string(attempt), rep);
    std::string descr = rep_tag + to_string(kind) + " attempt " + std::to_string(attempt) +
                        "\n" + task.context;
    auto gen = detail::generate_with_retry(*b.generator, task, seed, rec, descr);
    if (!gen.text) {
      res.attempts_used = attempt;
      res.failure_reason = FailureReason::BackendError;
      return res;
    }
    res.attempts_used = attempt;
    auto [ok, diagnostics] = detail::compile_candidate(b, inst, kind, *gen.text);
    rec.add(descr, *gen.text, ok ? "compiles" : diagnostics);
    if (ok) {
      candidate = *gen.text;
      break;
    }
    task.feedback_history.push_back({*gen.text, diagnostics});
  }
  if (!candidate) {
    res.failure_reason = FailureReason::CompileFailed;
    return res;
  }

  if (kind == CheckKind::Doc2Anno) {
    if (!b.verifier) throw StructuralError("engine: verifier adapter is required");
    auto [gen_pre, gen_post] = detail::split_annotation_clauses(inst, *candidate);
    equivalence::EquivOutcome out =
        equivalence::check_anno_equiv(*b.verifier, inst, gen_pre, gen_post);
    rec.add(rep_tag + "doc2anno equivalence", *candidate,
            out.accepted ? "annotations equivalent" : out.detail);
    res.accepted = out.accepted;
    if (!out.accepted)
      res.failure_reason = out.detail == "Timeout" ? FailureReason::Timeout
                                                   : FailureReason::EquivalenceFailed;
    return res;
  }

  // anno-complete and doc2code end in the I/O-test comparison.
  equivalence::EquivOutcome out = equivalence::check_code_equiv(inst, *candidate);
  rec.add(rep_tag + to_string(kind) + " equivalence", *candidate,
          out.accepted ? "code equivalent on all tests" : out.detail);
  res.accepted = out.accepted;
  if (!out.accepted) res.failure_reason = FailureReason::EquivalenceFailed;
  return res;
}

// k independent repetitions; one success passes the check, transcripts of all
// executed repetitions are concatenated.
inline CheckResult run_check_amplified(const Instance& inst, CheckKind kind,
                                       const EngineConfig& cfg, const EngineBackends& b) {
  cfg.validate();
  CheckResult agg;
  agg.kind = kind;
  for (int rep = 1; rep <= cfg.k; ++rep) {
    CheckResult r = run_check_once(inst, kind, cfg, b, rep);
    agg.attempts_used += r.attempts_used;
    for (Transcript& t : r.transcripts) agg.transcripts.push_back(std::move(t));
    agg.failure_reason = r.failure_reason;
    if (r.accepted) {
      agg.accepted = true;
      agg.failure_reason.reset();
      break;  // any success passes; later repetitions are never run
    }
  }
  return agg;
}

// The full six-edge consistency check. The soundness gate runs first; the
// five reconstruction edges follow, and the verdict is their conjunction.
inline ConsistencyVerdict run_all(const Instance& inst, const EngineConfig& cfg,
                                  const EngineBackends& b) {
  auto violations = validate_instance(inst);
  if (!violations.empty())
    throw StructuralError("instance " + inst.name + " is invalid: " + violations.front().field +
                          " " + violations.front().rule);
  std::vector<CheckResult> results;
  for (CheckKind kind : kAllCheckKinds)
    results.push_back(run_check_amplified(inst, kind, cfg, b));
  return combine_verdict(inst.name, inst.variant, results);
}

// Dataset-level driver: instances in parallel, deterministic output order.
inline std::vector<ConsistencyVerdict> run_dataset(const std::vector<Instance>& instances,
                                                   const EngineConfig& cfg,
                                                   const EngineBackends& b, int jobs = 1) {
  if (jobs < 1) throw StructuralError("run_dataset: jobs must be >= 1");
  std::vector<ConsistencyVerdict> verdicts(instances.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(instances.size());
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      try {
        verdicts[i] = run_all(instances[i], cfg, b);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (!errors[i].empty())
      throw StructuralError("instance " + instances[i].name + ": " + errors[i]);
  return verdicts;
}

}  // namespace triad::engine
