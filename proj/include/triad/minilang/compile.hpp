#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triad/minilang/check.hpp"
#include "triad/minilang/parser.hpp"

namespace triad::minilang {

struct Diagnostic {
  std::string message;
  int line = 1, col = 1;
};

template <typename T>
struct CompileResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }

  // Deterministic, position-bearing rendering; this text is the feedback fed
  // back into the repair loop.
  std::string render() const {
    std::string out;
    for (const Diagnostic& d : diagnostics) {
      if (!out.empty()) out += "\n";
      out += "line " + std::to_string(d.line) + ", col " + std::to_string(d.col) + ": " +
             d.message;
    }
    return out;
  }
};

namespace detail {
template <typename T, typename Fn>
CompileResult<T> guarded(Fn&& fn) {
  CompileResult<T> r;
  try {
    r.value = fn();
  } catch (const ParseError& e) {
    r.diagnostics.push_back({"parse error: " + e.message, e.line, e.col});
  } catch (const CheckError& e) {
    r.diagnostics.push_back({e.message, e.line, e.col});
  }
  return r;
}
}  // namespace detail

// Parses and type-checks a whole method.
inline CompileResult<ParsedMethod> compile_method(std::string_view text) {
  return detail::guarded<ParsedMethod>([&] {
    ParsedMethod m = parse_method(text);
    TypeChecker tc(m.signature);
    for (const ExprPtr& e : m.spec.pre) tc.check_pre(e);
    for (const ExprPtr& e : m.spec.post) tc.check_post(e);
    tc.check_body(m.body);
    return m;
  });
}

// Parses and type-checks a method body against a fixed signature.
inline CompileResult<std::vector<StmtPtr>> compile_body(const FunctionSignature& sig,
                                                        std::string_view text) {
  return detail::guarded<std::vector<StmtPtr>>([&] {
    std::vector<StmtPtr> body = parse_body(text);
    TypeChecker tc(sig);
    tc.check_body(body);
    return body;
  });
}

// Parses and type-checks an annotation fragment (requires/ensures clauses)
// against a signature, the analogue of compiling annotations with an empty
// code body.
inline CompileResult<ParsedClauses> compile_annotations(const FunctionSignature& sig,
                                                        std::string_view text) {
  return detail::guarded<ParsedClauses>([&] {
    ParsedClauses c = parse_clauses(text);
    TypeChecker tc(sig);
    for (const ExprPtr& e : c.pre) tc.check_pre(e);
    for (const ExprPtr& e : c.post) tc.check_post(e);
    return c;
  });
}

// -------- text rendering used when assembling prompts and program files ----

inline std::string render_signature(const FunctionSignature& sig) {
  auto params = [](const std::vector<Param>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ", ";
      s += ps[i].name + ": " + to_string(ps[i].type);
    }
    return s;
  };
  return "method " + sig.method_name + "(" + params(sig.params) + ") returns (" +
         params(sig.returns) + ")";
}

inline std::string render_clause_lines(const char* keyword, const std::vector<std::string>& texts) {
  std::string out;
  for (const std::string& t : texts) out += std::string("  ") + keyword + " " + t + "\n";
  return out;
}

// Assembles a complete method text from its stored components.
inline std::string assemble_method(const FunctionSignature& sig,
                                   const std::vector<std::string>& pre,
                                   const std::vector<std::string>& post,
                                   const std::string& body) {
  std::string out = render_signature(sig) + "\n";
  out += render_clause_lines("requires", pre);
  out += render_clause_lines("ensures", post);
  out += "{\n" + body + (body.empty() || body.back() == '\n' ? "" : "\n") + "}\n";
  return out;
}

}  // namespace triad::minilang
