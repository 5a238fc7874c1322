#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "triad/minilang/ast.hpp"

namespace triad::minilang {

enum class FaultKind {
  IndexOOB,
  DivByZero,
  FuelExhausted,
  LoopBoundExceeded,
  Overflow,
  AssertFailed,
  InvariantViolated,
};

inline const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::IndexOOB: return "IndexOOB";
    case FaultKind::DivByZero: return "DivByZero";
    case FaultKind::FuelExhausted: return "FuelExhausted";
    case FaultKind::LoopBoundExceeded: return "LoopBoundExceeded";
    case FaultKind::Overflow: return "Overflow";
    case FaultKind::AssertFailed: return "AssertFailed";
    case FaultKind::InvariantViolated: return "InvariantViolated";
  }
  return "?";
}

struct RuntimeFault {
  FaultKind kind{};
  std::string detail;
  int line = 0, col = 0;
};

inline std::string render_fault(const RuntimeFault& f) {
  return std::string("fault: ") + to_string(f.kind);
}

using EvalOutcome = std::variant<std::vector<Value>, RuntimeFault>;

// Integers are mathematical within this magnitude; results beyond it fault
// rather than wrap, so golden outputs cannot depend on platform overflow.
inline constexpr Int kIntMagnitudeBound = 1'000'000'000'000'000LL;

inline constexpr long long kDefaultFuel = 1'000'000;

namespace detail {

struct EvalFault {
  RuntimeFault fault;
};

class Evaluator {
 public:
  Evaluator(long long fuel) : fuel_(fuel) {}

  std::map<std::string, Value> vars;
  std::map<std::string, Value> olds;

  Value eval(const Expr& e) {
    burn(e.line, e.col);
    switch (e.kind) {
      case ExprKind::IntLit: return checked(e.int_val, e);
      case ExprKind::BoolLit: return bool_value(e.bool_val);
      case ExprKind::Var: return lookup(vars, e.name);
      case ExprKind::OldVar: return lookup(olds, e.name);
      case ExprKind::Len: {
        const auto& xs = as_array(eval(*e.a), e);
        return static_cast<Int>(xs.size());
      }
      case ExprKind::Index: {
        const auto xs = as_array(eval(*e.a), e);
        Int i = as_int(eval(*e.b), e);
        if (i < 0 || i >= static_cast<Int>(xs.size()))
          fault(FaultKind::IndexOOB, "index " + std::to_string(i) + " on length " +
                                         std::to_string(xs.size()), e);
        return xs[static_cast<std::size_t>(i)];
      }
      case ExprKind::Unary: {
        if (e.un == UnOp::Neg) return checked(-as_int(eval(*e.a), e), e);
        return bool_value(!as_bool(eval(*e.a), e));
      }
      case ExprKind::Binary: return eval_binary(e);
      case ExprKind::Quant: return eval_quant(e);
    }
    fault(FaultKind::FuelExhausted, "bad expression node", e);
  }

  bool eval_bool(const Expr& e) { return as_bool(eval(e), e); }

  void exec(const std::vector<StmtPtr>& body) {
    for (const StmtPtr& s : body) exec_stmt(*s);
  }

 private:
  long long fuel_;

  [[noreturn]] void fault(FaultKind k, std::string detail, const Expr& e) {
    throw EvalFault{{k, std::move(detail), e.line, e.col}};
  }
  [[noreturn]] void fault(FaultKind k, std::string detail, const Stmt& s) {
    throw EvalFault{{k, std::move(detail), s.line, s.col}};
  }

  void burn(int line, int col) {
    if (--fuel_ < 0) throw EvalFault{{FaultKind::FuelExhausted, "step budget exhausted", line, col}};
  }

  // Booleans exist only transiently during evaluation; reuse Int 0/1.
  static Value bool_value(bool b) { return static_cast<Int>(b ? 1 : 0); }

  // A free variable is a structural error, not a runtime fault: it means the
  // expression was never checked against this environment's signature.
  static const Value& lookup(const std::map<std::string, Value>& env, const std::string& name) {
    auto it = env.find(name);
    if (it == env.end()) throw StructuralError("unknown identifier " + name);
    return it->second;
  }

  Int as_int(const Value& v, const Expr& e) {
    if (const Int* i = std::get_if<Int>(&v)) return *i;
    fault(FaultKind::FuelExhausted, "expected int value", e);
  }
  bool as_bool(const Value& v, const Expr& e) { return as_int(v, e) != 0; }
  std::vector<Int> as_array(const Value& v, const Expr& e) {
    if (const auto* a = std::get_if<std::vector<Int>>(&v)) return *a;
    fault(FaultKind::FuelExhausted, "expected array value", e);
  }

  Int checked(Int v, const Expr& e) {
    if (v > kIntMagnitudeBound || v < -kIntMagnitudeBound)
      fault(FaultKind::Overflow, "integer magnitude bound exceeded", e);
    return v;
  }

  Value eval_binary(const Expr& e) {
    switch (e.bin) {
      case BinOp::And: {
        if (!as_bool(eval(*e.a), e)) return bool_value(false);
        return bool_value(as_bool(eval(*e.b), e));
      }
      case BinOp::Or: {
        if (as_bool(eval(*e.a), e)) return bool_value(true);
        return bool_value(as_bool(eval(*e.b), e));
      }
      case BinOp::Implies: {
        if (!as_bool(eval(*e.a), e)) return bool_value(true);
        return bool_value(as_bool(eval(*e.b), e));
      }
      case BinOp::Iff:
        return bool_value(as_bool(eval(*e.a), e) == as_bool(eval(*e.b), e));
      default: break;
    }
    Int a = as_int(eval(*e.a), e);
    Int b = as_int(eval(*e.b), e);
    switch (e.bin) {
      case BinOp::Add: return checked(a + b, e);
      case BinOp::Sub: return checked(a - b, e);
      case BinOp::Mul: {
        __int128 p = static_cast<__int128>(a) * b;
        if (p > kIntMagnitudeBound || p < -kIntMagnitudeBound)
          fault(FaultKind::Overflow, "integer magnitude bound exceeded", e);
        return static_cast<Int>(p);
      }
      case BinOp::Div:
        if (b == 0) fault(FaultKind::DivByZero, "division by zero", e);
        return a / b;  // truncated integer division
      case BinOp::Eq: return bool_value(a == b);
      case BinOp::Ne: return bool_value(a != b);
      case BinOp::Lt: return bool_value(a < b);
      case BinOp::Le: return bool_value(a <= b);
      case BinOp::Gt: return bool_value(a > b);
      case BinOp::Ge: return bool_value(a >= b);
      default: fault(FaultKind::FuelExhausted, "bad operator", e);
    }
  }

  Value eval_quant(const Expr& e) {
    Int lo = as_int(eval(*e.a), e);
    Int hi = as_int(eval(*e.b), e);  // half-open [lo, hi)
    bool is_forall = e.quant == Quantifier::Forall;
    Value saved;
    bool had = vars.count(e.name);
    if (had) saved = vars[e.name];
    bool result = is_forall;
    for (Int k = lo; k < hi; ++k) {
      burn(e.line, e.col);
      vars[e.name] = k;
      bool v;
      try {
        v = as_bool(eval(*e.c), e);
      } catch (...) {
        if (had) vars[e.name] = saved; else vars.erase(e.name);
        throw;
      }
      if (is_forall && !v) { result = false; break; }
      if (!is_forall && v) { result = true; break; }
    }
    if (had) vars[e.name] = saved; else vars.erase(e.name);
    return bool_value(result);
  }

  void exec_stmt(const Stmt& s) {
    burn(s.line, s.col);
    switch (s.kind) {
      case StmtKind::VarDecl:
      case StmtKind::Assign:
        vars[s.target] = eval(*s.expr);
        return;
      case StmtKind::IndexAssign: {
        Int i = as_int(eval(*s.index), *s.index);
        Int v = as_int(eval(*s.expr), *s.expr);
        auto& arr = std::get<std::vector<Int>>(vars.at(s.target));
        if (i < 0 || i >= static_cast<Int>(arr.size()))
          fault(FaultKind::IndexOOB, "index " + std::to_string(i) + " on length " +
                                         std::to_string(arr.size()), s);
        arr[static_cast<std::size_t>(i)] = v;
        return;
      }
      case StmtKind::If:
        if (eval_bool(*s.expr)) exec(s.body);
        else exec(s.else_body);
        return;
      case StmtKind::While: {
        Int bound = as_int(eval(*s.bound), *s.bound);
        check_invariants(s);
        Int iters = 0;
        while (eval_bool(*s.expr)) {
          if (iters >= bound)
            fault(FaultKind::LoopBoundExceeded,
                  "loop exceeded its bound of " + std::to_string(bound), s);
          exec(s.body);
          ++iters;
          check_invariants(s);
        }
        return;
      }
      case StmtKind::Assert:
        if (!eval_bool(*s.expr)) fault(FaultKind::AssertFailed, "assertion is false", s);
        return;
    }
    fault(FaultKind::FuelExhausted, "bad statement node", s);
  }

  void check_invariants(const Stmt& s) {
    for (const ExprPtr& inv : s.invariants)
      if (!eval_bool(*inv)) fault(FaultKind::InvariantViolated, "loop invariant is false", *inv);
  }
};

}  // namespace detail

// Runs a program on literal inputs. Arity/type mismatches against the
// signature are structural errors; runtime misbehavior is a fault value.
inline EvalOutcome evaluate(const MiniProgram& prog, const std::vector<Value>& inputs,
                            long long fuel = kDefaultFuel) {
  const auto& sig = prog.signature;
  if (inputs.size() != sig.params.size())
    throw StructuralError("evaluate: expected " + std::to_string(sig.params.size()) +
                          " inputs, got " + std::to_string(inputs.size()));
  detail::Evaluator ev(fuel);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Param& p = sig.params[i];
    bool is_arr = std::holds_alternative<std::vector<Int>>(inputs[i]);
    if (is_arr != (p.type == SemType::IntArray))
      throw StructuralError("evaluate: input type mismatch for parameter " + p.name);
    auto in_bound = [](Int v) { return v <= kIntMagnitudeBound && v >= -kIntMagnitudeBound; };
    if (is_arr) {
      for (Int v : std::get<std::vector<Int>>(inputs[i]))
        if (!in_bound(v)) throw StructuralError("evaluate: input magnitude out of range");
    } else if (!in_bound(std::get<Int>(inputs[i]))) {
      throw StructuralError("evaluate: input magnitude out of range");
    }
    ev.vars[p.name] = inputs[i];
    ev.olds[p.name] = inputs[i];
  }
  for (const Param& r : sig.returns)
    ev.vars[r.name] = r.type == SemType::Int ? Value(Int{0}) : Value(std::vector<Int>{});
  try {
    ev.exec(prog.body);
  } catch (const detail::EvalFault& f) {
    return f.fault;
  }
  std::vector<Value> outs;
  for (const Param& r : sig.returns) outs.push_back(ev.vars.at(r.name));
  return outs;
}

// Evaluates a specification expression in an environment of parameter values,
// return values (when present), and entry snapshots. Faults propagate as
// values so callers can decide how undefinedness is treated.
inline std::variant<bool, RuntimeFault> eval_spec(
    const ExprPtr& e, const std::map<std::string, Value>& env,
    const std::map<std::string, Value>& olds, long long fuel = kDefaultFuel) {
  detail::Evaluator ev(fuel);
  ev.vars = env;
  ev.olds = olds;
  try {
    return ev.eval_bool(*e);
  } catch (const detail::EvalFault& f) {
    return f.fault;
  }
}

}  // namespace triad::minilang
