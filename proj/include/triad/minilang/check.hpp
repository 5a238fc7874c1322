#pragma once

#include <map>
#include <string>
#include <vector>

#include "triad/minilang/ast.hpp"

namespace triad::minilang {

struct CheckError {
  std::string message;
  int line = 1, col = 1;
};

enum class Ty { Int, Bool, IntArray };

inline const char* to_string(Ty t) {
  switch (t) {
    case Ty::Int: return "int";
    case Ty::Bool: return "bool";
    case Ty::IntArray: return "array<int>";
  }
  return "?";
}

// Scope and type validation. Parameters are immutable; return values and
// locals are assignable; old() may name parameters only and is meaningful
// only in postconditions, invariants, and asserts.
class TypeChecker {
 public:
  explicit TypeChecker(const FunctionSignature& sig) : sig_(sig) {
    for (const Param& p : sig.params) vars_[p.name] = {from_sem(p.type), Mut::Param};
  }

  void check_pre(const ExprPtr& e) {
    ScopeGuard g(*this);
    require(e, Ty::Bool, /*allow_old=*/false);
  }

  void check_post(const ExprPtr& e) {
    ScopeGuard g(*this);
    add_returns();
    require(e, Ty::Bool, /*allow_old=*/true);
  }

  void check_body(const std::vector<StmtPtr>& body) {
    ScopeGuard g(*this);
    add_returns();
    for (const StmtPtr& s : body) stmt(*s);
  }

 private:
  enum class Mut { Param, Assignable, Bound };
  struct Entry {
    Ty type;
    Mut mut;
  };

  const FunctionSignature& sig_;
  std::map<std::string, Entry> vars_;

  struct ScopeGuard {
    TypeChecker& tc;
    std::map<std::string, Entry> saved;
    explicit ScopeGuard(TypeChecker& t) : tc(t), saved(t.vars_) {}
    ~ScopeGuard() { tc.vars_ = std::move(saved); }
  };

  static Ty from_sem(SemType t) { return t == SemType::Int ? Ty::Int : Ty::IntArray; }

  void add_returns() {
    for (const Param& p : sig_.returns) vars_[p.name] = {from_sem(p.type), Mut::Assignable};
  }

  [[noreturn]] static void fail(const Expr& e, std::string msg) {
    throw CheckError{std::move(msg), e.line, e.col};
  }
  [[noreturn]] static void fail(const Stmt& s, std::string msg) {
    throw CheckError{std::move(msg), s.line, s.col};
  }

  void require(const ExprPtr& e, Ty want, bool allow_old) {
    Ty got = type_of(*e, allow_old);
    if (got != want)
      fail(*e, std::string("expected ") + to_string(want) + ", got " + to_string(got));
  }

  Ty type_of(const Expr& e, bool allow_old) {
    switch (e.kind) {
      case ExprKind::IntLit: return Ty::Int;
      case ExprKind::BoolLit: return Ty::Bool;
      case ExprKind::Var: {
        auto it = vars_.find(e.name);
        if (it == vars_.end()) fail(e, "unknown identifier " + e.name);
        return it->second.type;
      }
      case ExprKind::OldVar: {
        if (!allow_old) fail(e, "old() is not allowed in preconditions");
        for (const Param& p : sig_.params)
          if (p.name == e.name) return from_sem(p.type);
        fail(e, "old() takes a parameter name, got " + e.name);
      }
      case ExprKind::Len: {
        if (type_of(*e.a, allow_old) != Ty::IntArray) fail(e, "len() needs an array");
        return Ty::Int;
      }
      case ExprKind::Index: {
        if (type_of(*e.a, allow_old) != Ty::IntArray) fail(e, "indexing needs an array");
        if (type_of(*e.b, allow_old) != Ty::Int) fail(e, "array index must be an int");
        return Ty::Int;
      }
      case ExprKind::Unary: {
        Ty want = e.un == UnOp::Neg ? Ty::Int : Ty::Bool;
        if (type_of(*e.a, allow_old) != want)
          fail(e, e.un == UnOp::Neg ? "unary '-' needs an int" : "'!' needs a bool");
        return want;
      }
      case ExprKind::Binary: {
        Ty a = type_of(*e.a, allow_old);
        Ty b = type_of(*e.b, allow_old);
        switch (e.bin) {
          case BinOp::Add:
          case BinOp::Sub:
          case BinOp::Mul:
          case BinOp::Div:
            if (a != Ty::Int || b != Ty::Int) fail(e, "arithmetic needs int operands");
            return Ty::Int;
          case BinOp::Eq:
          case BinOp::Ne:
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge:
            if (a != Ty::Int || b != Ty::Int) fail(e, "comparison needs int operands");
            return Ty::Bool;
          case BinOp::And:
          case BinOp::Or:
          case BinOp::Implies:
          case BinOp::Iff:
            if (a != Ty::Bool || b != Ty::Bool) fail(e, "logical operator needs bool operands");
            return Ty::Bool;
        }
        fail(e, "bad operator");
      }
      case ExprKind::Quant: {
        if (type_of(*e.a, allow_old) != Ty::Int || type_of(*e.b, allow_old) != Ty::Int)
          fail(e, "quantifier range must be int .. int");
        if (vars_.count(e.name)) fail(e, "quantifier variable shadows " + e.name);
        vars_[e.name] = {Ty::Int, Mut::Bound};
        Ty body = type_of(*e.c, allow_old);
        vars_.erase(e.name);
        if (body != Ty::Bool) fail(e, "quantifier body must be bool");
        return Ty::Bool;
      }
    }
    fail(e, "bad expression");
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl: {
        if (vars_.count(s.target)) fail(s, "redeclaration of " + s.target);
        Ty t = type_of(*s.expr, /*allow_old=*/true);
        if (t == Ty::Bool) fail(s, "variables hold ints or arrays, not booleans");
        vars_[s.target] = {t, Mut::Assignable};
        return;
      }
      case StmtKind::Assign: {
        auto it = vars_.find(s.target);
        if (it == vars_.end()) fail(s, "unknown identifier " + s.target);
        if (it->second.mut == Mut::Param) fail(s, "cannot assign to parameter " + s.target);
        if (it->second.mut == Mut::Bound) fail(s, "cannot assign to bound variable " + s.target);
        Ty t = type_of(*s.expr, true);
        if (t != it->second.type)
          fail(s, std::string("assignment type mismatch: ") + to_string(it->second.type) +
                      " := " + to_string(t));
        return;
      }
      case StmtKind::IndexAssign: {
        auto it = vars_.find(s.target);
        if (it == vars_.end()) fail(s, "unknown identifier " + s.target);
        if (it->second.type != Ty::IntArray) fail(s, s.target + " is not an array");
        if (it->second.mut == Mut::Param) fail(s, "cannot assign to parameter " + s.target);
        if (type_of(*s.index, true) != Ty::Int) fail(s, "array index must be an int");
        if (type_of(*s.expr, true) != Ty::Int) fail(s, "array elements are ints");
        return;
      }
      case StmtKind::If: {
        if (type_of(*s.expr, true) != Ty::Bool) fail(s, "if condition must be bool");
        {
          ScopeGuard g(*this);
          for (const StmtPtr& c : s.body) stmt(*c);
        }
        {
          ScopeGuard g(*this);
          for (const StmtPtr& c : s.else_body) stmt(*c);
        }
        return;
      }
      case StmtKind::While: {
        if (type_of(*s.expr, true) != Ty::Bool) fail(s, "while condition must be bool");
        if (type_of(*s.bound, true) != Ty::Int) fail(s, "loop bound must be an int");
        for (const ExprPtr& inv : s.invariants)
          if (type_of(*inv, true) != Ty::Bool) fail(s, "invariant must be bool");
        ScopeGuard g(*this);
        for (const StmtPtr& c : s.body) stmt(*c);
        return;
      }
      case StmtKind::Assert: {
        if (type_of(*s.expr, true) != Ty::Bool) fail(s, "assert needs a bool");
        return;
      }
    }
    fail(s, "bad statement");
  }
};

}  // namespace triad::minilang
