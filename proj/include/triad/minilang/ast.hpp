#pragma once

#include <memory>
#include <string>
#include <vector>

#include "triad/core/types.hpp"

namespace triad::minilang {

enum class BinOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies, Iff };
enum class UnOp { Neg, Not };
enum class Quantifier { Forall, Exists };

enum class ExprKind {
  IntLit,
  BoolLit,
  Var,
  OldVar,  // old(x): value of parameter x at method entry
  Len,
  Index,
  Unary,
  Binary,
  Quant,  // forall/exists v in lo .. hi :: body   (half-open range)
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind{};
  Int int_val = 0;
  bool bool_val = false;
  std::string name;  // Var/OldVar target, or quantifier bound variable
  BinOp bin{};
  UnOp un{};
  Quantifier quant{};
  ExprPtr a, b, c;  // Unary: a. Binary: a,b. Len: a. Index: a[b]. Quant: lo=a, hi=b, body=c.
  int line = 0, col = 0;
};

enum class StmtKind { VarDecl, Assign, IndexAssign, If, While, Assert };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  StmtKind kind{};
  std::string target;                   // VarDecl/Assign/IndexAssign
  ExprPtr index;                        // IndexAssign subscript
  ExprPtr expr;                         // RHS, condition, or assert expression
  std::vector<StmtPtr> body;            // If-then / While body
  std::vector<StmtPtr> else_body;       // If-else
  ExprPtr bound;                        // While iteration bound, evaluated at loop entry
  std::vector<ExprPtr> invariants;      // While invariants, checked during evaluation
  int line = 0, col = 0;
};

struct MiniProgram {
  FunctionSignature signature;
  std::vector<StmtPtr> body;
};

// Conjunctions of clauses; an empty list means `true`.
struct MiniSpec {
  std::vector<ExprPtr> pre;
  std::vector<ExprPtr> post;
};

// A full parsed method: signature, annotation clauses (with their original
// texts, clause per line) and body.
struct ParsedMethod {
  FunctionSignature signature;
  MiniSpec spec;
  std::vector<std::string> pre_texts;
  std::vector<std::string> post_texts;
  std::vector<StmtPtr> body;
};

}  // namespace triad::minilang
