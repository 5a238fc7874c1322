#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "triad/minilang/ast.hpp"
#include "triad/minilang/lexer.hpp"
#include "triad/util/strings.hpp"

namespace triad::minilang {

struct ParseError {
  std::string message;
  int line = 1, col = 1;
};

// Annotation fragment: requires/ensures clauses with their source texts.
struct ParsedClauses {
  std::vector<ExprPtr> pre, post;
  std::vector<std::string> pre_texts, post_texts;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

  ParsedMethod method() {
    ParsedMethod m;
    expect(Tok::KwMethod, "expected 'method'");
    m.signature.method_name = expect(Tok::Ident, "expected method name").text;
    m.signature.params = param_list();
    expect(Tok::KwReturns, "expected 'returns'");
    m.signature.returns = param_list();
    if (m.signature.returns.empty()) fail(peek(), "at least one return value is required");
    ParsedClauses c = clauses(/*stop_at_brace=*/true);
    m.spec.pre = std::move(c.pre);
    m.spec.post = std::move(c.post);
    m.pre_texts = std::move(c.pre_texts);
    m.post_texts = std::move(c.post_texts);
    m.body = block();
    expect(Tok::End, "unexpected trailing input after method body");
    return m;
  }

  std::vector<StmtPtr> body_only() {
    std::vector<StmtPtr> out;
    while (!at(Tok::End)) out.push_back(stmt());
    return out;
  }

  ParsedClauses clauses_only() {
    ParsedClauses c = clauses(false);
    expect(Tok::End, "annotations may contain only requires/ensures clauses");
    return c;
  }

  ExprPtr expr_only() {
    ExprPtr e = expr();
    expect(Tok::End, "unexpected trailing input after expression");
    return e;
  }

  FunctionSignature signature_only() {
    FunctionSignature sig;
    expect(Tok::KwMethod, "expected 'method'");
    sig.method_name = expect(Tok::Ident, "expected method name").text;
    sig.params = param_list();
    expect(Tok::KwReturns, "expected 'returns'");
    sig.returns = param_list();
    if (sig.returns.empty()) fail(peek(), "at least one return value is required");
    expect(Tok::End, "unexpected trailing input after signature");
    return sig;
  }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok t) const { return peek().kind == t; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const Token& t, std::string msg) const {
    throw ParseError{std::move(msg), t.line, t.col};
  }
  Token expect(Tok t, const char* msg) {
    if (!at(t)) fail(peek(), std::string(msg) + " (got '" + (peek().kind == Tok::End ? "<end>" : peek().text) + "')");
    return take();
  }

  SemType type_name() {
    if (at(Tok::KwInt)) {
      take();
      return SemType::Int;
    }
    if (at(Tok::KwArray)) {
      take();
      expect(Tok::Lt, "expected '<' after 'array'");
      expect(Tok::KwInt, "expected 'int' element type");
      expect(Tok::Gt, "expected '>' closing array type");
      return SemType::IntArray;
    }
    fail(peek(), "expected type 'int' or 'array<int>'");
  }

  std::vector<Param> param_list() {
    std::vector<Param> out;
    expect(Tok::LParen, "expected '('");
    if (!at(Tok::RParen)) {
      while (true) {
        Param p;
        p.name = expect(Tok::Ident, "expected parameter name").text;
        expect(Tok::Colon, "expected ':' after parameter name");
        p.type = type_name();
        out.push_back(std::move(p));
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen, "expected ')'");
    return out;
  }

  ParsedClauses clauses(bool stop_at_brace) {
    ParsedClauses c;
    while (at(Tok::KwRequires) || at(Tok::KwEnsures)) {
      bool is_pre = at(Tok::KwRequires);
      take();
      std::size_t start = peek().off;
      ExprPtr e = expr();
      std::size_t end = peek().off;  // next token starts after the clause
      std::string text = trim(src_.substr(start, end - start));
      if (at(Tok::Semi)) take();  // optional clause separator
      if (is_pre) {
        c.pre.push_back(e);
        c.pre_texts.push_back(text);
      } else {
        c.post.push_back(e);
        c.post_texts.push_back(text);
      }
    }
    if (stop_at_brace && !at(Tok::LBrace))
      fail(peek(), "expected requires/ensures clause or '{'");
    return c;
  }

  std::vector<StmtPtr> block() {
    expect(Tok::LBrace, "expected '{'");
    std::vector<StmtPtr> out;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail(peek(), "unterminated block");
      out.push_back(stmt());
    }
    take();
    return out;
  }

  StmtPtr stmt() {
    auto s = std::make_shared<Stmt>();
    s->line = peek().line;
    s->col = peek().col;
    if (at(Tok::KwVar)) {
      take();
      s->kind = StmtKind::VarDecl;
      s->target = expect(Tok::Ident, "expected variable name").text;
      expect(Tok::Assign, "expected ':=' in declaration");
      s->expr = expr();
      expect(Tok::Semi, "expected ';'");
      return s;
    }
    if (at(Tok::KwAssert)) {
      take();
      s->kind = StmtKind::Assert;
      s->expr = expr();
      expect(Tok::Semi, "expected ';'");
      return s;
    }
    if (at(Tok::KwIf)) {
      take();
      s->kind = StmtKind::If;
      expect(Tok::LParen, "expected '(' after 'if'");
      s->expr = expr();
      expect(Tok::RParen, "expected ')'");
      s->body = block();
      if (at(Tok::KwElse)) {
        take();
        s->else_body = block();
      }
      return s;
    }
    if (at(Tok::KwWhile)) {
      take();
      s->kind = StmtKind::While;
      expect(Tok::LParen, "expected '(' after 'while'");
      s->expr = expr();
      expect(Tok::RParen, "expected ')'");
      expect(Tok::KwBound, "every loop needs an explicit 'bound' expression");
      s->bound = expr();
      while (at(Tok::KwInvariant)) {
        take();
        s->invariants.push_back(expr());
      }
      s->body = block();
      return s;
    }
    if (at(Tok::Ident)) {
      s->target = take().text;
      if (at(Tok::LBracket)) {
        take();
        s->kind = StmtKind::IndexAssign;
        s->index = expr();
        expect(Tok::RBracket, "expected ']'");
      } else {
        s->kind = StmtKind::Assign;
      }
      expect(Tok::Assign, "expected ':='");
      s->expr = expr();
      expect(Tok::Semi, "expected ';'");
      return s;
    }
    fail(peek(), "expected a statement");
  }

  std::shared_ptr<Expr> mk(ExprKind k, const Token& tok) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->line = tok.line;
    e->col = tok.col;
    return e;
  }

  ExprPtr expr() { return iff_expr(); }

  ExprPtr iff_expr() {
    ExprPtr lhs = implies_expr();
    while (at(Tok::Iff)) {
      Token t = take();
      auto e = mk(ExprKind::Binary, t);
      e->bin = BinOp::Iff;
      e->a = lhs;
      e->b = implies_expr();
      lhs = e;
    }
    return lhs;
  }

  ExprPtr implies_expr() {
    ExprPtr lhs = or_expr();
    if (at(Tok::Implies)) {  // right-associative
      Token t = take();
      auto e = mk(ExprKind::Binary, t);
      e->bin = BinOp::Implies;
      e->a = lhs;
      e->b = implies_expr();
      return e;
    }
    return lhs;
  }

  ExprPtr binchain(ExprPtr lhs, BinOp op, ExprPtr rhs, const Token& t) {
    auto e = mk(ExprKind::Binary, t);
    e->bin = op;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (at(Tok::OrOr)) {
      Token t = take();
      lhs = binchain(lhs, BinOp::Or, and_expr(), t);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = cmp_expr();
    while (at(Tok::AndAnd)) {
      Token t = take();
      lhs = binchain(lhs, BinOp::And, cmp_expr(), t);
    }
    return lhs;
  }

  ExprPtr cmp_expr() {
    ExprPtr lhs = add_expr();
    BinOp op;
    switch (peek().kind) {
      case Tok::Eq: op = BinOp::Eq; break;
      case Tok::Ne: op = BinOp::Ne; break;
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt: op = BinOp::Gt; break;
      case Tok::Ge: op = BinOp::Ge; break;
      default: return lhs;
    }
    Token t = take();
    // Comparisons do not chain; write `a <= b && b < c` instead of `a <= b < c`.
    return binchain(lhs, op, add_expr(), t);
  }

  ExprPtr add_expr() {
    ExprPtr lhs = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token t = take();
      lhs = binchain(lhs, t.kind == Tok::Plus ? BinOp::Add : BinOp::Sub, mul_expr(), t);
    }
    return lhs;
  }

  ExprPtr mul_expr() {
    ExprPtr lhs = unary_expr();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Token t = take();
      lhs = binchain(lhs, t.kind == Tok::Star ? BinOp::Mul : BinOp::Div, unary_expr(), t);
    }
    return lhs;
  }

  ExprPtr unary_expr() {
    if (at(Tok::Minus)) {
      Token t = take();
      auto e = mk(ExprKind::Unary, t);
      e->un = UnOp::Neg;
      e->a = unary_expr();
      return e;
    }
    if (at(Tok::Not)) {
      Token t = take();
      auto e = mk(ExprKind::Unary, t);
      e->un = UnOp::Not;
      e->a = unary_expr();
      return e;
    }
    return postfix_expr();
  }

  ExprPtr postfix_expr() {
    ExprPtr e = primary_expr();
    while (at(Tok::LBracket)) {
      Token t = take();
      auto idx = mk(ExprKind::Index, t);
      idx->a = e;
      idx->b = expr();
      expect(Tok::RBracket, "expected ']'");
      e = idx;
    }
    return e;
  }

  ExprPtr primary_expr() {
    const Token& t0 = peek();
    switch (t0.kind) {
      case Tok::IntLit: {
        Token t = take();
        auto e = mk(ExprKind::IntLit, t);
        try {
          e->int_val = std::stoll(t.text);
        } catch (const std::exception&) {
          fail(t, "integer literal out of range");
        }
        return e;
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        Token t = take();
        auto e = mk(ExprKind::BoolLit, t);
        e->bool_val = t.kind == Tok::KwTrue;
        return e;
      }
      case Tok::KwLen: {
        Token t = take();
        expect(Tok::LParen, "expected '(' after 'len'");
        auto e = mk(ExprKind::Len, t);
        e->a = expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::KwOld: {
        Token t = take();
        expect(Tok::LParen, "expected '(' after 'old'");
        auto e = mk(ExprKind::OldVar, t);
        e->name = expect(Tok::Ident, "old() takes a parameter name").text;
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::KwForall:
      case Tok::KwExists: {
        Token t = take();
        auto e = mk(ExprKind::Quant, t);
        e->quant =
            t.kind == Tok::KwForall ? Quantifier::Forall : Quantifier::Exists;
        e->name = expect(Tok::Ident, "expected bound variable").text;
        expect(Tok::KwIn, "expected 'in' introducing the quantifier range");
        e->a = add_expr();
        expect(Tok::DotDot, "expected '..' in quantifier range");
        e->b = add_expr();
        expect(Tok::ColonColon, "expected '::' before quantifier body");
        e->c = expr();
        return e;
      }
      case Tok::Ident: {
        Token t = take();
        auto e = mk(ExprKind::Var, t);
        e->name = t.text;
        return e;
      }
      case Tok::LParen: {
        take();
        ExprPtr e = expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      default:
        fail(t0, "expected an expression (got '" +
                     (t0.kind == Tok::End ? std::string("<end>") : t0.text) + "')");
    }
  }
};

inline Parser make_parser(std::string_view src) {
  std::vector<LexError> lex_errs;
  std::vector<Token> toks = lex(src, lex_errs);
  if (!lex_errs.empty())
    throw ParseError{lex_errs.front().message, lex_errs.front().line, lex_errs.front().col};
  return Parser(src, std::move(toks));
}

}  // namespace detail

inline ParsedMethod parse_method(std::string_view src) {
  return detail::make_parser(src).method();
}

inline std::vector<StmtPtr> parse_body(std::string_view src) {
  return detail::make_parser(src).body_only();
}

inline ParsedClauses parse_clauses(std::string_view src) {
  return detail::make_parser(src).clauses_only();
}

inline ExprPtr parse_expr(std::string_view src) {
  return detail::make_parser(src).expr_only();
}

inline FunctionSignature parse_signature(std::string_view src) {
  return detail::make_parser(src).signature_only();
}

}  // namespace triad::minilang
