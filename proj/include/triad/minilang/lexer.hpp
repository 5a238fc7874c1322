#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "triad/core/types.hpp"

namespace triad::minilang {

enum class Tok {
  Ident,
  IntLit,
  KwMethod, KwReturns, KwRequires, KwEnsures, KwVar, KwIf, KwElse, KwWhile,
  KwBound, KwInvariant, KwAssert, KwForall, KwExists, KwIn, KwOld, KwLen,
  KwTrue, KwFalse, KwInt, KwArray,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, ColonColon, Assign, DotDot,
  Eq, Ne, Le, Lt, Ge, Gt, Plus, Minus, Star, Slash,
  AndAnd, OrOr, Not, Implies, Iff,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
  std::size_t off = 0;  // byte offset of the token start in the source
};

struct LexError {
  std::string message;
  int line = 1, col = 1;
};

namespace detail {
inline Tok keyword_kind(std::string_view s) {
  if (s == "method") return Tok::KwMethod;
  if (s == "returns") return Tok::KwReturns;
  if (s == "requires") return Tok::KwRequires;
  if (s == "ensures") return Tok::KwEnsures;
  if (s == "var") return Tok::KwVar;
  if (s == "if") return Tok::KwIf;
  if (s == "else") return Tok::KwElse;
  if (s == "while") return Tok::KwWhile;
  if (s == "bound") return Tok::KwBound;
  if (s == "invariant") return Tok::KwInvariant;
  if (s == "assert") return Tok::KwAssert;
  if (s == "forall") return Tok::KwForall;
  if (s == "exists") return Tok::KwExists;
  if (s == "in") return Tok::KwIn;
  if (s == "old") return Tok::KwOld;
  if (s == "len") return Tok::KwLen;
  if (s == "true") return Tok::KwTrue;
  if (s == "false") return Tok::KwFalse;
  if (s == "int") return Tok::KwInt;
  if (s == "array") return Tok::KwArray;
  return Tok::Ident;
}
}  // namespace detail

// Tokenizes MiniLang source. On bad input returns the error via `err` and a
// truncated token stream; positions are 1-based.
inline std::vector<Token> lex(std::string_view src, std::vector<LexError>& errs) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto push = [&](Tok t, std::string_view text, int l, int c) {
    out.push_back({t, std::string(text), l, c, i});
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string_view word = src.substr(i, j - i);
      push(detail::keyword_kind(word), word, tl, tc);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      push(Tok::IntLit, src.substr(i, j - i), tl, tc);
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    auto three = src.substr(i, 3);
    auto four = src.substr(i, 4);
    if (four == "<==>") { push(Tok::Iff, four, tl, tc); advance(4); continue; }
    if (three == "==>") { push(Tok::Implies, three, tl, tc); advance(3); continue; }
    if (two == "::") { push(Tok::ColonColon, two, tl, tc); advance(2); continue; }
    if (two == ":=") { push(Tok::Assign, two, tl, tc); advance(2); continue; }
    if (two == "==") { push(Tok::Eq, two, tl, tc); advance(2); continue; }
    if (two == "!=") { push(Tok::Ne, two, tl, tc); advance(2); continue; }
    if (two == "<=") { push(Tok::Le, two, tl, tc); advance(2); continue; }
    if (two == ">=") { push(Tok::Ge, two, tl, tc); advance(2); continue; }
    if (two == "..") { push(Tok::DotDot, two, tl, tc); advance(2); continue; }
    if (two == "&&") { push(Tok::AndAnd, two, tl, tc); advance(2); continue; }
    if (two == "||") { push(Tok::OrOr, two, tl, tc); advance(2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, "(", tl, tc); advance(1); continue;
      case ')': push(Tok::RParen, ")", tl, tc); advance(1); continue;
      case '{': push(Tok::LBrace, "{", tl, tc); advance(1); continue;
      case '}': push(Tok::RBrace, "}", tl, tc); advance(1); continue;
      case '[': push(Tok::LBracket, "[", tl, tc); advance(1); continue;
      case ']': push(Tok::RBracket, "]", tl, tc); advance(1); continue;
      case ',': push(Tok::Comma, ",", tl, tc); advance(1); continue;
      case ';': push(Tok::Semi, ";", tl, tc); advance(1); continue;
      case ':': push(Tok::Colon, ":", tl, tc); advance(1); continue;
      case '<': push(Tok::Lt, "<", tl, tc); advance(1); continue;
      case '>': push(Tok::Gt, ">", tl, tc); advance(1); continue;
      case '+': push(Tok::Plus, "+", tl, tc); advance(1); continue;
      case '-': push(Tok::Minus, "-", tl, tc); advance(1); continue;
      case '*': push(Tok::Star, "*", tl, tc); advance(1); continue;
      case '/': push(Tok::Slash, "/", tl, tc); advance(1); continue;
      case '!': push(Tok::Not, "!", tl, tc); advance(1); continue;
      default:
        errs.push_back({std::string("unexpected character '") + c + "'", tl, tc});
        advance(1);
        continue;
    }
  }
  out.push_back({Tok::End, "", line, col, src.size()});
  return out;
}

}  // namespace triad::minilang
