#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "refinery/diagnostics.hpp"

namespace refinery::dsl {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Pipe,
  Arrow,    // ->
  FatArrow, // =>
  Eq,       // =
  Ne,       // !=
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  AndAnd,
  OrOr,
  Bang,
  Dot,
  DotDot,
  At,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

/// Tokenizes arbitrary bytes; throws SyntaxError on unknown characters.
/// Comments run from `--` to end of line.
std::vector<Token> lex(std::string_view text);

const char* tok_name(Tok t);

}  // namespace refinery::dsl
