#include "lexer.hpp"

#include <cctype>

namespace refinery::dsl {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::At: return "'@'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto peek = [&](size_t off = 0) -> char { return i + off < text.size() ? text[i + off] : '\0'; };
  auto advance = [&]() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto push = [&](Tok k, std::string s, Span sp) { out.push_back({k, std::move(s), sp}); };

  while (i < text.size()) {
    char c = peek();
    Span here{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        num += peek();
        advance();
      }
      push(Tok::Int, num, here);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\'')) {
        id += peek();
        advance();
      }
      push(Tok::Ident, id, here);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (two('-', '>')) { advance(); advance(); push(Tok::Arrow, "->", here); continue; }
    if (two('=', '>')) { advance(); advance(); push(Tok::FatArrow, "=>", here); continue; }
    if (two('!', '=')) { advance(); advance(); push(Tok::Ne, "!=", here); continue; }
    if (two('<', '=')) { advance(); advance(); push(Tok::Le, "<=", here); continue; }
    if (two('>', '=')) { advance(); advance(); push(Tok::Ge, ">=", here); continue; }
    if (two('&', '&')) { advance(); advance(); push(Tok::AndAnd, "&&", here); continue; }
    if (two('|', '|')) { advance(); advance(); push(Tok::OrOr, "||", here); continue; }
    if (two('.', '.')) { advance(); advance(); push(Tok::DotDot, "..", here); continue; }
    switch (c) {
      case '(': advance(); push(Tok::LParen, "(", here); continue;
      case ')': advance(); push(Tok::RParen, ")", here); continue;
      case '{': advance(); push(Tok::LBrace, "{", here); continue;
      case '}': advance(); push(Tok::RBrace, "}", here); continue;
      case '[': advance(); push(Tok::LBracket, "[", here); continue;
      case ']': advance(); push(Tok::RBracket, "]", here); continue;
      case ',': advance(); push(Tok::Comma, ",", here); continue;
      case ';': advance(); push(Tok::Semi, ";", here); continue;
      case ':': advance(); push(Tok::Colon, ":", here); continue;
      case '|': advance(); push(Tok::Pipe, "|", here); continue;
      case '=': advance(); push(Tok::Eq, "=", here); continue;
      case '<': advance(); push(Tok::Lt, "<", here); continue;
      case '>': advance(); push(Tok::Gt, ">", here); continue;
      case '+': advance(); push(Tok::Plus, "+", here); continue;
      case '-': advance(); push(Tok::Minus, "-", here); continue;
      case '*': advance(); push(Tok::Star, "*", here); continue;
      case '/': advance(); push(Tok::Slash, "/", here); continue;
      case '!': advance(); push(Tok::Bang, "!", here); continue;
      case '.': advance(); push(Tok::Dot, ".", here); continue;
      case '@': advance(); push(Tok::At, "@", here); continue;
      default: {
        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string(1, c)
                                : "\\x" + std::to_string(static_cast<unsigned char>(c));
        throw SyntaxError(here, "unexpected character '" + shown + "'", "a token");
      }
    }
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

}  // namespace refinery::dsl
