#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace refinery {

// Source position, 1-based. line == 0 means "no location" (synthesized nodes).
struct Span {
  int line = 0;
  int col = 0;

  bool known() const { return line > 0; }
  std::string str() const {
    if (!known()) return "<internal>";
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

struct Error : std::runtime_error {
  Span span;
  Error(std::string msg, Span s = {}) : std::runtime_error(std::move(msg)), span(s) {}
};

struct SyntaxError : Error {
  std::string expected;
  SyntaxError(Span s, std::string what, std::string exp = "")
      : Error(std::move(what), s), expected(std::move(exp)) {}
};

struct TypeError : Error {
  using Error::Error;
};

struct UnknownName : Error {
  using Error::Error;
};

struct ClauseMismatch : Error {
  using Error::Error;
};

struct NotNormalForm : Error {
  using Error::Error;
};

struct DivisionByZero : Error {
  DivisionByZero(Span s = {}) : Error("division by zero", s) {}
};

struct InfiniteDomain : Error {
  InfiniteDomain(std::string what, Span s = {}) : Error(std::move(what), s) {}
};

// Term rejection: carries the path to the offending node ("root.2.1") and why.
struct IllFormedTerm : Error {
  std::string path;
  IllFormedTerm(std::string path_, std::string reason)
      : Error("ill-formed term at " + path_ + ": " + reason), path(std::move(path_)) {}
};

// Report-style validation output (wellformed_code, elaboration).
struct ValidationReport {
  struct Item {
    std::string where;
    std::string message;
    Span span;
  };
  std::vector<Item> problems;

  bool ok() const { return problems.empty(); }
  void add(std::string where, std::string message, Span s = {}) {
    problems.push_back({std::move(where), std::move(message), s});
  }
  std::string str() const {
    std::string out;
    for (auto& p : problems) {
      out += p.where + ": " + p.message;
      if (p.span.known()) out += " (" + p.span.str() + ")";
      out += "\n";
    }
    return out;
  }
};

}  // namespace refinery
