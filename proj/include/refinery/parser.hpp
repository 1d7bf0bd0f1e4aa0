#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refinery/expr.hpp"

namespace refinery::dsl {

// Surface syntax tree for .rfn files. Names are unresolved; every node
// carries its source span. Elaboration (elaborate.hpp) turns this into core
// objects.

struct SurfaceDomain {
  enum class Kind { Named, Unit, Bool, Int, Rational, IntRange, Enum, Product, Sum, Sigma, Term, Family };
  Kind kind = Kind::Unit;
  Span span;
  std::string name;  // Named / Term
  BigInt lo, hi;     // IntRange
  std::vector<std::string> labels;
  std::vector<SurfaceDomain> components;
  std::vector<std::pair<std::string, SurfaceDomain>> variants;
  std::vector<SurfaceDomain> sigma_base;              // single element
  std::vector<std::pair<Expr, SurfaceDomain>> table;  // Sigma / Family entries
};

struct Pattern {
  enum class Kind { Name, Tuple, Wildcard };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<Pattern> subs;
  Span span;
};

struct SurfaceField {
  bool is_rec = false;
  std::string name;
  SurfaceDomain domain;          // const fields
  std::optional<Expr> rec_index; // rec fields; absent means unit
  Span span;
};

struct SurfaceCtor {
  std::string name;
  Span span;
  std::vector<std::pair<std::string, SurfaceDomain>> exvars;
  std::vector<SurfaceField> fields;
  std::optional<Expr> guard;
  std::optional<Expr> result;
};

struct SurfaceType {
  std::string name;
  Span span;
  bool uninhabited = false;
  std::vector<std::pair<std::string, SurfaceDomain>> params;  // local domain aliases
  std::optional<SurfaceDomain> index;
  std::vector<SurfaceCtor> ctors;
};

struct SurfaceClause {
  std::string ctor;
  std::vector<Pattern> params;
  Expr body;
  Span span;
};

struct SurfaceAlgebra {
  enum class Kind { Total, Partial, Zygo };
  Kind kind = Kind::Total;
  std::string name;
  std::string subject;
  Span span;
  SurfaceDomain carrier;  // Kind::Family for indexed algebras
  std::string delta;      // zygo: prior algebra name, or "init"
  std::vector<SurfaceClause> clauses;
};

struct SurfaceDirective {
  enum class Kind { Refine, Verify, Emit };
  Kind kind = Kind::Refine;
  Span span;
  std::string type_name;
  std::string algebra;
  std::string as_name;             // refine ... as N
  std::string style = "agda-like"; // emit
  int bound = 0;                   // verify
};

struct Decl {
  enum class Kind { Domain, Type, Algebra, Directive };
  Kind kind = Kind::Domain;
  Span span;
  std::string name;          // Domain decls
  SurfaceDomain domain;      // Domain decls
  SurfaceType type;
  SurfaceAlgebra algebra;
  SurfaceDirective directive;
};

struct SpecFile {
  std::vector<Decl> decls;
};

/// Full parse with precise error locations; throws SyntaxError.
SpecFile parse(std::string_view text);

/// Pretty-printer; parse(print(f)) elaborates to the same module.
std::string print(const SpecFile& f);

std::string print_domain(const SurfaceDomain& d);

}  // namespace refinery::dsl
