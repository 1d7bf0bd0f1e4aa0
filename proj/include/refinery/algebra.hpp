#pragma once

#include <map>
#include <optional>
#include <string>

#include "refinery/code.hpp"

namespace refinery {

enum class AlgebraKind {
  Total,      // alpha : FA -> A
  Partial,    // kappa : FA -> 1+A, clauses in decision-tree normal form
  ZygoGamma,  // gamma : F(D x A) -> A, recursive variables are (D, A) pairs
};

/// One clause: positional parameter names binding the constructor's exvars,
/// const fields, then recursive-position result variables, and the body.
struct Clause {
  std::vector<std::string> params;
  Expr body;
  Span span;

  Env bind(const std::vector<Value>& values) const;
};

struct AlgebraSpec {
  std::string name;
  AlgebraKind kind = AlgebraKind::Total;
  std::string subject;  // FunctorCode name
  /// For a plain algebra: the carrier A. For a section-5 indexed algebra
  /// (indexed == true): the DependentPair packaging the carrier family over
  /// the subject's index domain.
  DomainPtr carrier;
  bool indexed = false;
  DomainPtr companion;  // D, recorded for ZygoGamma
  std::map<std::string, Clause> clauses;

  const Clause& clause(const std::string& ctor) const;
  /// Domain of a recursive-position variable as seen by clause bodies.
  /// Plain total/partial: A; zygo: D x A; indexed: resolved per index value.
  DomainPtr rec_var_domain() const;
};

struct ZygoPair {
  AlgebraSpec delta;  // total, carrier D
  AlgebraSpec gamma;  // zygoGamma, carrier A, companion D

  void validate() const;  // throws TypeError on kind/carrier mismatches
};

// ---- operations ----------------------------------------------------------------

/// Evaluates one clause of a total or zygo algebra with an explicit env.
Value eval_clause(const AlgebraSpec& alg, const std::string& ctor, const Env& env);

/// Evaluates one clause of a partial algebra; the result is ok a or fail.
Value eval_partial_clause(const AlgebraSpec& kappa, const std::string& ctor, const Env& env);

/// Canonical distributive law for the error monad over the container layer:
/// fail if any recursive position carries fail, otherwise the layer with the
/// ok tags stripped. nullopt encodes fail (the 1 + F A left summand).
std::optional<Layer> dist_law(const FunctorCode& c, const Layer& over_error_values);

/// kappa-bar = [fail, kappa] . lambda_A, as a total algebra with carrier 1+A.
AlgebraSpec totalize(const FunctorCode& c, const AlgebraSpec& kappa);

/// <delta . F pi1, gamma> as a total algebra with carrier D x A. The second
/// projection of its fold is the zygomorphism; the first is fold delta.
AlgebraSpec pair_algebra(const FunctorCode& c, const ZygoPair& z);

/// The initial algebra as an algebra: carrier term(c), clauses rebuild the
/// constructors.
AlgebraSpec initial_algebra_as_algebra(const CodePtr& c);

/// The final algebra !: carrier Unit, every clause returns unit.
AlgebraSpec bang_algebra(const FunctorCode& c);

/// Positional clause coverage check: exactly one clause per constructor, each
/// with the constructor's arity. Throws ClauseMismatch.
void check_clause_coverage(const FunctorCode& c, const AlgebraSpec& alg);

/// Decision-tree normal form check for partial clauses (if over booleans and
/// case over enums, leaves literally ok(e) or fail). Throws NotNormalForm.
void check_normal_form(const FunctorCode& c, const AlgebraSpec& kappa);

}  // namespace refinery
