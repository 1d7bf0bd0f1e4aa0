#pragma once

#include "refinery/algebra.hpp"

namespace refinery {

/// Per-constructor provenance of a refined code.
struct RefinedCtorInfo {
  std::string refined_name;
  std::string original_name;
  size_t original_exvars = 0;  // retained prefix of the refined exvar list
  /// Fresh index exvar per recursive field, in field order; "" when the
  /// variable was inlined away by a solved guard equation.
  std::vector<std::string> index_exvars;
};

/// Output of refinement: a functor code over the algebra carrier (or the
/// paired index for section-5 inputs), plus the mapping back.
struct RefinedSpec {
  FunctorCode code;
  std::string original_code;
  std::string algebra;
  AlgebraKind mode = AlgebraKind::Total;
  std::vector<RefinedCtorInfo> ctors;  // parallel to code.constructors

  const RefinedCtorInfo& info(const std::string& refined_ctor) const;
};

/// Refined data plus the simultaneously defined forget function (indexed
/// induction-recursion at desk scale).
struct RefinedIRSpec {
  RefinedSpec data;
  DomainPtr forget_domain;  // D
  /// One clause per refined constructor; recursive-position variables denote
  /// forget values of the subterms, so forget is the fold of this clause set.
  std::map<std::string, Clause> forget_clauses;
};

/// F^alpha: one refined constructor per original constructor; one fresh index
/// exvar per recursive field; the result index is the algebra clause body
/// with recursive variables replaced by the fresh exvars. For indexed inputs
/// (section 5) the output index pairs the original index with the carrier and
/// the original index constraints become premises.
RefinedSpec refine(const FunctorCode& c, const AlgebraSpec& alpha, const std::string& name = "");

/// F^?kappa: one refined constructor per (original constructor x ok-leaf);
/// leaf guards become premises, except solved exvar equations, which are
/// inlined; fail leaves emit nothing.
RefinedSpec partial_refine(const FunctorCode& c, const AlgebraSpec& kappa,
                           const std::string& name = "");

/// F^{gamma,delta}: like refine, but gamma's recursive (D x A) variable is
/// split into (forget(x_k), i_k); the forget clauses are delta's with
/// recursive variables replaced by the subterm forget values.
RefinedIRSpec zygo_refine(const FunctorCode& c, const ZygoPair& z, const std::string& name = "");

/// Strips the refinement-introduced index exvars, yielding a term of the
/// original code.
TermPtr erase(const RefinedSpec& rs, const RefinedTerm& rt);
TermPtr erase(const RefinedIRSpec& irs, const RefinedTerm& rt);

/// Bottom-up index (and forget value) of a term of the refined code; verifies
/// premises and index constraints like check_term.
Value ir_check_term(const RefinedIRSpec& irs, const Term& t);
Value ir_forget_value(const RefinedIRSpec& irs, const Term& t);

/// Alpha-equality of codes: identical up to renaming of exvars (positional)
/// and field names.
bool code_alpha_equal(const FunctorCode& a, const FunctorCode& b);

}  // namespace refinery
