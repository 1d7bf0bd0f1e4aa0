#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refinery/expr.hpp"

namespace refinery {

struct AlgebraSpec;

/// One recursive position, with the index its subterm must carry.
struct RecField {
  std::string name;
  Expr index_expr;  // over exvars and const fields (plus forget refs in IR specs)
};

/// One coproduct summand: existential index variables, payload fields,
/// recursive positions, an optional boolean premise, and the result index.
struct ConstructorSpec {
  std::string name;
  Span span;
  std::vector<std::pair<std::string, DomainPtr>> exvars;
  std::vector<std::pair<std::string, DomainPtr>> const_fields;
  std::vector<RecField> rec_fields;
  std::optional<Expr> guard;  // boolean premise; absent means true
  Expr result_index;          // unit literal for plain codes
};

/// An indexed polynomial functor presented as a constructor list.
struct FunctorCode {
  std::string name;
  DomainPtr index_domain;  // Unit for plain inductive types
  std::vector<ConstructorSpec> constructors;
  bool uninhabited_ok = false;

  const ConstructorSpec* find(const std::string& ctor) const;
  bool indexed() const { return index_domain && index_domain->kind != DomainKind::Unit; }
};

/// Element of muF. Existential variables are stored, not inferred.
struct Term {
  std::string ctor;
  std::vector<Value> exvars;
  std::vector<Value> consts;
  std::vector<TermPtr> subs;

  static TermPtr make(std::string ctor, std::vector<Value> exvars, std::vector<Value> consts,
                      std::vector<TermPtr> subs);
};

/// Element of muF^alpha: term shape plus a cached index at every node, and a
/// cached forget value for IR specs.
struct RefinedTerm {
  std::string ctor;
  std::vector<Value> exvars;
  std::vector<Value> consts;
  std::vector<std::shared_ptr<const RefinedTerm>> subs;
  Value index;
  std::optional<Value> forget;
};
using RefinedTermPtr = std::shared_ptr<const RefinedTerm>;

/// Term size measure: number of constructor nodes.
size_t term_size(const Term& t);
size_t term_size(const RefinedTerm& t);

int term_compare(const Term& a, const Term& b);
bool term_equal(const Term& a, const Term& b);

/// "@Ctor(args...)": exvars, consts, subterms in declaration order.
std::string show_term(const Term& t);
std::string show_term(const RefinedTerm& t);

/// One constructor layer whose recursive positions carry plain values instead
/// of subterms (F X for a value set X). Used by the families engine and the
/// distributive law.
struct Layer {
  std::string ctor;
  std::vector<Value> exvars;
  std::vector<Value> consts;
  std::vector<Value> recs;
};

int layer_compare(const Layer& a, const Layer& b);
std::string show_layer(const Layer& l);

/// All constructor layers with recursive positions drawn from `recs_from`;
/// exvar and const domains must be finite. Deterministic order: constructor
/// declaration order, then field enumeration order (odometer, rightmost
/// fastest), then recursive choices in `recs_from` order.
std::vector<Layer> enumerate_layers(const FunctorCode& c, const std::vector<Value>& recs_from);

// ---- operations -------------------------------------------------------------

/// Static validation of a code: distinct constructor names, scoping, typing of
/// every expression, and the base-constructor check. Dependent index typing
/// (sigma-valuation over finite discriminators) happens here. `forget_domain`
/// is the companion codomain for IR data parts whose index expressions use
/// `forget x`; null rejects such references.
ValidationReport wellformed_code(const FunctorCode& c, const DomainPtr& forget_domain = nullptr);

// Typing context assembled for a constructor: used by wellformed_code and by
// the elaborator when checking algebra clauses positionally.
std::vector<TypeCtx> constructor_type_contexts(const FunctorCode& c, const ConstructorSpec& ctor);

/// Checks t against c and returns its index (unit for plain codes). Verifies
/// every index constraint and guard recursively. Throws IllFormedTerm.
Value check_term(const FunctorCode& c, const Term& t);

/// Structural recursion: replace each constructor by its algebra clause,
/// bottom-up. alg must be total (declared in algebra.hpp; defined with it).
Value fold(const FunctorCode& c, const AlgebraSpec& alg, const Term& t);

/// Builds a plain Term from a refined term (keeps all stored fields).
TermPtr strip(const RefinedTerm& rt);

}  // namespace refinery
