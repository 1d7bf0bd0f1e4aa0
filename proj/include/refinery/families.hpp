#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refinery/code.hpp"

namespace refinery {

/// Proof tokens are opaque tags with equality. Isomorphism of families is
/// always checked as pointwise fibre bijection, never token equality.
using Token = std::string;

/// A family of finite sets (A, P): a finite base and a finite fibre of
/// distinct tokens over every base value.
struct FiniteFamily {
  std::vector<Value> base;
  std::map<Value, std::vector<Token>> fibres;

  void validate() const;  // fibres defined exactly on base, tokens distinct
  const std::vector<Token>& fibre(const Value& a) const;
  size_t total_size() const;
};

/// A morphism (f, f~): (A,P) -> (B,Q).
struct FamilyMap {
  std::map<Value, Value> f;
  std::map<Value, std::map<Token, Token>> tilde;

  void validate(const FiniteFamily& src, const FiniteFamily& dst) const;
};

/// f* (B,Q) = (A, Q . f); tokens are shared with the target family.
FiniteFamily reindex(const std::map<Value, Value>& f, const std::vector<Value>& dom_a,
                     const FiniteFamily& fam_b);

/// Sigma_f (A,P) = (B, \b. Sigma_{a : f a = b} P a); tokens encode the pair
/// (a, p).
FiniteFamily op_reindex(const std::map<Value, Value>& f, const FiniteFamily& fam_a,
                        const std::vector<Value>& base_b);

/// Truth: the singleton fibre over every base value.
FiniteFamily truth(std::vector<Value> base);

/// Comprehension {(A,P)} = all (a, p) pairs; the projection pi is `.first`.
std::vector<std::pair<Value, Token>> comprehension(const FiniteFamily& fam);

/// Base values of the lifted family: constructor layers over X, encoded as
/// values (tagged ctor name over the tuple of fields).
Value encode_layer(const Layer& l);

/// F f on a layer: map the recursive positions through f.
Layer layer_map(const std::map<Value, Value>& f, const Layer& l);

/// The lifting F-hat of a Unit-indexed polynomial code: the fibre over a
/// layer x is the set of layers over comprehension pairs that strip to x,
/// i.e. the product of the fibres at x's recursive positions.
FiniteFamily lift(const FunctorCode& c, const FiniteFamily& fam);

struct CheckResult {
  bool pass = true;
  std::string detail;
};

/// Pointwise fibre bijection over a shared base (vertical isomorphism). The
/// witness is the order pairing within each fibre; failure names the fibre.
CheckResult families_isomorphic(const FiniteFamily& lhs, const FiniteFamily& rhs);

/// Lemma "lifting commutes with reindexing": F-hat_A . f*  ~  (F f)* . F-hat_B.
CheckResult check_lift_reindex(const FunctorCode& c, const std::map<Value, Value>& f,
                               const std::vector<Value>& dom_a, const FiniteFamily& fam_b);

/// Lemma "lifting commutes with op-reindexing": F-hat_B . Sigma_f  ~  Sigma_{F f} . F-hat_A.
CheckResult check_lift_opreindex(const FunctorCode& c, const std::map<Value, Value>& f,
                                 const FiniteFamily& fam_a, const std::vector<Value>& base_b);

/// Very strong coproducts: {psi} : {(A,P)} -> {Sigma_f (A,P)} is an
/// isomorphism commuting with pi over f.
CheckResult check_very_strong_coproducts(const std::map<Value, Value>& f,
                                         const FiniteFamily& fam_a,
                                         const std::vector<Value>& base_b);

/// Truth preservation of lifting: every fibre of lift(c, truth(X)) is a
/// singleton.
CheckResult check_truth_preservation(const FunctorCode& c, const std::vector<Value>& base);

/// Non-introduction of failure, checked exhaustively over layers with
/// positions in 1+A: lambda x = ok y iff x = F ok y; plus the unit law.
CheckResult check_non_introduction(const FunctorCode& c, const std::vector<Value>& a_values);

// ---- Set^A x_Set Set/D and the Psi/Phi equivalence -----------------------------

/// An object of Set^A x_Set Set/D: an A-indexed family together with a map
/// from its comprehension into D.
struct SlicedFamily {
  FiniteFamily fam;  // over A
  std::map<std::pair<Value, Token>, Value> to_d;

  void validate(const std::vector<Value>& base_d) const;
};

/// Psi(X) for X over D x A: (\a. {(d, x) | x in X(d,a)}, (a,(d,x)) -> d).
SlicedFamily psi(const FiniteFamily& x_over_dxa, const std::vector<Value>& base_d,
                 const std::vector<Value>& base_a);

/// Phi(X, f) = \(d,a). { x in X a | f(a,x) = d }.
FiniteFamily phi(const SlicedFamily& xf, const std::vector<Value>& base_d,
                 const std::vector<Value>& base_a);

/// Isomorphism in the sliced category: fibres biject per a, respecting the
/// D-valued map (per-d group cardinalities agree).
CheckResult sliced_isomorphic(const SlicedFamily& lhs, const SlicedFamily& rhs);

CheckResult check_psi_phi_roundtrip(const FiniteFamily& x_over_dxa, const std::vector<Value>& base_d,
                                    const std::vector<Value>& base_a);
CheckResult check_phi_psi_roundtrip(const SlicedFamily& xf, const std::vector<Value>& base_d,
                                    const std::vector<Value>& base_a);

// ---- seeded random instances and the lemma suite -------------------------------

struct RandomInstance {
  std::vector<Value> base_a;
  std::vector<Value> base_b;
  std::map<Value, Value> f;  // A -> B
  FiniteFamily fam_a;        // over A
  FiniteFamily fam_b;        // over B
};

RandomInstance random_instance(uint64_t seed);

struct LemmaSuiteResult {
  int trials = 0;
  int checks = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Runs the full law suite over the built-in code shapes with seeded random
/// finite instances; reproducible for a fixed seed.
LemmaSuiteResult run_lemma_suite(uint64_t seed, int trials);

}  // namespace refinery
