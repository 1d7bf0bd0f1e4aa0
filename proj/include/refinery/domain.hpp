#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "refinery/diagnostics.hpp"

namespace refinery {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct FunctorCode;
using CodePtr = std::shared_ptr<const FunctorCode>;
struct Term;
using TermPtr = std::shared_ptr<const Term>;

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// The universe of index carriers. 1+A is not a special type; it is
/// TaggedSum [fail: Unit, ok: A] with that fixed variant order.
enum class DomainKind {
  Unit,
  Bool,
  Enum,
  Int,        // unbounded integers
  IntRange,   // [lo, hi] inclusive
  Rational,   // exact fractions
  Product,
  TaggedSum,
  DependentPair,  // base must be finite; fibre map stored as an explicit table
  TermDomain,     // closed terms of a functor code
};

class Value;

/// Immutable, structurally shared domain description.
class Domain {
public:
  DomainKind kind = DomainKind::Unit;
  std::string alias;  // printing hint; not part of identity

  std::vector<std::string> labels;                          // Enum
  BigInt lo, hi;                                            // IntRange
  std::vector<DomainPtr> components;                        // Product
  std::vector<std::pair<std::string, DomainPtr>> variants;  // TaggedSum
  DomainPtr base;                                           // DependentPair
  std::vector<std::pair<Value, DomainPtr>> fibre_table;     // DependentPair
  CodePtr code;                                             // TermDomain

  static DomainPtr unit();
  static DomainPtr boolean();
  static DomainPtr enumeration(std::vector<std::string> labels);
  static DomainPtr integer();
  static DomainPtr int_range(BigInt lo, BigInt hi);
  static DomainPtr rational();
  static DomainPtr product(std::vector<DomainPtr> components);
  static DomainPtr tagged_sum(std::vector<std::pair<std::string, DomainPtr>> variants);
  /// fibre_table must assign a domain to every value of `base` (finite), in
  /// base enumeration order.
  static DomainPtr dependent_pair(DomainPtr base, std::vector<std::pair<Value, DomainPtr>> fibres);
  static DomainPtr term(CodePtr code);

  /// Canonical 1+A: TaggedSum [("fail", Unit), ("ok", a)].
  static DomainPtr error_sum(DomainPtr a);

  static DomainPtr with_alias(const DomainPtr& d, std::string alias);

  const DomainPtr& fibre_at(const Value& base_value) const;
  std::optional<int> variant_index(const std::string& label) const;
  std::optional<int> label_index(const std::string& label) const;

  /// Canonical text form; re-parseable by the spec DSL. Aliased domains print
  /// their alias.
  std::string show() const;
  std::string show_structural() const;  // ignores aliases
};

/// Structural equality, alias-insensitive. TermDomain compares by code name.
bool domain_equal(const Domain& a, const Domain& b);
bool domain_equal(const DomainPtr& a, const DomainPtr& b);

/// Immutable value tree. Equality is structural and total; operator< is the
/// documented canonical order (kind rank first, then contents).
class Value {
public:
  enum class Kind { Unit, Bool, Enum, Int, Rat, Tuple, Tagged, DepPair, Term };

  Value();  // unit
  static Value unit();
  static Value boolean(bool b);
  static Value enum_label(std::string label);
  static Value integer(BigInt i);
  static Value integer(long i) { return integer(BigInt(i)); }
  static Value rational(BigRat r);  // stored normalized (cpp_rational canonical form)
  static Value rational(long num, long den);
  static Value tuple(std::vector<Value> items);
  static Value tagged(std::string label, Value payload);
  static Value dep_pair(Value base, Value fibre);
  static Value term(TermPtr t);

  static Value ok(Value payload) { return tagged("ok", std::move(payload)); }
  static Value fail() { return tagged("fail", unit()); }

  Kind kind() const;
  bool as_bool() const;
  const std::string& label() const;  // Enum or Tagged
  const BigInt& as_int() const;
  const BigRat& as_rat() const;
  const std::vector<Value>& items() const;  // Tuple
  const Value& payload() const;             // Tagged
  const Value& base() const;                // DepPair
  const Value& fibre() const;               // DepPair
  const TermPtr& as_term() const;

  bool is_ok() const { return kind() == Kind::Tagged && label() == "ok"; }
  bool is_fail() const { return kind() == Kind::Tagged && label() == "fail"; }

  /// Printing grammar: integers decimal; rationals "n/d" (or "n" when d=1);
  /// enums by label; tuples "(v1, v2, ...)"; tagged "label v" (bare label when
  /// the payload is unit); dependent pairs "(base, fibre)"; terms "@Ctor(...)".
  std::string show() const;

  bool operator==(const Value& o) const { return compare(*this, o) == 0; }
  bool operator!=(const Value& o) const { return compare(*this, o) != 0; }
  bool operator<(const Value& o) const { return compare(*this, o) < 0; }

  static int compare(const Value& a, const Value& b);

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// ---- domain-core operations -------------------------------------------------

/// True iff v is a well-formed inhabitant of d. Total.
bool value_in_domain(const Value& v, const Domain& d);
inline bool value_in_domain(const Value& v, const DomainPtr& d) { return value_in_domain(v, *d); }

/// Decidable finiteness predicate.
bool domain_is_finite(const Domain& d);
inline bool domain_is_finite(const DomainPtr& d) { return domain_is_finite(*d); }

/// Cardinality by the product/sum formulas (does not enumerate); nullopt when
/// infinite. Used as the counting oracle for enumeration.
std::optional<BigInt> domain_cardinality(const Domain& d);

/// All inhabitants, exactly once, in the canonical order: Bool [false, true];
/// Enum in declared label order; IntRange lo..hi; Product lexicographic with
/// the rightmost component cycling fastest; TaggedSum variant order, then
/// payload order; DependentPair base order, then fibre order. Throws
/// InfiniteDomain otherwise.
std::vector<Value> enumerate_domain(const Domain& d);
inline std::vector<Value> enumerate_domain(const DomainPtr& d) { return enumerate_domain(*d); }

/// Exact arithmetic on Int/Rat values; mixed operands coerce to Rat, / always
/// yields Rat. Throws DivisionByZero.
Value rational_arith(char op, const Value& x, const Value& y);

/// Numeric comparison helper (Int and Rat values compare by magnitude).
int numeric_compare(const Value& x, const Value& y);

bool value_is_numeric(const Value& v);
BigRat to_big_rat(const Value& v);

}  // namespace refinery
