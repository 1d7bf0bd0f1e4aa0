#include "refinery/domain.hpp"

#include <algorithm>
#include <set>

#include "refinery/code.hpp"

namespace refinery {

struct Value::Node {
  Kind kind = Kind::Unit;
  bool b = false;
  std::string label;
  BigInt i;
  BigRat r;
  std::vector<Value> items;  // Tuple components; Tagged [payload]; DepPair [base, fibre]
  TermPtr term;
};

Value::Value() {
  static const auto unit_node = std::make_shared<const Node>();
  node_ = unit_node;
}

Value Value::unit() { return Value(); }

Value Value::boolean(bool b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bool;
  n->b = b;
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::enum_label(std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Enum;
  n->label = std::move(label);
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::integer(BigInt i) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Int;
  n->i = std::move(i);
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::rational(BigRat r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rat;
  n->r = std::move(r);
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::rational(long num, long den) {
  if (den == 0) throw DivisionByZero();
  return rational(BigRat(BigInt(num), BigInt(den)));
}

Value Value::tuple(std::vector<Value> items) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tuple;
  n->items = std::move(items);
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::tagged(std::string label, Value payload) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tagged;
  n->label = std::move(label);
  n->items.push_back(std::move(payload));
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::dep_pair(Value base, Value fibre) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::DepPair;
  n->items.push_back(std::move(base));
  n->items.push_back(std::move(fibre));
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value Value::term(TermPtr t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Term;
  n->term = std::move(t);
  Value v;
  v.node_ = std::move(n);
  return v;
}

Value::Kind Value::kind() const { return node_->kind; }
bool Value::as_bool() const { return node_->b; }
const std::string& Value::label() const { return node_->label; }
const BigInt& Value::as_int() const { return node_->i; }
const BigRat& Value::as_rat() const { return node_->r; }
const std::vector<Value>& Value::items() const { return node_->items; }
const Value& Value::payload() const { return node_->items.at(0); }
const Value& Value::base() const { return node_->items.at(0); }
const Value& Value::fibre() const { return node_->items.at(1); }
const TermPtr& Value::as_term() const { return node_->term; }

int Value::compare(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return 0;
  int ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Unit:
      return 0;
    case Kind::Bool:
      return a.as_bool() == b.as_bool() ? 0 : (a.as_bool() ? 1 : -1);
    case Kind::Enum:
      return a.label().compare(b.label());
    case Kind::Int:
      return a.as_int() == b.as_int() ? 0 : (a.as_int() < b.as_int() ? -1 : 1);
    case Kind::Rat:
      return a.as_rat() == b.as_rat() ? 0 : (a.as_rat() < b.as_rat() ? -1 : 1);
    case Kind::Tagged:
      if (int c = a.label().compare(b.label())) return c;
      [[fallthrough]];
    case Kind::Tuple:
    case Kind::DepPair: {
      const auto& ia = a.items();
      const auto& ib = b.items();
      if (ia.size() != ib.size()) return ia.size() < ib.size() ? -1 : 1;
      for (size_t k = 0; k < ia.size(); ++k)
        if (int c = compare(ia[k], ib[k])) return c;
      return 0;
    }
    case Kind::Term:
      return term_compare(*a.as_term(), *b.as_term());
  }
  return 0;
}

std::string Value::show() const {
  switch (kind()) {
    case Kind::Unit:
      return "unit";
    case Kind::Bool:
      return as_bool() ? "true" : "false";
    case Kind::Enum:
      return label();
    case Kind::Int:
      return as_int().str();
    case Kind::Rat: {
      BigInt num = boost::multiprecision::numerator(as_rat());
      BigInt den = boost::multiprecision::denominator(as_rat());
      if (den == 1) return num.str();
      return num.str() + "/" + den.str();
    }
    case Kind::Tuple:
    case Kind::DepPair: {
      std::string out = "(";
      for (size_t k = 0; k < items().size(); ++k) {
        if (k) out += ", ";
        out += items()[k].show();
      }
      return out + ")";
    }
    case Kind::Tagged: {
      const Value& p = payload();
      if (p.kind() == Kind::Unit) return label();
      std::string ps = p.show();
      bool needs_parens = p.kind() == Kind::Tagged && p.payload().kind() != Kind::Unit;
      return label() + " " + (needs_parens ? "(" + ps + ")" : ps);
    }
    case Kind::Term:
      return show_term(*as_term());
  }
  return "?";
}

// ---- Domain ------------------------------------------------------------------

static DomainPtr make_domain(DomainKind k) {
  auto d = std::make_shared<Domain>();
  d->kind = k;
  return d;
}

DomainPtr Domain::unit() {
  static const DomainPtr d = make_domain(DomainKind::Unit);
  return d;
}

DomainPtr Domain::boolean() {
  static const DomainPtr d = make_domain(DomainKind::Bool);
  return d;
}

DomainPtr Domain::enumeration(std::vector<std::string> labels) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw TypeError("enum labels must be distinct");
  if (labels.empty()) throw TypeError("enum must have at least one label");
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::Enum;
  d->labels = std::move(labels);
  return d;
}

DomainPtr Domain::integer() {
  static const DomainPtr d = make_domain(DomainKind::Int);
  return d;
}

DomainPtr Domain::int_range(BigInt lo, BigInt hi) {
  if (lo > hi) throw TypeError("int range requires lo <= hi");
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::IntRange;
  d->lo = std::move(lo);
  d->hi = std::move(hi);
  return d;
}

DomainPtr Domain::rational() {
  static const DomainPtr d = make_domain(DomainKind::Rational);
  return d;
}

DomainPtr Domain::product(std::vector<DomainPtr> components) {
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::Product;
  d->components = std::move(components);
  return d;
}

DomainPtr Domain::tagged_sum(std::vector<std::pair<std::string, DomainPtr>> variants) {
  std::set<std::string> seen;
  for (auto& [l, _] : variants)
    if (!seen.insert(l).second) throw TypeError("sum variant labels must be distinct");
  if (variants.empty()) throw TypeError("sum must have at least one variant");
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::TaggedSum;
  d->variants = std::move(variants);
  return d;
}

DomainPtr Domain::dependent_pair(DomainPtr base, std::vector<std::pair<Value, DomainPtr>> fibres) {
  if (!domain_is_finite(*base)) throw InfiniteDomain("dependent pair base must be finite");
  auto base_values = enumerate_domain(*base);
  if (base_values.size() != fibres.size())
    throw TypeError("dependent pair fibre table must cover the base exactly");
  for (size_t k = 0; k < base_values.size(); ++k)
    if (base_values[k] != fibres[k].first)
      throw TypeError("dependent pair fibre table must be keyed in base enumeration order");
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::DependentPair;
  d->base = std::move(base);
  d->fibre_table = std::move(fibres);
  return d;
}

DomainPtr Domain::term(CodePtr code) {
  auto d = std::make_shared<Domain>();
  d->kind = DomainKind::TermDomain;
  d->code = std::move(code);
  return d;
}

DomainPtr Domain::error_sum(DomainPtr a) {
  return tagged_sum({{"fail", unit()}, {"ok", std::move(a)}});
}

DomainPtr Domain::with_alias(const DomainPtr& d, std::string alias) {
  auto copy = std::make_shared<Domain>(*d);
  copy->alias = std::move(alias);
  return copy;
}

const DomainPtr& Domain::fibre_at(const Value& base_value) const {
  for (auto& [v, d] : fibre_table)
    if (v == base_value) return d;
  throw TypeError("value " + base_value.show() + " is not in the dependent pair base");
}

std::optional<int> Domain::variant_index(const std::string& label) const {
  for (size_t k = 0; k < variants.size(); ++k)
    if (variants[k].first == label) return static_cast<int>(k);
  return std::nullopt;
}

std::optional<int> Domain::label_index(const std::string& label) const {
  for (size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return static_cast<int>(k);
  return std::nullopt;
}

static std::string show_domain(const Domain& d, bool use_alias) {
  if (use_alias && !d.alias.empty()) return d.alias;
  switch (d.kind) {
    case DomainKind::Unit:
      return "unit";
    case DomainKind::Bool:
      return "bool";
    case DomainKind::Int:
      return "int";
    case DomainKind::Rational:
      return "rational";
    case DomainKind::IntRange:
      return "int[" + d.lo.str() + ".." + d.hi.str() + "]";
    case DomainKind::Enum: {
      std::string out = "enum{";
      for (size_t k = 0; k < d.labels.size(); ++k) {
        if (k) out += ", ";
        out += d.labels[k];
      }
      return out + "}";
    }
    case DomainKind::Product: {
      std::string out = "(";
      for (size_t k = 0; k < d.components.size(); ++k) {
        if (k) out += ", ";
        out += show_domain(*d.components[k], use_alias);
      }
      return out + ")";
    }
    case DomainKind::TaggedSum: {
      std::string out = "sum{";
      for (size_t k = 0; k < d.variants.size(); ++k) {
        if (k) out += ", ";
        out += d.variants[k].first + ": " + show_domain(*d.variants[k].second, use_alias);
      }
      return out + "}";
    }
    case DomainKind::DependentPair: {
      std::string out = "sigma " + show_domain(*d.base, use_alias) + " {";
      for (size_t k = 0; k < d.fibre_table.size(); ++k) {
        if (k) out += ", ";
        out += d.fibre_table[k].first.show() + " -> " + show_domain(*d.fibre_table[k].second, use_alias);
      }
      return out + "}";
    }
    case DomainKind::TermDomain:
      return "term(" + (d.code ? d.code->name : std::string("?")) + ")";
  }
  return "?";
}

std::string Domain::show() const { return show_domain(*this, true); }
std::string Domain::show_structural() const { return show_domain(*this, false); }

bool domain_equal(const Domain& a, const Domain& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DomainKind::Unit:
    case DomainKind::Bool:
    case DomainKind::Int:
    case DomainKind::Rational:
      return true;
    case DomainKind::IntRange:
      return a.lo == b.lo && a.hi == b.hi;
    case DomainKind::Enum:
      return a.labels == b.labels;
    case DomainKind::Product:
      if (a.components.size() != b.components.size()) return false;
      for (size_t k = 0; k < a.components.size(); ++k)
        if (!domain_equal(*a.components[k], *b.components[k])) return false;
      return true;
    case DomainKind::TaggedSum:
      if (a.variants.size() != b.variants.size()) return false;
      for (size_t k = 0; k < a.variants.size(); ++k)
        if (a.variants[k].first != b.variants[k].first ||
            !domain_equal(*a.variants[k].second, *b.variants[k].second))
          return false;
      return true;
    case DomainKind::DependentPair:
      if (!domain_equal(*a.base, *b.base)) return false;
      if (a.fibre_table.size() != b.fibre_table.size()) return false;
      for (size_t k = 0; k < a.fibre_table.size(); ++k)
        if (a.fibre_table[k].first != b.fibre_table[k].first ||
            !domain_equal(*a.fibre_table[k].second, *b.fibre_table[k].second))
          return false;
      return true;
    case DomainKind::TermDomain:
      return a.code && b.code && a.code->name == b.code->name;
  }
  return false;
}

bool domain_equal(const DomainPtr& a, const DomainPtr& b) { return domain_equal(*a, *b); }

// ---- predicates and enumeration ----------------------------------------------

bool value_in_domain(const Value& v, const Domain& d) {
  switch (d.kind) {
    case DomainKind::Unit:
      return v.kind() == Value::Kind::Unit;
    case DomainKind::Bool:
      return v.kind() == Value::Kind::Bool;
    case DomainKind::Enum:
      return v.kind() == Value::Kind::Enum && d.label_index(v.label()).has_value();
    case DomainKind::Int:
      return v.kind() == Value::Kind::Int;
    case DomainKind::IntRange:
      return v.kind() == Value::Kind::Int && d.lo <= v.as_int() && v.as_int() <= d.hi;
    case DomainKind::Rational:
      return v.kind() == Value::Kind::Rat;
    case DomainKind::Product: {
      if (v.kind() != Value::Kind::Tuple) return false;
      if (v.items().size() != d.components.size()) return false;
      for (size_t k = 0; k < d.components.size(); ++k)
        if (!value_in_domain(v.items()[k], *d.components[k])) return false;
      return true;
    }
    case DomainKind::TaggedSum: {
      if (v.kind() != Value::Kind::Tagged) return false;
      auto idx = d.variant_index(v.label());
      if (!idx) return false;
      return value_in_domain(v.payload(), *d.variants[*idx].second);
    }
    case DomainKind::DependentPair: {
      if (v.kind() != Value::Kind::DepPair) return false;
      if (!value_in_domain(v.base(), *d.base)) return false;
      return value_in_domain(v.fibre(), *d.fibre_at(v.base()));
    }
    case DomainKind::TermDomain: {
      if (v.kind() != Value::Kind::Term || !d.code) return false;
      try {
        check_term(*d.code, *v.as_term());
        return true;
      } catch (const IllFormedTerm&) {
        return false;
      }
    }
  }
  return false;
}

bool domain_is_finite(const Domain& d) {
  switch (d.kind) {
    case DomainKind::Unit:
    case DomainKind::Bool:
    case DomainKind::Enum:
    case DomainKind::IntRange:
      return true;
    case DomainKind::Int:
    case DomainKind::Rational:
      return false;
    case DomainKind::Product:
      for (auto& c : d.components)
        if (!domain_is_finite(*c)) return false;
      return true;
    case DomainKind::TaggedSum:
      for (auto& [_, c] : d.variants)
        if (!domain_is_finite(*c)) return false;
      return true;
    case DomainKind::DependentPair:
      if (!domain_is_finite(*d.base)) return false;
      for (auto& [_, c] : d.fibre_table)
        if (!domain_is_finite(*c)) return false;
      return true;
    case DomainKind::TermDomain: {
      // Finite iff no constructor has recursive fields and all field domains
      // are finite.
      if (!d.code) return false;
      for (auto& ctor : d.code->constructors) {
        if (!ctor.rec_fields.empty()) return false;
        for (auto& [_, ed] : ctor.exvars)
          if (!domain_is_finite(*ed)) return false;
        for (auto& [_, cd] : ctor.const_fields)
          if (!domain_is_finite(*cd)) return false;
      }
      return true;
    }
  }
  return false;
}

std::optional<BigInt> domain_cardinality(const Domain& d) {
  if (!domain_is_finite(d)) return std::nullopt;
  switch (d.kind) {
    case DomainKind::Unit:
      return BigInt(1);
    case DomainKind::Bool:
      return BigInt(2);
    case DomainKind::Enum:
      return BigInt(d.labels.size());
    case DomainKind::IntRange:
      return d.hi - d.lo + 1;
    case DomainKind::Product: {
      BigInt n = 1;
      for (auto& c : d.components) n *= *domain_cardinality(*c);
      return n;
    }
    case DomainKind::TaggedSum: {
      BigInt n = 0;
      for (auto& [_, c] : d.variants) n += *domain_cardinality(*c);
      return n;
    }
    case DomainKind::DependentPair: {
      BigInt n = 0;
      for (auto& [_, c] : d.fibre_table) n += *domain_cardinality(*c);
      return n;
    }
    case DomainKind::TermDomain:
      return BigInt(enumerate_domain(d).size());
    default:
      return std::nullopt;
  }
}

std::vector<Value> enumerate_domain(const Domain& d) {
  if (!domain_is_finite(d))
    throw InfiniteDomain("cannot enumerate infinite domain " + d.show_structural());
  switch (d.kind) {
    case DomainKind::Unit:
      return {Value::unit()};
    case DomainKind::Bool:
      return {Value::boolean(false), Value::boolean(true)};
    case DomainKind::Enum: {
      std::vector<Value> out;
      for (auto& l : d.labels) out.push_back(Value::enum_label(l));
      return out;
    }
    case DomainKind::IntRange: {
      std::vector<Value> out;
      for (BigInt i = d.lo; i <= d.hi; ++i) out.push_back(Value::integer(i));
      return out;
    }
    case DomainKind::Product: {
      std::vector<std::vector<Value>> parts;
      for (auto& c : d.components) parts.push_back(enumerate_domain(*c));
      std::vector<Value> out{Value::tuple({})};
      out.clear();
      // odometer, rightmost fastest
      std::vector<size_t> idx(parts.size(), 0);
      for (auto& p : parts)
        if (p.empty()) return {};
      while (true) {
        std::vector<Value> items;
        for (size_t k = 0; k < parts.size(); ++k) items.push_back(parts[k][idx[k]]);
        out.push_back(Value::tuple(std::move(items)));
        size_t k = parts.size();
        while (k > 0) {
          --k;
          if (++idx[k] < parts[k].size()) break;
          idx[k] = 0;
          if (k == 0) return out;
        }
        if (parts.empty()) return out;
      }
    }
    case DomainKind::TaggedSum: {
      std::vector<Value> out;
      for (auto& [l, c] : d.variants)
        for (auto& v : enumerate_domain(*c)) out.push_back(Value::tagged(l, v));
      return out;
    }
    case DomainKind::DependentPair: {
      std::vector<Value> out;
      for (auto& [b, c] : d.fibre_table)
        for (auto& v : enumerate_domain(*c)) out.push_back(Value::dep_pair(b, v));
      return out;
    }
    case DomainKind::TermDomain: {
      // Non-recursive code: every term is a single constructor with fields.
      std::vector<Value> out;
      for (auto& ctor : d.code->constructors) {
        std::vector<std::vector<Value>> parts;
        for (auto& [_, ed] : ctor.exvars) parts.push_back(enumerate_domain(*ed));
        for (auto& [_, cd] : ctor.const_fields) parts.push_back(enumerate_domain(*cd));
        std::vector<size_t> idx(parts.size(), 0);
        bool empty = false;
        for (auto& p : parts)
          if (p.empty()) empty = true;
        if (empty) continue;
        while (true) {
          std::vector<Value> vals;
          for (size_t k = 0; k < parts.size(); ++k) vals.push_back(parts[k][idx[k]]);
          std::vector<Value> ex(vals.begin(), vals.begin() + ctor.exvars.size());
          std::vector<Value> cs(vals.begin() + ctor.exvars.size(), vals.end());
          out.push_back(Value::term(Term::make(ctor.name, std::move(ex), std::move(cs), {})));
          size_t k = parts.size();
          bool done = parts.empty();
          while (k > 0) {
            --k;
            if (++idx[k] < parts[k].size()) break;
            idx[k] = 0;
            if (k == 0) done = true;
          }
          if (done) break;
        }
      }
      return out;
    }
    default:
      throw InfiniteDomain("cannot enumerate " + d.show_structural());
  }
}

bool value_is_numeric(const Value& v) {
  return v.kind() == Value::Kind::Int || v.kind() == Value::Kind::Rat;
}

BigRat to_big_rat(const Value& v) {
  if (v.kind() == Value::Kind::Int) return BigRat(v.as_int());
  return v.as_rat();
}

Value rational_arith(char op, const Value& x, const Value& y) {
  if (!value_is_numeric(x) || !value_is_numeric(y))
    throw TypeError("arithmetic requires numeric operands");
  bool both_int = x.kind() == Value::Kind::Int && y.kind() == Value::Kind::Int;
  if (both_int && op != '/') {
    const BigInt &a = x.as_int(), &b = y.as_int();
    switch (op) {
      case '+':
        return Value::integer(a + b);
      case '-':
        return Value::integer(a - b);
      case '*':
        return Value::integer(a * b);
    }
  }
  BigRat a = to_big_rat(x), b = to_big_rat(y);
  switch (op) {
    case '+':
      return Value::rational(a + b);
    case '-':
      return Value::rational(a - b);
    case '*':
      return Value::rational(a * b);
    case '/':
      if (b == 0) throw DivisionByZero();
      return Value::rational(a / b);
  }
  throw TypeError(std::string("unknown arithmetic operator '") + op + "'");
}

int numeric_compare(const Value& x, const Value& y) {
  BigRat a = to_big_rat(x), b = to_big_rat(y);
  return a == b ? 0 : (a < b ? -1 : 1);
}

}  // namespace refinery
