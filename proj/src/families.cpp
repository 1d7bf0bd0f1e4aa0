#include "refinery/families.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "refinery/samples.hpp"

namespace refinery {

void FiniteFamily::validate() const {
  std::set<Value> seen;
  for (auto& a : base)
    if (!seen.insert(a).second) throw TypeError("family base values must be distinct");
  if (fibres.size() != base.size()) throw TypeError("fibres must be defined exactly on the base");
  for (auto& [a, toks] : fibres) {
    if (!seen.count(a)) throw TypeError("fibre over a value outside the base: " + a.show());
    std::set<Token> t(toks.begin(), toks.end());
    if (t.size() != toks.size()) throw TypeError("fibre tokens must be distinct at " + a.show());
  }
}

const std::vector<Token>& FiniteFamily::fibre(const Value& a) const {
  auto it = fibres.find(a);
  if (it == fibres.end()) throw TypeError("no fibre over " + a.show());
  return it->second;
}

size_t FiniteFamily::total_size() const {
  size_t n = 0;
  for (auto& [_, toks] : fibres) n += toks.size();
  return n;
}

void FamilyMap::validate(const FiniteFamily& src, const FiniteFamily& dst) const {
  for (auto& a : src.base) {
    auto it = f.find(a);
    if (it == f.end()) throw TypeError("family map base function undefined at " + a.show());
    if (!dst.fibres.count(it->second))
      throw TypeError("family map sends " + a.show() + " outside the target base");
    auto ft = tilde.find(a);
    std::set<Token> dst_tokens;
    for (auto& t : dst.fibre(it->second)) dst_tokens.insert(t);
    for (auto& p : src.fibre(a)) {
      if (ft == tilde.end() || !ft->second.count(p))
        throw TypeError("family map token function undefined at (" + a.show() + ", " + p + ")");
      if (!dst_tokens.count(ft->second.at(p)))
        throw TypeError("family map token lands outside the target fibre");
    }
  }
}

FiniteFamily reindex(const std::map<Value, Value>& f, const std::vector<Value>& dom_a,
                     const FiniteFamily& fam_b) {
  FiniteFamily out;
  out.base = dom_a;
  for (auto& a : dom_a) {
    auto it = f.find(a);
    if (it == f.end()) throw TypeError("reindexing function undefined at " + a.show());
    if (!fam_b.fibres.count(it->second))
      throw TypeError("reindexing function maps " + a.show() + " outside the target base");
    out.fibres[a] = fam_b.fibre(it->second);
  }
  return out;
}

static Token pair_token(const Value& a, const Token& p) { return "(" + a.show() + "|" + p + ")"; }

FiniteFamily op_reindex(const std::map<Value, Value>& f, const FiniteFamily& fam_a,
                        const std::vector<Value>& base_b) {
  FiniteFamily out;
  out.base = base_b;
  for (auto& b : base_b) out.fibres[b] = {};
  for (auto& a : fam_a.base) {
    auto it = f.find(a);
    if (it == f.end()) throw TypeError("op-reindexing function undefined at " + a.show());
    auto fit = out.fibres.find(it->second);
    if (fit == out.fibres.end())
      throw TypeError("op-reindexing function maps " + a.show() + " outside the target base");
    for (auto& p : fam_a.fibre(a)) fit->second.push_back(pair_token(a, p));
  }
  return out;
}

FiniteFamily truth(std::vector<Value> base) {
  FiniteFamily out;
  out.base = std::move(base);
  for (auto& a : out.base) out.fibres[a] = {"*"};
  return out;
}

std::vector<std::pair<Value, Token>> comprehension(const FiniteFamily& fam) {
  std::vector<std::pair<Value, Token>> out;
  for (auto& a : fam.base)
    for (auto& p : fam.fibre(a)) out.push_back({a, p});
  return out;
}

Value encode_layer(const Layer& l) {
  std::vector<Value> items;
  for (auto& v : l.exvars) items.push_back(v);
  for (auto& v : l.consts) items.push_back(v);
  for (auto& v : l.recs) items.push_back(v);
  return Value::tagged(l.ctor, Value::tuple(std::move(items)));
}

Layer layer_map(const std::map<Value, Value>& f, const Layer& l) {
  Layer out = l;
  for (auto& r : out.recs) {
    auto it = f.find(r);
    if (it == f.end()) throw TypeError("layer map undefined at position value " + r.show());
    r = it->second;
  }
  return out;
}

FiniteFamily lift(const FunctorCode& c, const FiniteFamily& fam) {
  if (c.indexed()) throw TypeError("lifting is defined here for Unit-indexed codes only");
  FiniteFamily out;
  for (auto& layer : enumerate_layers(c, fam.base)) {
    Value key = encode_layer(layer);
    out.base.push_back(key);
    // Fibre = product of the fibres at the recursive positions: the layers
    // over comprehension pairs that strip back to this layer.
    std::vector<const std::vector<Token>*> parts;
    bool any_empty = false;
    for (auto& r : layer.recs) {
      parts.push_back(&fam.fibre(r));
      if (parts.back()->empty()) any_empty = true;
    }
    std::vector<Token> toks;
    if (!any_empty) {
      std::vector<size_t> idx(parts.size(), 0);
      while (true) {
        std::string t = "<";
        for (size_t k = 0; k < parts.size(); ++k) {
          if (k) t += "|";
          t += (*parts[k])[idx[k]];
        }
        t += ">";
        toks.push_back(t);
        size_t j = parts.size();
        bool done = parts.empty();
        while (j > 0) {
          --j;
          if (++idx[j] < parts[j]->size()) break;
          idx[j] = 0;
          if (j == 0) done = true;
        }
        if (done) break;
      }
    }
    out.fibres[key] = std::move(toks);
  }
  return out;
}

CheckResult families_isomorphic(const FiniteFamily& lhs, const FiniteFamily& rhs) {
  std::set<Value> lb(lhs.base.begin(), lhs.base.end());
  std::set<Value> rb(rhs.base.begin(), rhs.base.end());
  if (lb != rb) return {false, "base sets differ"};
  for (auto& a : lhs.base) {
    size_t nl = lhs.fibre(a).size(), nr = rhs.fibre(a).size();
    if (nl != nr)
      return {false, "fibre over " + a.show() + ": " + std::to_string(nl) + " vs " +
                         std::to_string(nr) + " tokens"};
  }
  return {true, ""};
}

CheckResult check_lift_reindex(const FunctorCode& c, const std::map<Value, Value>& f,
                               const std::vector<Value>& dom_a, const FiniteFamily& fam_b) {
  FiniteFamily lhs = lift(c, reindex(f, dom_a, fam_b));  // F-hat_A (f* Q)
  FiniteFamily lifted_b = lift(c, fam_b);                // F-hat_B Q
  // (F f)* over the layers of F A.
  std::map<Value, Value> ff;
  for (auto& layer : enumerate_layers(c, dom_a))
    ff[encode_layer(layer)] = encode_layer(layer_map(f, layer));
  FiniteFamily rhs = reindex(ff, lhs.base, lifted_b);
  auto r = families_isomorphic(lhs, rhs);
  if (!r.pass) r.detail = "lift/reindex: " + r.detail;
  return r;
}

CheckResult check_lift_opreindex(const FunctorCode& c, const std::map<Value, Value>& f,
                                 const FiniteFamily& fam_a, const std::vector<Value>& base_b) {
  FiniteFamily lhs = lift(c, op_reindex(f, fam_a, base_b));  // F-hat_B (Sigma_f P)
  FiniteFamily lifted_a = lift(c, fam_a);                    // F-hat_A P
  std::map<Value, Value> ff;
  for (auto& layer : enumerate_layers(c, fam_a.base))
    ff[encode_layer(layer)] = encode_layer(layer_map(f, layer));
  FiniteFamily rhs = op_reindex(ff, lifted_a, lhs.base);  // Sigma_{F f} (F-hat_A P)
  auto r = families_isomorphic(lhs, rhs);
  if (!r.pass) r.detail = "lift/op-reindex: " + r.detail;
  return r;
}

CheckResult check_very_strong_coproducts(const std::map<Value, Value>& f,
                                         const FiniteFamily& fam_a,
                                         const std::vector<Value>& base_b) {
  FiniteFamily sigma = op_reindex(f, fam_a, base_b);
  auto lhs = comprehension(fam_a);
  auto rhs = comprehension(sigma);
  if (lhs.size() != rhs.size())
    return {false, "comprehension sizes differ: " + std::to_string(lhs.size()) + " vs " +
                       std::to_string(rhs.size())};
  // The explicit pairing bijection {psi}: (a, p) -> (f a, (a|p)), which must
  // land exactly on Sigma_f's tokens and commute with pi over f.
  std::set<std::pair<Value, Token>> target(rhs.begin(), rhs.end());
  for (auto& [a, p] : lhs) {
    auto it = f.find(a);
    if (it == f.end()) return {false, "f undefined at " + a.show()};
    std::pair<Value, Token> image{it->second, pair_token(a, p)};
    if (!target.count(image))
      return {false, "pairing misses (" + a.show() + ", " + p + ")"};
    target.erase(image);  // injectivity
  }
  if (!target.empty()) return {false, "pairing is not onto"};
  return {true, ""};
}

CheckResult check_truth_preservation(const FunctorCode& c, const std::vector<Value>& base) {
  FiniteFamily lifted = lift(c, truth(base));
  for (auto& [key, toks] : lifted.fibres)
    if (toks.size() != 1)
      return {false, "fibre over " + key.show() + " has " + std::to_string(toks.size()) +
                         " tokens, expected a singleton"};
  return {true, ""};
}

CheckResult check_non_introduction(const FunctorCode& c, const std::vector<Value>& a_values) {
  // Positions range over 1+A.
  std::vector<Value> error_values{Value::fail()};
  for (auto& a : a_values) error_values.push_back(Value::ok(a));
  for (auto& x : enumerate_layers(c, error_values)) {
    bool all_ok = true;
    for (auto& r : x.recs)
      if (!r.is_ok()) all_ok = false;
    auto lx = dist_law(c, x);
    if (all_ok) {
      // Unit law / right-to-left: lambda (F ok y) must be ok y.
      if (!lx) return {false, "unit law broken at " + show_layer(x)};
      Layer y = *lx;
      for (size_t k = 0; k < y.recs.size(); ++k)
        if (Value::ok(y.recs[k]) != x.recs[k])
          return {false, "stripped layer mismatch at " + show_layer(x)};
    } else {
      // Left-to-right: a failing position must force fail.
      if (lx) return {false, "failure dropped at " + show_layer(x)};
    }
  }
  return {true, ""};
}

// ---- Psi / Phi -----------------------------------------------------------------

void SlicedFamily::validate(const std::vector<Value>& base_d) const {
  fam.validate();
  std::set<Value> d(base_d.begin(), base_d.end());
  for (auto& a : fam.base)
    for (auto& p : fam.fibre(a)) {
      auto it = to_d.find({a, p});
      if (it == to_d.end())
        throw TypeError("slice map undefined at (" + a.show() + ", " + p + ")");
      if (!d.count(it->second)) throw TypeError("slice map lands outside D");
    }
}

SlicedFamily psi(const FiniteFamily& x_over_dxa, const std::vector<Value>& base_d,
                 const std::vector<Value>& base_a) {
  SlicedFamily out;
  out.fam.base = base_a;
  for (auto& a : base_a) out.fam.fibres[a] = {};
  for (auto& a : base_a)
    for (auto& d : base_d) {
      Value key = Value::tuple({d, a});
      for (auto& p : x_over_dxa.fibre(key)) {
        Token t = pair_token(d, p);
        out.fam.fibres[a].push_back(t);
        out.to_d[{a, t}] = d;
      }
    }
  return out;
}

FiniteFamily phi(const SlicedFamily& xf, const std::vector<Value>& base_d,
                 const std::vector<Value>& base_a) {
  FiniteFamily out;
  for (auto& d : base_d)
    for (auto& a : base_a) {
      Value key = Value::tuple({d, a});
      out.base.push_back(key);
      std::vector<Token> toks;
      for (auto& p : xf.fam.fibre(a))
        if (xf.to_d.at({a, p}) == d) toks.push_back(p);
      out.fibres[key] = std::move(toks);
    }
  return out;
}

CheckResult sliced_isomorphic(const SlicedFamily& lhs, const SlicedFamily& rhs) {
  std::set<Value> lb(lhs.fam.base.begin(), lhs.fam.base.end());
  std::set<Value> rb(rhs.fam.base.begin(), rhs.fam.base.end());
  if (lb != rb) return {false, "base sets differ"};
  for (auto& a : lhs.fam.base) {
    // Group both fibres by their D image; a vertical iso over Set/D must
    // respect the map to D, so per-d cardinalities have to agree.
    std::map<Value, size_t> lg, rg;
    for (auto& p : lhs.fam.fibre(a)) lg[lhs.to_d.at({a, p})]++;
    for (auto& p : rhs.fam.fibre(a)) rg[rhs.to_d.at({a, p})]++;
    if (lg != rg) return {false, "slice fibres over " + a.show() + " differ"};
  }
  return {true, ""};
}

CheckResult check_psi_phi_roundtrip(const FiniteFamily& x, const std::vector<Value>& base_d,
                                    const std::vector<Value>& base_a) {
  FiniteFamily back = phi(psi(x, base_d, base_a), base_d, base_a);
  auto r = families_isomorphic(x, back);
  if (!r.pass) r.detail = "Phi(Psi(X)) != X: " + r.detail;
  return r;
}

CheckResult check_phi_psi_roundtrip(const SlicedFamily& xf, const std::vector<Value>& base_d,
                                    const std::vector<Value>& base_a) {
  SlicedFamily back = psi(phi(xf, base_d, base_a), base_d, base_a);
  auto r = sliced_isomorphic(xf, back);
  if (!r.pass) r.detail = "Psi(Phi(X,f)) != (X,f): " + r.detail;
  return r;
}

// ---- random instances ------------------------------------------------------------

RandomInstance random_instance(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto small = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  RandomInstance inst;
  int na = small(1, 3), nb = small(1, 3);
  for (int k = 0; k < na; ++k) inst.base_a.push_back(Value::integer(k));
  for (int k = 0; k < nb; ++k) inst.base_b.push_back(Value::integer(100 + k));
  for (auto& a : inst.base_a) inst.f[a] = inst.base_b[rng() % inst.base_b.size()];
  auto random_family = [&](const std::vector<Value>& base, const char* prefix) {
    FiniteFamily fam;
    fam.base = base;
    int i = 0;
    for (auto& a : base) {
      int n = small(0, 3);
      std::vector<Token> toks;
      for (int j = 0; j < n; ++j)
        toks.push_back(std::string(prefix) + std::to_string(i) + "_" + std::to_string(j));
      fam.fibres[a] = std::move(toks);
      ++i;
    }
    return fam;
  };
  inst.fam_a = random_family(inst.base_a, "p");
  inst.fam_b = random_family(inst.base_b, "q");
  return inst;
}

LemmaSuiteResult run_lemma_suite(uint64_t seed, int trials) {
  LemmaSuiteResult res;
  res.trials = trials;
  auto shapes = sample_lemma_shapes();
  for (int t = 0; t < trials; ++t) {
    RandomInstance inst = random_instance(seed * 1000003ULL + static_cast<uint64_t>(t));
    for (auto& [name, code] : shapes) {
      auto record = [&](const char* what, const CheckResult& r) {
        ++res.checks;
        if (!r.pass)
          res.failures.push_back(name + "/" + what + " (trial " + std::to_string(t) +
                                 "): " + r.detail);
      };
      record("lift-reindex", check_lift_reindex(*code, inst.f, inst.base_a, inst.fam_b));
      record("lift-opreindex", check_lift_opreindex(*code, inst.f, inst.fam_a, inst.base_b));
      record("very-strong-coproducts",
             check_very_strong_coproducts(inst.f, inst.fam_a, inst.base_b));
      record("truth-preservation", check_truth_preservation(*code, inst.base_a));
    }
    // Psi/Phi round trips over a random family on D x A.
    std::vector<Value> dxa;
    for (auto& d : inst.base_b)
      for (auto& a : inst.base_a) dxa.push_back(Value::tuple({d, a}));
    std::mt19937_64 rng(seed * 7919ULL + static_cast<uint64_t>(t));
    FiniteFamily x;
    x.base = dxa;
    int i = 0;
    for (auto& k : dxa) {
      std::vector<Token> toks;
      int n = static_cast<int>(rng() % 3);
      for (int j = 0; j < n; ++j)
        toks.push_back("x" + std::to_string(i) + "_" + std::to_string(j));
      x.fibres[k] = std::move(toks);
      ++i;
    }
    ++res.checks;
    auto r1 = check_psi_phi_roundtrip(x, inst.base_b, inst.base_a);
    if (!r1.pass) res.failures.push_back("psi-phi (trial " + std::to_string(t) + "): " + r1.detail);
    ++res.checks;
    auto r2 = check_phi_psi_roundtrip(psi(x, inst.base_b, inst.base_a), inst.base_b, inst.base_a);
    if (!r2.pass) res.failures.push_back("phi-psi (trial " + std::to_string(t) + "): " + r2.detail);
  }
  // Non-introduction of failure per shape, exhaustively over a 3-element A.
  std::vector<Value> a3{Value::integer(0), Value::integer(1), Value::integer(2)};
  for (auto& [name, code] : shapes) {
    ++res.checks;
    auto r = check_non_introduction(*code, a3);
    if (!r.pass) res.failures.push_back(name + "/non-introduction: " + r.detail);
  }
  return res;
}

}  // namespace refinery
