#include "refinery/algebra.hpp"

namespace refinery {

Env Clause::bind(const std::vector<Value>& values) const {
  if (values.size() != params.size())
    throw ClauseMismatch("clause arity mismatch: " + std::to_string(params.size()) +
                         " parameters, " + std::to_string(values.size()) + " values");
  Env env;
  for (size_t k = 0; k < params.size(); ++k) env[params[k]] = values[k];
  return env;
}

const Clause& AlgebraSpec::clause(const std::string& ctor) const {
  auto it = clauses.find(ctor);
  if (it == clauses.end())
    throw ClauseMismatch("algebra " + name + " has no clause for constructor " + ctor);
  return it->second;
}

DomainPtr AlgebraSpec::rec_var_domain() const {
  if (kind == AlgebraKind::ZygoGamma) return Domain::product({companion, carrier});
  return carrier;
}

void ZygoPair::validate() const {
  if (delta.kind != AlgebraKind::Total) throw TypeError("zygo delta must be a total algebra");
  if (gamma.kind != AlgebraKind::ZygoGamma) throw TypeError("zygo gamma must be a zygo algebra");
  if (delta.subject != gamma.subject)
    throw TypeError("zygo pair must be over a single subject code");
  if (!gamma.companion || !domain_equal(gamma.companion, delta.carrier))
    throw TypeError("zygo gamma companion domain must be delta's carrier");
}

Value eval_clause(const AlgebraSpec& alg, const std::string& ctor, const Env& env) {
  return eval_expr(alg.clause(ctor).body, env);
}

Value eval_partial_clause(const AlgebraSpec& kappa, const std::string& ctor, const Env& env) {
  if (kappa.kind != AlgebraKind::Partial) throw TypeError("not a partial algebra: " + kappa.name);
  return eval_expr(kappa.clause(ctor).body, env);
}

std::optional<Layer> dist_law(const FunctorCode& c, const Layer& x) {
  const ConstructorSpec* ctor = c.find(x.ctor);
  if (!ctor) throw TypeError("layer constructor " + x.ctor + " is not in " + c.name);
  Layer out;
  out.ctor = x.ctor;
  out.exvars = x.exvars;
  out.consts = x.consts;
  for (auto& v : x.recs) {
    if (v.is_fail()) return std::nullopt;
    if (!v.is_ok()) throw TypeError("distributive law applied to a non 1+A position value");
    out.recs.push_back(v.payload());
  }
  return out;
}

void check_clause_coverage(const FunctorCode& c, const AlgebraSpec& alg) {
  for (auto& ctor : c.constructors) {
    auto it = alg.clauses.find(ctor.name);
    if (it == alg.clauses.end())
      throw ClauseMismatch("algebra " + alg.name + " is missing a clause for " + ctor.name);
    size_t want = ctor.exvars.size() + ctor.const_fields.size() + ctor.rec_fields.size();
    if (it->second.params.size() != want)
      throw ClauseMismatch("clause " + ctor.name + " of " + alg.name + " binds " +
                           std::to_string(it->second.params.size()) + " parameters but " +
                           ctor.name + " has " + std::to_string(want) + " fields");
  }
  for (auto& [name, _] : alg.clauses)
    if (!c.find(name))
      throw ClauseMismatch("algebra " + alg.name + " has a clause for unknown constructor " + name);
}

namespace {

void check_nf_body(const Expr& e, const std::string& ctx) {
  switch (e.kind()) {
    case ExprKind::If:
      check_nf_body(e.args()[1], ctx);
      check_nf_body(e.args()[2], ctx);
      return;
    case ExprKind::Case:
      for (auto& br : e.branches()) {
        if (!br.binder.empty())
          throw NotNormalForm(ctx + ": case branches over tagged sums are not allowed in partial clauses");
        check_nf_body(br.body, ctx);
      }
      return;
    case ExprKind::MkTagged:
    case ExprKind::Call:
    case ExprKind::Name:
      if (e.str() == "ok" || e.str() == "fail") return;
      throw NotNormalForm(ctx + ": leaf " + e.show() + " is neither ok(...) nor fail", e.span());
    default:
      throw NotNormalForm(ctx + ": " + e.show() + " is not a guard tree with ok/fail leaves",
                          e.span());
  }
}

}  // namespace

void check_normal_form(const FunctorCode& c, const AlgebraSpec& kappa) {
  if (kappa.kind != AlgebraKind::Partial)
    throw TypeError("normal-form check applies to partial algebras");
  for (auto& ctor : c.constructors)
    check_nf_body(kappa.clause(ctor.name).body, kappa.name + "." + ctor.name);
}

// ---- fold -------------------------------------------------------------------------

Value fold(const FunctorCode& c, const AlgebraSpec& alg, const Term& t) {
  if (alg.kind != AlgebraKind::Total)
    throw TypeError("fold requires a total algebra (pair or totalize first)");
  const ConstructorSpec* ctor = c.find(t.ctor);
  if (!ctor) throw IllFormedTerm("root", "unknown constructor " + t.ctor);
  std::vector<Value> values;
  values.reserve(t.exvars.size() + t.consts.size() + t.subs.size());
  for (auto& v : t.exvars) values.push_back(v);
  for (auto& v : t.consts) values.push_back(v);
  for (auto& s : t.subs) values.push_back(fold(c, alg, *s));
  const Clause& cl = alg.clause(t.ctor);
  return eval_expr(cl.body, cl.bind(values));
}

// ---- derived algebras ----------------------------------------------------------------

namespace {

// Fresh positional parameter names v1, v2, ... for synthesized clauses.
std::vector<std::string> positional_params(const ConstructorSpec& ctor) {
  std::vector<std::string> params;
  size_t n = ctor.exvars.size() + ctor.const_fields.size() + ctor.rec_fields.size();
  for (size_t k = 0; k < n; ++k) params.push_back("v" + std::to_string(k + 1));
  return params;
}

}  // namespace

AlgebraSpec totalize(const FunctorCode& c, const AlgebraSpec& kappa) {
  if (kappa.kind != AlgebraKind::Partial)
    throw TypeError("totalize applies to partial algebras");
  check_clause_coverage(c, kappa);
  AlgebraSpec out;
  out.name = kappa.name + "_bar";
  out.kind = AlgebraKind::Total;
  out.subject = kappa.subject;
  out.carrier = Domain::error_sum(kappa.carrier);
  for (auto& ctor : c.constructors) {
    const Clause& k = kappa.clause(ctor.name);
    Clause cl;
    cl.params = positional_params(ctor);
    // kappa's body over the ok payloads of the recursive positions.
    std::map<std::string, Expr> repl;
    size_t nfixed = ctor.exvars.size() + ctor.const_fields.size();
    for (size_t i = 0; i < nfixed; ++i) repl[k.params[i]] = Expr::var(cl.params[i]);
    std::vector<std::string> ok_binders;
    for (size_t r = 0; r < ctor.rec_fields.size(); ++r) {
      std::string binder = "u" + std::to_string(r + 1);
      ok_binders.push_back(binder);
      repl[k.params[nfixed + r]] = Expr::var(binder);
    }
    Expr body = k.body.substitute(repl);
    // dist_law then cotuple [fail, kappa]: peel each recursive position.
    for (size_t r = ctor.rec_fields.size(); r > 0; --r) {
      std::vector<ExprBranch> brs;
      brs.push_back(ExprBranch{"fail", "", Expr::tagged("fail", std::nullopt)});
      brs.push_back(ExprBranch{"ok", ok_binders[r - 1], body});
      body = Expr::case_of(Expr::var(cl.params[nfixed + r - 1]), std::move(brs));
    }
    cl.body = body;
    out.clauses[ctor.name] = std::move(cl);
  }
  return out;
}

AlgebraSpec pair_algebra(const FunctorCode& c, const ZygoPair& z) {
  z.validate();
  check_clause_coverage(c, z.delta);
  check_clause_coverage(c, z.gamma);
  AlgebraSpec out;
  out.name = z.gamma.name + "_paired";
  out.kind = AlgebraKind::Total;
  out.subject = z.gamma.subject;
  out.carrier = Domain::product({z.delta.carrier, z.gamma.carrier});
  for (auto& ctor : c.constructors) {
    const Clause& dcl = z.delta.clause(ctor.name);
    const Clause& gcl = z.gamma.clause(ctor.name);
    Clause cl;
    cl.params = positional_params(ctor);
    size_t nfixed = ctor.exvars.size() + ctor.const_fields.size();
    std::map<std::string, Expr> drepl, grepl;
    for (size_t i = 0; i < nfixed; ++i) {
      drepl[dcl.params[i]] = Expr::var(cl.params[i]);
      grepl[gcl.params[i]] = Expr::var(cl.params[i]);
    }
    for (size_t r = 0; r < ctor.rec_fields.size(); ++r) {
      Expr pair_var = Expr::var(cl.params[nfixed + r]);
      drepl[dcl.params[nfixed + r]] = Expr::proj(pair_var, 0);  // delta . F pi1
      grepl[gcl.params[nfixed + r]] = pair_var;                  // gamma sees the pair
    }
    cl.body = Expr::tuple({dcl.body.substitute(drepl), gcl.body.substitute(grepl)});
    out.clauses[ctor.name] = std::move(cl);
  }
  return out;
}

AlgebraSpec initial_algebra_as_algebra(const CodePtr& c) {
  AlgebraSpec out;
  out.name = "in_" + c->name;
  out.kind = AlgebraKind::Total;
  out.subject = c->name;
  out.carrier = Domain::term(c);
  for (auto& ctor : c->constructors) {
    Clause cl;
    cl.params = positional_params(ctor);
    std::vector<Expr> args;
    for (auto& p : cl.params) args.push_back(Expr::var(p));
    cl.body = Expr::term_ctor_split(ctor.name, std::move(args), ctor.exvars.size(),
                                    ctor.const_fields.size());
    out.clauses[ctor.name] = std::move(cl);
  }
  return out;
}

AlgebraSpec bang_algebra(const FunctorCode& c) {
  AlgebraSpec out;
  out.name = "bang_" + c.name;
  out.kind = AlgebraKind::Total;
  out.subject = c.name;
  out.carrier = Domain::unit();
  for (auto& ctor : c.constructors) {
    Clause cl;
    cl.params = positional_params(ctor);
    cl.body = Expr::unit_lit();
    out.clauses[ctor.name] = std::move(cl);
  }
  return out;
}

}  // namespace refinery
