#include "refinery/code.hpp"

#include <algorithm>
#include <set>

namespace refinery {

const ConstructorSpec* FunctorCode::find(const std::string& ctor) const {
  for (auto& c : constructors)
    if (c.name == ctor) return &c;
  return nullptr;
}

TermPtr Term::make(std::string ctor, std::vector<Value> exvars, std::vector<Value> consts,
                   std::vector<TermPtr> subs) {
  auto t = std::make_shared<Term>();
  t->ctor = std::move(ctor);
  t->exvars = std::move(exvars);
  t->consts = std::move(consts);
  t->subs = std::move(subs);
  return t;
}

size_t term_size(const Term& t) {
  size_t n = 1;
  for (auto& s : t.subs) n += term_size(*s);
  return n;
}

size_t term_size(const RefinedTerm& t) {
  size_t n = 1;
  for (auto& s : t.subs) n += term_size(*s);
  return n;
}

static int value_vec_compare(const std::vector<Value>& a, const std::vector<Value>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t k = 0; k < a.size(); ++k)
    if (int c = Value::compare(a[k], b[k])) return c;
  return 0;
}

int term_compare(const Term& a, const Term& b) {
  if (int c = a.ctor.compare(b.ctor)) return c;
  if (int c = value_vec_compare(a.exvars, b.exvars)) return c;
  if (int c = value_vec_compare(a.consts, b.consts)) return c;
  if (a.subs.size() != b.subs.size()) return a.subs.size() < b.subs.size() ? -1 : 1;
  for (size_t k = 0; k < a.subs.size(); ++k)
    if (int c = term_compare(*a.subs[k], *b.subs[k])) return c;
  return 0;
}

bool term_equal(const Term& a, const Term& b) { return term_compare(a, b) == 0; }

template <typename T>
static std::string show_term_impl(const T& t) {
  std::string out = "@" + t.ctor;
  size_t total = t.exvars.size() + t.consts.size() + t.subs.size();
  if (total == 0) return out;
  out += "(";
  bool first = true;
  auto add = [&](const std::string& s) {
    if (!first) out += ", ";
    first = false;
    out += s;
  };
  for (auto& v : t.exvars) add(v.show());
  for (auto& v : t.consts) add(v.show());
  for (auto& s : t.subs) add(show_term_impl(*s));
  return out + ")";
}

std::string show_term(const Term& t) { return show_term_impl(t); }
std::string show_term(const RefinedTerm& t) { return show_term_impl(t); }

int layer_compare(const Layer& a, const Layer& b) {
  if (int c = a.ctor.compare(b.ctor)) return c;
  if (int c = value_vec_compare(a.exvars, b.exvars)) return c;
  if (int c = value_vec_compare(a.consts, b.consts)) return c;
  return value_vec_compare(a.recs, b.recs);
}

std::string show_layer(const Layer& l) {
  std::string out = l.ctor;
  size_t total = l.exvars.size() + l.consts.size() + l.recs.size();
  if (total == 0) return out;
  out += "(";
  bool first = true;
  auto add = [&](const Value& v) {
    if (!first) out += ", ";
    first = false;
    out += v.show();
  };
  for (auto& v : l.exvars) add(v);
  for (auto& v : l.consts) add(v);
  for (auto& v : l.recs) add(v);
  return out + ")";
}

std::vector<Layer> enumerate_layers(const FunctorCode& c, const std::vector<Value>& recs_from) {
  std::vector<Layer> out;
  for (auto& ctor : c.constructors) {
    std::vector<std::vector<Value>> parts;
    for (auto& [n, d] : ctor.exvars) {
      if (!domain_is_finite(*d))
        throw InfiniteDomain("existential variable " + n + " of " + ctor.name +
                             " has infinite domain");
      parts.push_back(enumerate_domain(*d));
    }
    for (auto& [n, d] : ctor.const_fields) {
      if (!domain_is_finite(*d))
        throw InfiniteDomain("field " + n + " of " + ctor.name + " has infinite domain");
      parts.push_back(enumerate_domain(*d));
    }
    for (size_t k = 0; k < ctor.rec_fields.size(); ++k) parts.push_back(recs_from);
    bool empty = false;
    for (auto& p : parts)
      if (p.empty()) empty = true;
    if (empty) continue;
    std::vector<size_t> idx(parts.size(), 0);
    while (true) {
      Layer l;
      l.ctor = ctor.name;
      size_t k = 0;
      for (size_t i = 0; i < ctor.exvars.size(); ++i) l.exvars.push_back(parts[k][idx[k]]), ++k;
      for (size_t i = 0; i < ctor.const_fields.size(); ++i)
        l.consts.push_back(parts[k][idx[k]]), ++k;
      for (size_t i = 0; i < ctor.rec_fields.size(); ++i) l.recs.push_back(parts[k][idx[k]]), ++k;
      out.push_back(std::move(l));
      size_t j = parts.size();
      bool done = parts.empty();
      while (j > 0) {
        --j;
        if (++idx[j] < parts[j].size()) break;
        idx[j] = 0;
        if (j == 0) done = true;
      }
      if (done) break;
    }
  }
  return out;
}

// ---- static validation -------------------------------------------------------

namespace {

// Variables that must be valuated for dependent typing to concretize: every
// DP-typed variable (its base component), plus finite-domain variables that
// occur inside a dependent-pair base expression.
void collect_dep_base_vars(const Expr& e, std::set<std::string>& out) {
  if (e.empty()) return;
  if (e.kind() == ExprKind::MkDepPair) {
    for (auto& v : e.args()[0].free_vars()) out.insert(v);
  }
  for (auto& a : e.args()) collect_dep_base_vars(a, out);
  for (auto& br : e.branches()) collect_dep_base_vars(br.body, out);
}

}  // namespace

std::vector<TypeCtx> constructor_type_contexts(const FunctorCode& c, const ConstructorSpec& ctor) {
  TypeCtx base;
  for (auto& [n, d] : ctor.exvars) base.vars[n] = d;
  for (auto& [n, d] : ctor.const_fields) base.vars[n] = d;

  // Which variables have DP domains, and which occur in dep-base positions.
  std::vector<std::pair<std::string, DomainPtr>> dp_vars;
  std::set<std::string> dep_base_vars;
  auto scan = [&](const Expr& e) {
    if (!e.empty()) collect_dep_base_vars(e, dep_base_vars);
  };
  for (auto& rf : ctor.rec_fields) scan(rf.index_expr);
  if (ctor.guard) scan(*ctor.guard);
  scan(ctor.result_index);
  for (auto& [n, d] : base.vars)
    if (d->kind == DomainKind::DependentPair) dp_vars.push_back({n, d});

  if (dp_vars.empty() && dep_base_vars.empty()) return {base};

  // Enumerate sigma over DP bases and finite dep-base variables; infinite
  // dep-base variables are a static error surfaced through check_expr later.
  struct Axis {
    std::string var;
    bool is_base;  // valuates sigma_base[var] instead of sigma[var]
    std::vector<Value> values;
  };
  std::vector<Axis> axes;
  for (auto& [n, d] : dp_vars) axes.push_back({n, true, enumerate_domain(*d->base)});
  for (auto& n : dep_base_vars) {
    auto it = base.vars.find(n);
    if (it == base.vars.end()) continue;
    if (it->second->kind == DomainKind::DependentPair) continue;  // covered above
    if (!domain_is_finite(*it->second))
      throw TypeError("variable " + n +
                      " discriminates a dependent index but has an infinite domain");
    axes.push_back({n, false, enumerate_domain(*it->second)});
  }
  if (axes.empty()) return {base};

  std::vector<TypeCtx> out;
  std::vector<size_t> idx(axes.size(), 0);
  while (true) {
    TypeCtx ctx = base;
    for (size_t k = 0; k < axes.size(); ++k) {
      if (axes[k].is_base)
        ctx.sigma_base[axes[k].var] = axes[k].values[idx[k]];
      else
        ctx.sigma[axes[k].var] = axes[k].values[idx[k]];
    }
    // Prune valuations excluded by statically evaluable guard conjuncts.
    bool viable = true;
    if (ctor.guard) {
      std::function<void(const Expr&)> prune = [&](const Expr& g) {
        if (g.kind() == ExprKind::And) {
          prune(g.args()[0]);
          prune(g.args()[1]);
          return;
        }
        auto v = partial_eval(g, ctx.sigma, ctx.sigma_base);
        if (v && v->kind() == Value::Kind::Bool && !v->as_bool()) viable = false;
      };
      prune(*ctor.guard);
    }
    if (viable) out.push_back(std::move(ctx));
    size_t j = axes.size();
    bool done = false;
    while (j > 0) {
      --j;
      if (++idx[j] < axes[j].values.size()) break;
      idx[j] = 0;
      if (j == 0) done = true;
    }
    if (done) break;
  }
  if (out.empty()) out.push_back(base);  // fully pruned: keep one plain context
  return out;
}

ValidationReport wellformed_code(const FunctorCode& c, const DomainPtr& forget_domain) {
  ValidationReport report;
  std::set<std::string> names;
  bool has_base = false;
  for (auto& ctor : c.constructors) {
    if (!names.insert(ctor.name).second)
      report.add(c.name + "." + ctor.name, "duplicate constructor name", ctor.span);
    if (ctor.rec_fields.empty()) has_base = true;

    std::set<std::string> field_names;
    for (auto& [n, _] : ctor.exvars)
      if (!field_names.insert(n).second)
        report.add(c.name + "." + ctor.name, "duplicate field name " + n, ctor.span);
    for (auto& [n, _] : ctor.const_fields)
      if (!field_names.insert(n).second)
        report.add(c.name + "." + ctor.name, "duplicate field name " + n, ctor.span);
    for (auto& rf : ctor.rec_fields)
      if (!field_names.insert(rf.name).second)
        report.add(c.name + "." + ctor.name, "duplicate field name " + rf.name, ctor.span);

    std::set<std::string> forget_ok;
    for (auto& rf : ctor.rec_fields) forget_ok.insert(rf.name);

    std::vector<TypeCtx> ctxs;
    try {
      ctxs = constructor_type_contexts(c, ctor);
    } catch (const Error& err) {
      report.add(c.name + "." + ctor.name, err.what(), err.span);
      continue;
    }
    for (auto& ctx0 : ctxs) {
      TypeCtx ctx = ctx0;
      ctx.allow_forget = forget_domain != nullptr;
      ctx.forget_fields = &forget_ok;
      ctx.forget_domain = forget_domain;
      auto check_one = [&](const Expr& e, const DomainPtr& want, const std::string& what) {
        try {
          check_expr(e, ctx, want);
        } catch (const Error& err) {
          report.add(c.name + "." + ctor.name + " " + what, err.what(), err.span);
        }
      };
      for (auto& rf : ctor.rec_fields)
        check_one(rf.index_expr, c.index_domain, "index of " + rf.name);
      if (ctor.guard) check_one(*ctor.guard, Domain::boolean(), "guard");
      check_one(ctor.result_index, c.index_domain, "result index");
      if (!c.indexed()) {
        // For Unit-indexed codes all index expressions must be the unit literal.
        for (auto& rf : ctor.rec_fields)
          if (rf.index_expr.kind() != ExprKind::UnitLit)
            report.add(c.name + "." + ctor.name, "index expression on a plain code", ctor.span);
        if (ctor.result_index.kind() != ExprKind::UnitLit)
          report.add(c.name + "." + ctor.name, "result index on a plain code", ctor.span);
      }
    }
  }
  if (!has_base && !c.uninhabited_ok && !c.constructors.empty())
    report.add(c.name, "every constructor is recursive; the code is uninhabited (flag it if intended)");
  if (c.constructors.empty()) report.add(c.name, "code has no constructors");
  return report;
}

// ---- term checking -------------------------------------------------------------

namespace {

Value check_term_at(const FunctorCode& c, const Term& t, const std::string& path) {
  const ConstructorSpec* ctor = c.find(t.ctor);
  if (!ctor) throw IllFormedTerm(path, "unknown constructor " + t.ctor);
  if (t.exvars.size() != ctor->exvars.size())
    throw IllFormedTerm(path, "expected " + std::to_string(ctor->exvars.size()) +
                                  " existential values, got " + std::to_string(t.exvars.size()));
  if (t.consts.size() != ctor->const_fields.size())
    throw IllFormedTerm(path, "expected " + std::to_string(ctor->const_fields.size()) +
                                  " field values, got " + std::to_string(t.consts.size()));
  if (t.subs.size() != ctor->rec_fields.size())
    throw IllFormedTerm(path, "expected " + std::to_string(ctor->rec_fields.size()) +
                                  " subterms, got " + std::to_string(t.subs.size()));

  Env env;
  for (size_t k = 0; k < ctor->exvars.size(); ++k) {
    if (!value_in_domain(t.exvars[k], ctor->exvars[k].second))
      throw IllFormedTerm(path, "existential " + ctor->exvars[k].first + " = " +
                                    t.exvars[k].show() + " is not in " +
                                    ctor->exvars[k].second->show());
    env[ctor->exvars[k].first] = t.exvars[k];
  }
  for (size_t k = 0; k < ctor->const_fields.size(); ++k) {
    if (!value_in_domain(t.consts[k], ctor->const_fields[k].second))
      throw IllFormedTerm(path, "field " + ctor->const_fields[k].first + " = " +
                                    t.consts[k].show() + " is not in " +
                                    ctor->const_fields[k].second->show());
    env[ctor->const_fields[k].first] = t.consts[k];
  }
  for (size_t k = 0; k < ctor->rec_fields.size(); ++k) {
    Value sub_index = check_term_at(c, *t.subs[k], path + "." + std::to_string(k + 1));
    Value required = eval_expr(ctor->rec_fields[k].index_expr, env);
    if (sub_index != required)
      throw IllFormedTerm(path, "subterm " + ctor->rec_fields[k].name + " has index " +
                                    sub_index.show() + " but the constructor requires " +
                                    required.show());
  }
  if (ctor->guard) {
    Value g = eval_expr(*ctor->guard, env);
    if (!g.as_bool())
      throw IllFormedTerm(path, "premise " + ctor->guard->show() + " does not hold");
  }
  return eval_expr(ctor->result_index, env);
}

}  // namespace

Value check_term(const FunctorCode& c, const Term& t) { return check_term_at(c, t, "root"); }

TermPtr strip(const RefinedTerm& rt) {
  std::vector<TermPtr> subs;
  for (auto& s : rt.subs) subs.push_back(strip(*s));
  return Term::make(rt.ctor, rt.exvars, rt.consts, std::move(subs));
}

}  // namespace refinery
