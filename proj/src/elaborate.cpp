#include "refinery/elaborate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace refinery::dsl {

CodePtr Module::find_code(const std::string& name) const {
  auto it = codes.find(name);
  return it == codes.end() ? nullptr : it->second;
}

namespace {

struct Elab {
  Module mod;
  ValidationReport errors;

  void fail(const std::string& where, const std::string& msg, Span sp) {
    errors.add(where, msg, sp);
  }

  DomainPtr resolve_domain(const SurfaceDomain& d,
                           const std::map<std::string, DomainPtr>* locals) {
    using K = SurfaceDomain::Kind;
    switch (d.kind) {
      case K::Unit:
        return Domain::unit();
      case K::Bool:
        return Domain::boolean();
      case K::Int:
        return Domain::integer();
      case K::Rational:
        return Domain::rational();
      case K::IntRange:
        return Domain::int_range(d.lo, d.hi);
      case K::Enum:
        return Domain::enumeration(d.labels);
      case K::Product: {
        std::vector<DomainPtr> comps;
        for (auto& c : d.components) comps.push_back(resolve_domain(c, locals));
        return Domain::product(std::move(comps));
      }
      case K::Sum: {
        std::vector<std::pair<std::string, DomainPtr>> vars;
        for (auto& [l, sd] : d.variants) vars.push_back({l, resolve_domain(sd, locals)});
        return Domain::tagged_sum(std::move(vars));
      }
      case K::Sigma:
      case K::Family: {
        DomainPtr base = resolve_domain(d.sigma_base.at(0), locals);
        if (!domain_is_finite(*base))
          throw TypeError("dependent pair base must be finite", d.span);
        std::map<Value, DomainPtr> table;
        for (auto& [key_expr, fd] : d.table) {
          TypeCtx ctx;
          Expr key = check_expr(key_expr, ctx, base);
          Value kv = eval_expr(key, {});
          if (table.count(kv)) throw TypeError("duplicate fibre key " + kv.show(), d.span);
          table[kv] = resolve_domain(fd, locals);
        }
        std::vector<std::pair<Value, DomainPtr>> fibres;
        for (auto& bv : enumerate_domain(*base)) {
          auto it = table.find(bv);
          if (it == table.end())
            throw TypeError("fibre table is missing an entry for " + bv.show(), d.span);
          fibres.push_back({bv, it->second});
        }
        if (fibres.size() != table.size())
          throw TypeError("fibre table has entries outside the base", d.span);
        return Domain::dependent_pair(base, std::move(fibres));
      }
      case K::Term: {
        CodePtr c = mod.find_code(d.name);
        if (!c) throw UnknownName("unknown type " + d.name, d.span);
        return Domain::term(c);
      }
      case K::Named: {
        if (locals) {
          auto it = locals->find(d.name);
          if (it != locals->end()) return it->second;
        }
        auto it = mod.domains.find(d.name);
        if (it != mod.domains.end()) return it->second;
        throw UnknownName("unknown domain " + d.name, d.span);
      }
    }
    throw TypeError("unhandled domain form", d.span);
  }

  // ---- type declarations ----------------------------------------------------

  void do_type(const SurfaceType& t) {
    if (mod.codes.count(t.name)) {
      fail(t.name, "duplicate type name", t.span);
      return;
    }
    std::map<std::string, DomainPtr> locals;
    for (auto& [n, sd] : t.params) locals[n] = Domain::with_alias(resolve_domain(sd, nullptr), n);

    auto code = std::make_shared<FunctorCode>();
    code->name = t.name;
    code->uninhabited_ok = t.uninhabited;
    code->index_domain = t.index ? resolve_domain(*t.index, &locals) : Domain::unit();
    bool indexed = code->index_domain->kind != DomainKind::Unit;

    for (auto& sc : t.ctors) {
      ConstructorSpec ctor;
      ctor.name = sc.name;
      ctor.span = sc.span;
      for (auto& [n, sd] : sc.exvars) ctor.exvars.push_back({n, resolve_domain(sd, &locals)});
      std::vector<std::pair<std::string, std::optional<Expr>>> rec_surface;
      for (auto& f : sc.fields) {
        if (f.is_rec)
          rec_surface.push_back({f.name, f.rec_index});
        else
          ctor.const_fields.push_back({f.name, resolve_domain(f.domain, &locals)});
      }

      TypeCtx base_ctx;
      for (auto& [n, dom] : ctor.exvars) base_ctx.vars[n] = dom;
      for (auto& [n, dom] : ctor.const_fields) base_ctx.vars[n] = dom;
      std::set<std::string> rec_names;
      for (auto& [n, _] : rec_surface) rec_names.insert(n);
      base_ctx.allow_forget = true;  // IR data decls re-parse; verified by IR machinery
      base_ctx.forget_fields = &rec_names;
      base_ctx.forget_domain = Domain::integer();  // placeholder; refined IR paths re-check

      // Guard first: it prunes the dependent-typing valuations below.
      if (sc.guard) {
        try {
          ctor.guard = check_expr(*sc.guard, base_ctx, Domain::boolean());
        } catch (const Error& e) {
          fail(t.name + "." + sc.name + " guard", e.what(), e.span);
          return;
        }
      }

      // Valuation axes for dependent index typing.
      struct Axis {
        std::string var;
        bool is_base;
        std::vector<Value> values;
      };
      std::vector<Axis> axes;
      if (indexed) {
        for (auto& [n, dom] : ctor.exvars)
          if (dom->kind == DomainKind::DependentPair)
            axes.push_back({n, true, enumerate_domain(*dom->base)});
        if (code->index_domain->kind == DomainKind::DependentPair && sc.result &&
            sc.result->kind() == ExprKind::MkTuple && sc.result->args().size() == 2) {
          for (auto& fv : sc.result->args()[0].free_vars()) {
            auto it = base_ctx.vars.find(fv);
            if (it == base_ctx.vars.end()) continue;
            if (it->second->kind == DomainKind::DependentPair) continue;
            if (!domain_is_finite(*it->second)) {
              fail(t.name + "." + sc.name, "variable " + fv +
                   " discriminates a dependent index but has an infinite domain", sc.span);
              return;
            }
            axes.push_back({fv, false, enumerate_domain(*it->second)});
          }
        }
      }

      std::vector<TypeCtx> ctxs;
      if (axes.empty()) {
        ctxs.push_back(base_ctx);
      } else {
        std::vector<size_t> idx(axes.size(), 0);
        while (true) {
          TypeCtx ctx = base_ctx;
          for (size_t k = 0; k < axes.size(); ++k) {
            if (axes[k].is_base)
              ctx.sigma_base[axes[k].var] = axes[k].values[idx[k]];
            else
              ctx.sigma[axes[k].var] = axes[k].values[idx[k]];
          }
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
          if (viable) ctxs.push_back(std::move(ctx));
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
        if (ctxs.empty()) ctxs.push_back(base_ctx);
      }

      bool first_ctx = true;
      for (auto& ctx0 : ctxs) {
        TypeCtx ctx = ctx0;
        std::vector<RecField> recs;
        bool ok = true;
        for (auto& [n, idx_expr] : rec_surface) {
          Expr ie = idx_expr ? *idx_expr : Expr::unit_lit();
          if (!indexed && idx_expr) {
            fail(t.name + "." + sc.name, "index expression on a plain type", sc.span);
            ok = false;
            break;
          }
          try {
            recs.push_back({n, check_expr(ie, ctx, code->index_domain)});
          } catch (const Error& e) {
            fail(t.name + "." + sc.name + " index of " + n, e.what(), e.span);
            ok = false;
            break;
          }
        }
        if (!ok) return;
        Expr result = sc.result ? *sc.result : Expr::unit_lit();
        if (!indexed && sc.result) {
          fail(t.name + "." + sc.name, "result index on a plain type", sc.span);
          return;
        }
        Expr result_e;
        try {
          result_e = check_expr(result, ctx, code->index_domain);
        } catch (const Error& e) {
          fail(t.name + "." + sc.name + " result index", e.what(), e.span);
          return;
        }
        if (first_ctx) {
          ctor.rec_fields = std::move(recs);
          ctor.result_index = result_e;
          first_ctx = false;
        }
      }
      code->constructors.push_back(std::move(ctor));
    }

    ValidationReport wf = wellformed_code(*code, Domain::integer());
    for (auto& p : wf.problems) errors.problems.push_back(p);
    mod.codes[t.name] = code;
  }

  // ---- algebras ----------------------------------------------------------------

  struct DesugaredClause {
    Clause clause;
    bool ok = true;
  };

  DesugaredClause desugar_clause(const SurfaceClause& sc, const std::string& where) {
    DesugaredClause out;
    out.clause.span = sc.span;
    std::map<std::string, Expr> subst;
    int fresh = 0;
    for (auto& pat : sc.params) {
      if (pat.kind == Pattern::Kind::Name) {
        out.clause.params.push_back(pat.name);
        continue;
      }
      std::string pname = "$p" + std::to_string(fresh++);
      out.clause.params.push_back(pname);
      if (pat.kind == Pattern::Kind::Wildcard) continue;
      // Tuple pattern: bind each leaf name to a projection chain.
      std::function<void(const Pattern&, Expr)> walk = [&](const Pattern& p, Expr path) {
        if (p.kind == Pattern::Kind::Wildcard) return;
        if (p.kind == Pattern::Kind::Name) {
          if (subst.count(p.name)) {
            fail(where, "duplicate pattern variable " + p.name, p.span);
            out.ok = false;
          }
          subst[p.name] = path;
          return;
        }
        for (size_t k = 0; k < p.subs.size(); ++k)
          walk(p.subs[k], Expr::proj(path, k, p.span));
      };
      walk(pat, Expr::var(pname, pat.span));
    }
    out.clause.body = sc.body.substitute(subst);
    return out;
  }

  // Positional clause environment for one constructor.
  TypeCtx clause_ctx(const ConstructorSpec& ctor, const Clause& cl, const DomainPtr& rec_domain) {
    TypeCtx ctx;
    size_t k = 0;
    for (auto& [_, d] : ctor.exvars) ctx.vars[cl.params.at(k++)] = d;
    for (auto& [_, d] : ctor.const_fields) ctx.vars[cl.params.at(k++)] = d;
    for (size_t r = 0; r < ctor.rec_fields.size(); ++r) ctx.vars[cl.params.at(k++)] = rec_domain;
    return ctx;
  }

  void do_algebra(const SurfaceAlgebra& a) {
    std::string where = "algebra " + a.name;
    if (mod.algebras.count(a.name) || mod.zygos.count(a.name)) {
      fail(where, "duplicate algebra name", a.span);
      return;
    }
    CodePtr subject = mod.find_code(a.subject);
    if (!subject) {
      fail(where, "unknown type " + a.subject, a.span);
      return;
    }

    AlgebraSpec alg;
    alg.name = a.name;
    alg.subject = a.subject;
    bool family = a.carrier.kind == SurfaceDomain::Kind::Family;
    try {
      alg.carrier = resolve_domain(a.carrier, nullptr);
    } catch (const Error& e) {
      fail(where, e.what(), e.span);
      return;
    }
    if (family) {
      if (!subject->indexed()) {
        fail(where, "family carriers require an indexed subject type", a.span);
        return;
      }
      if (!domain_equal(alg.carrier->base, subject->index_domain)) {
        fail(where, "carrier family must be over the subject's index domain", a.span);
        return;
      }
      alg.indexed = true;
    }

    AlgebraSpec delta;  // zygo only
    if (a.kind == SurfaceAlgebra::Kind::Zygo) {
      alg.kind = AlgebraKind::ZygoGamma;
      if (a.delta == "init") {
        delta = initial_algebra_as_algebra(subject);
      } else {
        auto it = mod.algebras.find(a.delta);
        if (it == mod.algebras.end() || it->second.kind != AlgebraKind::Total) {
          fail(where, "zygo delta must name a previously declared total algebra", a.span);
          return;
        }
        if (it->second.subject != a.subject) {
          fail(where, "zygo delta is over a different type", a.span);
          return;
        }
        delta = it->second;
      }
      alg.companion = delta.carrier;
    } else if (a.kind == SurfaceAlgebra::Kind::Partial) {
      alg.kind = AlgebraKind::Partial;
    }

    // Clauses: desugar patterns, then check against the kind's expectations.
    std::set<std::string> covered;
    for (auto& sc : a.clauses) {
      const ConstructorSpec* ctor = subject->find(sc.ctor);
      if (!ctor) {
        fail(where, "clause for unknown constructor " + sc.ctor, sc.span);
        continue;
      }
      if (!covered.insert(sc.ctor).second) {
        fail(where, "duplicate clause for " + sc.ctor, sc.span);
        continue;
      }
      size_t want = ctor->exvars.size() + ctor->const_fields.size() + ctor->rec_fields.size();
      if (sc.params.size() != want) {
        fail(where + "." + sc.ctor,
             "clause binds " + std::to_string(sc.params.size()) + " parameters but " + sc.ctor +
                 " has " + std::to_string(want) + " fields",
             sc.span);
        continue;
      }
      DesugaredClause dc = desugar_clause(sc, where + "." + sc.ctor);
      if (!dc.ok) continue;

      try {
        if (alg.indexed) {
          check_indexed_clause(*subject, *ctor, dc.clause, alg);
        } else {
          DomainPtr rec_dom = alg.kind == AlgebraKind::ZygoGamma
                                  ? Domain::product({delta.carrier, alg.carrier})
                                  : alg.carrier;
          DomainPtr expected = alg.kind == AlgebraKind::Partial
                                   ? Domain::error_sum(alg.carrier)
                                   : alg.carrier;
          TypeCtx ctx = clause_ctx(*ctor, dc.clause, rec_dom);
          dc.clause.body = check_expr(dc.clause.body, ctx, expected);
        }
      } catch (const Error& e) {
        fail(where + "." + sc.ctor, e.what(), e.span);
        continue;
      }
      alg.clauses[sc.ctor] = std::move(dc.clause);
    }
    for (auto& ctor : subject->constructors)
      if (!covered.count(ctor.name))
        fail(where, "missing clause for constructor " + ctor.name, a.span);
    if (!errors.ok() && alg.clauses.size() != subject->constructors.size()) return;

    if (alg.kind == AlgebraKind::Partial) {
      try {
        check_normal_form(*subject, alg);
      } catch (const Error& e) {
        fail(where, e.what(), e.span);
        return;
      }
    }

    if (a.kind == SurfaceAlgebra::Kind::Zygo) {
      ZygoPair z;
      z.delta = std::move(delta);
      z.gamma = std::move(alg);
      try {
        z.validate();
      } catch (const Error& e) {
        fail(where, e.what(), e.span);
        return;
      }
      mod.zygos[a.name] = std::move(z);
    } else {
      mod.algebras[a.name] = std::move(alg);
    }
  }

  // Indexed (section 5) clause checking: one pass per valuation of the finite
  // variables occurring in the constructor's index expressions; recursive
  // variables get the fibre at the subterm index, the body checks against the
  // fibre at the result index.
  void check_indexed_clause(const FunctorCode& code, const ConstructorSpec& ctor, Clause& cl,
                            const AlgebraSpec& alg) {
    std::set<std::string> idx_vars;
    for (auto& rf : ctor.rec_fields)
      for (auto& v : rf.index_expr.free_vars()) idx_vars.insert(v);
    for (auto& v : ctor.result_index.free_vars()) idx_vars.insert(v);

    std::map<std::string, DomainPtr> var_domains;
    for (auto& [n, d] : ctor.exvars) var_domains[n] = d;
    for (auto& [n, d] : ctor.const_fields) var_domains[n] = d;

    struct Axis {
      std::string var;
      std::vector<Value> values;
    };
    std::vector<Axis> axes;
    for (auto& v : idx_vars) {
      auto it = var_domains.find(v);
      if (it == var_domains.end()) continue;
      if (!domain_is_finite(*it->second))
        throw TypeError("index variable " + v + " of " + ctor.name +
                        " has an infinite domain; a table carrier family needs finite index "
                        "discriminators");
      axes.push_back({v, enumerate_domain(*it->second)});
    }

    // Positional names of the clause parameters, for re-binding per valuation.
    std::vector<std::string> exvar_params, const_params, rec_params;
    {
      size_t k = 0;
      for (size_t i = 0; i < ctor.exvars.size(); ++i) exvar_params.push_back(cl.params.at(k++));
      for (size_t i = 0; i < ctor.const_fields.size(); ++i) const_params.push_back(cl.params.at(k++));
      for (size_t i = 0; i < ctor.rec_fields.size(); ++i) rec_params.push_back(cl.params.at(k++));
    }

    bool first = true;
    std::vector<size_t> idx(axes.size(), 0);
    while (true) {
      Env sigma;
      for (size_t k = 0; k < axes.size(); ++k) sigma[axes[k].var] = axes[k].values[idx[k]];
      // Map the valuation onto the clause parameter names too.
      TypeCtx ctx;
      {
        size_t k = 0;
        for (auto& [n, d] : ctor.exvars) {
          ctx.vars[exvar_params[k]] = d;
          auto it = sigma.find(n);
          if (it != sigma.end()) ctx.sigma[exvar_params[k]] = it->second;
          ++k;
        }
        k = 0;
        for (auto& [n, d] : ctor.const_fields) {
          ctx.vars[const_params[k]] = d;
          auto it = sigma.find(n);
          if (it != sigma.end()) ctx.sigma[const_params[k]] = it->second;
          ++k;
        }
      }
      Env code_env = sigma;
      bool resolvable = true;
      std::vector<DomainPtr> rec_doms;
      for (auto& rf : ctor.rec_fields) {
        auto v = partial_eval(rf.index_expr, code_env, {});
        if (!v) {
          resolvable = false;
          break;
        }
        rec_doms.push_back(alg.carrier->fibre_at(*v));
      }
      auto rv = partial_eval(ctor.result_index, code_env, {});
      if (!rv) resolvable = false;
      if (!resolvable)
        throw TypeError("cannot resolve the carrier fibre for constructor " + ctor.name);
      for (size_t k = 0; k < rec_params.size(); ++k) ctx.vars[rec_params[k]] = rec_doms[k];
      Expr checked = check_expr(cl.body, ctx, alg.carrier->fibre_at(*rv));
      if (first) {
        cl.body = checked;
        first = false;
      }
      size_t j = axes.size();
      bool done = axes.empty();
      while (j > 0) {
        --j;
        if (++idx[j] < axes[j].values.size()) break;
        idx[j] = 0;
        if (j == 0) done = true;
      }
      if (done) break;
    }
  }

  // ---- directives --------------------------------------------------------------

  void do_directive(const SurfaceDirective& dir) {
    std::string where = "directive";
    ExecutedDirective exec{dir, ""};
    CodePtr subject = mod.find_code(dir.type_name);
    switch (dir.kind) {
      case SurfaceDirective::Kind::Refine: {
        if (!subject) {
          fail(where, "unknown type " + dir.type_name, dir.span);
          return;
        }
        std::string out_name = dir.as_name;
        try {
          if (auto it = mod.algebras.find(dir.algebra); it != mod.algebras.end()) {
            if (it->second.kind == AlgebraKind::Partial) {
              RefinedSpec rs = partial_refine(*subject, it->second, out_name);
              out_name = rs.code.name;
              mod.codes[out_name] = std::make_shared<FunctorCode>(rs.code);
              mod.refined[out_name] = std::move(rs);
            } else {
              RefinedSpec rs = refine(*subject, it->second, out_name);
              out_name = rs.code.name;
              mod.codes[out_name] = std::make_shared<FunctorCode>(rs.code);
              mod.refined[out_name] = std::move(rs);
            }
          } else if (auto zit = mod.zygos.find(dir.algebra); zit != mod.zygos.end()) {
            RefinedIRSpec irs = zygo_refine(*subject, zit->second, out_name);
            out_name = irs.data.code.name;
            mod.codes[out_name] = std::make_shared<FunctorCode>(irs.data.code);
            mod.refined_ir[out_name] = std::move(irs);
          } else {
            fail(where, "unknown algebra " + dir.algebra, dir.span);
            return;
          }
        } catch (const Error& e) {
          fail(where + " refine " + dir.type_name + " by " + dir.algebra, e.what(), e.span);
          return;
        }
        exec.registered_as = out_name;
        break;
      }
      case SurfaceDirective::Kind::Verify: {
        if (!subject) {
          fail(where, "unknown type " + dir.type_name, dir.span);
          return;
        }
        if (!mod.algebras.count(dir.algebra) && !mod.zygos.count(dir.algebra)) {
          fail(where, "unknown algebra " + dir.algebra, dir.span);
          return;
        }
        if (dir.bound < 0) fail(where, "bound must be nonnegative", dir.span);
        break;
      }
      case SurfaceDirective::Kind::Emit: {
        if (!subject && !mod.refined.count(dir.type_name) && !mod.refined_ir.count(dir.type_name)) {
          fail(where, "unknown type or refinement " + dir.type_name, dir.span);
          return;
        }
        break;
      }
    }
    mod.directives.push_back(std::move(exec));
  }
};

}  // namespace

ElabResult elaborate(const SpecFile& file) {
  Elab e;
  for (auto& d : file.decls) {
    try {
      switch (d.kind) {
        case Decl::Kind::Domain: {
          if (e.mod.domains.count(d.name)) {
            e.fail("domain " + d.name, "duplicate domain name", d.span);
            break;
          }
          e.mod.domains[d.name] = Domain::with_alias(e.resolve_domain(d.domain, nullptr), d.name);
          break;
        }
        case Decl::Kind::Type:
          e.do_type(d.type);
          break;
        case Decl::Kind::Algebra:
          e.do_algebra(d.algebra);
          break;
        case Decl::Kind::Directive:
          e.do_directive(d.directive);
          break;
      }
    } catch (const Error& err) {
      e.fail("declaration " + d.name, err.what(), err.span.known() ? err.span : d.span);
    }
  }
  return {std::move(e.mod), std::move(e.errors)};
}

ElabResult elaborate_text(std::string_view text) { return elaborate(parse(text)); }

}  // namespace refinery::dsl
