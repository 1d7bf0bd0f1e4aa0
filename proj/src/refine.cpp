#include "refinery/refine.hpp"

#include <algorithm>
#include <set>

namespace refinery {

const RefinedCtorInfo& RefinedSpec::info(const std::string& refined_ctor) const {
  for (size_t k = 0; k < ctors.size(); ++k)
    if (code.constructors[k].name == refined_ctor) return ctors[k];
  throw UnknownName("no refined constructor " + refined_ctor + " in " + code.name);
}

namespace {

// Fresh index exvar names n1, n2, ... per recursive field in field order,
// skipping names already taken by the constructor.
std::vector<std::string> fresh_index_names(const ConstructorSpec& ctor) {
  std::set<std::string> used;
  for (auto& [n, _] : ctor.exvars) used.insert(n);
  for (auto& [n, _] : ctor.const_fields) used.insert(n);
  for (auto& rf : ctor.rec_fields) used.insert(rf.name);
  std::vector<std::string> out;
  int counter = 1;
  for (size_t k = 0; k < ctor.rec_fields.size(); ++k) {
    std::string cand;
    do {
      cand = "n" + std::to_string(counter++);
    } while (used.count(cand));
    used.insert(cand);
    out.push_back(cand);
  }
  return out;
}

// Clause-parameter substitution onto the constructor's own field names, with
// the recursive positions going to `rec_repl`.
std::map<std::string, Expr> clause_substitution(const ConstructorSpec& ctor, const Clause& cl,
                                                const std::vector<Expr>& rec_repl) {
  std::map<std::string, Expr> repl;
  size_t k = 0;
  for (auto& [n, _] : ctor.exvars) repl[cl.params.at(k++)] = Expr::var(n);
  for (auto& [n, _] : ctor.const_fields) repl[cl.params.at(k++)] = Expr::var(n);
  for (size_t r = 0; r < ctor.rec_fields.size(); ++r) repl[cl.params.at(k++)] = rec_repl.at(r);
  return repl;
}

Expr conjoin(const std::vector<Expr>& conds) {
  Expr out;
  for (auto& c : conds) out = out.empty() ? c : Expr::logical_and(out, c);
  return out;
}

void validate_refined(const RefinedSpec& rs) {
  ValidationReport rep = wellformed_code(rs.code);
  if (!rep.ok())
    throw TypeError("refinement produced an ill-formed code:\n" + rep.str());
}

std::string default_name(const FunctorCode& c, const std::string& alg) {
  return c.name + "_" + alg;
}

}  // namespace

RefinedSpec refine(const FunctorCode& c, const AlgebraSpec& alpha, const std::string& name) {
  if (alpha.kind != AlgebraKind::Total)
    throw TypeError("refine takes a total algebra; use partial_refine or zygo_refine");
  check_clause_coverage(c, alpha);
  bool indexed_input = c.indexed();
  if (alpha.indexed && !indexed_input)
    throw TypeError("indexed algebra over a plain code");
  if (alpha.indexed && !domain_equal(alpha.carrier->base, c.index_domain))
    throw TypeError("indexed algebra carrier family must be over the code's index domain");

  RefinedSpec rs;
  rs.original_code = c.name;
  rs.algebra = alpha.name;
  rs.mode = AlgebraKind::Total;
  rs.code.name = name.empty() ? default_name(c, alpha.name) : name;
  if (!indexed_input)
    rs.code.index_domain = alpha.carrier;
  else if (alpha.indexed)
    rs.code.index_domain = alpha.carrier;  // DependentPair(I, family)
  else
    rs.code.index_domain = Domain::product({c.index_domain, alpha.carrier});

  for (auto& ctor : c.constructors) {
    const Clause& cl = alpha.clause(ctor.name);
    std::vector<std::string> fresh = fresh_index_names(ctor);

    ConstructorSpec out;
    out.name = ctor.name;
    out.exvars = ctor.exvars;
    out.const_fields = ctor.const_fields;

    DomainPtr fresh_domain = rs.code.index_domain;  // carrier, DP or product index
    std::vector<Expr> rec_repl;
    for (size_t k = 0; k < ctor.rec_fields.size(); ++k) {
      out.exvars.push_back({fresh[k], fresh_domain});
      out.rec_fields.push_back({ctor.rec_fields[k].name, Expr::var(fresh[k])});
      // Clause recursive variables see the carrier part of the subterm index.
      rec_repl.push_back(indexed_input ? Expr::proj(Expr::var(fresh[k]), 1) : Expr::var(fresh[k]));
    }
    Expr body = cl.body.substitute(clause_substitution(ctor, cl, rec_repl));

    std::vector<Expr> conds;
    if (ctor.guard) conds.push_back(*ctor.guard);
    if (indexed_input) {
      // Carried-over original index constraints: the base of each subterm's
      // new index must be the original index expression.
      for (size_t k = 0; k < ctor.rec_fields.size(); ++k)
        conds.push_back(Expr::cmp(CmpOp::Eq, Expr::proj(Expr::var(fresh[k]), 0),
                                  ctor.rec_fields[k].index_expr));
      out.result_index = alpha.indexed ? Expr::dep_pair(ctor.result_index, body)
                                       : Expr::tuple({ctor.result_index, body});
    } else {
      out.result_index = body;
    }
    if (!conds.empty()) out.guard = conjoin(conds);

    rs.code.constructors.push_back(std::move(out));
    rs.ctors.push_back({ctor.name, ctor.name, ctor.exvars.size(), fresh});
  }
  validate_refined(rs);
  return rs;
}

// ---- partial refinement ------------------------------------------------------------

namespace {

struct OkLeaf {
  std::vector<Expr> conds;
  Expr payload;
  std::vector<std::string> enum_path;  // case labels on the way down
};

void flatten_and(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == ExprKind::And) {
    flatten_and(e.args()[0], out);
    flatten_and(e.args()[1], out);
    return;
  }
  out.push_back(e);
}

void collect_leaves(const Expr& e, std::vector<Expr>& conds, std::vector<std::string>& path,
                    std::vector<OkLeaf>& out) {
  switch (e.kind()) {
    case ExprKind::If: {
      size_t before = conds.size();
      flatten_and(e.args()[0], conds);
      collect_leaves(e.args()[1], conds, path, out);
      conds.resize(before);
      conds.push_back(Expr::logical_not(e.args()[0]));
      collect_leaves(e.args()[2], conds, path, out);
      conds.pop_back();
      return;
    }
    case ExprKind::Case: {
      for (auto& br : e.branches()) {
        if (!br.binder.empty())
          throw NotNormalForm("tagged-sum case inside a partial clause");
        conds.push_back(Expr::cmp(CmpOp::Eq, e.args()[0], Expr::enum_lit(br.label)));
        path.push_back(br.label);
        collect_leaves(br.body, conds, path, out);
        path.pop_back();
        conds.pop_back();
      }
      return;
    }
    case ExprKind::MkTagged:
      if (e.str() == "fail") return;  // fail leaves emit nothing
      if (e.str() == "ok") {
        out.push_back({conds, e.args().empty() ? Expr::unit_lit() : e.args()[0], path});
        return;
      }
      throw NotNormalForm("leaf " + e.show() + " is neither ok(...) nor fail", e.span());
    default:
      throw NotNormalForm("clause body " + e.show() + " is not in decision-tree normal form",
                          e.span());
  }
}

// Solved-equation inlining over a leaf: exvar = closed expression (either
// orientation) substitutes the expression; exvar = exvar merges the two.
// Ground conditions are evaluated and pruned; a false one kills the leaf.
struct InlineResult {
  bool dead = false;
  std::vector<Expr> conds;
  std::map<std::string, Expr> solution;  // exvar -> replacement
};

InlineResult inline_solved(const std::vector<Expr>& conds0, const std::set<std::string>& exvars) {
  InlineResult res;
  std::vector<Expr> pending = conds0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Expr> next;
    for (auto& c : pending) {
      if (c.kind() == ExprKind::Cmp && c.cmp_op() == CmpOp::Eq) {
        const Expr& l = c.args()[0];
        const Expr& r = c.args()[1];
        auto is_exvar = [&](const Expr& e) {
          return e.kind() == ExprKind::Var && exvars.count(e.str()) &&
                 !res.solution.count(e.str());
        };
        auto closed = [](const Expr& e) { return e.free_vars().empty(); };
        if (is_exvar(l) && closed(r) && !(is_exvar(r))) {
          res.solution[l.str()] = r;
          changed = true;
          continue;
        }
        if (is_exvar(r) && closed(l) && !(is_exvar(l))) {
          res.solution[r.str()] = l;
          changed = true;
          continue;
        }
        if (is_exvar(l) && is_exvar(r) && l.str() != r.str()) {
          res.solution[r.str()] = l;
          changed = true;
          continue;
        }
      }
      next.push_back(c);
    }
    // Close the solution set and re-substitute into the remaining conditions.
    if (changed) {
      for (auto& [k, v] : res.solution) res.solution[k] = v.substitute(res.solution);
      for (auto& c : next) c = c.substitute(res.solution);
    }
    pending = std::move(next);
  }
  // Prune ground conditions.
  for (auto& c : pending) {
    if (c.free_vars().empty() && c.forget_refs().empty()) {
      Value v = eval_expr(c, {});
      if (!v.as_bool()) res.dead = true;
      continue;
    }
    res.conds.push_back(c);
  }
  return res;
}

std::string leaf_name(const ConstructorSpec& ctor, const std::vector<OkLeaf>& leaves, size_t idx,
                      const std::set<std::string>& taken) {
  if (leaves.size() == 1 && !taken.count(ctor.name)) return ctor.name;
  // Prefer enum-path suffixes (Br_R, Br_B) when they are distinct.
  std::set<std::string> paths;
  bool unique = true;
  for (auto& l : leaves) {
    std::string p;
    for (auto& s : l.enum_path) p += "_" + s;
    if (p.empty() || !paths.insert(p).second) unique = false;
  }
  std::string name = ctor.name;
  if (unique) {
    for (auto& s : leaves[idx].enum_path) name += "_" + s;
  } else {
    name += "_" + std::to_string(idx + 1);
  }
  while (taken.count(name)) name += "x";
  return name;
}

}  // namespace

RefinedSpec partial_refine(const FunctorCode& c, const AlgebraSpec& kappa,
                           const std::string& name) {
  if (kappa.kind != AlgebraKind::Partial) throw TypeError("partial_refine takes a partial algebra");
  if (c.indexed())
    throw TypeError("partial refinement is implemented for plain (Unit-indexed) codes");
  check_clause_coverage(c, kappa);
  check_normal_form(c, kappa);

  RefinedSpec rs;
  rs.original_code = c.name;
  rs.algebra = kappa.name;
  rs.mode = AlgebraKind::Partial;
  rs.code.name = name.empty() ? default_name(c, kappa.name) : name;
  rs.code.index_domain = kappa.carrier;

  std::set<std::string> taken;
  for (auto& ctor : c.constructors) {
    const Clause& cl = kappa.clause(ctor.name);
    std::vector<std::string> fresh = fresh_index_names(ctor);
    std::vector<Expr> rec_repl;
    for (auto& f : fresh) rec_repl.push_back(Expr::var(f));
    auto repl = clause_substitution(ctor, cl, rec_repl);
    Expr body = cl.body.substitute(repl);

    std::vector<OkLeaf> leaves;
    {
      std::vector<Expr> conds;
      std::vector<std::string> path;
      collect_leaves(body, conds, path, leaves);
    }
    std::set<std::string> fresh_set(fresh.begin(), fresh.end());
    for (size_t li = 0; li < leaves.size(); ++li) {
      InlineResult inl = inline_solved(leaves[li].conds, fresh_set);
      if (inl.dead) continue;
      ConstructorSpec out;
      out.name = leaf_name(ctor, leaves, li, taken);
      taken.insert(out.name);
      out.exvars = ctor.exvars;
      RefinedCtorInfo info{out.name, ctor.name, ctor.exvars.size(), {}};
      for (size_t k = 0; k < ctor.rec_fields.size(); ++k) {
        auto it = inl.solution.find(fresh[k]);
        if (it == inl.solution.end()) {
          out.exvars.push_back({fresh[k], kappa.carrier});
          out.rec_fields.push_back({ctor.rec_fields[k].name, Expr::var(fresh[k])});
          info.index_exvars.push_back(fresh[k]);
        } else {
          out.rec_fields.push_back({ctor.rec_fields[k].name, it->second});
          info.index_exvars.push_back("");
        }
      }
      out.const_fields = ctor.const_fields;
      if (!inl.conds.empty()) out.guard = conjoin(inl.conds);
      out.result_index = leaves[li].payload.substitute(inl.solution);
      rs.code.constructors.push_back(std::move(out));
      rs.ctors.push_back(std::move(info));
    }
  }
  // A partial refinement may legitimately drop every recursive-free summand
  // only if some base constructor survives; otherwise flag it uninhabited.
  bool has_base = false;
  for (auto& ctor : rs.code.constructors)
    if (ctor.rec_fields.empty()) has_base = true;
  if (!has_base) rs.code.uninhabited_ok = true;
  validate_refined(rs);
  return rs;
}

// ---- zygomorphic refinement ----------------------------------------------------------

RefinedIRSpec zygo_refine(const FunctorCode& c, const ZygoPair& z, const std::string& name) {
  z.validate();
  if (c.indexed())
    throw TypeError("zygomorphic refinement is implemented for plain (Unit-indexed) codes");
  check_clause_coverage(c, z.delta);
  check_clause_coverage(c, z.gamma);

  RefinedIRSpec irs;
  RefinedSpec& rs = irs.data;
  rs.original_code = c.name;
  rs.algebra = z.gamma.name;
  rs.mode = AlgebraKind::ZygoGamma;
  rs.code.name = name.empty() ? default_name(c, z.gamma.name) : name;
  rs.code.index_domain = z.gamma.carrier;
  irs.forget_domain = z.delta.carrier;

  for (auto& ctor : c.constructors) {
    const Clause& gcl = z.gamma.clause(ctor.name);
    const Clause& dcl = z.delta.clause(ctor.name);
    std::vector<std::string> fresh = fresh_index_names(ctor);

    ConstructorSpec out;
    out.name = ctor.name;
    out.exvars = ctor.exvars;
    out.const_fields = ctor.const_fields;
    for (size_t k = 0; k < ctor.rec_fields.size(); ++k) {
      out.exvars.push_back({fresh[k], z.gamma.carrier});
      out.rec_fields.push_back({ctor.rec_fields[k].name, Expr::var(fresh[k])});
    }

    // Gamma body: fixed params onto field names, then split each recursive
    // (D x A) variable into (forget(x_k), i_k).
    size_t nfixed = ctor.exvars.size() + ctor.const_fields.size();
    std::map<std::string, Expr> fixed;
    {
      size_t k = 0;
      for (auto& [n, _] : ctor.exvars) fixed[gcl.params.at(k++)] = Expr::var(n);
      for (auto& [n, _] : ctor.const_fields) fixed[gcl.params.at(k++)] = Expr::var(n);
    }
    Expr body = gcl.body.substitute(fixed);
    for (size_t k = 0; k < ctor.rec_fields.size(); ++k)
      body = body.substitute_split(gcl.params.at(nfixed + k),
                                   Expr::forget(ctor.rec_fields[k].name), Expr::var(fresh[k]));
    out.result_index = body;
    if (ctor.guard) out.guard = ctor.guard;
    rs.code.constructors.push_back(std::move(out));
    rs.ctors.push_back({ctor.name, ctor.name, ctor.exvars.size(), fresh});

    // Forget clause: delta's clause with recursive variables bound to the
    // forget values of the refined subterms. Parameters cover the refined
    // constructor positionally (exvars incl. fresh, consts, recs).
    Clause fcl;
    for (auto& [n, _] : rs.code.constructors.back().exvars) fcl.params.push_back(n);
    for (auto& [n, _] : ctor.const_fields) fcl.params.push_back(n);
    for (auto& rf : ctor.rec_fields) fcl.params.push_back(rf.name);
    std::map<std::string, Expr> drepl;
    {
      size_t k = 0;
      for (auto& [n, _] : ctor.exvars) drepl[dcl.params.at(k++)] = Expr::var(n);
      for (auto& [n, _] : ctor.const_fields) drepl[dcl.params.at(k++)] = Expr::var(n);
      for (auto& rf : ctor.rec_fields) drepl[dcl.params.at(k++)] = Expr::var(rf.name);
    }
    fcl.body = dcl.body.substitute(drepl);
    irs.forget_clauses[rs.code.constructors.back().name] = std::move(fcl);
  }
  ValidationReport rep = wellformed_code(rs.code, irs.forget_domain);
  if (!rep.ok()) throw TypeError("zygo refinement produced an ill-formed code:\n" + rep.str());
  return irs;
}

// ---- erasure and IR evaluation ---------------------------------------------------------

namespace {

TermPtr erase_with(const std::vector<ConstructorSpec>& ctors,
                   const std::vector<RefinedCtorInfo>& infos, const RefinedTerm& rt) {
  const RefinedCtorInfo* info = nullptr;
  const ConstructorSpec* spec = nullptr;
  for (size_t k = 0; k < ctors.size(); ++k)
    if (ctors[k].name == rt.ctor) {
      info = &infos[k];
      spec = &ctors[k];
    }
  if (!info) throw UnknownName("no refined constructor " + rt.ctor);
  (void)spec;
  std::vector<Value> exvars(rt.exvars.begin(), rt.exvars.begin() + info->original_exvars);
  std::vector<TermPtr> subs;
  for (auto& s : rt.subs) subs.push_back(erase_with(ctors, infos, *s));
  return Term::make(info->original_name, std::move(exvars), rt.consts, std::move(subs));
}

}  // namespace

TermPtr erase(const RefinedSpec& rs, const RefinedTerm& rt) {
  return erase_with(rs.code.constructors, rs.ctors, rt);
}

TermPtr erase(const RefinedIRSpec& irs, const RefinedTerm& rt) { return erase(irs.data, rt); }

namespace {

struct IrEval {
  Value index;
  Value forget;
};

IrEval ir_eval(const RefinedIRSpec& irs, const Term& t, const std::string& path) {
  const FunctorCode& c = irs.data.code;
  const ConstructorSpec* ctor = c.find(t.ctor);
  if (!ctor) throw IllFormedTerm(path, "unknown constructor " + t.ctor);
  if (t.exvars.size() != ctor->exvars.size() || t.consts.size() != ctor->const_fields.size() ||
      t.subs.size() != ctor->rec_fields.size())
    throw IllFormedTerm(path, "arity mismatch for " + t.ctor);
  Env env;
  for (size_t k = 0; k < ctor->exvars.size(); ++k) {
    if (!value_in_domain(t.exvars[k], ctor->exvars[k].second))
      throw IllFormedTerm(path, "existential " + ctor->exvars[k].first + " out of domain");
    env[ctor->exvars[k].first] = t.exvars[k];
  }
  for (size_t k = 0; k < ctor->const_fields.size(); ++k) {
    if (!value_in_domain(t.consts[k], ctor->const_fields[k].second))
      throw IllFormedTerm(path, "field " + ctor->const_fields[k].first + " out of domain");
    env[ctor->const_fields[k].first] = t.consts[k];
  }
  Env forget_env = env;
  for (size_t k = 0; k < ctor->rec_fields.size(); ++k) {
    IrEval sub = ir_eval(irs, *t.subs[k], path + "." + std::to_string(k + 1));
    env[forget_env_key(ctor->rec_fields[k].name)] = sub.forget;
    forget_env[ctor->rec_fields[k].name] = sub.forget;
    Value required = eval_expr(ctor->rec_fields[k].index_expr, env);
    if (sub.index != required)
      throw IllFormedTerm(path, "subterm " + ctor->rec_fields[k].name + " has index " +
                                    sub.index.show() + " but the constructor requires " +
                                    required.show());
  }
  if (ctor->guard && !eval_expr(*ctor->guard, env).as_bool())
    throw IllFormedTerm(path, "premise does not hold");
  IrEval out;
  out.index = eval_expr(ctor->result_index, env);
  const Clause& fcl = irs.forget_clauses.at(t.ctor);
  out.forget = eval_expr(fcl.body, forget_env);
  return out;
}

}  // namespace

Value ir_check_term(const RefinedIRSpec& irs, const Term& t) { return ir_eval(irs, t, "root").index; }
Value ir_forget_value(const RefinedIRSpec& irs, const Term& t) {
  return ir_eval(irs, t, "root").forget;
}

// ---- alpha equality ---------------------------------------------------------------------

namespace {

bool expr_alpha_equal(const Expr& a, const Expr& b, const std::map<std::string, std::string>& ren) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == ExprKind::Var || a.kind() == ExprKind::Name) {
    auto it = ren.find(a.str());
    return (it == ren.end() ? a.str() : it->second) == b.str();
  }
  if (a.kind() == ExprKind::Forget) {
    auto it = ren.find(a.str());
    return (it == ren.end() ? a.str() : it->second) == b.str();
  }
  switch (a.kind()) {
    case ExprKind::IntLit:
      if (a.int_value() != b.int_value()) return false;
      break;
    case ExprKind::BoolLit:
      if (a.bool_value() != b.bool_value()) return false;
      break;
    case ExprKind::Arith:
      if (a.op() != b.op()) return false;
      break;
    case ExprKind::Cmp:
      if (a.cmp_op() != b.cmp_op()) return false;
      break;
    case ExprKind::Proj:
      if (a.proj_index() != b.proj_index()) return false;
      break;
    default:
      if (a.str() != b.str()) return false;
      break;
  }
  if (a.args().size() != b.args().size() || a.branches().size() != b.branches().size())
    return false;
  for (size_t k = 0; k < a.args().size(); ++k)
    if (!expr_alpha_equal(a.args()[k], b.args()[k], ren)) return false;
  for (size_t k = 0; k < a.branches().size(); ++k) {
    auto& ba = a.branches()[k];
    auto& bb = b.branches()[k];
    if (ba.label != bb.label) return false;
    auto inner = ren;
    if (!ba.binder.empty()) inner[ba.binder] = bb.binder;
    if (!expr_alpha_equal(ba.body, bb.body, inner)) return false;
  }
  return true;
}

}  // namespace

bool code_alpha_equal(const FunctorCode& a, const FunctorCode& b) {
  if (!domain_equal(a.index_domain, b.index_domain)) return false;
  if (a.constructors.size() != b.constructors.size()) return false;
  for (size_t k = 0; k < a.constructors.size(); ++k) {
    auto& ca = a.constructors[k];
    auto& cb = b.constructors[k];
    if (ca.name != cb.name) return false;
    if (ca.exvars.size() != cb.exvars.size() || ca.const_fields.size() != cb.const_fields.size() ||
        ca.rec_fields.size() != cb.rec_fields.size())
      return false;
    if (ca.guard.has_value() != cb.guard.has_value()) return false;
    std::map<std::string, std::string> ren;
    for (size_t i = 0; i < ca.exvars.size(); ++i) {
      if (!domain_equal(ca.exvars[i].second, cb.exvars[i].second)) return false;
      ren[ca.exvars[i].first] = cb.exvars[i].first;
    }
    for (size_t i = 0; i < ca.const_fields.size(); ++i) {
      if (!domain_equal(ca.const_fields[i].second, cb.const_fields[i].second)) return false;
      ren[ca.const_fields[i].first] = cb.const_fields[i].first;
    }
    for (size_t i = 0; i < ca.rec_fields.size(); ++i)
      ren[ca.rec_fields[i].name] = cb.rec_fields[i].name;
    for (size_t i = 0; i < ca.rec_fields.size(); ++i)
      if (!expr_alpha_equal(ca.rec_fields[i].index_expr, cb.rec_fields[i].index_expr, ren))
        return false;
    if (ca.guard && !expr_alpha_equal(*ca.guard, *cb.guard, ren)) return false;
    if (!expr_alpha_equal(ca.result_index, cb.result_index, ren)) return false;
  }
  return true;
}

}  // namespace refinery
