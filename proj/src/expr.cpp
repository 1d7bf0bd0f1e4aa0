#include "refinery/expr.hpp"

#include <cassert>

#include "refinery/code.hpp"

namespace refinery {

struct Expr::Node {
  ExprKind kind = ExprKind::UnitLit;
  Span span;
  BigInt int_val;
  bool bool_val = false;
  std::string name;
  char op = 0;
  CmpOp cmp = CmpOp::Eq;
  size_t proj = 0;
  size_t n_ex = static_cast<size_t>(-1);  // MkTerm split; -1 = unknown
  size_t n_const = 0;
  std::vector<Expr> args;
  std::vector<ExprBranch> branches;
};

Expr Expr::wrap(std::shared_ptr<const Node> n) {
  Expr e;
  e.node_ = std::move(n);
  return e;
}

static std::shared_ptr<Expr::Node> node(ExprKind k, Span s) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->span = s;
  return n;
}

Expr Expr::int_lit(BigInt v, Span s) {
  auto n = node(ExprKind::IntLit, s);
  n->int_val = std::move(v);
  return wrap(n);
}
Expr Expr::bool_lit(bool v, Span s) {
  auto n = node(ExprKind::BoolLit, s);
  n->bool_val = v;
  return wrap(n);
}
Expr Expr::unit_lit(Span s) { return wrap(node(ExprKind::UnitLit, s)); }
Expr Expr::name(std::string nm, Span s) {
  auto n = node(ExprKind::Name, s);
  n->name = std::move(nm);
  return wrap(n);
}
Expr Expr::var(std::string nm, Span s) {
  auto n = node(ExprKind::Var, s);
  n->name = std::move(nm);
  return wrap(n);
}
Expr Expr::enum_lit(std::string label, Span s) {
  auto n = node(ExprKind::EnumLit, s);
  n->name = std::move(label);
  return wrap(n);
}
Expr Expr::arith(char op, Expr l, Expr r, Span s) {
  auto n = node(ExprKind::Arith, s);
  n->op = op;
  n->args = {std::move(l), std::move(r)};
  return wrap(n);
}
Expr Expr::neg(Expr e, Span s) {
  auto n = node(ExprKind::Neg, s);
  n->args = {std::move(e)};
  return wrap(n);
}
Expr Expr::cmp(CmpOp op, Expr l, Expr r, Span s) {
  auto n = node(ExprKind::Cmp, s);
  n->cmp = op;
  n->args = {std::move(l), std::move(r)};
  return wrap(n);
}
Expr Expr::logical_and(Expr l, Expr r, Span s) {
  auto n = node(ExprKind::And, s);
  n->args = {std::move(l), std::move(r)};
  return wrap(n);
}
Expr Expr::logical_or(Expr l, Expr r, Span s) {
  auto n = node(ExprKind::Or, s);
  n->args = {std::move(l), std::move(r)};
  return wrap(n);
}
Expr Expr::logical_not(Expr e, Span s) {
  auto n = node(ExprKind::Not, s);
  n->args = {std::move(e)};
  return wrap(n);
}
Expr Expr::if_then_else(Expr c, Expr t, Expr e, Span s) {
  auto n = node(ExprKind::If, s);
  n->args = {std::move(c), std::move(t), std::move(e)};
  return wrap(n);
}
Expr Expr::case_of(Expr scrutinee, std::vector<ExprBranch> branches, Span s) {
  auto n = node(ExprKind::Case, s);
  n->args = {std::move(scrutinee)};
  n->branches = std::move(branches);
  return wrap(n);
}
Expr Expr::tuple(std::vector<Expr> items, Span s) {
  auto n = node(ExprKind::MkTuple, s);
  n->args = std::move(items);
  return wrap(n);
}
Expr Expr::dep_pair(Expr base, Expr fibre, Span s) {
  auto n = node(ExprKind::MkDepPair, s);
  n->args = {std::move(base), std::move(fibre)};
  return wrap(n);
}
Expr Expr::proj(Expr e, size_t index0, Span s) {
  auto n = node(ExprKind::Proj, s);
  n->proj = index0;
  n->args = {std::move(e)};
  return wrap(n);
}
Expr Expr::call(std::string name, std::vector<Expr> args, Span s) {
  auto n = node(ExprKind::Call, s);
  n->name = std::move(name);
  n->args = std::move(args);
  return wrap(n);
}
Expr Expr::tagged(std::string label, std::optional<Expr> payload, Span s) {
  auto n = node(ExprKind::MkTagged, s);
  n->name = std::move(label);
  if (payload) n->args = {std::move(*payload)};
  return wrap(n);
}
Expr Expr::term_ctor(std::string ctor, std::vector<Expr> args, Span s) {
  auto n = node(ExprKind::MkTerm, s);
  n->name = std::move(ctor);
  n->args = std::move(args);
  return wrap(n);
}
Expr Expr::term_ctor_split(std::string ctor, std::vector<Expr> args, size_t n_exvars,
                           size_t n_consts, Span s) {
  auto n = node(ExprKind::MkTerm, s);
  n->name = std::move(ctor);
  n->args = std::move(args);
  n->n_ex = n_exvars;
  n->n_const = n_consts;
  return wrap(n);
}
Expr Expr::forget(std::string rec_field, Span s) {
  auto n = node(ExprKind::Forget, s);
  n->name = std::move(rec_field);
  return wrap(n);
}
Expr Expr::coerce_to_rat(Expr e, Span s) {
  auto n = node(ExprKind::Coerce, s);
  n->args = {std::move(e)};
  return wrap(n);
}

ExprKind Expr::kind() const { return node_->kind; }
Span Expr::span() const { return node_->span; }
const BigInt& Expr::int_value() const { return node_->int_val; }
bool Expr::bool_value() const { return node_->bool_val; }
const std::string& Expr::str() const { return node_->name; }
char Expr::op() const { return node_->op; }
CmpOp Expr::cmp_op() const { return node_->cmp; }
size_t Expr::proj_index() const { return node_->proj; }
bool Expr::term_split_known() const { return node_->n_ex != static_cast<size_t>(-1); }
size_t Expr::term_n_exvars() const { return node_->n_ex; }
size_t Expr::term_n_consts() const { return node_->n_const; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const std::vector<ExprBranch>& Expr::branches() const { return node_->branches; }

bool Expr::equal(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  if (a.kind() != b.kind()) return false;
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
      break;
  }
  if (a.str() != b.str()) return false;
  if (a.args().size() != b.args().size()) return false;
  for (size_t k = 0; k < a.args().size(); ++k)
    if (!equal(a.args()[k], b.args()[k])) return false;
  if (a.branches().size() != b.branches().size()) return false;
  for (size_t k = 0; k < a.branches().size(); ++k) {
    if (a.branches()[k].label != b.branches()[k].label) return false;
    if (a.branches()[k].binder != b.branches()[k].binder) return false;
    if (!equal(a.branches()[k].body, b.branches()[k].body)) return false;
  }
  return true;
}

static void collect_free(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  if (e.empty()) return;
  switch (e.kind()) {
    case ExprKind::Var:
    case ExprKind::Name:
      if (!bound.count(e.str())) out.insert(e.str());
      return;
    case ExprKind::Case: {
      collect_free(e.args()[0], bound, out);
      for (auto& br : e.branches()) {
        bool added = !br.binder.empty() && bound.insert(br.binder).second;
        collect_free(br.body, bound, out);
        if (added) bound.erase(br.binder);
      }
      return;
    }
    default:
      for (auto& a : e.args()) collect_free(a, bound, out);
      for (auto& br : e.branches()) collect_free(br.body, bound, out);
      return;
  }
}

std::set<std::string> Expr::free_vars() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

std::set<std::string> Expr::forget_refs() const {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.empty()) return;
    if (e.kind() == ExprKind::Forget) out.insert(e.str());
    for (auto& a : e.args()) walk(a);
    for (auto& br : e.branches()) walk(br.body);
  };
  walk(*this);
  return out;
}

Expr Expr::substitute(const std::map<std::string, Expr>& repl) const {
  if (empty() || repl.empty()) return *this;
  switch (kind()) {
    case ExprKind::Var:
    case ExprKind::Name: {
      auto it = repl.find(str());
      return it == repl.end() ? *this : it->second;
    }
    case ExprKind::Case: {
      std::vector<ExprBranch> brs;
      for (auto& br : branches()) {
        if (!br.binder.empty() && repl.count(br.binder)) {
          // Shadowed: substitution stops for the binder inside this branch.
          auto inner = repl;
          inner.erase(br.binder);
          brs.push_back(ExprBranch{br.label, br.binder, br.body.substitute(inner)});
        } else {
          brs.push_back(ExprBranch{br.label, br.binder, br.body.substitute(repl)});
        }
      }
      return case_of(args()[0].substitute(repl), std::move(brs), span());
    }
    default: {
      auto n = std::make_shared<Node>(*node_);
      for (auto& a : n->args) a = a.substitute(repl);
      for (auto& br : n->branches) br.body = br.body.substitute(repl);
      return wrap(std::move(n));
    }
  }
}

Expr Expr::substitute_split(const std::string& var, const Expr& first, const Expr& second) const {
  if (empty()) return *this;
  if (kind() == ExprKind::Proj && args()[0].kind() == ExprKind::Var && args()[0].str() == var) {
    if (proj_index() == 0) return first;
    if (proj_index() == 1) return second;
  }
  if ((kind() == ExprKind::Var || kind() == ExprKind::Name) && str() == var)
    return tuple({first, second}, span());
  auto n = std::make_shared<Node>(*node_);
  for (auto& a : n->args) a = a.substitute_split(var, first, second);
  for (auto& br : n->branches)
    if (br.binder != var) br.body = br.body.substitute_split(var, first, second);
  return wrap(std::move(n));
}

// ---- printing -------------------------------------------------------------------

namespace {

// Precedence levels: 1 or, 2 and, 3 not, 4 cmp, 5 +/-, 6 * /, 7 unary, 8 postfix.
int prec_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Or:
      return 1;
    case ExprKind::And:
      return 2;
    case ExprKind::Not:
      return 3;
    case ExprKind::Cmp:
      return 4;
    case ExprKind::Arith:
      return (e.op() == '+' || e.op() == '-') ? 5 : 6;
    case ExprKind::Neg:
      return 7;
    case ExprKind::Proj:
      return 8;
    case ExprKind::If:
    case ExprKind::Case:
      return 0;
    case ExprKind::MkTagged:
      return e.args().empty() ? 9 : 8;  // `ok x` binds like an application
    case ExprKind::Forget:
      return 8;
    default:
      return 9;  // atoms
  }
}

std::string show_at(const Expr& e, int min_prec);

std::string show_args(const std::vector<Expr>& args) {
  std::string out = "(";
  for (size_t k = 0; k < args.size(); ++k) {
    if (k) out += ", ";
    out += show_at(args[k], 0);
  }
  return out + ")";
}

std::string show_at(const Expr& e, int min_prec) {
  if (e.empty()) return "<empty>";
  std::string out;
  int p = prec_of(e);
  switch (e.kind()) {
    case ExprKind::IntLit:
      out = e.int_value().str();
      break;
    case ExprKind::BoolLit:
      out = e.bool_value() ? "true" : "false";
      break;
    case ExprKind::UnitLit:
      out = "unit";
      break;
    case ExprKind::Name:
    case ExprKind::Var:
    case ExprKind::EnumLit:
      out = e.str();
      break;
    case ExprKind::Arith:
      out = show_at(e.args()[0], p) + " " + e.op() + " " + show_at(e.args()[1], p + 1);
      break;
    case ExprKind::Neg:
      out = "-" + show_at(e.args()[0], p);
      break;
    case ExprKind::Cmp: {
      const char* ops[] = {"=", "!=", "<", "<="};
      out = show_at(e.args()[0], p + 1) + " " + ops[static_cast<int>(e.cmp_op())] + " " +
            show_at(e.args()[1], p + 1);
      break;
    }
    case ExprKind::And:
      out = show_at(e.args()[0], p) + " && " + show_at(e.args()[1], p + 1);
      break;
    case ExprKind::Or:
      out = show_at(e.args()[0], p) + " || " + show_at(e.args()[1], p + 1);
      break;
    case ExprKind::Not:
      out = "!" + show_at(e.args()[0], p);
      break;
    case ExprKind::If:
      out = "if " + show_at(e.args()[0], 0) + " then " + show_at(e.args()[1], 0) + " else " +
            show_at(e.args()[2], 0);
      break;
    case ExprKind::Case: {
      out = "case " + show_at(e.args()[0], 0) + " of { ";
      for (size_t k = 0; k < e.branches().size(); ++k) {
        auto& br = e.branches()[k];
        if (k) out += "; ";
        out += br.label;
        if (!br.binder.empty()) out += "(" + br.binder + ")";
        out += " => " + show_at(br.body, 0);
      }
      out += " }";
      break;
    }
    case ExprKind::MkTuple:
    case ExprKind::MkDepPair:
      out = show_args(e.args());
      break;
    case ExprKind::Proj:
      out = show_at(e.args()[0], p) + "." + std::to_string(e.proj_index() + 1);
      break;
    case ExprKind::Call:
      out = e.str() + show_args(e.args());
      break;
    case ExprKind::MkTagged:
      if (e.args().empty() || e.args()[0].kind() == ExprKind::UnitLit)
        out = e.str();
      else
        out = e.str() + " " + show_at(e.args()[0], 9);
      break;
    case ExprKind::MkTerm:
      out = "@" + e.str() + (e.args().empty() ? "" : show_args(e.args()));
      break;
    case ExprKind::Forget:
      out = "forget " + e.str();
      break;
    case ExprKind::Coerce:
      return show_at(e.args()[0], min_prec);  // invisible in the surface syntax
  }
  if (p < min_prec) return "(" + out + ")";
  return out;
}

}  // namespace

std::string Expr::show() const { return show_at(*this, 0); }

// ---- evaluation -------------------------------------------------------------------

std::string forget_env_key(const std::string& rec_field) { return "~forget:" + rec_field; }

Value eval_expr(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case ExprKind::IntLit:
      return Value::integer(e.int_value());
    case ExprKind::BoolLit:
      return Value::boolean(e.bool_value());
    case ExprKind::UnitLit:
      return Value::unit();
    case ExprKind::Var: {
      auto it = env.find(e.str());
      if (it == env.end()) throw Error("unbound variable " + e.str(), e.span());
      return it->second;
    }
    case ExprKind::EnumLit:
      return Value::enum_label(e.str());
    case ExprKind::Arith: {
      Value l = eval_expr(e.args()[0], env);
      Value r = eval_expr(e.args()[1], env);
      try {
        return rational_arith(e.op(), l, r);
      } catch (DivisionByZero&) {
        throw DivisionByZero(e.span());
      }
    }
    case ExprKind::Neg: {
      Value v = eval_expr(e.args()[0], env);
      if (v.kind() == Value::Kind::Int) return Value::integer(-v.as_int());
      return Value::rational(-v.as_rat());
    }
    case ExprKind::Cmp: {
      Value l = eval_expr(e.args()[0], env);
      Value r = eval_expr(e.args()[1], env);
      switch (e.cmp_op()) {
        case CmpOp::Eq:
          if (value_is_numeric(l) && value_is_numeric(r))
            return Value::boolean(numeric_compare(l, r) == 0);
          return Value::boolean(l == r);
        case CmpOp::Ne:
          if (value_is_numeric(l) && value_is_numeric(r))
            return Value::boolean(numeric_compare(l, r) != 0);
          return Value::boolean(l != r);
        case CmpOp::Lt:
          return Value::boolean(numeric_compare(l, r) < 0);
        case CmpOp::Le:
          return Value::boolean(numeric_compare(l, r) <= 0);
      }
      break;
    }
    case ExprKind::And:
      if (!eval_expr(e.args()[0], env).as_bool()) return Value::boolean(false);
      return eval_expr(e.args()[1], env);
    case ExprKind::Or:
      if (eval_expr(e.args()[0], env).as_bool()) return Value::boolean(true);
      return eval_expr(e.args()[1], env);
    case ExprKind::Not:
      return Value::boolean(!eval_expr(e.args()[0], env).as_bool());
    case ExprKind::If:
      return eval_expr(e.args()[0], env).as_bool() ? eval_expr(e.args()[1], env)
                                                   : eval_expr(e.args()[2], env);
    case ExprKind::Case: {
      Value s = eval_expr(e.args()[0], env);
      const std::string& lbl = s.label();
      for (auto& br : e.branches()) {
        if (br.label != lbl) continue;
        if (br.binder.empty()) return eval_expr(br.body, env);
        Env inner = env;
        inner[br.binder] = s.kind() == Value::Kind::Tagged ? s.payload() : Value::unit();
        return eval_expr(br.body, inner);
      }
      throw Error("case without branch for " + lbl, e.span());
    }
    case ExprKind::MkTuple: {
      std::vector<Value> items;
      for (auto& a : e.args()) items.push_back(eval_expr(a, env));
      return Value::tuple(std::move(items));
    }
    case ExprKind::MkDepPair:
      return Value::dep_pair(eval_expr(e.args()[0], env), eval_expr(e.args()[1], env));
    case ExprKind::Proj: {
      Value v = eval_expr(e.args()[0], env);
      if (v.kind() == Value::Kind::Tuple) return v.items().at(e.proj_index());
      if (v.kind() == Value::Kind::DepPair) return e.proj_index() == 0 ? v.base() : v.fibre();
      throw Error("projection applied to non-pair value " + v.show(), e.span());
    }
    case ExprKind::MkTagged:
      return Value::tagged(e.str(),
                           e.args().empty() ? Value::unit() : eval_expr(e.args()[0], env));
    case ExprKind::MkTerm: {
      if (!e.term_split_known())
        throw Error("internal: evaluating unelaborated term construction", e.span());
      std::vector<Value> ex, cs;
      std::vector<TermPtr> subs;
      for (size_t k = 0; k < e.args().size(); ++k) {
        Value v = eval_expr(e.args()[k], env);
        if (k < e.term_n_exvars())
          ex.push_back(std::move(v));
        else if (k < e.term_n_exvars() + e.term_n_consts())
          cs.push_back(std::move(v));
        else if (v.kind() == Value::Kind::Term)
          subs.push_back(v.as_term());
        else
          throw Error("subterm argument did not evaluate to a term", e.args()[k].span());
      }
      return Value::term(Term::make(e.str(), std::move(ex), std::move(cs), std::move(subs)));
    }
    case ExprKind::Forget: {
      auto it = env.find(forget_env_key(e.str()));
      if (it == env.end()) throw Error("forget value for " + e.str() + " not available", e.span());
      return it->second;
    }
    case ExprKind::Coerce: {
      Value v = eval_expr(e.args()[0], env);
      if (v.kind() == Value::Kind::Int) return Value::rational(BigRat(v.as_int()));
      return v;
    }
    case ExprKind::Name:
    case ExprKind::Call:
      throw Error("internal: evaluating unelaborated expression " + e.show(), e.span());
  }
  throw Error("internal: unhandled expression kind", e.span());
}

std::optional<Value> partial_eval(const Expr& e, const Env& env, const Env& base_env) {
  switch (e.kind()) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::UnitLit:
    case ExprKind::EnumLit:
      return eval_expr(e, env);
    case ExprKind::Var: {
      auto it = env.find(e.str());
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case ExprKind::Proj: {
      // Base projection of a DP-typed variable may be known even when the
      // variable's full value is not.
      const Expr& inner = e.args()[0];
      if (e.proj_index() == 0 && (inner.kind() == ExprKind::Var || inner.kind() == ExprKind::Name)) {
        auto it = base_env.find(inner.str());
        if (it != base_env.end()) return it->second;
      }
      auto v = partial_eval(inner, env, base_env);
      if (!v) return std::nullopt;
      if (v->kind() == Value::Kind::Tuple && e.proj_index() < v->items().size())
        return v->items()[e.proj_index()];
      if (v->kind() == Value::Kind::DepPair) return e.proj_index() == 0 ? v->base() : v->fibre();
      return std::nullopt;
    }
    case ExprKind::MkDepPair: {
      auto b = partial_eval(e.args()[0], env, base_env);
      auto f = partial_eval(e.args()[1], env, base_env);
      if (!b || !f) return std::nullopt;
      return Value::dep_pair(*b, *f);
    }
    default: {
      // Fall back to full evaluation over the subset env; any unbound
      // variable or failure means "not statically known".
      try {
        return eval_expr(e, env);
      } catch (const Error&) {
        return std::nullopt;
      }
    }
  }
}

// ---- typing ------------------------------------------------------------------------

bool domain_fits(const DomainPtr& have, const DomainPtr& want) {
  if (domain_equal(have, want)) return true;
  bool have_int = have->kind == DomainKind::Int || have->kind == DomainKind::IntRange;
  bool want_int = want->kind == DomainKind::Int || want->kind == DomainKind::IntRange;
  return have_int && want_int;
}

namespace {

bool is_integral(const DomainPtr& d) {
  return d->kind == DomainKind::Int || d->kind == DomainKind::IntRange;
}
bool is_numeric_dom(const DomainPtr& d) { return is_integral(d) || d->kind == DomainKind::Rational; }

// Static base value of a DP-typed expression, when determinable.
std::optional<Value> static_base_of(const Expr& e, TypeCtx& ctx) {
  if (e.kind() == ExprKind::Var || e.kind() == ExprKind::Name) {
    auto it = ctx.sigma_base.find(e.str());
    if (it != ctx.sigma_base.end()) return it->second;
    auto itv = ctx.sigma.find(e.str());
    if (itv != ctx.sigma.end() && itv->second.kind() == Value::Kind::DepPair)
      return itv->second.base();
    return std::nullopt;
  }
  if (e.kind() == ExprKind::MkDepPair) return partial_eval(e.args()[0], ctx.sigma, ctx.sigma_base);
  return std::nullopt;
}

}  // namespace

std::pair<Expr, DomainPtr> infer_expr(const Expr& e, TypeCtx& ctx) {
  switch (e.kind()) {
    case ExprKind::IntLit:
      return {e, Domain::integer()};
    case ExprKind::BoolLit:
      return {e, Domain::boolean()};
    case ExprKind::UnitLit:
      return {e, Domain::unit()};
    case ExprKind::Name:
    case ExprKind::Var: {
      auto it = ctx.vars.find(e.str());
      if (it == ctx.vars.end())
        throw UnknownName("unknown name " + e.str(), e.span());
      return {Expr::var(e.str(), e.span()), it->second};
    }
    case ExprKind::Coerce:
      return {e, Domain::rational()};
    case ExprKind::Arith: {
      auto [l, dl] = infer_expr(e.args()[0], ctx);
      auto [r, dr] = infer_expr(e.args()[1], ctx);
      if (!is_numeric_dom(dl))
        throw TypeError("arithmetic operand is not numeric: " + dl->show(), e.args()[0].span());
      if (!is_numeric_dom(dr))
        throw TypeError("arithmetic operand is not numeric: " + dr->show(), e.args()[1].span());
      bool rat = e.op() == '/' || dl->kind == DomainKind::Rational || dr->kind == DomainKind::Rational;
      return {Expr::arith(e.op(), l, r, e.span()), rat ? Domain::rational() : Domain::integer()};
    }
    case ExprKind::Neg: {
      auto [v, d] = infer_expr(e.args()[0], ctx);
      if (!is_numeric_dom(d)) throw TypeError("negation of non-numeric value", e.span());
      return {Expr::neg(v, e.span()), is_integral(d) ? Domain::integer() : Domain::rational()};
    }
    case ExprKind::Cmp: {
      DomainPtr dl, dr;
      Expr l, r;
      try {
        std::tie(l, dl) = infer_expr(e.args()[0], ctx);
        r = check_expr(e.args()[1], ctx, dl);
        dr = dl;
      } catch (const Error&) {
        std::tie(r, dr) = infer_expr(e.args()[1], ctx);
        l = check_expr(e.args()[0], ctx, dr);
        dl = dr;
      }
      if (e.cmp_op() == CmpOp::Lt || e.cmp_op() == CmpOp::Le) {
        if (!is_numeric_dom(dl)) throw TypeError("ordering requires numeric operands", e.span());
      }
      return {Expr::cmp(e.cmp_op(), l, r, e.span()), Domain::boolean()};
    }
    case ExprKind::And:
    case ExprKind::Or: {
      Expr l = check_expr(e.args()[0], ctx, Domain::boolean());
      Expr r = check_expr(e.args()[1], ctx, Domain::boolean());
      return {e.kind() == ExprKind::And ? Expr::logical_and(l, r, e.span())
                                        : Expr::logical_or(l, r, e.span()),
              Domain::boolean()};
    }
    case ExprKind::Not:
      return {Expr::logical_not(check_expr(e.args()[0], ctx, Domain::boolean()), e.span()),
              Domain::boolean()};
    case ExprKind::If: {
      Expr c = check_expr(e.args()[0], ctx, Domain::boolean());
      auto [t, dt] = infer_expr(e.args()[1], ctx);
      Expr f = check_expr(e.args()[2], ctx, dt);
      return {Expr::if_then_else(c, t, f, e.span()), dt};
    }
    case ExprKind::Proj: {
      auto [v, d] = infer_expr(e.args()[0], ctx);
      if (d->kind == DomainKind::Product) {
        if (e.proj_index() >= d->components.size())
          throw TypeError("projection index out of range", e.span());
        return {Expr::proj(v, e.proj_index(), e.span()), d->components[e.proj_index()]};
      }
      if (d->kind == DomainKind::DependentPair) {
        if (e.proj_index() == 0) return {Expr::proj(v, 0, e.span()), d->base};
        auto bv = static_base_of(e.args()[0], ctx);
        if (!bv)
          throw TypeError("cannot determine dependent fibre domain for " + e.args()[0].show(),
                          e.span());
        return {Expr::proj(v, 1, e.span()), d->fibre_at(*bv)};
      }
      throw TypeError("projection from non-pair domain " + d->show(), e.span());
    }
    case ExprKind::Forget: {
      if (!ctx.allow_forget || !ctx.forget_fields || !ctx.forget_fields->count(e.str()))
        throw TypeError("forget is only available on recursive fields of an IR spec", e.span());
      return {e, ctx.forget_domain};
    }
    case ExprKind::Call: {
      if (e.str() == "forget" && e.args().size() == 1 &&
          (e.args()[0].kind() == ExprKind::Name || e.args()[0].kind() == ExprKind::Var))
        return infer_expr(Expr::forget(e.args()[0].str(), e.span()), ctx);
      throw TypeError("cannot infer a domain for " + e.show(), e.span());
    }
    case ExprKind::MkTuple: {
      std::vector<Expr> items;
      std::vector<DomainPtr> doms;
      for (auto& a : e.args()) {
        auto [v, d] = infer_expr(a, ctx);
        items.push_back(v);
        doms.push_back(d);
      }
      return {Expr::tuple(std::move(items), e.span()), Domain::product(std::move(doms))};
    }
    case ExprKind::Case: {
      auto [s, ds] = infer_expr(e.args()[0], ctx);
      if (ds->kind != DomainKind::Enum && ds->kind != DomainKind::TaggedSum)
        throw TypeError("case scrutinee must be an enum or tagged sum", e.span());
      if (e.branches().empty()) throw TypeError("case with no branches", e.span());
      // Infer the first branch's body, then check the rest against it.
      DomainPtr out;
      std::vector<ExprBranch> brs;
      for (size_t k = 0; k < e.branches().size(); ++k) {
        auto& br = e.branches()[k];
        TypeCtx inner = ctx;
        if (!br.binder.empty()) {
          if (ds->kind != DomainKind::TaggedSum)
            throw TypeError("enum case branches take no binder", br.body.span());
          auto vi = ds->variant_index(br.label);
          if (!vi) throw TypeError("no variant " + br.label, br.body.span());
          inner.vars[br.binder] = ds->variants[*vi].second;
        }
        if (k == 0) {
          auto [b, db] = infer_expr(br.body, inner);
          out = db;
          brs.push_back(ExprBranch{br.label, br.binder, b});
        } else {
          brs.push_back(ExprBranch{br.label, br.binder, check_expr(br.body, inner, out)});
        }
      }
      Expr elaborated = Expr::case_of(s, std::move(brs), e.span());
      // Re-check through the checking path for exhaustiveness.
      return {check_expr(elaborated, ctx, out), out};
    }
    default:
      throw TypeError("cannot infer a domain for " + e.show() + "; an expected domain is required",
                      e.span());
  }
}

Expr check_expr(const Expr& e, TypeCtx& ctx, const DomainPtr& expected) {
  switch (e.kind()) {
    case ExprKind::Name: {
      // Bound variable wins; otherwise an enum label or nullary tag of the
      // expected domain.
      if (ctx.vars.count(e.str())) break;  // fall through to infer path below
      if (expected->kind == DomainKind::Enum && expected->label_index(e.str()))
        return Expr::enum_lit(e.str(), e.span());
      if (expected->kind == DomainKind::TaggedSum) {
        auto vi = expected->variant_index(e.str());
        if (vi) {
          if (expected->variants[*vi].second->kind != DomainKind::Unit)
            throw TypeError("variant " + e.str() + " needs a payload of domain " +
                                expected->variants[*vi].second->show(),
                            e.span());
          return Expr::tagged(e.str(), std::nullopt, e.span());
        }
      }
      throw UnknownName("unknown name " + e.str(), e.span());
    }
    case ExprKind::Call: {
      if (e.str() == "forget" && e.args().size() == 1 &&
          (e.args()[0].kind() == ExprKind::Name || e.args()[0].kind() == ExprKind::Var)) {
        auto [v, d] = infer_expr(Expr::forget(e.args()[0].str(), e.span()), ctx);
        if (domain_fits(d, expected)) return v;
        if (expected->kind == DomainKind::Rational && is_integral(d))
          return Expr::coerce_to_rat(v, e.span());
        throw TypeError("forget has domain " + d->show() + " but " + expected->show() +
                            " was expected",
                        e.span());
      }
      if (expected->kind == DomainKind::TaggedSum) {
        auto vi = expected->variant_index(e.str());
        if (!vi) throw TypeError("no variant " + e.str() + " in " + expected->show(), e.span());
        const DomainPtr& pd = expected->variants[*vi].second;
        if (e.args().empty()) {
          if (pd->kind != DomainKind::Unit)
            throw TypeError("variant " + e.str() + " needs a payload", e.span());
          return Expr::tagged(e.str(), std::nullopt, e.span());
        }
        Expr payload = e.args().size() == 1 ? e.args()[0] : Expr::tuple(e.args(), e.span());
        return Expr::tagged(e.str(), check_expr(payload, ctx, pd), e.span());
      }
      throw TypeError("application form " + e.str() + "(...) only constructs tagged values",
                      e.span());
    }
    case ExprKind::MkTagged: {
      if (expected->kind != DomainKind::TaggedSum)
        throw TypeError("tagged value where " + expected->show() + " expected", e.span());
      auto vi = expected->variant_index(e.str());
      if (!vi) throw TypeError("no variant " + e.str() + " in " + expected->show(), e.span());
      const DomainPtr& pd = expected->variants[*vi].second;
      if (e.args().empty()) {
        if (pd->kind != DomainKind::Unit)
          throw TypeError("variant " + e.str() + " needs a payload", e.span());
        return e;
      }
      return Expr::tagged(e.str(), check_expr(e.args()[0], ctx, pd), e.span());
    }
    case ExprKind::MkTuple: {
      if (expected->kind == DomainKind::Product) {
        if (e.args().size() != expected->components.size())
          throw TypeError("tuple arity mismatch against " + expected->show(), e.span());
        std::vector<Expr> items;
        for (size_t k = 0; k < e.args().size(); ++k)
          items.push_back(check_expr(e.args()[k], ctx, expected->components[k]));
        return Expr::tuple(std::move(items), e.span());
      }
      if (expected->kind == DomainKind::DependentPair) {
        if (e.args().size() != 2)
          throw TypeError("dependent pair takes two components", e.span());
        return check_expr(Expr::dep_pair(e.args()[0], e.args()[1], e.span()), ctx, expected);
      }
      throw TypeError("tuple where " + expected->show() + " expected", e.span());
    }
    case ExprKind::MkDepPair: {
      if (expected->kind != DomainKind::DependentPair)
        throw TypeError("dependent pair where " + expected->show() + " expected", e.span());
      Expr base = check_expr(e.args()[0], ctx, expected->base);
      auto bv = partial_eval(base, ctx.sigma, ctx.sigma_base);
      if (!bv)
        throw TypeError("cannot determine the dependent fibre for base " + base.show(), e.span());
      Expr fib = check_expr(e.args()[1], ctx, expected->fibre_at(*bv));
      return Expr::dep_pair(base, fib, e.span());
    }
    case ExprKind::If: {
      Expr c = check_expr(e.args()[0], ctx, Domain::boolean());
      Expr t = check_expr(e.args()[1], ctx, expected);
      Expr f = check_expr(e.args()[2], ctx, expected);
      return Expr::if_then_else(c, t, f, e.span());
    }
    case ExprKind::Case: {
      auto [s, ds] = infer_expr(e.args()[0], ctx);
      if (ds->kind != DomainKind::Enum && ds->kind != DomainKind::TaggedSum)
        throw TypeError("case scrutinee must be an enum or tagged sum, got " + ds->show(),
                        e.span());
      std::set<std::string> want;
      if (ds->kind == DomainKind::Enum)
        want.insert(ds->labels.begin(), ds->labels.end());
      else
        for (auto& [l, _] : ds->variants) want.insert(l);
      std::set<std::string> seen;
      std::vector<ExprBranch> brs;
      for (auto& br : e.branches()) {
        if (!want.count(br.label))
          throw TypeError("case branch " + br.label + " is not a variant of " + ds->show(),
                          e.span());
        if (!seen.insert(br.label).second)
          throw TypeError("duplicate case branch " + br.label, e.span());
        TypeCtx inner = ctx;
        if (!br.binder.empty()) {
          if (ds->kind != DomainKind::TaggedSum)
            throw TypeError("enum case branches take no binder", e.span());
          inner.vars[br.binder] = ds->variants[*ds->variant_index(br.label)].second;
        }
        brs.push_back(ExprBranch{br.label, br.binder, check_expr(br.body, inner, expected)});
      }
      if (seen != want) throw TypeError("case is not exhaustive over " + ds->show(), e.span());
      return Expr::case_of(s, std::move(brs), e.span());
    }
    case ExprKind::MkTerm: {
      if (expected->kind != DomainKind::TermDomain || !expected->code)
        throw TypeError("term construction where " + expected->show() + " expected", e.span());
      const FunctorCode& code = *expected->code;
      const ConstructorSpec* ctor = code.find(e.str());
      if (!ctor) throw TypeError("no constructor " + e.str() + " in " + code.name, e.span());
      size_t want = ctor->exvars.size() + ctor->const_fields.size() + ctor->rec_fields.size();
      if (e.args().size() != want)
        throw TypeError("constructor " + e.str() + " takes " + std::to_string(want) + " arguments",
                        e.span());
      std::vector<Expr> args;
      size_t k = 0;
      for (auto& [_, d] : ctor->exvars) args.push_back(check_expr(e.args()[k++], ctx, d));
      for (auto& [_, d] : ctor->const_fields) args.push_back(check_expr(e.args()[k++], ctx, d));
      for (size_t r = 0; r < ctor->rec_fields.size(); ++r)
        args.push_back(check_expr(e.args()[k++], ctx, expected));
      return Expr::term_ctor_split(e.str(), std::move(args), ctor->exvars.size(),
                                   ctor->const_fields.size(), e.span());
    }
    default:
      break;
  }
  auto [v, d] = infer_expr(e, ctx);
  if (domain_fits(d, expected)) return v;
  if (expected->kind == DomainKind::Rational && is_integral(d)) return Expr::coerce_to_rat(v, e.span());
  throw TypeError("expected " + expected->show() + " but found " + d->show() + " in " + e.show(),
                  e.span());
}

}  // namespace refinery
