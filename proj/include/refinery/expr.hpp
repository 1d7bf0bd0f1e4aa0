#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "refinery/domain.hpp"

namespace refinery {

enum class ExprKind {
  IntLit,
  BoolLit,
  UnitLit,
  Name,     // surface only: unresolved identifier
  Var,      // resolved variable
  EnumLit,  // resolved enum label
  Arith,    // + - * /
  Neg,
  Cmp,  // = != < <=
  And,
  Or,
  Not,
  If,
  Case,
  MkTuple,
  MkDepPair,  // resolved dependent-pair construction
  Proj,       // 0-based; works on tuples and dependent pairs
  Call,       // surface only: name(args) or juxtaposition
  MkTagged,   // resolved tagged-value construction (ok/fail/avg/...)
  MkTerm,     // @Ctor(args): term construction for TermDomain carriers
  Forget,     // forget x: companion-function reference in IR index expressions
  Coerce,     // int -> rational, inserted by the checker
};

enum class CmpOp { Eq, Ne, Lt, Le };

struct ExprBranch;

class Expr {
public:
  struct Node;
  using Branch = ExprBranch;

  Expr() = default;
  bool empty() const { return !node_; }

  static Expr int_lit(BigInt v, Span s = {});
  static Expr bool_lit(bool v, Span s = {});
  static Expr unit_lit(Span s = {});
  static Expr name(std::string n, Span s = {});
  static Expr var(std::string n, Span s = {});
  static Expr enum_lit(std::string label, Span s = {});
  static Expr arith(char op, Expr l, Expr r, Span s = {});
  static Expr neg(Expr e, Span s = {});
  static Expr cmp(CmpOp op, Expr l, Expr r, Span s = {});
  static Expr logical_and(Expr l, Expr r, Span s = {});
  static Expr logical_or(Expr l, Expr r, Span s = {});
  static Expr logical_not(Expr e, Span s = {});
  static Expr if_then_else(Expr c, Expr t, Expr e, Span s = {});
  static Expr case_of(Expr scrutinee, std::vector<ExprBranch> branches, Span s = {});
  static Expr tuple(std::vector<Expr> items, Span s = {});
  static Expr dep_pair(Expr base, Expr fibre, Span s = {});
  static Expr proj(Expr e, size_t index0, Span s = {});
  static Expr call(std::string name, std::vector<Expr> args, Span s = {});
  static Expr tagged(std::string label, std::optional<Expr> payload, Span s = {});
  static Expr term_ctor(std::string ctor, std::vector<Expr> args, Span s = {});
  /// Term construction with the positional split fixed: the first n_exvars
  /// args are existentials, the next n_consts are payload fields, the rest
  /// are subterms. Elaboration always produces this form.
  static Expr term_ctor_split(std::string ctor, std::vector<Expr> args, size_t n_exvars,
                              size_t n_consts, Span s = {});
  static Expr forget(std::string rec_field, Span s = {});
  static Expr coerce_to_rat(Expr e, Span s = {});

  ExprKind kind() const;
  Span span() const;
  const BigInt& int_value() const;
  bool bool_value() const;
  const std::string& str() const;  // Name/Var/EnumLit/Call/MkTagged label/MkTerm ctor/Forget field
  char op() const;
  CmpOp cmp_op() const;
  size_t proj_index() const;
  bool term_split_known() const;
  size_t term_n_exvars() const;
  size_t term_n_consts() const;
  const std::vector<Expr>& args() const;
  const std::vector<ExprBranch>& branches() const;

  /// Canonical, re-parseable rendering (used by codegen and reports).
  std::string show() const;

  bool operator==(const Expr& o) const { return equal(*this, o); }
  static bool equal(const Expr& a, const Expr& b);

  /// Free ordinary variables (Var and surface Name), case binders excluded.
  std::set<std::string> free_vars() const;
  /// Rec-field names referenced through `forget`.
  std::set<std::string> forget_refs() const;

  /// Capture-checked substitution: replaces free Var/Name occurrences.
  Expr substitute(const std::map<std::string, Expr>& repl) const;

  /// Zygo split substitution: `var.1` becomes `first`, `var.2` becomes
  /// `second`, a bare `var` becomes the pair (first, second).
  Expr substitute_split(const std::string& var, const Expr& first, const Expr& second) const;

private:
  std::shared_ptr<const Node> node_;
  static Expr wrap(std::shared_ptr<const Node> n);
};

/// One case branch; the binder (when non-empty) binds the payload of a
/// tagged-sum variant inside the body.
struct ExprBranch {
  std::string label;
  std::string binder;
  Expr body;
};

// ---- evaluation ---------------------------------------------------------------

using Env = std::map<std::string, Value>;

/// Key under which a rec field's forget value is bound in an evaluation env.
std::string forget_env_key(const std::string& rec_field);

/// Call-by-value evaluation of an elaborated expression. Deterministic; throws
/// DivisionByZero with the source span.
Value eval_expr(const Expr& e, const Env& env);

/// Partial evaluation: returns the value when every needed variable is bound,
/// nullopt otherwise. `base_env` supplies base components of dependent-pair
/// variables (used by static dependent typing): key -> base value.
std::optional<Value> partial_eval(const Expr& e, const Env& env, const Env& base_env);

// ---- typing / elaboration ------------------------------------------------------

struct TypeCtx {
  std::map<std::string, DomainPtr> vars;
  // Static valuations for dependent typing: concrete values for finite
  // discriminator variables, and base components of DP-typed variables.
  Env sigma;
  Env sigma_base;
  bool allow_forget = false;
  DomainPtr forget_domain;
  const std::set<std::string>* forget_fields = nullptr;  // rec-field names usable inside forget
};

/// True when a value of domain `have` may appear where `want` is expected
/// without coercion: structural equality, or integer domains (Int/IntRange)
/// against each other.
bool domain_fits(const DomainPtr& have, const DomainPtr& want);

/// Checks `e` against `expected`, resolving surface names and inserting
/// int->rational coercions. Returns the elaborated expression. Throws
/// TypeError / UnknownName with spans.
Expr check_expr(const Expr& e, TypeCtx& ctx, const DomainPtr& expected);

/// Synthesizes a domain where possible (variables, literals, arithmetic,
/// comparisons, projections, ...). Throws TypeError when the form needs an
/// expected domain (tags, tuples against dependent pairs, ...).
std::pair<Expr, DomainPtr> infer_expr(const Expr& e, TypeCtx& ctx);

}  // namespace refinery
