#include "refinery/samples.hpp"

namespace refinery {

namespace {

DomainPtr ab_enum() { return Domain::enumeration({"a", "b"}); }
DomainPtr colour_enum() { return Domain::enumeration({"R", "B"}); }

Clause clause(std::vector<std::string> params, Expr body) {
  Clause c;
  c.params = std::move(params);
  c.body = std::move(body);
  return c;
}

Expr v(const char* n) { return Expr::var(n); }
Expr i(long x) { return Expr::int_lit(BigInt(x)); }

}  // namespace

DomainPtr sample_ty_domain() {
  return Domain::with_alias(Domain::enumeration({"int", "bool"}), "Ty");
}

CodePtr sample_list_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "List";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"Nil", {}, {}, {}, {}, std::nullopt, Expr::unit_lit()});
  c->constructors.push_back(
      {"Cons", {}, {}, {{"b", ab_enum()}}, {{"x", Expr::unit_lit()}}, std::nullopt, Expr::unit_lit()});
  return c;
}

CodePtr sample_listq_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "ListQ";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"Nil", {}, {}, {}, {}, std::nullopt, Expr::unit_lit()});
  c->constructors.push_back({"Cons",
                             {},
                             {},
                             {{"q", Domain::int_range(1, 2)}},
                             {{"x", Expr::unit_lit()}},
                             std::nullopt,
                             Expr::unit_lit()});
  return c;
}

CodePtr sample_tree_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "Tree";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"Leaf",
                             {},
                             {},
                             {{"z", Domain::int_range(0, 1)}},
                             {},
                             std::nullopt,
                             Expr::unit_lit()});
  c->constructors.push_back({"Node",
                             {},
                             {},
                             {},
                             {{"l", Expr::unit_lit()}, {"r", Expr::unit_lit()}},
                             std::nullopt,
                             Expr::unit_lit()});
  return c;
}

CodePtr sample_nat_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "Nat";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"zero", {}, {}, {}, {}, std::nullopt, Expr::unit_lit()});
  c->constructors.push_back(
      {"succ", {}, {}, {}, {{"x", Expr::unit_lit()}}, std::nullopt, Expr::unit_lit()});
  return c;
}

CodePtr sample_ctree_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "CTree";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"Leaf", {}, {}, {}, {}, std::nullopt, Expr::unit_lit()});
  c->constructors.push_back({"Br",
                             {},
                             {},
                             {{"c", colour_enum()}},
                             {{"l", Expr::unit_lit()}, {"r", Expr::unit_lit()}},
                             std::nullopt,
                             Expr::unit_lit()});
  return c;
}

CodePtr sample_exp_code() {
  auto c = std::make_shared<FunctorCode>();
  c->name = "Exp";
  c->index_domain = Domain::unit();
  c->constructors.push_back({"IntConst",
                             {},
                             {},
                             {{"z", Domain::int_range(0, 1)}},
                             {},
                             std::nullopt,
                             Expr::unit_lit()});
  c->constructors.push_back(
      {"BoolConst", {}, {}, {{"b", Domain::boolean()}}, {}, std::nullopt, Expr::unit_lit()});
  c->constructors.push_back({"Add",
                             {},
                             {},
                             {},
                             {{"x1", Expr::unit_lit()}, {"x2", Expr::unit_lit()}},
                             std::nullopt,
                             Expr::unit_lit()});
  c->constructors.push_back({"If",
                             {},
                             {},
                             {},
                             {{"x1", Expr::unit_lit()}, {"x2", Expr::unit_lit()}, {"x3", Expr::unit_lit()}},
                             std::nullopt,
                             Expr::unit_lit()});
  return c;
}

CodePtr sample_wtexp_code() {
  auto ty = sample_ty_domain();
  auto c = std::make_shared<FunctorCode>();
  c->name = "WTExp";
  c->index_domain = ty;
  c->constructors.push_back({"IntConst",
                             {},
                             {},
                             {{"z", Domain::int_range(0, 1)}},
                             {},
                             std::nullopt,
                             Expr::enum_lit("int")});
  c->constructors.push_back({"BoolConst",
                             {},
                             {},
                             {{"b", Domain::boolean()}},
                             {},
                             std::nullopt,
                             Expr::enum_lit("bool")});
  c->constructors.push_back({"Add",
                             {},
                             {},
                             {},
                             {{"x1", Expr::enum_lit("int")}, {"x2", Expr::enum_lit("int")}},
                             std::nullopt,
                             Expr::enum_lit("int")});
  c->constructors.push_back({"If",
                             {},
                             {{"t", ty}},
                             {},
                             {{"c", Expr::enum_lit("bool")}, {"x1", v("t")}, {"x2", v("t")}},
                             std::nullopt,
                             v("t")});
  return c;
}

AlgebraSpec sample_lengthalg() {
  AlgebraSpec a;
  a.name = "lengthalg";
  a.kind = AlgebraKind::Total;
  a.subject = "List";
  a.carrier = Domain::with_alias(Domain::integer(), "nat");
  a.clauses["Nil"] = clause({}, i(0));
  a.clauses["Cons"] = clause({"b", "n"}, Expr::arith('+', v("n"), i(1)));
  return a;
}

AlgebraSpec sample_sum_alg() {
  AlgebraSpec a;
  a.name = "sumAlg";
  a.kind = AlgebraKind::Total;
  a.subject = "Tree";
  a.carrier = Domain::integer();
  a.clauses["Leaf"] = clause({"z"}, v("z"));
  a.clauses["Node"] = clause({"l", "r"}, Expr::arith('+', v("l"), v("r")));
  return a;
}

AlgebraSpec sample_natval() {
  AlgebraSpec a;
  a.name = "natval";
  a.kind = AlgebraKind::Total;
  a.subject = "Nat";
  a.carrier = Domain::with_alias(Domain::integer(), "nat");
  a.clauses["zero"] = clause({}, i(0));
  a.clauses["succ"] = clause({"n"}, Expr::arith('+', v("n"), i(1)));
  return a;
}

ZygoPair sample_fact_zygo() {
  ZygoPair z;
  z.delta = sample_natval();
  AlgebraSpec g;
  g.name = "fact";
  g.kind = AlgebraKind::ZygoGamma;
  g.subject = "Nat";
  g.carrier = Domain::with_alias(Domain::integer(), "nat");
  g.companion = z.delta.carrier;
  g.clauses["zero"] = clause({}, i(1));
  // fact (succ (n, x)) = (n + 1) * x
  g.clauses["succ"] = clause(
      {"p"}, Expr::arith('*', Expr::arith('+', Expr::proj(v("p"), 0), i(1)), Expr::proj(v("p"), 1)));
  z.gamma = std::move(g);
  return z;
}

AlgebraSpec sample_tyinfer() {
  auto ty = sample_ty_domain();
  AlgebraSpec a;
  a.name = "tyInfer";
  a.kind = AlgebraKind::Partial;
  a.subject = "Exp";
  a.carrier = ty;
  auto ok = [](Expr e) { return Expr::tagged("ok", std::move(e)); };
  Expr fail = Expr::tagged("fail", std::nullopt);
  a.clauses["IntConst"] = clause({"z"}, ok(Expr::enum_lit("int")));
  a.clauses["BoolConst"] = clause({"b"}, ok(Expr::enum_lit("bool")));
  a.clauses["Add"] = clause(
      {"t1", "t2"},
      Expr::if_then_else(
          Expr::logical_and(Expr::cmp(CmpOp::Eq, v("t1"), Expr::enum_lit("int")),
                            Expr::cmp(CmpOp::Eq, v("t2"), Expr::enum_lit("int"))),
          ok(Expr::enum_lit("int")), fail));
  a.clauses["If"] = clause(
      {"t1", "t2", "t3"},
      Expr::if_then_else(Expr::logical_and(Expr::cmp(CmpOp::Eq, v("t1"), Expr::enum_lit("bool")),
                                           Expr::cmp(CmpOp::Eq, v("t2"), v("t3"))),
                         ok(v("t2")), fail));
  return a;
}

AlgebraSpec sample_checkrb() {
  AlgebraSpec a;
  a.name = "checkRB";
  a.kind = AlgebraKind::Partial;
  a.subject = "CTree";
  a.carrier = Domain::product({colour_enum(), Domain::integer()});
  auto ok = [](Expr e) { return Expr::tagged("ok", std::move(e)); };
  Expr fail = Expr::tagged("fail", std::nullopt);
  a.clauses["Leaf"] = clause({}, ok(Expr::tuple({Expr::enum_lit("B"), i(1)})));
  // Br(c, (s1,n1), (s2,n2)): dispatch on the colour of the new node.
  Expr s1 = Expr::proj(v("p1"), 0), n1 = Expr::proj(v("p1"), 1);
  Expr s2 = Expr::proj(v("p2"), 0), n2 = Expr::proj(v("p2"), 1);
  Expr red_guard = Expr::logical_and(
      Expr::logical_and(Expr::cmp(CmpOp::Eq, s1, Expr::enum_lit("B")),
                        Expr::cmp(CmpOp::Eq, s2, Expr::enum_lit("B"))),
      Expr::cmp(CmpOp::Eq, n1, n2));
  Expr red_case = Expr::if_then_else(red_guard, ok(Expr::tuple({Expr::enum_lit("R"), n1})), fail);
  Expr black_case =
      Expr::if_then_else(Expr::cmp(CmpOp::Eq, n1, n2),
                         ok(Expr::tuple({Expr::enum_lit("B"), Expr::arith('+', n1, i(1))})), fail);
  a.clauses["Br"] = clause(
      {"c", "p1", "p2"},
      Expr::case_of(v("c"), {{"R", "", red_case}, {"B", "", black_case}}));
  return a;
}

AlgebraSpec sample_sumlength() {
  AlgebraSpec a;
  a.name = "sumlength";
  a.kind = AlgebraKind::Total;
  a.subject = "ListQ";
  a.carrier = Domain::product({Domain::rational(), Domain::integer()});
  a.clauses["Nil"] =
      clause({}, Expr::tuple({Expr::coerce_to_rat(i(0)), i(0)}));
  a.clauses["Cons"] = clause(
      {"q", "p"}, Expr::tuple({Expr::coerce_to_rat(Expr::arith('+', v("q"), Expr::proj(v("p"), 0))),
                               Expr::arith('+', Expr::proj(v("p"), 1), i(1))}));
  return a;
}

ZygoPair sample_avg_zygo() {
  ZygoPair z;
  z.delta = sample_sumlength();
  AlgebraSpec g;
  g.name = "avg";
  g.kind = AlgebraKind::ZygoGamma;
  g.subject = "ListQ";
  g.carrier = Domain::tagged_sum({{"empty", Domain::unit()}, {"avg", Domain::rational()}});
  g.companion = z.delta.carrier;
  g.clauses["Nil"] = clause({}, Expr::tagged("empty", std::nullopt));
  // avg (Cons (q, ((s, l), _))) = avg ((q + s) / (l + 1))
  Expr s = Expr::proj(Expr::proj(v("p"), 0), 0);
  Expr l = Expr::proj(Expr::proj(v("p"), 0), 1);
  g.clauses["Cons"] = clause(
      {"q", "p"},
      Expr::tagged("avg", Expr::arith('/', Expr::arith('+', v("q"), s),
                                      Expr::arith('+', l, i(1)))));
  z.gamma = std::move(g);
  return z;
}

AlgebraSpec sample_evalalg() {
  auto ty = sample_ty_domain();
  AlgebraSpec a;
  a.name = "evalAlg";
  a.kind = AlgebraKind::Total;
  a.subject = "WTExp";
  a.indexed = true;
  a.carrier = Domain::dependent_pair(
      ty, {{Value::enum_label("int"), Domain::integer()}, {Value::enum_label("bool"), Domain::boolean()}});
  a.clauses["IntConst"] = clause({"z"}, v("z"));
  a.clauses["BoolConst"] = clause({"b"}, v("b"));
  a.clauses["Add"] = clause({"z1", "z2"}, Expr::arith('+', v("z1"), v("z2")));
  a.clauses["If"] = clause({"t", "c", "x1", "x2"}, Expr::if_then_else(v("c"), v("x1"), v("x2")));
  return a;
}

std::vector<std::pair<std::string, CodePtr>> sample_lemma_shapes() {
  return {
      {"List", sample_list_code()}, {"Tree", sample_tree_code()},  {"Nat", sample_nat_code()},
      {"CTree", sample_ctree_code()}, {"Exp", sample_exp_code()},
  };
}

}  // namespace refinery
