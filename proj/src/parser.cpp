#include "refinery/parser.hpp"

#include <set>

#include "lexer.hpp"

namespace refinery::dsl {

namespace {

// Words that never begin or continue an expression; they stop the
// juxtaposition rule (`ok int`, `forget x`) from swallowing structure.
const std::set<std::string>& structure_words() {
  static const std::set<std::string> words{
      "then", "else",  "of",      "when",   "with", "by",     "as",   "bound",
      "style", "domain", "type",   "algebra", "partial", "zygo", "refine", "verify",
      "emit", "rec",   "uninhabited", "enum", "sum",  "sigma",  "term", "family", "init"};
  return words;
}

constexpr int kMaxExprDepth = 400;

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  SpecFile parse_file() {
    SpecFile out;
    while (!at(Tok::End)) out.decls.push_back(parse_decl());
    return out;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int depth_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Ident) && cur().text == w; }
  Token eat() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  Token expect(Tok k, const char* what) {
    if (!at(k))
      throw SyntaxError(cur().span, "expected " + std::string(what) + " but found " +
                                        (cur().kind == Tok::Ident ? "'" + cur().text + "'"
                                                                  : tok_name(cur().kind)),
                        what);
    return eat();
  }
  std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }
  void expect_word(const char* w) {
    if (!at_word(w))
      throw SyntaxError(cur().span, std::string("expected '") + w + "'", w);
    eat();
  }

  // ---- declarations -------------------------------------------------------

  Decl parse_decl() {
    Span sp = cur().span;
    if (at_word("domain")) return parse_domain_decl();
    if (at_word("type")) return parse_type_decl();
    if (at_word("algebra")) return parse_algebra_decl(SurfaceAlgebra::Kind::Total);
    if (at_word("partial")) {
      eat();
      expect_word("algebra");
      Decl d = parse_algebra_tail(SurfaceAlgebra::Kind::Partial, sp);
      return d;
    }
    if (at_word("zygo")) {
      eat();
      return parse_algebra_tail(SurfaceAlgebra::Kind::Zygo, sp);
    }
    if (at_word("refine") || at_word("verify") || at_word("emit")) return parse_directive();
    throw SyntaxError(cur().span,
                      "expected a declaration (domain, type, algebra, partial algebra, zygo, "
                      "refine, verify or emit)",
                      "declaration");
  }

  Decl parse_domain_decl() {
    Decl d;
    d.kind = Decl::Kind::Domain;
    d.span = cur().span;
    eat();  // domain
    d.name = expect_ident("domain name");
    expect(Tok::Eq, "'='");
    d.domain = parse_domain();
    return d;
  }

  Decl parse_type_decl() {
    Decl d;
    d.kind = Decl::Kind::Type;
    d.span = cur().span;
    eat();  // type
    d.type.span = d.span;
    d.type.name = expect_ident("type name");
    d.name = d.type.name;
    if (at(Tok::LParen)) {
      eat();
      while (true) {
        std::string pn = expect_ident("parameter name");
        expect(Tok::Colon, "':'");
        d.type.params.push_back({pn, parse_domain()});
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    if (at_word("uninhabited")) {
      eat();
      d.type.uninhabited = true;
    }
    if (at(Tok::Colon)) {
      eat();
      d.type.index = parse_domain();
    }
    expect(Tok::Eq, "'='");
    d.type.ctors.push_back(parse_ctor());
    while (at(Tok::Pipe)) {
      eat();
      d.type.ctors.push_back(parse_ctor());
    }
    return d;
  }

  SurfaceCtor parse_ctor() {
    SurfaceCtor c;
    c.span = cur().span;
    c.name = expect_ident("constructor name");
    if (at(Tok::LBrace)) {
      eat();
      while (true) {
        std::string n = expect_ident("existential variable name");
        expect(Tok::Colon, "':'");
        c.exvars.push_back({n, parse_domain()});
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
    }
    if (at(Tok::LParen)) {
      eat();
      while (true) {
        SurfaceField f;
        f.span = cur().span;
        f.name = expect_ident("field name");
        expect(Tok::Colon, "':'");
        if (at_word("rec")) {
          eat();
          f.is_rec = true;
          if (at(Tok::At)) {
            eat();
            f.rec_index = parse_expr();
          }
        } else {
          f.domain = parse_domain();
        }
        c.fields.push_back(std::move(f));
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    if (at_word("when")) {
      eat();
      c.guard = parse_expr();
    }
    if (at(Tok::Colon)) {
      eat();
      c.result = parse_expr();
    }
    return c;
  }

  Decl parse_algebra_decl(SurfaceAlgebra::Kind kind) {
    Span sp = cur().span;
    eat();  // algebra
    return parse_algebra_tail(kind, sp);
  }

  Decl parse_algebra_tail(SurfaceAlgebra::Kind kind, Span sp) {
    Decl d;
    d.kind = Decl::Kind::Algebra;
    d.span = sp;
    d.algebra.kind = kind;
    d.algebra.span = sp;
    d.algebra.name = expect_ident("algebra name");
    d.name = d.algebra.name;
    expect(Tok::Colon, "':'");
    d.algebra.subject = expect_ident("subject type name");
    expect(Tok::Arrow, "'->'");
    if (at_word("family")) {
      d.algebra.carrier = parse_family_domain();
    } else {
      d.algebra.carrier = parse_domain();
    }
    if (kind == SurfaceAlgebra::Kind::Zygo) {
      expect_word("with");
      d.algebra.delta = expect_ident("delta algebra name (or init)");
    }
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      SurfaceClause cl;
      cl.span = cur().span;
      cl.ctor = expect_ident("constructor name");
      if (at(Tok::LParen)) {
        eat();
        if (!at(Tok::RParen)) {
          cl.params.push_back(parse_pattern());
          while (at(Tok::Comma)) {
            eat();
            cl.params.push_back(parse_pattern());
          }
        }
        expect(Tok::RParen, "')'");
      }
      expect(Tok::FatArrow, "'=>'");
      cl.body = parse_expr();
      d.algebra.clauses.push_back(std::move(cl));
      if (at(Tok::Semi)) {
        eat();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return d;
  }

  Pattern parse_pattern() {
    Pattern p;
    p.span = cur().span;
    if (at(Tok::Ident) && cur().text == "_") {
      eat();
      p.kind = Pattern::Kind::Wildcard;
      return p;
    }
    if (at(Tok::Ident)) {
      p.kind = Pattern::Kind::Name;
      p.name = eat().text;
      return p;
    }
    if (at(Tok::LParen)) {
      eat();
      p.kind = Pattern::Kind::Tuple;
      p.subs.push_back(parse_pattern());
      expect(Tok::Comma, "','");
      p.subs.push_back(parse_pattern());
      while (at(Tok::Comma)) {
        eat();
        p.subs.push_back(parse_pattern());
      }
      expect(Tok::RParen, "')'");
      return p;
    }
    throw SyntaxError(cur().span, "expected a pattern", "pattern");
  }

  Decl parse_directive() {
    Decl d;
    d.kind = Decl::Kind::Directive;
    d.span = cur().span;
    d.directive.span = d.span;
    std::string word = eat().text;
    if (word == "refine") {
      d.directive.kind = SurfaceDirective::Kind::Refine;
      d.directive.type_name = expect_ident("type name");
      expect_word("by");
      d.directive.algebra = expect_ident("algebra name");
      if (at_word("as")) {
        eat();
        d.directive.as_name = expect_ident("name");
      }
    } else if (word == "verify") {
      d.directive.kind = SurfaceDirective::Kind::Verify;
      d.directive.type_name = expect_ident("type name");
      expect_word("by");
      d.directive.algebra = expect_ident("algebra name");
      if (at_word("bound")) {
        eat();
        Token n = expect(Tok::Int, "a bound");
        d.directive.bound = std::stoi(n.text.size() > 6 ? "999999" : n.text);
      }
    } else {
      d.directive.kind = SurfaceDirective::Kind::Emit;
      d.directive.type_name = expect_ident("a type or refinement name");
      if (at_word("style")) {
        eat();
        std::string s = expect_ident("a style (agda-like or internal)");
        if (s == "agda") s = "agda-like";
        if (s != "agda-like" && s != "internal")
          throw SyntaxError(cur().span, "unknown emission style " + s, "agda-like or internal");
        d.directive.style = s;
      }
    }
    return d;
  }

  // ---- domains -----------------------------------------------------------

  SurfaceDomain parse_family_domain() {
    SurfaceDomain d;
    d.kind = SurfaceDomain::Kind::Family;
    d.span = cur().span;
    expect_word("family");
    d.sigma_base.push_back(parse_domain());
    expect(Tok::LBrace, "'{'");
    while (true) {
      Expr key = parse_expr();
      expect(Tok::Arrow, "'->'");
      d.table.push_back({key, parse_domain()});
      if (at(Tok::Comma)) {
        eat();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return d;
  }

  SurfaceDomain parse_domain() {
    SurfaceDomain d;
    d.span = cur().span;
    if (at(Tok::LParen)) {
      eat();
      SurfaceDomain first = parse_domain();
      if (at(Tok::RParen)) {
        eat();
        return first;
      }
      d.kind = SurfaceDomain::Kind::Product;
      d.components.push_back(std::move(first));
      while (at(Tok::Comma)) {
        eat();
        d.components.push_back(parse_domain());
      }
      expect(Tok::RParen, "')'");
      return d;
    }
    std::string word = expect_ident("a domain");
    if (word == "unit") d.kind = SurfaceDomain::Kind::Unit;
    else if (word == "bool") d.kind = SurfaceDomain::Kind::Bool;
    else if (word == "rational") d.kind = SurfaceDomain::Kind::Rational;
    else if (word == "int") {
      if (at(Tok::LBracket)) {
        eat();
        d.kind = SurfaceDomain::Kind::IntRange;
        d.lo = parse_int_literal();
        expect(Tok::DotDot, "'..'");
        d.hi = parse_int_literal();
        expect(Tok::RBracket, "']'");
      } else {
        d.kind = SurfaceDomain::Kind::Int;
      }
    } else if (word == "enum") {
      d.kind = SurfaceDomain::Kind::Enum;
      expect(Tok::LBrace, "'{'");
      d.labels.push_back(expect_ident("a label"));
      while (at(Tok::Comma)) {
        eat();
        d.labels.push_back(expect_ident("a label"));
      }
      expect(Tok::RBrace, "'}'");
    } else if (word == "sum") {
      d.kind = SurfaceDomain::Kind::Sum;
      expect(Tok::LBrace, "'{'");
      while (true) {
        std::string l = expect_ident("a variant label");
        expect(Tok::Colon, "':'");
        d.variants.push_back({l, parse_domain()});
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
    } else if (word == "sigma") {
      d.kind = SurfaceDomain::Kind::Sigma;
      d.sigma_base.push_back(parse_domain());
      expect(Tok::LBrace, "'{'");
      while (true) {
        Expr key = parse_expr();
        expect(Tok::Arrow, "'->'");
        d.table.push_back({key, parse_domain()});
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
    } else if (word == "term") {
      d.kind = SurfaceDomain::Kind::Term;
      expect(Tok::LParen, "'('");
      d.name = expect_ident("a type name");
      expect(Tok::RParen, "')'");
    } else {
      d.kind = SurfaceDomain::Kind::Named;
      d.name = word;
    }
    return d;
  }

  BigInt parse_int_literal() {
    bool negative = false;
    if (at(Tok::Minus)) {
      eat();
      negative = true;
    }
    Token t = expect(Tok::Int, "an integer");
    BigInt v(t.text);
    return negative ? -v : v;
  }

  // ---- expressions ---------------------------------------------------------

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& p_) : p(p_) {
      if (++p.depth_ > kMaxExprDepth)
        throw SyntaxError(p.cur().span, "expression nesting too deep", "a shallower expression");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Expr parse_expr() {
    DepthGuard g(*this);
    if (at_word("if")) {
      Span sp = cur().span;
      eat();
      Expr c = parse_expr();
      expect_word("then");
      Expr t = parse_expr();
      expect_word("else");
      Expr e = parse_expr();
      return Expr::if_then_else(c, t, e, sp);
    }
    if (at_word("case")) {
      Span sp = cur().span;
      eat();
      Expr scrut = parse_expr();
      expect_word("of");
      expect(Tok::LBrace, "'{'");
      std::vector<ExprBranch> branches;
      while (true) {
        std::string label = expect_ident("a branch label");
        std::string binder;
        if (at(Tok::LParen)) {
          eat();
          binder = expect_ident("a binder");
          expect(Tok::RParen, "')'");
        }
        expect(Tok::FatArrow, "'=>'");
        branches.push_back(ExprBranch{label, binder, parse_expr()});
        if (at(Tok::Semi)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return Expr::case_of(scrut, std::move(branches), sp);
    }
    return parse_or();
  }

  Expr parse_or() {
    Expr l = parse_and();
    while (at(Tok::OrOr)) {
      Span sp = eat().span;
      l = Expr::logical_or(l, parse_and(), sp);
    }
    return l;
  }

  Expr parse_and() {
    Expr l = parse_not();
    while (at(Tok::AndAnd)) {
      Span sp = eat().span;
      l = Expr::logical_and(l, parse_not(), sp);
    }
    return l;
  }

  Expr parse_not() {
    if (at(Tok::Bang)) {
      Span sp = eat().span;
      return Expr::logical_not(parse_not(), sp);
    }
    return parse_cmp();
  }

  Expr parse_cmp() {
    Expr l = parse_add();
    auto make = [&](CmpOp op, bool swap) {
      Span sp = eat().span;
      Expr r = parse_add();
      return swap ? Expr::cmp(op, r, l, sp) : Expr::cmp(op, l, r, sp);
    };
    if (at(Tok::Eq)) return make(CmpOp::Eq, false);
    if (at(Tok::Ne)) return make(CmpOp::Ne, false);
    if (at(Tok::Lt)) return make(CmpOp::Lt, false);
    if (at(Tok::Le)) return make(CmpOp::Le, false);
    if (at(Tok::Gt)) return make(CmpOp::Lt, true);
    if (at(Tok::Ge)) return make(CmpOp::Le, true);
    return l;
  }

  Expr parse_add() {
    Expr l = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      char op = at(Tok::Plus) ? '+' : '-';
      Span sp = eat().span;
      l = Expr::arith(op, l, parse_mul(), sp);
    }
    return l;
  }

  Expr parse_mul() {
    Expr l = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      char op = at(Tok::Star) ? '*' : '/';
      Span sp = eat().span;
      l = Expr::arith(op, l, parse_unary(), sp);
    }
    return l;
  }

  Expr parse_unary() {
    if (at(Tok::Minus)) {
      Span sp = eat().span;
      return Expr::neg(parse_unary(), sp);
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_atom();
    while (at(Tok::Dot)) {
      Span sp = eat().span;
      Token n = expect(Tok::Int, "a projection index");
      long idx = std::stol(n.text.size() > 4 ? "9999" : n.text);
      if (idx < 1) throw SyntaxError(sp, "projection indices are 1-based", "a positive index");
      e = Expr::proj(e, static_cast<size_t>(idx - 1), sp);
    }
    return e;
  }

  bool atom_ahead() const {
    if (at(Tok::Int) || at(Tok::LParen) || at(Tok::At)) return true;
    if (at(Tok::Ident)) return !structure_words().count(cur().text);
    return false;
  }

  Expr parse_atom() {
    DepthGuard g(*this);
    Span sp = cur().span;
    if (at(Tok::Int)) return Expr::int_lit(BigInt(eat().text), sp);
    if (at(Tok::At)) {
      eat();
      std::string ctor = expect_ident("a constructor name");
      std::vector<Expr> args;
      if (at(Tok::LParen)) {
        eat();
        if (!at(Tok::RParen)) {
          args.push_back(parse_expr());
          while (at(Tok::Comma)) {
            eat();
            args.push_back(parse_expr());
          }
        }
        expect(Tok::RParen, "')'");
      }
      return Expr::term_ctor(ctor, std::move(args), sp);
    }
    if (at(Tok::LParen)) {
      eat();
      Expr first = parse_expr();
      if (at(Tok::Comma)) {
        std::vector<Expr> items{first};
        while (at(Tok::Comma)) {
          eat();
          items.push_back(parse_expr());
        }
        expect(Tok::RParen, "')'");
        return Expr::tuple(std::move(items), sp);
      }
      expect(Tok::RParen, "')'");
      return first;
    }
    if (at(Tok::Ident)) {
      std::string word = eat().text;
      if (word == "true") return Expr::bool_lit(true, sp);
      if (word == "false") return Expr::bool_lit(false, sp);
      if (word == "unit") return Expr::unit_lit(sp);
      if (structure_words().count(word))
        throw SyntaxError(sp, "'" + word + "' cannot start an expression", "an expression");
      if (at(Tok::LParen)) {
        eat();
        std::vector<Expr> args;
        if (!at(Tok::RParen)) {
          args.push_back(parse_expr());
          while (at(Tok::Comma)) {
            eat();
            args.push_back(parse_expr());
          }
        }
        expect(Tok::RParen, "')'");
        return Expr::call(word, std::move(args), sp);
      }
      // Juxtaposition: `ok int`, `forget x`, `avg (...)`. One argument.
      if (atom_ahead()) {
        Expr arg = parse_postfix();
        return Expr::call(word, {arg}, sp);
      }
      return Expr::name(word, sp);
    }
    throw SyntaxError(sp, "expected an expression", "an expression");
  }
};

}  // namespace

SpecFile parse(std::string_view text) { return Parser(text).parse_file(); }

// ---- printing ------------------------------------------------------------------

namespace {

std::string print_expr(const Expr& e) { return e.show(); }

std::string print_pattern(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Wildcard:
      return "_";
    case Pattern::Kind::Name:
      return p.name;
    case Pattern::Kind::Tuple: {
      std::string out = "(";
      for (size_t k = 0; k < p.subs.size(); ++k) {
        if (k) out += ", ";
        out += print_pattern(p.subs[k]);
      }
      return out + ")";
    }
  }
  return "_";
}

}  // namespace

std::string print_domain(const SurfaceDomain& d) {
  using K = SurfaceDomain::Kind;
  switch (d.kind) {
    case K::Named:
      return d.name;
    case K::Unit:
      return "unit";
    case K::Bool:
      return "bool";
    case K::Int:
      return "int";
    case K::Rational:
      return "rational";
    case K::IntRange:
      return "int[" + d.lo.str() + ".." + d.hi.str() + "]";
    case K::Enum: {
      std::string out = "enum{";
      for (size_t k = 0; k < d.labels.size(); ++k) {
        if (k) out += ", ";
        out += d.labels[k];
      }
      return out + "}";
    }
    case K::Product: {
      std::string out = "(";
      for (size_t k = 0; k < d.components.size(); ++k) {
        if (k) out += ", ";
        out += print_domain(d.components[k]);
      }
      return out + ")";
    }
    case K::Sum: {
      std::string out = "sum{";
      for (size_t k = 0; k < d.variants.size(); ++k) {
        if (k) out += ", ";
        out += d.variants[k].first + ": " + print_domain(d.variants[k].second);
      }
      return out + "}";
    }
    case K::Sigma:
    case K::Family: {
      std::string out = (d.kind == K::Sigma ? "sigma " : "family ") + print_domain(d.sigma_base.at(0)) + " {";
      for (size_t k = 0; k < d.table.size(); ++k) {
        if (k) out += ", ";
        out += print_expr(d.table[k].first) + " -> " + print_domain(d.table[k].second);
      }
      return out + "}";
    }
    case K::Term:
      return "term(" + d.name + ")";
  }
  return "?";
}

std::string print(const SpecFile& f) {
  std::string out;
  for (auto& d : f.decls) {
    switch (d.kind) {
      case Decl::Kind::Domain:
        out += "domain " + d.name + " = " + print_domain(d.domain) + "\n\n";
        break;
      case Decl::Kind::Type: {
        auto& t = d.type;
        out += "type " + t.name;
        if (!t.params.empty()) {
          out += "(";
          for (size_t k = 0; k < t.params.size(); ++k) {
            if (k) out += ", ";
            out += t.params[k].first + ": " + print_domain(t.params[k].second);
          }
          out += ")";
        }
        if (t.uninhabited) out += " uninhabited";
        if (t.index) out += " : " + print_domain(*t.index);
        out += " =\n";
        for (size_t k = 0; k < t.ctors.size(); ++k) {
          auto& c = t.ctors[k];
          out += (k == 0 ? "    " : "  | ") + c.name;
          if (!c.exvars.empty()) {
            out += " {";
            for (size_t i = 0; i < c.exvars.size(); ++i) {
              if (i) out += ", ";
              out += c.exvars[i].first + ": " + print_domain(c.exvars[i].second);
            }
            out += "}";
          }
          if (!c.fields.empty()) {
            out += " (";
            for (size_t i = 0; i < c.fields.size(); ++i) {
              if (i) out += ", ";
              auto& fld = c.fields[i];
              out += fld.name + ": ";
              if (fld.is_rec) {
                out += "rec";
                if (fld.rec_index) out += " @ " + print_expr(*fld.rec_index);
              } else {
                out += print_domain(fld.domain);
              }
            }
            out += ")";
          }
          if (c.guard) out += " when " + print_expr(*c.guard);
          if (c.result) out += " : " + print_expr(*c.result);
          out += "\n";
        }
        out += "\n";
        break;
      }
      case Decl::Kind::Algebra: {
        auto& a = d.algebra;
        if (a.kind == SurfaceAlgebra::Kind::Partial) out += "partial algebra ";
        else if (a.kind == SurfaceAlgebra::Kind::Zygo) out += "zygo ";
        else out += "algebra ";
        out += a.name + " : " + a.subject + " -> " + print_domain(a.carrier);
        if (a.kind == SurfaceAlgebra::Kind::Zygo) out += " with " + a.delta;
        out += " {\n";
        for (size_t k = 0; k < a.clauses.size(); ++k) {
          auto& cl = a.clauses[k];
          out += "  " + cl.ctor;
          if (!cl.params.empty()) {
            out += "(";
            for (size_t i = 0; i < cl.params.size(); ++i) {
              if (i) out += ", ";
              out += print_pattern(cl.params[i]);
            }
            out += ")";
          }
          out += " => " + print_expr(cl.body);
          out += k + 1 < a.clauses.size() ? ";\n" : "\n";
        }
        out += "}\n\n";
        break;
      }
      case Decl::Kind::Directive: {
        auto& dir = d.directive;
        switch (dir.kind) {
          case SurfaceDirective::Kind::Refine:
            out += "refine " + dir.type_name + " by " + dir.algebra;
            if (!dir.as_name.empty()) out += " as " + dir.as_name;
            break;
          case SurfaceDirective::Kind::Verify:
            out += "verify " + dir.type_name + " by " + dir.algebra;
            if (dir.bound > 0) out += " bound " + std::to_string(dir.bound);
            break;
          case SurfaceDirective::Kind::Emit:
            out += "emit " + dir.type_name + " style " + dir.style;
            break;
        }
        out += "\n\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace refinery::dsl
