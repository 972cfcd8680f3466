#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <sstream>

#include "sdb/error.hpp"
#include "sdb/parser.hpp"

using namespace sdb;
using namespace sdb::ast;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Tiny deterministic generator for round-trip testing.
struct Rng {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

std::string rand_name(Rng& r) {
  static const char* names[] = {"S", "I", "T", "foo", "a'", "r0", "x_y", "Qq"};
  return names[r.below(8)];
}

TypePtr rand_type(Rng& r, int depth);
TermPtr rand_term(Rng& r, int depth);
SubstPtr rand_subst(Rng& r, int depth);

CtxPtr rand_ctx(Rng& r, int depth) {
  int pick = depth <= 0 ? r.below(2) : r.below(3);
  if (pick == 0) return ctx(CtxExpr{SimplexCtx{r.below(4)}});
  if (pick == 1) return ctx(CtxExpr{NamedCtx{rand_name(r)}});
  return ctx(CtxExpr{ExtendCtx{rand_ctx(r, depth - 1), rand_type(r, depth - 1)}});
}

TypePtr rand_type(Rng& r, int depth) {
  int pick = depth <= 0 ? r.below(3) : 3 + r.below(6);
  switch (pick) {
    case 0: return type(TypeExpr{NamedType{rand_name(r)}});
    case 1: return type(TypeExpr{ZeroType{}});
    case 2: return type(TypeExpr{OneType{}});
    case 3: return type(TypeExpr{SubstType{rand_type(r, depth - 1), rand_subst(r, depth - 1)}});
    case 4: return type(TypeExpr{PiType{rand_type(r, depth - 1), rand_type(r, depth - 1)}});
    case 5: return type(TypeExpr{SigmaType{rand_type(r, depth - 1), rand_type(r, depth - 1)}});
    case 6: return type(TypeExpr{IdType{rand_type(r, depth - 1)}});
    case 7: return type(TypeExpr{PlusType{rand_type(r, depth - 1), rand_type(r, depth - 1)}});
    default: return type(TypeExpr{NamedType{rand_name(r)}});
  }
}

TermPtr rand_term(Rng& r, int depth) {
  int pick = depth <= 0 ? r.below(7) : r.below(12);
  switch (pick) {
    case 0: return term(TermExpr{NamedTerm{rand_name(r)}});
    case 1: return term(TermExpr{VarTerm{}});
    case 2: return term(TermExpr{StarTerm{}});
    case 3: return term(TermExpr{PairTerm{}});
    case 4: return term(TermExpr{ReflTerm{}});
    case 5: return term(TermExpr{LeftTerm{}});
    case 6: return term(TermExpr{RightTerm{}});
    case 7: return term(TermExpr{SubstTerm{rand_term(r, depth - 1), rand_subst(r, depth - 1)}});
    case 8: return term(TermExpr{LambdaTerm{rand_term(r, depth - 1)}});
    case 9: return term(TermExpr{ApplyTerm{rand_term(r, depth - 1)}});
    case 10: {
      RecKind kinds[] = {RecKind::zero, RecKind::one, RecKind::sigma, RecKind::id, RecKind::plus};
      std::vector<TermPtr> args;
      for (int i = r.below(3); i > 0; --i) args.push_back(rand_term(r, 0));
      return term(TermExpr{RecTerm{kinds[r.below(5)], std::move(args)}});
    }
    default: {
      std::vector<TermPtr> args;
      for (int i = r.below(3); i > 0; --i) args.push_back(rand_term(r, 0));
      return term(TermExpr{RecDeclaredTerm{rand_name(r), std::move(args)}});
    }
  }
}

SubstPtr rand_subst(Rng& r, int depth) {
  int pick = depth <= 0 ? r.below(3) : r.below(6);
  switch (pick) {
    case 0: return subst(SubstExpr{IdentitySubst{}});
    case 1: return subst(SubstExpr{ProjectSubst{}});
    case 2: return subst(SubstExpr{FaceMapSubst{r.below(5)}});
    case 3: return subst(SubstExpr{EvalSubst{rand_term(r, depth - 1)}});
    case 4: return subst(SubstExpr{LiftSubst{rand_subst(r, depth - 1), rand_type(r, depth - 1)}});
    default:
      return subst(SubstExpr{ComposeSubst{rand_subst(r, depth - 1), rand_subst(r, depth - 1)}});
  }
}

Judgement rand_judgement(Rng& r) {
  int d = 2;
  switch (r.below(8)) {
    case 0: return Judgement{JCtx{rand_ctx(r, d)}};
    case 1: return Judgement{JCtxEq{rand_ctx(r, d), rand_ctx(r, d)}};
    case 2: return Judgement{JType{rand_ctx(r, d), rand_type(r, d)}};
    case 3: return Judgement{JTypeEq{rand_ctx(r, d), rand_type(r, d), rand_type(r, d)}};
    case 4: return Judgement{JTerm{rand_ctx(r, d), rand_term(r, d), rand_type(r, d)}};
    case 5:
      return Judgement{JTermEq{rand_ctx(r, d), rand_term(r, d), rand_term(r, d),
                               rand_type(r, d)}};
    case 6: return Judgement{JSubst{rand_subst(r, d), rand_ctx(r, d), rand_ctx(r, d)}};
    default:
      return Judgement{
          JSubstEq{rand_subst(r, d), rand_subst(r, d), rand_ctx(r, d), rand_ctx(r, d)}};
  }
}

}  // namespace

TEST_CASE("parses the shipped example file") {
  auto decls = parse(slurp(std::string(TEST_DATA_DIR) + "/join.sdb"));
  REQUIRE(decls.size() == 7);
  auto* s = std::get_if<SchemaDecl>(&decls[0].node);
  REQUIRE(s != nullptr);
  CHECK(s->name == "S");
  CHECK(s->base_dim == 2);
  CHECK(s->gens.size() == 5);
  CHECK(s->eqs.size() == 4);
  CHECK(s->gens[0].path.steps == std::vector<int>{2, 1});

  auto* i = std::get_if<InstanceDecl>(&decls[1].node);
  REQUIRE(i != nullptr);
  CHECK(i->name == "I");
  CHECK(i->of == "S");
  CHECK(i->gens.size() == 10);
  CHECK(i->eqs.size() == 8);

  auto* q = std::get_if<QueryDecl>(&decls[2].node);
  REQUIRE(q != nullptr);
  CHECK(q->name == "join");
  REQUIRE(q->type_body);
  auto* pi = std::get_if<PiType>(&q->type_body->node);
  REQUIRE(pi != nullptr);

  auto* w = std::get_if<QueryDecl>(&decls[3].node);
  REQUIRE(w != nullptr);
  REQUIRE(w->term_body);
  auto* lam = std::get_if<LambdaTerm>(&w->term_body->node);
  REQUIRE(lam != nullptr);
  auto* rec = std::get_if<RecDeclaredTerm>(&lam->body->node);
  REQUIRE(rec != nullptr);
  CHECK(rec->name == "S");
  CHECK(rec->args.size() == 5);
}

TEST_CASE("empty schema body parses") {
  auto decls = parse("schema S over D 2 { }");
  REQUIRE(decls.size() == 1);
  auto* s = std::get_if<SchemaDecl>(&decls[0].node);
  REQUIRE(s != nullptr);
  CHECK(s->gens.empty());
}

TEST_CASE("trailing junk is a positioned syntax error") {
  try {
    parse("query q = Pi S I extra");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 18);
  }
  CHECK_THROWS_AS(parse("schema over D 2 { }"), SyntaxError);
  CHECK_THROWS_AS(parse("schema S over D 2 {"), SyntaxError);
  CHECK_THROWS_AS(parse("instance I of S { gen }"), SyntaxError);
  CHECK_THROWS_AS(parse("judgement D 2 |-"), SyntaxError);
  CHECK_THROWS_AS(parse("@"), SyntaxError);
}

TEST_CASE("parsing never crashes on fuzzed input") {
  Rng r{2024};
  const std::string alphabet = "schema ins{}[]()=:.!+*|->#\n abQRdv01 'o";
  for (int round = 0; round < 300; ++round) {
    std::string text;
    int len = r.below(80);
    for (int k = 0; k < len; ++k) text += alphabet[r.below(static_cast<int>(alphabet.size()))];
    try {
      auto decls = parse(text);
      (void)decls;
    } catch (const SyntaxError&) {
    }
  }
}

TEST_CASE("judgement forms parse") {
  auto form = [](const char* text) {
    Judgement j = parse_judgement(text);
    return j.node.index();
  };
  CHECK(form("judgement D 2 . S context") == 0);
  CHECK(form("judgement D 2 = D 2") == 1);
  CHECK(form("judgement D 2 |- Pi S I type") == 2);
  CHECK(form("judgement D 2 |- Pi S I = Sigma S I") == 3);
  CHECK(form("judgement D 0 |- a : I[(d2 o d1).S][a!]") == 4);
  CHECK(form("judgement D 0 |- r0[d1] = a : T") == 5);
  CHECK(form("judgement d2 o d0 : D 0 -> D 2") == 6);
  CHECK(form("judgement d2 o d0 = d0 o d1 : D 0 -> D 2") == 7);
}

TEST_CASE("print then parse is the identity on judgements") {
  Rng r{99};
  int checked = 0;
  for (int round = 0; round < 500; ++round) {
    Judgement j = rand_judgement(r);
    std::string text = print_judgement(j);
    CAPTURE(text);
    Judgement back = parse_judgement(text);
    CHECK(equal(j, back));
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("substitution printing pins associativity") {
  // a o (b o c) must not reparse as (a o b) o c.
  SubstPtr a = subst(SubstExpr{FaceMapSubst{0}});
  SubstPtr b = subst(SubstExpr{FaceMapSubst{1}});
  SubstPtr c = subst(SubstExpr{IdentitySubst{}});
  SubstPtr right = subst(SubstExpr{ComposeSubst{a, subst(SubstExpr{ComposeSubst{b, c}})}});
  Judgement j{JSubst{right, ctx(CtxExpr{SimplexCtx{0}}), ctx(CtxExpr{SimplexCtx{2}})}};
  CHECK(print_judgement(j) == "judgement d0 o (d1 o id) : D 0 -> D 2");
  CHECK(equal(parse_judgement(print_judgement(j)), j));
}
