#include <doctest.h>

#include <string>
#include <vector>

#include "sdb/error.hpp"
#include "sdb/semantics.hpp"

using namespace sdb;

namespace {

AttributeId attr(const std::string& s) { return AttributeId(s); }

Face face(std::initializer_list<const char*> names) {
  std::vector<AttributeId> vs;
  for (const char* n : names) vs.emplace_back(n);
  return Face(std::move(vs));
}

Value va(const char* t) { return Value::atom(t); }

Value vrow(std::initializer_list<std::pair<const char*, const char*>> cells) {
  std::vector<std::pair<AttributeId, Value>> cs;
  for (auto& [k, v] : cells) cs.emplace_back(attr(k), va(v));
  return Value::row(std::move(cs));
}

// The schema of the running example given as an instance over simplex(2):
// S(0)={A}, S(1)={B}, S(2)={C}, S(01)={R}, S(12)={Q}, S(02)=S(012)=empty.
Instance schema_as_instance() {
  std::map<Face, std::vector<Value>> rows;
  rows[face({"0"})] = {va("A")};
  rows[face({"1"})] = {va("B")};
  rows[face({"2"})] = {va("C")};
  rows[face({"0", "1"})] = {vrow({{"0", "A"}, {"1", "B"}})};
  rows[face({"1", "2"})] = {vrow({{"1", "B"}, {"2", "C"}})};
  return Instance::make(simplex(2), std::move(rows));
}

// The example data as an instance over elements(S): tables R and Q.
Instance data_over_elements() {
  SchemaElements e(schema_as_instance());
  std::map<Face, std::vector<Value>> rows;
  AttributeId a0 = e.vertex_of(attr("0"), va("A"));
  AttributeId b1 = e.vertex_of(attr("1"), va("B"));
  AttributeId c2 = e.vertex_of(attr("2"), va("C"));
  rows[Face({a0})] = {va("a"), va("a'")};
  rows[Face({b1})] = {va("b"), va("d")};
  rows[Face({c2})] = {va("c"), va("e")};
  rows[Face({a0, b1})] = {Value::row({{a0, va("a")}, {b1, va("b")}}),
                          Value::row({{a0, va("a'")}, {b1, va("b")}})};
  rows[Face({b1, c2})] = {Value::row({{b1, va("b")}, {c2, va("c")}}),
                          Value::row({{b1, va("d")}, {c2, va("e")}})};
  return Instance::make(e.total(), std::move(rows));
}

Value fam(std::initializer_list<std::pair<Value, Value>> entries) {
  return Value::family(std::vector<std::pair<Value, Value>>(entries));
}

}  // namespace

TEST_CASE("pi computes the natural join") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  Instance join = pi_instance(s, i);

  // Seven tables. Families over the one-key index sets are singletons.
  Value fa = fam({{va("A"), va("a")}});
  Value fa2 = fam({{va("A"), va("a'")}});
  Value fb = fam({{va("B"), va("b")}});
  Value fd = fam({{va("B"), va("d")}});
  Value fc = fam({{va("C"), va("c")}});
  Value fe = fam({{va("C"), va("e")}});

  CHECK(join.rows(face({"0"})) == std::vector<Value>{fa, fa2});
  CHECK(join.rows(face({"1"})) == std::vector<Value>{fb, fd});
  CHECK(join.rows(face({"2"})) == std::vector<Value>{fc, fe});

  auto row2 = [](AttributeId x, Value vx, AttributeId y, Value vy) {
    return Value::row({{x, vx}, {y, vy}});
  };
  CHECK(join.rows(face({"0", "1"})) ==
        std::vector<Value>{row2(attr("0"), fa, attr("1"), fb),
                           row2(attr("0"), fa2, attr("1"), fb)});
  CHECK(join.rows(face({"1", "2"})) ==
        std::vector<Value>{row2(attr("1"), fb, attr("2"), fc),
                           row2(attr("1"), fd, attr("2"), fe)});
  // The 02 face has no table in S, so all four combinations appear.
  CHECK(join.rows(face({"0", "2"})).size() == 4);
  CHECK(join.rows(face({"0", "1", "2"})).size() == 2);

  // Exactly two full tuples, the joined rows (a,b,c) and (a',b,c).
  auto ts = full_tuples(join);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].at(attr("0")) == fa);
  CHECK(ts[0].at(attr("1")) == fb);
  CHECK(ts[0].at(attr("2")) == fc);
  CHECK(ts[1].at(attr("0")) == fa2);
}

TEST_CASE("pi over a terminal base reindexes the fiber") {
  Complex x = simplex(1);
  Instance one = terminal(x);
  SchemaElements e(one);
  // G over elements(1_X): two rows at each vertex, one edge row.
  AttributeId w0 = e.vertex_of(attr("0"), va("0"));
  AttributeId w1 = e.vertex_of(attr("1"), va("1"));
  Instance g = Instance::make(
      e.total(), {{Face({w0}), {va("x"), va("y")}},
                  {Face({w1}), {va("z")}},
                  {Face({w0, w1}), {Value::row({{w0, va("x")}, {w1, va("z")}})}}});
  Instance pi = pi_instance(one, g);
  // One key per index set: row counts match G's through the bijection.
  CHECK(pi.rows(face({"0"})).size() == 2);
  CHECK(pi.rows(face({"1"})).size() == 1);
  CHECK(pi.rows(face({"0", "1"})).size() == 1);
}

TEST_CASE("pi over an empty base yields the unit") {
  Complex x = simplex(1);
  Instance zero = initial(x);
  Instance g(Instance{});  // over the empty elements complex
  Instance pi = pi_instance(zero, g);
  for (const Face& f : x.faces()) CHECK(pi.rows(f).size() == 1);
  CHECK(full_tuples(pi).size() == 1);
}

TEST_CASE("sigma tags base rows with fiber rows") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  Instance sig = sigma_instance(s, i);
  CHECK(sig.rows(face({"0"})).size() == 2);   // (A,a), (A,a')
  CHECK(sig.rows(face({"0", "1"})).size() == 2);
  CHECK(sig.rows(face({"0", "2"})).empty());  // S(02) empty
  CHECK(sig.rows(face({"0", "1", "2"})).empty());

  // Row-count bijection with the fiber.
  std::size_t total = 0;
  for (const Face& f : i.base().faces()) total += i.rows(f).size();
  CHECK(sig.cell_count() == total);

  // Sigma over an initial fiber is initial.
  Instance zero_fiber = initial(elements(s).total());
  CHECK(sigma_instance(s, zero_fiber) == initial(s.base()));

  // Sigma over the terminal fiber is J with unit padding, one row per row.
  Instance one_fiber = terminal(elements(s).total());
  Instance sig1 = sigma_instance(s, one_fiber);
  for (const Face& f : s.base().faces()) CHECK(sig1.rows(f).size() == s.rows(f).size());
}

TEST_CASE("sigma stability under display substitution") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  SchemaMorphism f = face_map(1, 2);  // simplex(1) -> simplex(2), image {0,1}
  Instance lhs = substitute(sigma_instance(s, i), f);
  Instance rhs = sigma_instance(substitute(s, f), substitute(i, lift(f, s)));
  CHECK(lhs == rhs);
}

TEST_CASE("pi stability under display substitution") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  CHECK(pi_subst_law(face_map(1, 2), s, i));
  CHECK(pi_subst_law(face_map(1, 0), s, i));
  CHECK(pi_subst_law(identity(simplex(2)), s, i));
}

TEST_CASE("lambda and apply are inverse") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  for (const FullTuple& t : full_tuples(i)) {
    FullTuple lt = lambda_tuple(s, t);
    CHECK(apply_tuple(s, i, lt) == t);
  }
  for (const FullTuple& p : full_tuples(pi_instance(s, i)))
    CHECK(lambda_tuple(s, apply_tuple(s, i, p)) == p);

  // (lambda t)[f] = lambda (t[f~]).
  SchemaMorphism f = face_map(1, 2);
  for (const FullTuple& t : full_tuples(i)) {
    FullTuple lhs = subst_tuple(lambda_tuple(s, t), f);
    FullTuple rhs = lambda_tuple(substitute(s, f), subst_tuple(t, lift(f, s)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("identity instance is unit on the diagonal") {
  Instance s = schema_as_instance();
  Instance id_s = identity_instance(s);
  SchemaElements e1(s);
  Instance sp = substitute(s, e1.projection());
  SchemaElements e2(sp);

  // Row counts over ((x,a),b): 1 iff a = b.
  for (AttributeId w2 : e2.total().vertices()) {
    AttributeId w1 = e2.projection().apply(w2);
    bool diag = e1.value_at(w1) == e2.value_at(w2);
    CHECK(id_s.rows(Face({w2})).size() == (diag ? 1u : 0u));
  }

  FullTuple r = refl_tuple(s);
  for (const auto& [w, v] : r.choice()) {
    (void)w;
    CHECK(v == Value::unit());
  }
}

TEST_CASE("sum counts and canonical injections") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  Instance zero = initial(i.base());
  Instance sum0 = sum_instance(zero, i);
  for (const Face& f : i.base().faces()) {
    CHECK(sum0.rows(f).size() == i.rows(f).size());
    for (const Value& r : sum0.rows(f))
      if (f.size() == 1) CHECK(r.tag_bit() == 1);
  }

  Instance ii = sum_instance(i, i);
  for (const Face& f : i.base().faces()) CHECK(ii.rows(f).size() == 2 * i.rows(f).size());

  FullTuple l = left_tuple(i, i);
  FullTuple r = right_tuple(i, i);
  CHECK(l.instance() == r.instance());
  CHECK(l != r);
  (void)s;
}

TEST_CASE("star is the unique tuple of the terminal instance") {
  Complex s = data_over_elements().base();
  FullTuple star = star_tuple(s);
  auto all = full_tuples(terminal(s));
  REQUIRE(all.size() == 1);
  CHECK(all[0] == star);
}

TEST_CASE("rec_0 over the empty schema") {
  FullTuple t = eliminate_zero(simplex(1), Instance());
  CHECK(t.choice().empty());
  try {
    eliminate_zero(simplex(1), terminal(simplex(1)));
    FAIL("expected KindMismatch");
  } catch (const ModelError& e) {
    CHECK(e.code() == Errc::kind_mismatch);
  }
}

TEST_CASE("rec_1 computation law") {
  Complex x = simplex(1);
  SchemaElements e(terminal(x));
  // Motive over elements(1_X): a fresh two-row instance.
  AttributeId w0 = e.vertex_of(attr("0"), va("0"));
  AttributeId w1 = e.vertex_of(attr("1"), va("1"));
  Instance c = Instance::make(
      e.total(),
      {{Face({w0}), {va("p"), va("q")}},
       {Face({w1}), {va("r")}},
       {Face({w0, w1}),
        {Value::row({{w0, va("p")}, {w1, va("r")}}), Value::row({{w0, va("q")}, {w1, va("r")}})}}});
  FullTuple star = star_tuple(x);
  Instance c_star = substitute(c, section(star));
  for (const FullTuple& c0 : full_tuples(c_star)) {
    FullTuple rec = eliminate_one(x, c, c0);
    CHECK(subst_tuple(rec, section(star)) == c0);  // the computation law
  }
}

TEST_CASE("rec_sigma computation law") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  Instance sig = sigma_instance(s, i);
  SchemaElements es(sig);
  Instance c = terminal(es.total());

  SchemaElements e1(s);
  SchemaElements e2(i);
  SchemaMorphism pp = compose(e1.projection(), e2.projection());
  SchemaMorphism m = compose(lift(pp, sig), section(pair_tuple(s, i)));
  Instance c_pair = substitute(c, m);
  for (const FullTuple& c0 : full_tuples(c_pair)) {
    FullTuple rec = eliminate_sigma(s, i, c, c0);
    CHECK(subst_tuple(rec, m) == c0);
  }
}

TEST_CASE("rec_id computation law") {
  Instance s = schema_as_instance();
  Instance id_s = identity_instance(s);
  SchemaElements e3(id_s);
  Instance c = terminal(e3.total());

  FullTuple v = generic_element(s);
  SchemaMorphism m = compose(lift(section(v), id_s), section(refl_tuple(s)));
  Instance c_refl = substitute(c, m);
  for (const FullTuple& c0 : full_tuples(c_refl)) {
    FullTuple rec = eliminate_id(s, c, c0);
    CHECK(subst_tuple(rec, m) == c0);
  }
}

TEST_CASE("rec_plus computation laws") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  Instance g = substitute(s, elements(s).projection());  // another instance over elements(S)
  Instance sum = sum_instance(i, g);
  SchemaElements es(sum);
  Instance c = terminal(es.total());

  SchemaMorphism ml = compose(lift(elements(i).projection(), sum), section(left_tuple(i, g)));
  SchemaMorphism mr = compose(lift(elements(g).projection(), sum), section(right_tuple(i, g)));
  FullTuple c0 = full_tuples(substitute(c, ml)).at(0);
  FullTuple c1 = full_tuples(substitute(c, mr)).at(0);
  FullTuple rec = eliminate_plus(i, g, c, c0, c1);
  CHECK(subst_tuple(rec, ml) == c0);
  CHECK(subst_tuple(rec, mr) == c1);

  // Dispatcher front end agrees.
  ElimContext ctx{i.base(), {i, g}};
  CHECK(eliminate(ElimKind::plus, ctx, c, {c0, c1}) == rec);
  try {
    eliminate(ElimKind::plus, ctx, c, {c0});
    FAIL("expected MissingComponent");
  } catch (const ModelError& e) {
    CHECK(e.code() == Errc::missing_component);
  }
}

TEST_CASE("pair tuple validates") {
  Instance s = schema_as_instance();
  Instance i = data_over_elements();
  FullTuple p = pair_tuple(s, i);
  for (const auto& [w, v] : p.choice()) {
    (void)w;
    CHECK(v.kind() == Value::Kind::pair);
  }
}

TEST_CASE("base mismatches are rejected") {
  Instance s = schema_as_instance();
  Instance wrong = terminal(simplex(1));
  try {
    sigma_instance(s, wrong);
    FAIL("expected BaseMismatch");
  } catch (const ModelError& e) {
    CHECK(e.code() == Errc::base_mismatch);
  }
  try {
    sum_instance(s, wrong);
    FAIL("expected BaseMismatch");
  } catch (const ModelError& e) {
    CHECK(e.code() == Errc::base_mismatch);
  }
}
