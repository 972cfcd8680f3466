#include "sdb/semantics.hpp"

#include <algorithm>
#include <memory>

#include "sdb/error.hpp"

namespace sdb {

namespace {

void require_over_elements(const SchemaElements& e, const Instance& g, const char* former) {
  if (g.base() != e.total())
    throw ModelError(Errc::base_mismatch,
                     std::string(former) + ": fiber instance is not over the element schema");
}

Value tag_row(const Value& r, const Face& face, int bit) {
  if (face.size() == 1) return Value::tag(bit, r);
  std::vector<std::pair<AttributeId, Value>> cells;
  cells.reserve(face.size());
  for (AttributeId a : face.vertices()) cells.emplace_back(a, Value::tag(bit, r.at(a)));
  return Value::row(std::move(cells));
}

}  // namespace

Instance sigma_instance(const Instance& j, const Instance& g) {
  auto e = std::make_shared<SchemaElements>(j);
  require_over_elements(*e, g, "sigma");

  RawInstance raw;
  raw.base = j.base();
  for (const Face& x : raw.base.faces()) {
    std::vector<Value> keys;
    for (const Value& a : j.rows(x))
      for (const Value& b : g.rows(e->face_of(x, a))) keys.push_back(Value::pair(a, b));
    raw.keys[x] = std::move(keys);
  }
  raw.restrict_key = [e, &j](const Face& from, const Value& key, const Face& to) {
    (void)j;
    const Value& a = key.pair_first();
    const Value& b = key.pair_second();
    Value a_to = restrict_row(a, from, to);
    Value b_to = restrict_row(b, e->face_of(from, a), e->face_of(to, a_to));
    return Value::pair(std::move(a_to), std::move(b_to));
  };
  return tuplify(raw);
}

namespace detail {

Instance pi_impl(const Instance& j, const Instance& g, bool check_families) {
  SchemaElements e(j);
  require_over_elements(e, g, "pi");
  const Complex& base = j.base();
  const AttributeId attr_tag("0");
  (void)attr_tag;

  RawInstance raw;
  raw.base = base;
  for (const Face& x : base.faces()) {
    // Index pairs (A, a) with A a vertex of x and a a J-row at A. A family
    // assigns each pair a G-row at the element vertex (A,a); it is accepted
    // when the candidate row it induces at every (subface y, J-row at y) is
    // stored in G. Families over subfaces determine families over faces, so
    // these are exactly the right Kan extension cells.
    struct IndexPair {
      AttributeId attr;
      Value key;
      AttributeId vertex;
    };
    std::vector<IndexPair> pairs;
    for (AttributeId a : x.vertices())
      for (const Value& key : j.rows(Face({a}))) pairs.push_back({a, key, e.vertex_of(a, key)});

    struct Check {
      Face element_face;                  // the face of elements(J) over (y, a)
      std::vector<std::size_t> members;   // indices into `pairs`, aligned with y's attrs
    };
    std::vector<Check> checks;
    if (check_families) {
      for (const Face& y : x.all_subfaces()) {
        if (y.size() < 2) continue;
        for (const Value& a : j.rows(y)) {
          Check chk{e.face_of(y, a), {}};
          for (AttributeId b : y.vertices()) {
            Value component = restrict_row(a, y, Face({b}));
            for (std::size_t p = 0; p < pairs.size(); ++p)
              if (pairs[p].attr == b && pairs[p].key == component) {
                chk.members.push_back(p);
                break;
              }
          }
          internal_check(chk.members.size() == y.size(), "pi: missing index pair");
          checks.push_back(std::move(chk));
        }
      }
    }

    std::vector<Value> families;
    std::vector<Value> assignment(pairs.size(), Value::unit());
    auto emit = [&]() {
      if (x.size() == 1) {
        std::vector<std::pair<Value, Value>> entries;
        for (std::size_t p = 0; p < pairs.size(); ++p)
          entries.emplace_back(pairs[p].key, assignment[p]);
        families.push_back(Value::family(std::move(entries)));
      } else {
        std::vector<std::pair<Value, Value>> entries;
        for (std::size_t p = 0; p < pairs.size(); ++p)
          entries.emplace_back(Value::pair(Value::atom(pairs[p].attr.name()), pairs[p].key),
                               assignment[p]);
        families.push_back(Value::family(std::move(entries)));
      }
    };
    auto accept = [&]() {
      for (const Check& chk : checks) {
        Value candidate = [&] {
          if (chk.members.size() == 1) return assignment[chk.members[0]];
          std::vector<std::pair<AttributeId, Value>> cells;
          for (std::size_t i = 0; i < chk.members.size(); ++i)
            cells.emplace_back(chk.element_face.vertices()[i], assignment[chk.members[i]]);
          return Value::row(std::move(cells));
        }();
        const auto& rows = g.rows(chk.element_face);
        if (!std::binary_search(rows.begin(), rows.end(), candidate)) return false;
      }
      return true;
    };
    auto enumerate = [&](auto&& self, std::size_t p) -> void {
      if (p == pairs.size()) {
        if (accept()) emit();
        return;
      }
      for (const Value& c : g.rows(Face({pairs[p].vertex}))) {
        assignment[p] = c;
        self(self, p + 1);
      }
    };
    enumerate(enumerate, 0);
    raw.keys[x] = std::move(families);
  }

  raw.restrict_key = [](const Face& from, const Value& key, const Face& to) {
    if (from.size() == 1) return key;
    std::vector<std::pair<Value, Value>> kept;
    if (to.size() == 1) {
      Value want = Value::atom(to.vertices()[0].name());
      for (const auto& [k, v] : key.family_entries())
        if (k.pair_first() == want) kept.emplace_back(k.pair_second(), v);
    } else {
      for (const auto& [k, v] : key.family_entries()) {
        AttributeId a(k.pair_first().atom_token());
        if (to.contains(a)) kept.emplace_back(k, v);
      }
    }
    return Value::family(std::move(kept));
  };
  return tuplify(raw);
}

}  // namespace detail

Instance pi_instance(const Instance& j, const Instance& g) {
  return detail::pi_impl(j, g, true);
}

Instance sum_instance(const Instance& i, const Instance& j) {
  if (i.base() != j.base())
    throw ModelError(Errc::base_mismatch, "disjoint union of instances over different schemas");
  std::map<Face, std::vector<Value>> rows;
  for (const Face& x : i.base().faces()) {
    std::vector<Value> set;
    for (const Value& r : i.rows(x)) set.push_back(tag_row(r, x, 0));
    for (const Value& r : j.rows(x)) set.push_back(tag_row(r, x, 1));
    rows[x] = std::move(set);
  }
  return Instance::make(i.base(), std::move(rows));
}

Instance identity_instance(const Instance& j) {
  SchemaElements e1(j);
  Instance jp = substitute(j, e1.projection());
  SchemaElements e2(jp);

  std::map<Face, std::vector<Value>> rows;
  for (const Face& face2 : e2.total().faces()) {
    Face face1 = e2.projection().apply(face2);
    Value b = e2.row_of(face2);  // the J[p]-row, keyed by face1
    Value a = e1.row_of(face1);  // the J-row face1 lies over, keyed by the base face
    Value b_rekeyed = [&] {
      if (face1.size() == 1) return b;
      std::vector<std::pair<AttributeId, Value>> cells;
      for (AttributeId w : face1.vertices())
        cells.emplace_back(e1.projection().apply(w), b.at(w));
      return Value::row(std::move(cells));
    }();
    if (!(a == b_rekeyed)) continue;
    if (face2.size() == 1) {
      rows[face2] = {Value::unit()};
    } else {
      std::vector<std::pair<AttributeId, Value>> cells;
      for (AttributeId w2 : face2.vertices()) cells.emplace_back(w2, Value::unit());
      rows[face2] = {Value::row(std::move(cells))};
    }
  }
  return Instance::make(e2.total(), std::move(rows));
}

FullTuple lambda_tuple(const Instance& j, const FullTuple& t) {
  SchemaElements e(j);
  require_over_elements(e, t.instance(), "lambda");
  Instance pi = pi_instance(j, t.instance());
  std::map<AttributeId, Value> choice;
  for (AttributeId a : j.base().vertices()) {
    std::vector<std::pair<Value, Value>> entries;
    for (const Value& key : j.rows(Face({a})))
      entries.emplace_back(key, t.at(e.vertex_of(a, key)));
    choice.emplace(a, Value::family(std::move(entries)));
  }
  return FullTuple::make(std::move(pi), std::move(choice));
}

FullTuple apply_tuple(const Instance& j, const Instance& g, const FullTuple& s) {
  SchemaElements e(j);
  require_over_elements(e, g, "apply");
  internal_check(s.base() == j.base(), "apply: tuple not over the base schema");
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e.total().vertices()) {
    AttributeId a = e.projection().apply(w);
    choice.emplace(w, s.at(a).family_at(e.value_at(w)));
  }
  return FullTuple::make(g, std::move(choice));
}

bool pi_subst_law(const SchemaMorphism& f, const Instance& j, const Instance& g) {
  Instance lhs = substitute(pi_instance(j, g), f);
  Instance rhs = pi_instance(substitute(j, f), substitute(g, lift(f, j)));
  return lhs == rhs;
}

FullTuple pair_tuple(const Instance& j, const Instance& g) {
  SchemaElements e1(j);
  require_over_elements(e1, g, "pair");
  SchemaElements e2(g);
  Instance sig = sigma_instance(j, g);
  Instance sig_sub = substitute(sig, compose(e1.projection(), e2.projection()));
  std::map<AttributeId, Value> choice;
  for (AttributeId w2 : e2.total().vertices()) {
    AttributeId w1 = e2.projection().apply(w2);
    choice.emplace(w2, Value::pair(e1.value_at(w1), e2.value_at(w2)));
  }
  return FullTuple::make(std::move(sig_sub), std::move(choice));
}

FullTuple refl_tuple(const Instance& j) {
  SchemaElements e1(j);
  Instance id_j = identity_instance(j);
  FullTuple v = generic_element(j);
  Instance id_v = substitute(id_j, section(v));
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e1.total().vertices()) choice.emplace(w, Value::unit());
  return FullTuple::make(std::move(id_v), std::move(choice));
}

FullTuple left_tuple(const Instance& i, const Instance& j) {
  Instance sum = sum_instance(i, j);
  SchemaElements e(i);
  Instance sub = substitute(sum, e.projection());
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e.total().vertices())
    choice.emplace(w, Value::tag(0, e.value_at(w)));
  return FullTuple::make(std::move(sub), std::move(choice));
}

FullTuple right_tuple(const Instance& i, const Instance& j) {
  Instance sum = sum_instance(i, j);
  SchemaElements e(j);
  Instance sub = substitute(sum, e.projection());
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e.total().vertices())
    choice.emplace(w, Value::tag(1, e.value_at(w)));
  return FullTuple::make(std::move(sub), std::move(choice));
}

FullTuple star_tuple(const Complex& x) {
  Instance one = terminal(x);
  std::map<AttributeId, Value> choice;
  for (AttributeId a : x.vertices()) choice.emplace(a, Value::atom(a.name()));
  return FullTuple::make(std::move(one), std::move(choice));
}

FullTuple eliminate_zero(const Complex& x, const Instance& c) {
  (void)x;
  if (c.base() != Complex())
    throw ModelError(Errc::kind_mismatch, "rec_0: motive must live over the empty schema");
  return FullTuple::make(c, {});
}

FullTuple eliminate_one(const Complex& x, const Instance& c, const FullTuple& c0) {
  SchemaElements e(terminal(x));
  if (c.base() != e.total())
    throw ModelError(Errc::kind_mismatch, "rec_1: motive must live over the unit extension");
  Instance expected = substitute(c, section(star_tuple(x)));
  if (c0.instance() != expected)
    throw ModelError(Errc::component_type_mismatch, "rec_1: component has the wrong type");
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e.total().vertices()) choice.emplace(w, c0.at(e.projection().apply(w)));
  return FullTuple::make(c, std::move(choice));
}

FullTuple eliminate_sigma(const Instance& j, const Instance& g, const Instance& c,
                          const FullTuple& c0) {
  SchemaElements e1(j);
  require_over_elements(e1, g, "rec_sigma");
  SchemaElements e2(g);
  Instance sig = sigma_instance(j, g);
  SchemaElements es(sig);
  if (c.base() != es.total())
    throw ModelError(Errc::kind_mismatch, "rec_sigma: motive must live over the sum extension");

  SchemaMorphism pp = compose(e1.projection(), e2.projection());
  SchemaMorphism m = compose(lift(pp, sig), section(pair_tuple(j, g)));
  if (c0.instance() != substitute(c, m))
    throw ModelError(Errc::component_type_mismatch, "rec_sigma: component has the wrong type");

  std::map<AttributeId, Value> choice;
  for (AttributeId w : es.total().vertices()) {
    const Value& v = es.value_at(w);
    internal_check(v.kind() == Value::Kind::pair, "sigma cell is not a pair");
    AttributeId w1 = e1.vertex_of(es.projection().apply(w), v.pair_first());
    AttributeId w2 = e2.vertex_of(w1, v.pair_second());
    choice.emplace(w, c0.at(w2));
  }
  return FullTuple::make(c, std::move(choice));
}

FullTuple eliminate_id(const Instance& j, const Instance& c, const FullTuple& c0) {
  SchemaElements e1(j);
  Instance jp = substitute(j, e1.projection());
  SchemaElements e2(jp);
  Instance id_j = identity_instance(j);
  SchemaElements e3(id_j);
  if (c.base() != e3.total())
    throw ModelError(Errc::kind_mismatch, "rec_id: motive must live over the identity extension");

  FullTuple v = generic_element(j);
  SchemaMorphism m = compose(lift(section(v), id_j), section(refl_tuple(j)));
  if (c0.instance() != substitute(c, m))
    throw ModelError(Errc::component_type_mismatch, "rec_id: component has the wrong type");

  std::map<AttributeId, Value> choice;
  for (AttributeId w3 : e3.total().vertices()) {
    AttributeId w2 = e3.projection().apply(w3);
    AttributeId w1 = e2.projection().apply(w2);
    internal_check(e1.value_at(w1) == e2.value_at(w2), "identity cell off the diagonal");
    choice.emplace(w3, c0.at(w1));
  }
  return FullTuple::make(c, std::move(choice));
}

FullTuple eliminate_plus(const Instance& i, const Instance& j, const Instance& c,
                         const FullTuple& c0, const FullTuple& c1) {
  Instance sum = sum_instance(i, j);
  SchemaElements es(sum);
  if (c.base() != es.total())
    throw ModelError(Errc::kind_mismatch, "rec_plus: motive must live over the union extension");
  SchemaElements ei(i);
  SchemaElements ej(j);

  SchemaMorphism ml = compose(lift(ei.projection(), sum), section(left_tuple(i, j)));
  SchemaMorphism mr = compose(lift(ej.projection(), sum), section(right_tuple(i, j)));
  if (c0.instance() != substitute(c, ml))
    throw ModelError(Errc::component_type_mismatch, "rec_plus: left component has the wrong type");
  if (c1.instance() != substitute(c, mr))
    throw ModelError(Errc::component_type_mismatch,
                     "rec_plus: right component has the wrong type");

  std::map<AttributeId, Value> choice;
  for (AttributeId w : es.total().vertices()) {
    AttributeId a = es.projection().apply(w);
    const Value& v = es.value_at(w);
    internal_check(v.kind() == Value::Kind::tag, "union cell is not tagged");
    if (v.tag_bit() == 0)
      choice.emplace(w, c0.at(ei.vertex_of(a, v.tag_payload())));
    else
      choice.emplace(w, c1.at(ej.vertex_of(a, v.tag_payload())));
  }
  return FullTuple::make(c, std::move(choice));
}

FullTuple eliminate(ElimKind kind, const ElimContext& ctx, const Instance& c,
                    const std::vector<FullTuple>& components) {
  auto need = [&](std::size_t n) {
    if (components.size() != n)
      throw ModelError(Errc::missing_component,
                       "eliminator expects " + std::to_string(n) + " component(s), got " +
                           std::to_string(components.size()));
  };
  auto inst = [&](std::size_t k) -> const Instance& {
    if (ctx.instances.size() <= k)
      throw ModelError(Errc::kind_mismatch, "eliminator context is missing an instance");
    return ctx.instances[k];
  };
  switch (kind) {
    case ElimKind::zero:
      need(0);
      return eliminate_zero(ctx.base, c);
    case ElimKind::one:
      need(1);
      return eliminate_one(ctx.base, c, components[0]);
    case ElimKind::sigma:
      need(1);
      return eliminate_sigma(inst(0), inst(1), c, components[0]);
    case ElimKind::id:
      need(1);
      return eliminate_id(inst(0), c, components[0]);
    case ElimKind::plus:
      need(2);
      return eliminate_plus(inst(0), inst(1), c, components[0], components[1]);
  }
  throw InternalError("unreachable eliminator kind");
}

FullTuple eliminate_declared(const DeclaredSig& sig, const Instance& c,
                             const std::vector<FullTuple>& components) {
  SchemaElements et(sig.type);
  if (c.base() != et.total())
    throw ModelError(Errc::kind_mismatch,
                     "rec_" + sig.name + ": motive must live over the declared extension");
  if (components.size() != sig.gens.size())
    throw ModelError(Errc::missing_component,
                     "rec_" + sig.name + ": expected " + std::to_string(sig.gens.size()) +
                         " components, got " + std::to_string(components.size()));
  for (std::size_t i = 0; i < sig.gens.size(); ++i)
    if (components[i].instance() != substitute(c, sig.gens[i].embed))
      throw ModelError(Errc::component_type_mismatch,
                       "rec_" + sig.name + ": component for generator " + sig.gens[i].name +
                           " has the wrong type");
  for (const DeclaredEquation& eq : sig.eqs) {
    FullTuple lhs = subst_tuple(components[eq.lhs_gen], eq.lhs_path);
    FullTuple rhs = subst_tuple(components[eq.rhs_gen], eq.rhs_path);
    if (lhs != rhs)
      throw ModelError(Errc::equation_premise_violated,
                       "rec_" + sig.name + ": " + sig.gens[eq.lhs_gen].name + "[" +
                           eq.lhs_path.print() + "] != " + sig.gens[eq.rhs_gen].name + "[" +
                           eq.rhs_path.print() + "]");
  }

  std::map<AttributeId, Value> choice;
  for (std::size_t i = 0; i < sig.gens.size(); ++i) {
    for (AttributeId jv : sig.gens[i].path.src().vertices()) {
      AttributeId w = sig.gens[i].embed.apply(jv);
      const Value& val = components[i].at(jv);
      auto [it, inserted] = choice.emplace(w, val);
      internal_check(inserted || it->second == val,
                     "assembled cells disagree despite premise equations");
    }
  }
  internal_check(choice.size() == et.total().vertices().size(),
                 "free generation left an uncovered cell");
  try {
    return FullTuple::make(c, std::move(choice));
  } catch (const ModelError& e) {
    throw InternalError(std::string("assembled eliminator tuple is invalid: ") + e.what());
  }
}

}  // namespace sdb
