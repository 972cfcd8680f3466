#include "sdb/instance.hpp"

#include <algorithm>

#include "sdb/error.hpp"

namespace sdb {

struct Instance::Rep {
  Complex base;
  std::map<Face, std::vector<Value>> rows;  // defined on exactly base.faces(), sorted sets
};

Instance::Instance() {
  static const auto rep = std::make_shared<const Rep>();
  rep_ = rep;
}

Instance Instance::make(Complex base, std::map<Face, std::vector<Value>> rows) {
  for (const auto& [face, _] : rows)
    if (!base.has_face(face))
      throw ModelError(Errc::unknown_face, "rows given at non-face " + face.print());

  auto rep = std::make_shared<Rep>();
  rep->base = std::move(base);
  for (const Face& f : rep->base.faces()) {
    auto it = rows.find(f);
    std::vector<Value> set = it == rows.end() ? std::vector<Value>{} : std::move(it->second);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    rep->rows.emplace(f, std::move(set));
  }

  // Shape, then closure against one-step subfaces (closure for deeper
  // subfaces follows because restriction composes).
  for (const auto& [face, set] : rep->rows) {
    if (face.size() >= 2) {
      for (const Value& r : set) {
        if (r.kind() != Value::Kind::row || r.row_cells().size() != face.size())
          throw ModelError(Errc::bad_row_shape,
                           "row " + r.print() + " at face " + face.print());
        for (const auto& [a, _] : r.row_cells())
          if (!face.contains(a))
            throw ModelError(Errc::bad_row_shape, "row " + r.print() + " keyed outside face " +
                                                      face.print());
      }
    }
    for (const Value& r : set) {
      for (const Face& sub : face.facets()) {
        Value restricted = restrict_row(r, face, sub);
        const auto& subset = rep->rows.at(sub);
        if (!std::binary_search(subset.begin(), subset.end(), restricted))
          throw ModelError(Errc::closure_violation,
                           "row " + r.print() + " at " + face.print() +
                               " restricts to unstored row " + restricted.print() + " at " +
                               sub.print());
      }
    }
  }

  Instance j;
  j.rep_ = std::move(rep);
  return j;
}

const Complex& Instance::base() const { return rep_->base; }

const std::vector<Value>& Instance::rows(const Face& f) const {
  auto it = rep_->rows.find(f);
  internal_check(it != rep_->rows.end(), "rows() at a non-face");
  return it->second;
}

std::size_t Instance::cell_count() const {
  std::size_t n = 0;
  for (const auto& [_, set] : rep_->rows) n += set.size();
  return n;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->base == b.rep_->base && a.rep_->rows == b.rep_->rows;
}

std::string Instance::print() const {
  std::string out = "instance{";
  bool first = true;
  for (const auto& [face, set] : rep_->rows) {
    if (!first) out += " ";
    first = false;
    out += face.print() + ":{";
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i) out += ",";
      out += set[i].print();
    }
    out += "}";
  }
  return out + "}";
}

Instance terminal(const Complex& x) {
  std::map<Face, std::vector<Value>> rows;
  for (const Face& f : x.faces()) {
    if (f.size() == 1) {
      rows[f] = {Value::atom(f.vertices()[0].name())};
    } else {
      std::vector<std::pair<AttributeId, Value>> cells;
      for (AttributeId a : f.vertices()) cells.emplace_back(a, Value::atom(a.name()));
      rows[f] = {Value::row(std::move(cells))};
    }
  }
  return Instance::make(x, std::move(rows));
}

Instance initial(const Complex& x) { return Instance::make(x, {}); }

Instance tuplify(const RawInstance& raw) {
  std::map<Face, std::vector<Value>> rows;
  for (const Face& face : raw.base.faces()) {
    auto it = raw.keys.find(face);
    if (it == raw.keys.end()) continue;
    std::vector<Value> out;
    std::vector<Value> originals;
    for (const Value& key : it->second) {
      Value tuple = key;
      if (face.size() >= 2) {
        std::vector<std::pair<AttributeId, Value>> cells;
        for (AttributeId a : face.vertices())
          cells.emplace_back(a, raw.restrict_key(face, key, Face({a})));
        tuple = Value::row(std::move(cells));
      }
      for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] == tuple && !(originals[i] == key))
          throw ModelError(Errc::not_relational,
                           "keys " + originals[i].print() + " and " + key.print() + " at face " +
                               face.print() + " share all attribute restrictions");
      out.push_back(std::move(tuple));
      originals.push_back(key);
    }
    rows[face] = std::move(out);
  }
  return Instance::make(raw.base, std::move(rows));
}

Instance substitute(const Instance& j, const SchemaMorphism& f) {
  if (!f.is_display())
    throw ModelError(Errc::not_display, "instance substitution along " + f.print());
  internal_check(j.base() == f.dst(), "substitute: instance not over the morphism target");

  std::map<Face, std::vector<Value>> rows;
  for (const Face& x : f.src().faces()) {
    Face fx = f.apply(x);
    std::vector<Value> set;
    for (const Value& r : j.rows(fx)) {
      if (x.size() == 1) {
        set.push_back(r);
      } else {
        std::vector<std::pair<AttributeId, Value>> cells;
        for (AttributeId a : x.vertices()) cells.emplace_back(a, r.at(f.apply(a)));
        set.push_back(Value::row(std::move(cells)));
      }
    }
    rows[x] = std::move(set);
  }
  try {
    return Instance::make(f.src(), std::move(rows));
  } catch (const ModelError& e) {
    throw InternalError(std::string("display substitution left tuple form: ") + e.what());
  }
}

SchemaElements::SchemaElements(const Instance& j)
    : instance_(j), projection_(identity(Complex())) {
  const Complex& base = j.base();
  std::vector<AttributeId> vertices;
  std::map<AttributeId, AttributeId> proj;
  for (AttributeId a : base.vertices()) {
    for (const Value& v : j.rows(Face({a}))) {
      AttributeId w(v.print() + "_" + a.name());
      if (!vertex_index_.emplace(std::make_pair(a, v), w).second)
        throw InternalError("duplicate element vertex " + w.name());
      if (!value_at_.emplace(w, v).second)
        throw InternalError("element vertex token collision at " + w.name());
      vertices.push_back(w);
      proj.emplace(w, a);
    }
  }
  std::vector<Face> faces;
  for (const Face& x : base.faces()) {
    for (const Value& r : j.rows(x)) {
      std::vector<AttributeId> vs;
      vs.reserve(x.size());
      for (AttributeId a : x.vertices()) vs.push_back(vertex_of(a, restrict_row(r, x, Face({a}))));
      faces.emplace_back(std::move(vs));
    }
  }
  try {
    total_ = Complex::make(std::move(vertices), std::move(faces));
    projection_ = SchemaMorphism::make(total_, base, std::move(proj));
  } catch (const ModelError& e) {
    throw InternalError(std::string("category of elements is not a schema: ") + e.what());
  }
  internal_check(projection_.is_display(), "canonical projection must be display");
}

const Value& SchemaElements::value_at(AttributeId total_vertex) const {
  auto it = value_at_.find(total_vertex);
  internal_check(it != value_at_.end(), "value_at: unknown element vertex");
  return it->second;
}

AttributeId SchemaElements::vertex_of(AttributeId base_vertex, const Value& value) const {
  auto it = vertex_index_.find(std::make_pair(base_vertex, value));
  internal_check(it != vertex_index_.end(), "vertex_of: no such (attribute, value) pair");
  return it->second;
}

Face SchemaElements::face_of(const Face& base_face, const Value& row) const {
  std::vector<AttributeId> vs;
  vs.reserve(base_face.size());
  for (AttributeId a : base_face.vertices())
    vs.push_back(vertex_of(a, restrict_row(row, base_face, Face({a}))));
  return Face(std::move(vs));
}

Value SchemaElements::row_of(const Face& total_face) const {
  if (total_face.size() == 1) return value_at(total_face.vertices()[0]);
  std::vector<std::pair<AttributeId, Value>> cells;
  for (AttributeId w : total_face.vertices())
    cells.emplace_back(projection_.apply(w), value_at(w));
  return Value::row(std::move(cells));
}

FullTuple::FullTuple(Instance instance, std::map<AttributeId, Value> choice)
    : instance_(std::move(instance)), choice_(std::move(choice)) {}

FullTuple FullTuple::make(Instance instance, std::map<AttributeId, Value> choice) {
  const Complex& base = instance.base();
  if (choice.size() != base.vertices().size())
    throw ModelError(Errc::bad_row_shape, "full tuple must choose at every attribute");
  for (const auto& [a, v] : choice) {
    if (!base.has_vertex(a))
      throw ModelError(Errc::unknown_vertex, "full tuple choice at non-vertex " + a.name());
    const auto& set = instance.rows(Face({a}));
    if (!std::binary_search(set.begin(), set.end(), v))
      throw ModelError(Errc::closure_violation,
                       "choice " + v.print() + " at " + a.name() + " is not a stored value");
  }
  FullTuple t(std::move(instance), std::move(choice));
  for (const Face& f : t.instance_.base().faces()) {
    if (f.size() < 2) continue;
    Value r = t.row_at(f);
    const auto& set = t.instance_.rows(f);
    if (!std::binary_search(set.begin(), set.end(), r))
      throw ModelError(Errc::closure_violation,
                       "tuple restriction " + r.print() + " at " + f.print() +
                           " is not a stored row");
  }
  return t;
}

const Value& FullTuple::at(AttributeId a) const {
  auto it = choice_.find(a);
  internal_check(it != choice_.end(), "tuple has no choice at " + a.name());
  return it->second;
}

Value FullTuple::row_at(const Face& f) const {
  if (f.size() == 1) return at(f.vertices()[0]);
  std::vector<std::pair<AttributeId, Value>> cells;
  cells.reserve(f.size());
  for (AttributeId a : f.vertices()) cells.emplace_back(a, at(a));
  return Value::row(std::move(cells));
}

bool operator==(const FullTuple& a, const FullTuple& b) {
  return a.instance_ == b.instance_ && a.choice_ == b.choice_;
}

std::string FullTuple::print() const {
  std::string out = "⟨";
  bool first = true;
  for (const auto& [_, v] : choice_) {
    if (!first) out += ",";
    first = false;
    out += v.print();
  }
  return out + "⟩";
}

std::vector<FullTuple> full_tuples(const Instance& j) {
  const Complex& base = j.base();
  std::vector<AttributeId> attrs(base.vertices().begin(), base.vertices().end());

  // Check each face as soon as its last attribute (in order) is chosen.
  std::vector<std::vector<Face>> due(attrs.size());
  for (const Face& f : base.faces()) {
    if (f.size() < 2) continue;
    AttributeId last = f.vertices().back();
    auto pos = std::lower_bound(attrs.begin(), attrs.end(), last) - attrs.begin();
    due[static_cast<std::size_t>(pos)].push_back(f);
  }

  std::vector<FullTuple> out;
  std::map<AttributeId, Value> choice;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == attrs.size()) {
      out.push_back(FullTuple::make(j, choice));
      return;
    }
    AttributeId a = attrs[k];
    for (const Value& v : j.rows(Face({a}))) {
      choice.emplace(a, v);
      bool ok = true;
      for (const Face& f : due[k]) {
        std::vector<std::pair<AttributeId, Value>> cells;
        for (AttributeId b : f.vertices()) cells.emplace_back(b, choice.at(b));
        const auto& set = j.rows(f);
        if (!std::binary_search(set.begin(), set.end(), Value::row(std::move(cells)))) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, k + 1);
      choice.erase(a);
    }
  };
  rec(rec, 0);
  return out;
}

FullTuple subst_tuple(const FullTuple& t, const SchemaMorphism& f) {
  if (!f.is_display())
    throw ModelError(Errc::not_display, "tuple substitution along " + f.print());
  Instance jf = substitute(t.instance(), f);
  std::map<AttributeId, Value> choice;
  for (AttributeId a : f.src().vertices()) choice.emplace(a, t.at(f.apply(a)));
  return FullTuple::make(std::move(jf), std::move(choice));
}

SchemaMorphism lift(const SchemaMorphism& f, const Instance& j) {
  if (!f.is_display()) throw ModelError(Errc::not_display, "lift along " + f.print());
  internal_check(j.base() == f.dst(), "lift: instance not over the morphism target");
  SchemaElements src(substitute(j, f));
  SchemaElements dst(j);
  std::map<AttributeId, AttributeId> vm;
  for (AttributeId w : src.total().vertices()) {
    AttributeId a = src.projection().apply(w);
    vm.emplace(w, dst.vertex_of(f.apply(a), src.value_at(w)));
  }
  SchemaMorphism out = SchemaMorphism::make(src.total(), dst.total(), std::move(vm));
  internal_check(out.is_display(), "lift of a display morphism must be display");
  return out;
}

FullTuple generic_element(const Instance& j) {
  SchemaElements e(j);
  Instance jp = substitute(j, e.projection());
  std::map<AttributeId, Value> choice;
  for (AttributeId w : e.total().vertices()) choice.emplace(w, e.value_at(w));
  return FullTuple::make(std::move(jp), std::move(choice));
}

SchemaMorphism section(const FullTuple& t) {
  SchemaElements e(t.instance());
  std::map<AttributeId, AttributeId> vm;
  for (AttributeId a : t.base().vertices()) vm.emplace(a, e.vertex_of(a, t.at(a)));
  SchemaMorphism out = SchemaMorphism::make(t.base(), e.total(), std::move(vm));
  internal_check(out.is_display(), "induced section must be display");
  return out;
}

}  // namespace sdb
