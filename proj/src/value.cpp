#include "sdb/value.hpp"

#include <algorithm>
#include <variant>

#include "sdb/error.hpp"

namespace sdb {

namespace {
struct AtomRep {
  std::string token;
};
struct UnitRep {};
struct PairRep {
  Value first, second;
};
struct TagRep {
  int bit;
  Value payload;
};
struct RowRep {
  std::vector<std::pair<AttributeId, Value>> cells;
};
struct FamilyRep {
  std::vector<std::pair<Value, Value>> entries;
};
}  // namespace

struct Value::Rep {
  std::variant<AtomRep, UnitRep, PairRep, TagRep, RowRep, FamilyRep> v;
};

Value Value::atom(std::string token) {
  internal_check(!token.empty(), "atom token must be nonempty");
  return Value(std::make_shared<const Rep>(Rep{AtomRep{std::move(token)}}));
}

Value Value::unit() {
  static const Value u(std::make_shared<const Rep>(Rep{UnitRep{}}));
  return u;
}

Value Value::pair(Value first, Value second) {
  return Value(std::make_shared<const Rep>(Rep{PairRep{std::move(first), std::move(second)}}));
}

Value Value::tag(int bit, Value payload) {
  internal_check(bit == 0 || bit == 1, "tag bit must be 0 or 1");
  return Value(std::make_shared<const Rep>(Rep{TagRep{bit, std::move(payload)}}));
}

Value Value::row(std::vector<std::pair<AttributeId, Value>> cells) {
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < cells.size(); ++i)
    internal_check(cells[i - 1].first != cells[i].first, "row keys must be distinct");
  return Value(std::make_shared<const Rep>(Rep{RowRep{std::move(cells)}}));
}

Value Value::family(std::vector<std::pair<Value, Value>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    internal_check(entries[i - 1].first != entries[i].first, "family keys must be distinct");
  return Value(std::make_shared<const Rep>(Rep{FamilyRep{std::move(entries)}}));
}

Value::Kind Value::kind() const { return static_cast<Kind>(rep_->v.index()); }

const std::string& Value::atom_token() const {
  internal_check(kind() == Kind::atom, "not an atom");
  return std::get<AtomRep>(rep_->v).token;
}
const Value& Value::pair_first() const {
  internal_check(kind() == Kind::pair, "not a pair");
  return std::get<PairRep>(rep_->v).first;
}
const Value& Value::pair_second() const {
  internal_check(kind() == Kind::pair, "not a pair");
  return std::get<PairRep>(rep_->v).second;
}
int Value::tag_bit() const {
  internal_check(kind() == Kind::tag, "not a tag");
  return std::get<TagRep>(rep_->v).bit;
}
const Value& Value::tag_payload() const {
  internal_check(kind() == Kind::tag, "not a tag");
  return std::get<TagRep>(rep_->v).payload;
}
const std::vector<std::pair<AttributeId, Value>>& Value::row_cells() const {
  internal_check(kind() == Kind::row, "not a row");
  return std::get<RowRep>(rep_->v).cells;
}
const std::vector<std::pair<Value, Value>>& Value::family_entries() const {
  internal_check(kind() == Kind::family, "not a family");
  return std::get<FamilyRep>(rep_->v).entries;
}

const Value& Value::at(AttributeId a) const {
  for (const auto& [k, v] : row_cells())
    if (k == a) return v;
  throw InternalError("row has no cell at attribute " + a.name());
}

const Value& Value::family_at(const Value& key) const {
  for (const auto& [k, v] : family_entries())
    if (k == key) return v;
  throw InternalError("family has no entry at key " + key.print());
}

bool operator==(const Value& a, const Value& b) {
  if (a.rep_ == b.rep_) return true;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Value::Kind::atom:
      return a.atom_token() <=> b.atom_token();
    case Value::Kind::unit:
      return std::strong_ordering::equal;
    case Value::Kind::pair:
      if (auto c = a.pair_first() <=> b.pair_first(); c != 0) return c;
      return a.pair_second() <=> b.pair_second();
    case Value::Kind::tag:
      if (auto c = a.tag_bit() <=> b.tag_bit(); c != 0) return c;
      return a.tag_payload() <=> b.tag_payload();
    case Value::Kind::row: {
      const auto& x = a.row_cells();
      const auto& y = b.row_cells();
      if (auto c = x.size() <=> y.size(); c != 0) return c;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (auto c = x[i].first <=> y[i].first; c != 0) return c;
        if (auto c = x[i].second <=> y[i].second; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
    case Value::Kind::family: {
      const auto& x = a.family_entries();
      const auto& y = b.family_entries();
      if (auto c = x.size() <=> y.size(); c != 0) return c;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (auto c = x[i].first <=> y[i].first; c != 0) return c;
        if (auto c = x[i].second <=> y[i].second; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  throw InternalError("unreachable value kind");
}

std::string Value::print() const {
  switch (kind()) {
    case Kind::atom:
      return atom_token();
    case Kind::unit:
      return "*";
    case Kind::pair:
      return "(" + pair_first().print() + "," + pair_second().print() + ")";
    case Kind::tag:
      return (tag_bit() == 0 ? "inl " : "inr ") + tag_payload().print();
    case Kind::row: {
      std::string out = "(";
      const auto& cells = row_cells();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ",";
        out += cells[i].first.name() + "=" + cells[i].second.print();
      }
      return out + ")";
    }
    case Kind::family: {
      const auto& es = family_entries();
      if (es.size() == 1) return es[0].second.print();
      std::string out = "{";
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (i) out += ", ";
        out += es[i].first.print() + "↦" + es[i].second.print();
      }
      return out + "}";
    }
  }
  throw InternalError("unreachable value kind");
}

Value restrict_row(const Value& row, const Face& from, const Face& to) {
  internal_check(to.subset_of(from), "restriction target must be a subface");
  if (from.size() == 1) return row;  // singleton rows are their own value
  internal_check(row.kind() == Value::Kind::row, "non-singleton row must be a Row value");
  if (to.size() == 1) return row.at(to.vertices()[0]);
  std::vector<std::pair<AttributeId, Value>> cells;
  cells.reserve(to.size());
  for (AttributeId a : to.vertices()) cells.emplace_back(a, row.at(a));
  return Value::row(std::move(cells));
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_singleton: return "MissingSingleton";
    case Errc::not_downward_closed: return "NotDownwardClosed";
    case Errc::unknown_vertex: return "UnknownVertex";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::non_composable: return "NonComposable";
    case Errc::bad_row_shape: return "BadRowShape";
    case Errc::closure_violation: return "ClosureViolation";
    case Errc::unknown_face: return "UnknownFace";
    case Errc::not_relational: return "NotRelational";
    case Errc::not_display: return "NotDisplay";
    case Errc::base_mismatch: return "BaseMismatch";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::component_type_mismatch: return "ComponentTypeMismatch";
    case Errc::missing_component: return "MissingComponent";
    case Errc::equation_premise_violated: return "EquationPremiseViolated";
    case Errc::equation_context_mismatch: return "EquationContextMismatch";
    case Errc::path_not_into_base: return "PathNotIntoBase";
    case Errc::unbound_name: return "UnboundName";
    case Errc::context_mismatch: return "ContextMismatch";
    case Errc::exhausted: return "Exhausted";
  }
  return "UnknownError";
}

}  // namespace sdb
