#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sdb/attr.hpp"

namespace sdb {

/// The closed universe of cell contents. A Value is one of:
///   Atom    - a named constant
///   Unit    - the empty tuple
///   Pair    - an ordered pair (dependent-sum results)
///   Tag     - a 0/1-tagged value (disjoint-union results)
///   Row     - a tuple keyed by attributes, sorted by attribute order
///   Family  - a finite map keyed by values, sorted by the structural order
///
/// Values are immutable and cheap to copy. The structural total order covers
/// all constructors (rank Atom < Unit < Pair < Tag < Row < Family, then
/// contents lexicographically) and fixes canonical row/family layout.
class Value {
 public:
  enum class Kind : std::uint8_t { atom, unit, pair, tag, row, family };

  static Value atom(std::string token);
  static Value unit();
  static Value pair(Value first, Value second);
  static Value tag(int bit, Value payload);
  static Value row(std::vector<std::pair<AttributeId, Value>> cells);
  static Value family(std::vector<std::pair<Value, Value>> entries);

  Kind kind() const;

  const std::string& atom_token() const;
  const Value& pair_first() const;
  const Value& pair_second() const;
  int tag_bit() const;
  const Value& tag_payload() const;
  const std::vector<std::pair<AttributeId, Value>>& row_cells() const;
  const std::vector<std::pair<Value, Value>>& family_entries() const;

  /// Row lookup; throws InternalError if the value is not a row or the
  /// attribute is absent.
  const Value& at(AttributeId a) const;
  /// Family lookup; throws InternalError if absent.
  const Value& family_at(const Value& key) const;

  /// Canonical printing: atoms bare, Unit "*", Pair "(x,y)", Tag "inl x" /
  /// "inr x", Row "(A=x,B=y)", Family "{k↦v, ...}". A one-entry family prints
  /// as its sole mapped value, which is what makes rendered join tables read
  /// like plain relational tables.
  std::string print() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b) { return (a <=> b) < 0; }

 private:
  struct Rep;
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

/// Tuple-form row restriction: `row` is a stored row of face `from`; returns
/// its restriction to the nonempty subface `to`. Singleton rows are bare
/// values, larger rows are Row values keyed exactly by their face.
Value restrict_row(const Value& row, const Face& from, const Face& to);

}  // namespace sdb
