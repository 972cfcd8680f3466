#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdb {

/// An attribute name. Tokens are interned in a global pool, so copies are
/// cheap and equality is a pointer comparison. The total order is
/// lexicographic on the token; it fixes the canonical layout of rows.
class AttributeId {
 public:
  explicit AttributeId(std::string_view token);

  const std::string& name() const { return *name_; }

  friend bool operator==(AttributeId a, AttributeId b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(AttributeId a, AttributeId b) {
    if (a.name_ == b.name_) return std::strong_ordering::equal;
    return *a.name_ <=> *b.name_;
  }

 private:
  const std::string* name_;  // interned, never null
};

/// A nonempty set of attributes, stored sorted. dimension() is |vertices|-1.
/// Faces order by (size, lexicographic vertex list), which puts lower
/// dimensions first; this is the canonical face order used everywhere.
class Face {
 public:
  explicit Face(std::vector<AttributeId> vertices);

  std::span<const AttributeId> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }

  bool contains(AttributeId a) const;
  bool subset_of(const Face& other) const;

  /// The size-1 subfaces (each obtained by dropping one vertex). Empty for
  /// singleton faces.
  std::vector<Face> facets() const;

  /// Every nonempty subset, in canonical face order. 2^size - 1 entries.
  std::vector<Face> all_subfaces() const;

  friend bool operator==(const Face& a, const Face& b) { return a.vertices_ == b.vertices_; }
  friend std::strong_ordering operator<=>(const Face& a, const Face& b);

  std::string print() const;

 private:
  std::vector<AttributeId> vertices_;  // sorted, distinct, nonempty
};

}  // namespace sdb
