#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sdb/attr.hpp"

namespace sdb {

/// A finite abstract simplicial complex read as a database schema: vertices
/// are attributes, faces of dimension >= 1 are relation variables. Invariants
/// (validated on construction): every singleton {A} is a face, the face family
/// is closed under nonempty subsets, and every face only uses declared
/// vertices. The empty complex is legal.
///
/// Equality is nominal: same vertex set, same face set.
class Complex {
 public:
  Complex();  // the empty complex

  /// Validates and builds. Throws ModelError with MissingSingleton,
  /// NotDownwardClosed or UnknownVertex on invariant violations.
  static Complex make(std::vector<AttributeId> vertices, std::vector<Face> faces);

  std::span<const AttributeId> vertices() const;
  std::span<const Face> faces() const;
  bool has_vertex(AttributeId a) const;
  bool has_face(const Face& f) const;

  /// Faces of dimension n (so strata(0) is the singletons).
  std::vector<Face> strata(int n) const;
  /// Max face dimension; -1 for the empty complex.
  int dimension() const;

  friend bool operator==(const Complex& a, const Complex& b);
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  std::string print() const;

 private:
  struct Rep;
  std::shared_ptr<const Rep> rep_;
};

/// The n-simplex: vertices "0".."n", faces all nonempty subsets. As a schema
/// it is the single relation on n+1 attributes together with all of its
/// sub-relations.
Complex simplex(int n);

/// A morphism of schemas: a vertex map carrying faces to faces. The display
/// flag (injective on every face, i.e. dimension preserving) is computed at
/// construction. Equality compares endpoints and vertex maps.
class SchemaMorphism {
 public:
  /// Validates: the map is defined exactly on src's vertices, lands in dst's
  /// vertices, and the image of every src face is a dst face.
  static SchemaMorphism make(Complex src, Complex dst,
                             std::map<AttributeId, AttributeId> vertex_map);

  const Complex& src() const;
  const Complex& dst() const;
  const std::map<AttributeId, AttributeId>& vertex_map() const;
  bool is_display() const;

  AttributeId apply(AttributeId a) const;
  Face apply(const Face& f) const;

  friend bool operator==(const SchemaMorphism& a, const SchemaMorphism& b);
  friend bool operator!=(const SchemaMorphism& a, const SchemaMorphism& b) { return !(a == b); }

  std::string print() const;

 private:
  struct Rep;
  std::shared_ptr<const Rep> rep_;
};

/// The face map d_i^n : simplex(n) -> simplex(n+1), k -> k if k < i else k+1.
/// Requires 0 <= i <= n+1; always display.
SchemaMorphism face_map(int n, int i);

/// g after f. Requires f.dst() == g.src() (throws NonComposable).
SchemaMorphism compose(const SchemaMorphism& g, const SchemaMorphism& f);

SchemaMorphism identity(const Complex& x);

}  // namespace sdb
