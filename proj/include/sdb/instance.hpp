#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sdb/complex.hpp"
#include "sdb/value.hpp"

namespace sdb {

/// A relational instance in tuple form: per-face row sets over a base
/// complex. At a singleton face the rows are arbitrary values ("a singleton
/// tuple is identified with its element"); at a larger face every row is a
/// Row keyed exactly by the face's attributes, and the restriction of every
/// row to every nonempty subface is itself a stored row (projection closure).
///
/// Instances are immutable; equality is exact (same base, same row sets).
class Instance {
 public:
  Instance();  // over the empty complex

  /// Validates and builds. Faces missing from `rows` get empty row sets.
  /// Throws ModelError: UnknownFace, BadRowShape, ClosureViolation.
  static Instance make(Complex base, std::map<Face, std::vector<Value>> rows);

  const Complex& base() const;
  const std::vector<Value>& rows(const Face& f) const;
  /// Total number of rows over all faces.
  std::size_t cell_count() const;

  friend bool operator==(const Instance& a, const Instance& b);
  friend bool operator!=(const Instance& a, const Instance& b) { return !(a == b); }

  std::string print() const;

 private:
  struct Rep;
  std::shared_ptr<const Rep> rep_;
};

/// One row everywhere: each attribute carries its own name as an atom, each
/// face the corresponding row of names.
Instance terminal(const Complex& x);

/// No rows anywhere.
Instance initial(const Complex& x);

/// An instance presented by abstract per-face keys together with their
/// restriction maps; input to tuplification. `restrict_key(face, key,
/// subface)` must be functorial in the subface.
struct RawInstance {
  Complex base;
  std::map<Face, std::vector<Value>> keys;
  std::function<Value(const Face&, const Value&, const Face&)> restrict_key;
};

/// Canonical rewriting onto tuple form: every key at a face becomes the row
/// of its attribute restrictions; keys at singleton faces are kept as they
/// are. Throws NotRelational if two keys at a face share all attribute
/// restrictions. Idempotent on instances already in tuple form.
Instance tuplify(const RawInstance& raw);

/// Substitution J[f] of an instance along a display morphism f : X -> Y with
/// J over Y: rows(x) = J.rows(f(x)) re-keyed along the face bijection.
/// Throws NotDisplay for non-display f (the result would not be in tuple
/// form).
Instance substitute(const Instance& j, const SchemaMorphism& f);

/// The category of elements of an instance, i.e. the induced schema: one
/// vertex per (attribute, value) pair, one face per (face, row) pair, plus
/// the canonical display projection back to the base and the pair
/// decomposition of each vertex.
class SchemaElements {
 public:
  explicit SchemaElements(const Instance& j);

  const Instance& instance() const { return instance_; }
  const Complex& total() const { return total_; }
  const SchemaMorphism& projection() const { return projection_; }

  /// The value component of a total-complex vertex.
  const Value& value_at(AttributeId total_vertex) const;
  /// The total-complex vertex for a (base vertex, value) pair.
  AttributeId vertex_of(AttributeId base_vertex, const Value& value) const;
  /// The total-complex face over (base face, stored row).
  Face face_of(const Face& base_face, const Value& row) const;
  /// Reconstructs the base row a total-complex face lies over.
  Value row_of(const Face& total_face) const;

 private:
  Instance instance_;
  Complex total_;
  SchemaMorphism projection_;
  std::map<AttributeId, Value> value_at_;
  std::map<std::pair<AttributeId, Value>, AttributeId> vertex_index_;
};

inline SchemaElements elements(const Instance& j) { return SchemaElements(j); }

/// A full tuple: one value per attribute of the base such that every face's
/// restriction row is stored. Equality compares the instance and the choice.
class FullTuple {
 public:
  /// Validates the choice against the instance.
  static FullTuple make(Instance instance, std::map<AttributeId, Value> choice);

  const Instance& instance() const { return instance_; }
  const Complex& base() const { return instance_.base(); }
  const std::map<AttributeId, Value>& choice() const { return choice_; }
  const Value& at(AttributeId a) const;
  /// The restriction row of the choice at a base face.
  Value row_at(const Face& f) const;

  friend bool operator==(const FullTuple& a, const FullTuple& b);
  friend bool operator!=(const FullTuple& a, const FullTuple& b) { return !(a == b); }

  std::string print() const;

 private:
  FullTuple(Instance instance, std::map<AttributeId, Value> choice);
  Instance instance_;
  std::map<AttributeId, Value> choice_;
};

/// All full tuples, in lexicographic order of the choice along the attribute
/// order. Enumerated by backtracking over attributes with face pruning.
std::vector<FullTuple> full_tuples(const Instance& j);

/// t[f] for display f : X -> Y and t a full tuple over Y: the choice at A is
/// t's choice at f(A), living in J[f].
FullTuple subst_tuple(const FullTuple& t, const SchemaMorphism& f);

/// The lifted morphism on element schemas, (x,a) -> (f(x),a), from
/// elements(J[f]) to elements(J). Display whenever f is (and f must be).
SchemaMorphism lift(const SchemaMorphism& f, const Instance& j);

/// The generic element v over elements(J): the full tuple of J[p] choosing a
/// at each vertex (A,a).
FullTuple generic_element(const Instance& j);

/// The induced section of a full tuple, X -> elements(J), A -> (A, t(A)).
/// Always display.
SchemaMorphism section(const FullTuple& t);

}  // namespace sdb
