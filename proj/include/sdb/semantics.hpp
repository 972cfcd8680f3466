#pragma once

#include <string>
#include <vector>

#include "sdb/instance.hpp"

namespace sdb {

/// Dependent sum over J of G, where G lives over elements(J): rows are the
/// tuplified pairs (a, b) with a a J-row and b a G-row over it. Throws
/// BaseMismatch when G is not over elements(J).
Instance sigma_instance(const Instance& j, const Instance& g);

/// Dependent product over J of G: the right Kan extension of G along the
/// canonical projection, tuplified. Per face x it accepts exactly the
/// families of attribute-level choices whose reconstructed candidate row at
/// every (subface y, J-row a) is a stored G-row; at an attribute A the value
/// is the family a -> c_{A,a} over a in J({A}). Computes the natural join of
/// a schema's tables when applied to an instance over a simplex.
Instance pi_instance(const Instance& j, const Instance& g);

namespace detail {
/// pi with the per-(y,a) acceptance check optionally disabled; the unchecked
/// variant exists so tests can demonstrate that the law suite detects it.
Instance pi_impl(const Instance& j, const Instance& g, bool check_families);
}  // namespace detail

/// Disjoint union: rows tagged 0 from I and 1 from J, tuplified. Bases must
/// agree (BaseMismatch).
Instance sum_instance(const Instance& i, const Instance& j);

/// The identity instance Id_J over elements(elements(J), J[p]): a unit row
/// over ((x,a),b) exactly when a = b.
Instance identity_instance(const Instance& j);

/// lambda: turns a full tuple t of G over elements(J) into the full tuple of
/// pi_instance(J, G) whose choice at A is the family a -> t(A,a).
FullTuple lambda_tuple(const Instance& j, const FullTuple& t);

/// Ap: turns a full tuple s of pi_instance(J, G) into the full tuple of G
/// over elements(J) choosing s(A)[a] at (A,a). Inverse to lambda_tuple.
FullTuple apply_tuple(const Instance& j, const Instance& g, const FullTuple& s);

/// Exact check of (Pi_J G)[f] == Pi_{J[f]} G[f~] for display f into J's base.
bool pi_subst_law(const SchemaMorphism& f, const Instance& j, const Instance& g);

/// pair: the full tuple of (Sigma_J G)[p][p] over elements(G) choosing the
/// pair (a,b) at each vertex ((A,a),b).
FullTuple pair_tuple(const Instance& j, const Instance& g);

/// refl: the full tuple of Id_J[v^] over elements(J), constantly unit.
FullTuple refl_tuple(const Instance& j);

/// left/right: full tuples of (I+J)[p] over elements(I) resp. elements(J).
FullTuple left_tuple(const Instance& i, const Instance& j);
FullTuple right_tuple(const Instance& i, const Instance& j);

/// The unique full tuple of terminal(X).
FullTuple star_tuple(const Complex& x);

/// Eliminators, defined semantically. Each checks that C lives over the
/// expected extended context (KindMismatch) and that the components have
/// exactly the premise types of the corresponding rule
/// (ComponentTypeMismatch); the computation laws then hold exactly.
FullTuple eliminate_zero(const Complex& x, const Instance& c);
FullTuple eliminate_one(const Complex& x, const Instance& c, const FullTuple& c0);
FullTuple eliminate_sigma(const Instance& j, const Instance& g, const Instance& c,
                          const FullTuple& c0);
FullTuple eliminate_id(const Instance& j, const Instance& c, const FullTuple& c0);
FullTuple eliminate_plus(const Instance& i, const Instance& j, const Instance& c,
                         const FullTuple& c0, const FullTuple& c1);

enum class ElimKind { zero, one, sigma, id, plus };

/// The data a builtin eliminator works over: the base schema and the one or
/// two instances the extended context is built from.
struct ElimContext {
  Complex base;
  std::vector<Instance> instances;
};

/// Kind-dispatched front end over the typed eliminators above. `components`
/// must carry exactly the rule's term premises, in order.
FullTuple eliminate(ElimKind kind, const ElimContext& ctx, const Instance& c,
                    const std::vector<FullTuple>& components);

/// A declared type (schema or instance declaration) elaborated to its free
/// generation data: the base schema, the generated instance, and per
/// generator its source simplex path, its embedding into the induced schema,
/// its cell, and its term.
struct DeclaredGenerator {
  std::string name;
  SchemaMorphism path;    // simplex(k) -> context
  SchemaMorphism embed;   // simplex(k) -> elements(type).total()
  Value cell;             // the generator's row in `type`
  FullTuple term;         // the generator as a full tuple of type[path]
};

struct DeclaredEquation {
  std::size_t lhs_gen;
  SchemaMorphism lhs_path;  // simplex(m) -> simplex(k_lhs)
  std::size_t rhs_gen;
  SchemaMorphism rhs_path;
};

struct DeclaredSig {
  std::string name;
  Complex context;
  Instance type;
  std::vector<DeclaredGenerator> gens;
  std::vector<DeclaredEquation> eqs;
};

/// The generated eliminator of a declared type: assembles the full tuple of C
/// over elements(sig.type) cell by cell from one component per generator.
/// Checks component count (MissingComponent), component types against the
/// generated rule's premises (ComponentTypeMismatch), and the equation
/// premises (EquationPremiseViolated).
FullTuple eliminate_declared(const DeclaredSig& sig, const Instance& c,
                             const std::vector<FullTuple>& components);

}  // namespace sdb
