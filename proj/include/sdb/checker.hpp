#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdb/ast.hpp"
#include "sdb/instance.hpp"
#include "sdb/semantics.hpp"

namespace sdb {

/// An elaborated context: either a simplex constant or an extension of a
/// context by an instance over it. Carries the element-schema data of the
/// extension so projections and variables can be elaborated. Contexts are
/// compared nominally, i.e. by their underlying complexes.
class Ctx {
 public:
  static Ctx simplex_ctx(int n);
  static Ctx extend(const Ctx& parent, const Instance& type);

  const Complex& complex() const;
  bool is_simplex() const;
  int simplex_dim() const;  // valid when is_simplex()
  bool is_extended() const;
  const Ctx& parent() const;           // valid when is_extended()
  const Instance& ext_type() const;    // valid when is_extended()
  const SchemaElements& elem() const;  // valid when is_extended()

  friend bool operator==(const Ctx& a, const Ctx& b) { return a.complex() == b.complex(); }
  friend bool operator!=(const Ctx& a, const Ctx& b) { return !(a == b); }

 private:
  struct Rep;
  std::shared_ptr<const Rep> rep_;
};

struct TypeEntry {
  Ctx context;
  Instance inst;
  std::optional<DeclaredSig> sig;  // present for declared schemas/instances
};

struct TermEntry {
  Ctx context;
  FullTuple tuple;
  std::string of_type;  // the declared type this is a generator of, or empty
  int gen_index = -1;
};

/// Name environment built by processing declarations in order. Names bind
/// exactly once; no shadowing.
class Environment {
 public:
  const TypeEntry* find_type(const std::string& name) const;
  const TermEntry* find_term(const std::string& name) const;
  bool bound(const std::string& name) const;
  void bind_type(const std::string& name, TypeEntry entry);
  void bind_term(const std::string& name, TermEntry entry);
  std::vector<std::string> type_names() const;

 private:
  std::map<std::string, TypeEntry> types_;
  std::map<std::string, TermEntry> terms_;
};

enum class Verdict { ok, fails, ill_formed };

struct ReportItem {
  std::string label;
  Verdict verdict = Verdict::ok;
  std::string message;  // witness or error text on failure
  std::vector<std::string> notes;
  int line = 0;
  int column = 0;
};

struct CheckReport {
  std::vector<ReportItem> items;
  bool all_ok() const;
  std::string render() const;
};

/// Elaborates declarations into the model and decides judgements by exact
/// semantic comparison. Equality judgements are sound: every derivable
/// equality holds in the model; the converse is not claimed.
class Checker {
 public:
  /// Processes a whole file; the environment accumulates. Never throws on
  /// malformed declarations; failures are reported per item.
  CheckReport process(const std::vector<ast::Declaration>& decls);

  const Environment& env() const { return env_; }

  // Elaboration of the expression classes. These throw ModelError on
  // ill-formed input (unbound names, context mismatches); judgement checking
  // catches and reports.
  Ctx elab_ctx(const ast::CtxPtr& e);
  Instance elab_type(const ast::TypePtr& e, const Ctx& ambient);
  FullTuple elab_term(const ast::TermPtr& e, const Ctx& ambient);
  /// Elaborates a substitution with known source; infers the target.
  std::pair<SchemaMorphism, Ctx> elab_subst_forward(const ast::SubstPtr& e, const Ctx& src);
  /// Elaborates a substitution with known target; infers the source. Only
  /// identity, face maps, lifts and compositions support this direction.
  std::pair<SchemaMorphism, Ctx> elab_subst_backward(const ast::SubstPtr& e, const Ctx& dst);
  /// Elaborates a term whose context is determined by its own structure
  /// (named terms, substitutions of them, lambda, apply, declared rec).
  std::pair<FullTuple, Ctx> elab_term_self(const ast::TermPtr& e);
  std::pair<Instance, Ctx> elab_type_self(const ast::TypePtr& e);

  /// The freely generated relational instance of a declaration: one cell per
  /// generator and per projection of one, quotiented by the congruence
  /// closure of the declared equations and by the tuple-form identification
  /// of cells with equal attribute projections.
  DeclaredSig generate_instance(const ast::SchemaDecl& d, std::vector<std::string>* merge_log);
  DeclaredSig generate_instance(const ast::InstanceDecl& d, std::vector<std::string>* merge_log);

  ReportItem check_judgement(const ast::Judgement& j);

 private:
  struct FormationNote {
    enum class Kind { pi, sigma, sum, id_type } kind;
    std::vector<Instance> parts;
  };

  Environment env_;
  std::map<std::string, FormationNote> notes_;  // keyed by instance printing

  void note_formation(const Instance& inst, FormationNote n);
  const FormationNote* find_note(const Instance& inst) const;

  DeclaredSig generate(const std::string& name, const Ctx& context,
                       const std::vector<std::pair<std::string, SchemaMorphism>>& gens,
                       const std::vector<ast::DeclEq>& eqs,
                       const std::vector<int>& eq_lhs_gen, const std::vector<int>& eq_rhs_gen,
                       std::vector<std::string>* merge_log);

  SchemaMorphism elab_path(const ast::Path& p, const Ctx& target);
  FullTuple elab_rec_declared(const ast::RecDeclaredTerm& r, Ctx* out_ctx);
  /// Elaborates with both endpoints known, trying source-directed inference
  /// first and target-directed second; checks the endpoints match.
  SchemaMorphism elab_subst_checked(const ast::SubstPtr& e, const Ctx& src, const Ctx& dst);
  /// Term elaboration in a checked position: the expected type makes the
  /// injections (left/right) and the builtin eliminators elaborable.
  FullTuple elab_term_checked(const ast::TermPtr& e, const Ctx& ambient,
                              const Instance& expected, const ast::TypePtr& expected_ast);

  void process_schema(const ast::SchemaDecl& d, ReportItem& item);
  void process_instance(const ast::InstanceDecl& d, ReportItem& item);
  void process_query(const ast::QueryDecl& d, ReportItem& item);
};

}  // namespace sdb
