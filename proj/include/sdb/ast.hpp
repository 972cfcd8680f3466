#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sdb::ast {

struct CtxExpr;
struct TypeExpr;
struct TermExpr;
struct SubstExpr;
using CtxPtr = std::shared_ptr<const CtxExpr>;
using TypePtr = std::shared_ptr<const TypeExpr>;
using TermPtr = std::shared_ptr<const TermExpr>;
using SubstPtr = std::shared_ptr<const SubstExpr>;

// Contexts: simplex constants, named contexts, and extensions G.A.
struct SimplexCtx {
  int n;
};
struct NamedCtx {
  std::string name;
};
struct ExtendCtx {
  CtxPtr parent;
  TypePtr type;
};
struct CtxExpr {
  std::variant<SimplexCtx, NamedCtx, ExtendCtx> node;
};

struct NamedType {
  std::string name;
};
struct SubstType {
  TypePtr head;
  SubstPtr subst;
};
struct PiType {
  TypePtr index;
  TypePtr fiber;
};
struct SigmaType {
  TypePtr index;
  TypePtr fiber;
};
struct IdType {
  TypePtr over;
};
struct PlusType {
  TypePtr lhs;
  TypePtr rhs;
};
struct ZeroType {};
struct OneType {};
struct TypeExpr {
  std::variant<NamedType, SubstType, PiType, SigmaType, IdType, PlusType, ZeroType, OneType> node;
};

enum class RecKind { zero, one, sigma, id, plus };
const char* rec_kind_name(RecKind k);

struct NamedTerm {
  std::string name;
};
struct VarTerm {};
struct SubstTerm {
  TermPtr head;
  SubstPtr subst;
};
struct LambdaTerm {
  TermPtr body;
};
struct ApplyTerm {
  TermPtr fn;
};
struct PairTerm {};
struct ReflTerm {};
struct LeftTerm {};
struct RightTerm {};
struct StarTerm {};
struct RecTerm {
  RecKind kind;
  std::vector<TermPtr> args;
};
struct RecDeclaredTerm {
  std::string name;
  std::vector<TermPtr> args;
};
struct TermExpr {
  std::variant<NamedTerm, VarTerm, SubstTerm, LambdaTerm, ApplyTerm, PairTerm, ReflTerm, LeftTerm,
               RightTerm, StarTerm, RecTerm, RecDeclaredTerm>
      node;
};

// Substitutions. Projection, identity and face maps carry no arguments in the
// surface syntax; elaboration recovers their endpoints from the ambient
// contexts.
struct IdentitySubst {};
struct ProjectSubst {};
struct FaceMapSubst {
  int i;
};
struct EvalSubst {
  TermPtr term;
};
struct LiftSubst {
  SubstPtr subst;
  TypePtr type;
};
struct ComposeSubst {
  SubstPtr outer;
  SubstPtr inner;
};
struct SubstExpr {
  std::variant<IdentitySubst, ProjectSubst, FaceMapSubst, EvalSubst, LiftSubst, ComposeSubst> node;
};

// The eight judgement forms.
struct JCtx {
  CtxPtr ctx;
};
struct JCtxEq {
  CtxPtr lhs, rhs;
};
struct JType {
  CtxPtr ctx;
  TypePtr type;
};
struct JTypeEq {
  CtxPtr ctx;
  TypePtr lhs, rhs;
};
struct JTerm {
  CtxPtr ctx;
  TermPtr term;
  TypePtr type;
};
struct JTermEq {
  CtxPtr ctx;
  TermPtr lhs, rhs;
  TypePtr type;
};
struct JSubst {
  SubstPtr subst;
  CtxPtr src, dst;
};
struct JSubstEq {
  SubstPtr lhs, rhs;
  CtxPtr src, dst;
};
struct Judgement {
  std::variant<JCtx, JCtxEq, JType, JTypeEq, JTerm, JTermEq, JSubst, JSubstEq> node;
};

// Declarations. Generator paths are composites of face maps, written
// outermost first: d2.d1 is d_2 after d_1.
struct Path {
  bool is_identity = false;
  std::vector<int> steps;
};
struct SchemaGen {
  std::string name;
  Path path;
};
struct DeclEq {
  std::string lhs_name;
  Path lhs_path;
  std::string rhs_name;
  Path rhs_path;
};
struct SchemaDecl {
  std::string name;
  int base_dim = 0;
  std::vector<SchemaGen> gens;
  std::vector<DeclEq> eqs;
};
struct InstanceGen {
  std::string name;
  std::string over;
};
struct InstanceDecl {
  std::string name;
  std::string of;
  std::vector<InstanceGen> gens;
  std::vector<DeclEq> eqs;
};
struct QueryDecl {
  std::string name;
  TypePtr type_body;  // exactly one of these is set
  TermPtr term_body;
};
struct JudgementDecl {
  Judgement judgement;
};
struct Declaration {
  std::variant<SchemaDecl, InstanceDecl, QueryDecl, JudgementDecl> node;
  int line = 0;
  int column = 0;
};

// Structural equality (deep, ignores source positions).
bool equal(const CtxPtr& a, const CtxPtr& b);
bool equal(const TypePtr& a, const TypePtr& b);
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const SubstPtr& a, const SubstPtr& b);
bool equal(const Judgement& a, const Judgement& b);

// Canonical printing; parse(print_judgement(j)) yields j back.
std::string print(const CtxPtr& e);
std::string print(const TypePtr& e);
std::string print(const TermPtr& e);
std::string print(const SubstPtr& e);
std::string print_judgement(const Judgement& j);
std::string print_path(const Path& p);

CtxPtr ctx(CtxExpr e);
TypePtr type(TypeExpr e);
TermPtr term(TermExpr e);
SubstPtr subst(SubstExpr e);

}  // namespace sdb::ast
