#include "sdb/ast.hpp"

#include "sdb/error.hpp"

namespace sdb::ast {

const char* rec_kind_name(RecKind k) {
  switch (k) {
    case RecKind::zero: return "zero";
    case RecKind::one: return "one";
    case RecKind::sigma: return "sigma";
    case RecKind::id: return "id";
    case RecKind::plus: return "plus";
  }
  return "?";
}

CtxPtr ctx(CtxExpr e) { return std::make_shared<const CtxExpr>(std::move(e)); }
TypePtr type(TypeExpr e) { return std::make_shared<const TypeExpr>(std::move(e)); }
TermPtr term(TermExpr e) { return std::make_shared<const TermExpr>(std::move(e)); }
SubstPtr subst(SubstExpr e) { return std::make_shared<const SubstExpr>(std::move(e)); }

namespace {

template <class T, class V>
const T* as(const V& v) {
  return std::get_if<T>(&v->node);
}

}  // namespace

bool equal(const CtxPtr& a, const CtxPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = as<SimplexCtx>(a)) return x->n == as<SimplexCtx>(b)->n;
  if (auto* x = as<NamedCtx>(a)) return x->name == as<NamedCtx>(b)->name;
  auto* x = as<ExtendCtx>(a);
  auto* y = as<ExtendCtx>(b);
  return equal(x->parent, y->parent) && equal(x->type, y->type);
}

bool equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = as<NamedType>(a)) return x->name == as<NamedType>(b)->name;
  if (auto* x = as<SubstType>(a)) {
    auto* y = as<SubstType>(b);
    return equal(x->head, y->head) && equal(x->subst, y->subst);
  }
  if (auto* x = as<PiType>(a)) {
    auto* y = as<PiType>(b);
    return equal(x->index, y->index) && equal(x->fiber, y->fiber);
  }
  if (auto* x = as<SigmaType>(a)) {
    auto* y = as<SigmaType>(b);
    return equal(x->index, y->index) && equal(x->fiber, y->fiber);
  }
  if (auto* x = as<IdType>(a)) return equal(x->over, as<IdType>(b)->over);
  if (auto* x = as<PlusType>(a)) {
    auto* y = as<PlusType>(b);
    return equal(x->lhs, y->lhs) && equal(x->rhs, y->rhs);
  }
  return true;  // ZeroType / OneType
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = as<NamedTerm>(a)) return x->name == as<NamedTerm>(b)->name;
  if (auto* x = as<SubstTerm>(a)) {
    auto* y = as<SubstTerm>(b);
    return equal(x->head, y->head) && equal(x->subst, y->subst);
  }
  if (auto* x = as<LambdaTerm>(a)) return equal(x->body, as<LambdaTerm>(b)->body);
  if (auto* x = as<ApplyTerm>(a)) return equal(x->fn, as<ApplyTerm>(b)->fn);
  if (auto* x = as<RecTerm>(a)) {
    auto* y = as<RecTerm>(b);
    if (x->kind != y->kind || x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!equal(x->args[i], y->args[i])) return false;
    return true;
  }
  if (auto* x = as<RecDeclaredTerm>(a)) {
    auto* y = as<RecDeclaredTerm>(b);
    if (x->name != y->name || x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!equal(x->args[i], y->args[i])) return false;
    return true;
  }
  return true;  // nullary constructors
}

bool equal(const SubstPtr& a, const SubstPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = as<FaceMapSubst>(a)) return x->i == as<FaceMapSubst>(b)->i;
  if (auto* x = as<EvalSubst>(a)) return equal(x->term, as<EvalSubst>(b)->term);
  if (auto* x = as<LiftSubst>(a)) {
    auto* y = as<LiftSubst>(b);
    return equal(x->subst, y->subst) && equal(x->type, y->type);
  }
  if (auto* x = as<ComposeSubst>(a)) {
    auto* y = as<ComposeSubst>(b);
    return equal(x->outer, y->outer) && equal(x->inner, y->inner);
  }
  return true;  // identity / project
}

bool equal(const Judgement& a, const Judgement& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* x = std::get_if<JCtx>(&a.node)) return equal(x->ctx, std::get<JCtx>(b.node).ctx);
  if (auto* x = std::get_if<JCtxEq>(&a.node)) {
    auto& y = std::get<JCtxEq>(b.node);
    return equal(x->lhs, y.lhs) && equal(x->rhs, y.rhs);
  }
  if (auto* x = std::get_if<JType>(&a.node)) {
    auto& y = std::get<JType>(b.node);
    return equal(x->ctx, y.ctx) && equal(x->type, y.type);
  }
  if (auto* x = std::get_if<JTypeEq>(&a.node)) {
    auto& y = std::get<JTypeEq>(b.node);
    return equal(x->ctx, y.ctx) && equal(x->lhs, y.lhs) && equal(x->rhs, y.rhs);
  }
  if (auto* x = std::get_if<JTerm>(&a.node)) {
    auto& y = std::get<JTerm>(b.node);
    return equal(x->ctx, y.ctx) && equal(x->term, y.term) && equal(x->type, y.type);
  }
  if (auto* x = std::get_if<JTermEq>(&a.node)) {
    auto& y = std::get<JTermEq>(b.node);
    return equal(x->ctx, y.ctx) && equal(x->lhs, y.lhs) && equal(x->rhs, y.rhs) &&
           equal(x->type, y.type);
  }
  if (auto* x = std::get_if<JSubst>(&a.node)) {
    auto& y = std::get<JSubst>(b.node);
    return equal(x->subst, y.subst) && equal(x->src, y.src) && equal(x->dst, y.dst);
  }
  auto* x = std::get_if<JSubstEq>(&a.node);
  auto& y = std::get<JSubstEq>(b.node);
  return equal(x->lhs, y.lhs) && equal(x->rhs, y.rhs) && equal(x->src, y.src) &&
         equal(x->dst, y.dst);
}

namespace {

// Atom positions require parentheses around compound expressions.
std::string print_type_atom(const TypePtr& e) {
  if (as<NamedType>(e) || as<ZeroType>(e) || as<OneType>(e)) return print(e);
  return "(" + print(e) + ")";
}

std::string print_term_atom(const TermPtr& e) {
  if (as<NamedTerm>(e) || as<VarTerm>(e) || as<StarTerm>(e) || as<PairTerm>(e) ||
      as<ReflTerm>(e) || as<LeftTerm>(e) || as<RightTerm>(e))
    return print(e);
  return "(" + print(e) + ")";
}

std::string print_subst_operand(const SubstPtr& e) {
  if (as<ComposeSubst>(e)) return "(" + print(e) + ")";
  return print(e);
}

}  // namespace

std::string print(const CtxPtr& e) {
  if (auto* x = as<SimplexCtx>(e)) return "D " + std::to_string(x->n);
  if (auto* x = as<NamedCtx>(e)) return x->name;
  auto* x = as<ExtendCtx>(e);
  return print(x->parent) + " . " + print_type_atom(x->type);
}

std::string print(const TypePtr& e) {
  if (auto* x = as<NamedType>(e)) return x->name;
  if (auto* x = as<SubstType>(e)) {
    std::string head = (as<NamedType>(x->head) || as<SubstType>(x->head))
                           ? print(x->head)
                           : print_type_atom(x->head);
    return head + "[" + print(x->subst) + "]";
  }
  if (auto* x = as<PiType>(e))
    return "Pi " + print_type_atom(x->index) + " " + print_type_atom(x->fiber);
  if (auto* x = as<SigmaType>(e))
    return "Sigma " + print_type_atom(x->index) + " " + print_type_atom(x->fiber);
  if (auto* x = as<IdType>(e)) return "Id " + print_type_atom(x->over);
  if (auto* x = as<PlusType>(e)) {
    std::string lhs = (as<PlusType>(x->lhs) || as<NamedType>(x->lhs) || as<SubstType>(x->lhs))
                          ? print(x->lhs)
                          : print_type_atom(x->lhs);
    std::string rhs = (as<NamedType>(x->rhs) || as<SubstType>(x->rhs)) ? print(x->rhs)
                                                                       : print_type_atom(x->rhs);
    return lhs + " + " + rhs;
  }
  if (as<ZeroType>(e)) return "0";
  return "1";
}

std::string print(const TermPtr& e) {
  if (auto* x = as<NamedTerm>(e)) return x->name;
  if (as<VarTerm>(e)) return "v";
  if (as<StarTerm>(e)) return "*";
  if (as<PairTerm>(e)) return "pair";
  if (as<ReflTerm>(e)) return "refl";
  if (as<LeftTerm>(e)) return "left";
  if (as<RightTerm>(e)) return "right";
  if (auto* x = as<SubstTerm>(e)) {
    std::string head = as<SubstTerm>(x->head) ? print(x->head) : print_term_atom(x->head);
    return head + "[" + print(x->subst) + "]";
  }
  if (auto* x = as<LambdaTerm>(e)) return "lambda " + print(x->body);
  if (auto* x = as<ApplyTerm>(e)) return "apply " + print(x->fn);
  if (auto* x = as<RecTerm>(e)) {
    std::string out = std::string("rec ") + rec_kind_name(x->kind);
    for (const TermPtr& a : x->args) out += " " + print_term_atom(a);
    return out;
  }
  auto* x = as<RecDeclaredTerm>(e);
  std::string out = "rec " + x->name;
  for (const TermPtr& a : x->args) out += " " + print_term_atom(a);
  return out;
}

std::string print(const SubstPtr& e) {
  if (as<IdentitySubst>(e)) return "id";
  if (as<ProjectSubst>(e)) return "down";
  if (auto* x = as<FaceMapSubst>(e)) return "d" + std::to_string(x->i);
  if (auto* x = as<EvalSubst>(e)) return print_term_atom(x->term) + "!";
  if (auto* x = as<LiftSubst>(e))
    return print_subst_operand(x->subst) + "." + print_type_atom(x->type);
  auto* x = as<ComposeSubst>(e);
  std::string lhs = as<ComposeSubst>(x->outer) ? print(x->outer) : print_subst_operand(x->outer);
  return lhs + " o " + print_subst_operand(x->inner);
}

std::string print_path(const Path& p) {
  if (p.is_identity) return "id";
  std::string out;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (i) out += ".";
    out += "d" + std::to_string(p.steps[i]);
  }
  return out;
}

std::string print_judgement(const Judgement& j) {
  if (auto* x = std::get_if<JCtx>(&j.node)) return "judgement " + print(x->ctx) + " context";
  if (auto* x = std::get_if<JCtxEq>(&j.node))
    return "judgement " + print(x->lhs) + " = " + print(x->rhs);
  if (auto* x = std::get_if<JType>(&j.node))
    return "judgement " + print(x->ctx) + " |- " + print(x->type) + " type";
  if (auto* x = std::get_if<JTypeEq>(&j.node))
    return "judgement " + print(x->ctx) + " |- " + print(x->lhs) + " = " + print(x->rhs);
  if (auto* x = std::get_if<JTerm>(&j.node))
    return "judgement " + print(x->ctx) + " |- " + print(x->term) + " : " + print(x->type);
  if (auto* x = std::get_if<JTermEq>(&j.node))
    return "judgement " + print(x->ctx) + " |- " + print(x->lhs) + " = " + print(x->rhs) + " : " +
           print(x->type);
  if (auto* x = std::get_if<JSubst>(&j.node))
    return "judgement " + print(x->subst) + " : " + print(x->src) + " -> " + print(x->dst);
  auto* x = std::get_if<JSubstEq>(&j.node);
  return "judgement " + print(x->lhs) + " = " + print(x->rhs) + " : " + print(x->src) + " -> " +
         print(x->dst);
}

}  // namespace sdb::ast
