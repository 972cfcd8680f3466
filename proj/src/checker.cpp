#include "sdb/checker.hpp"

#include <algorithm>
#include <deque>

#include "sdb/error.hpp"

namespace sdb {

using namespace ast;

// ---------------------------------------------------------------- contexts

struct Ctx::Rep {
  Complex complex;
  int simplex_dim = -1;  // >= 0 when this is a simplex constant
  std::optional<Ctx> parent;
  std::optional<Instance> type;
  std::shared_ptr<const SchemaElements> elem;
};

Ctx Ctx::simplex_ctx(int n) {
  Ctx c;
  auto rep = std::make_shared<Rep>();
  rep->complex = simplex(n);
  rep->simplex_dim = n;
  c.rep_ = std::move(rep);
  return c;
}

Ctx Ctx::extend(const Ctx& parent, const Instance& type) {
  internal_check(type.base() == parent.complex(), "extension type must live over the context");
  Ctx c;
  auto rep = std::make_shared<Rep>();
  rep->elem = std::make_shared<const SchemaElements>(type);
  rep->complex = rep->elem->total();
  rep->parent = parent;
  rep->type = type;
  c.rep_ = std::move(rep);
  return c;
}

const Complex& Ctx::complex() const { return rep_->complex; }
bool Ctx::is_simplex() const { return rep_->simplex_dim >= 0; }
int Ctx::simplex_dim() const { return rep_->simplex_dim; }
bool Ctx::is_extended() const { return rep_->parent.has_value(); }
const Ctx& Ctx::parent() const {
  internal_check(is_extended(), "context has no parent");
  return *rep_->parent;
}
const Instance& Ctx::ext_type() const {
  internal_check(is_extended(), "context has no extension type");
  return *rep_->type;
}
const SchemaElements& Ctx::elem() const {
  internal_check(is_extended(), "context has no element data");
  return *rep_->elem;
}

// ------------------------------------------------------------- environment

const TypeEntry* Environment::find_type(const std::string& name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &it->second;
}
const TermEntry* Environment::find_term(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? nullptr : &it->second;
}
bool Environment::bound(const std::string& name) const {
  return types_.count(name) || terms_.count(name);
}
void Environment::bind_type(const std::string& name, TypeEntry entry) {
  if (bound(name)) throw ModelError(Errc::context_mismatch, "name already bound: " + name);
  types_.emplace(name, std::move(entry));
}
void Environment::bind_term(const std::string& name, TermEntry entry) {
  if (bound(name)) throw ModelError(Errc::context_mismatch, "name already bound: " + name);
  terms_.emplace(name, std::move(entry));
}
std::vector<std::string> Environment::type_names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : types_) out.push_back(k);
  return out;
}

// ------------------------------------------------------------------ report

bool CheckReport::all_ok() const {
  for (const auto& i : items)
    if (i.verdict != Verdict::ok) return false;
  return true;
}

std::string CheckReport::render() const {
  std::string out;
  for (const auto& i : items) {
    switch (i.verdict) {
      case Verdict::ok: out += "ok    "; break;
      case Verdict::fails: out += "FAIL  "; break;
      case Verdict::ill_formed: out += "ERROR "; break;
    }
    out += i.label;
    if (!i.message.empty()) out += " -- " + i.message;
    out += "\n";
    for (const auto& n : i.notes) out += "      note: " + n + "\n";
  }
  return out;
}

// ------------------------------------------------------------- elaboration

void Checker::note_formation(const Instance& inst, FormationNote n) {
  notes_.emplace(inst.print(), std::move(n));
}
const Checker::FormationNote* Checker::find_note(const Instance& inst) const {
  auto it = notes_.find(inst.print());
  return it == notes_.end() ? nullptr : &it->second;
}

Ctx Checker::elab_ctx(const CtxPtr& e) {
  if (auto* x = std::get_if<SimplexCtx>(&e->node)) {
    if (x->n < 0) throw ModelError(Errc::index_out_of_range, "negative simplex");
    return Ctx::simplex_ctx(x->n);
  }
  if (auto* x = std::get_if<NamedCtx>(&e->node)) {
    const TypeEntry* t = env_.find_type(x->name);
    if (!t) throw ModelError(Errc::unbound_name, x->name);
    // A named type read as a context means its induced schema.
    return Ctx::extend(t->context, t->inst);
  }
  auto* x = std::get_if<ExtendCtx>(&e->node);
  Ctx parent = elab_ctx(x->parent);
  Instance type = elab_type(x->type, parent);
  return Ctx::extend(parent, type);
}

Instance Checker::elab_type(const TypePtr& e, const Ctx& ambient) {
  if (auto* x = std::get_if<NamedType>(&e->node)) {
    const TypeEntry* t = env_.find_type(x->name);
    if (!t) throw ModelError(Errc::unbound_name, x->name);
    if (t->context.complex() != ambient.complex())
      throw ModelError(Errc::context_mismatch,
                       "type " + x->name + " lives over a different context");
    return t->inst;
  }
  if (auto* x = std::get_if<SubstType>(&e->node)) {
    auto [f, dst] = elab_subst_forward(x->subst, ambient);
    Instance head = elab_type(x->head, dst);
    Instance out = substitute(head, f);
    if (const FormationNote* n = find_note(head)) {
      if (n->kind == FormationNote::Kind::pi || n->kind == FormationNote::Kind::sigma) {
        FormationNote derived{n->kind,
                              {substitute(n->parts[0], f),
                               substitute(n->parts[1], lift(f, n->parts[0]))}};
        note_formation(out, std::move(derived));
      } else if (n->kind == FormationNote::Kind::sum) {
        note_formation(out, FormationNote{n->kind,
                                          {substitute(n->parts[0], f),
                                           substitute(n->parts[1], f)}});
      }
    }
    return out;
  }
  if (auto* x = std::get_if<PiType>(&e->node)) {
    Instance j = elab_type(x->index, ambient);
    Instance g = elab_type(x->fiber, Ctx::extend(ambient, j));
    Instance out = pi_instance(j, g);
    note_formation(out, FormationNote{FormationNote::Kind::pi, {j, g}});
    return out;
  }
  if (auto* x = std::get_if<SigmaType>(&e->node)) {
    Instance j = elab_type(x->index, ambient);
    Instance g = elab_type(x->fiber, Ctx::extend(ambient, j));
    Instance out = sigma_instance(j, g);
    note_formation(out, FormationNote{FormationNote::Kind::sigma, {j, g}});
    return out;
  }
  if (auto* x = std::get_if<IdType>(&e->node)) {
    // Id_A is a type over G.A.A[down].
    if (!ambient.is_extended() || !ambient.parent().is_extended())
      throw ModelError(Errc::context_mismatch, "Id needs a doubly extended context");
    const Ctx& ga = ambient.parent();
    Instance j = elab_type(x->over, ga.parent());
    if (ga.ext_type() != j)
      throw ModelError(Errc::context_mismatch, "Id index does not match the context");
    if (ambient.ext_type() != substitute(j, ga.elem().projection()))
      throw ModelError(Errc::context_mismatch, "Id context is not G.A.A[down]");
    Instance out = identity_instance(j);
    note_formation(out, FormationNote{FormationNote::Kind::id_type, {j}});
    return out;
  }
  if (auto* x = std::get_if<PlusType>(&e->node)) {
    Instance a = elab_type(x->lhs, ambient);
    Instance b = elab_type(x->rhs, ambient);
    Instance out = sum_instance(a, b);
    note_formation(out, FormationNote{FormationNote::Kind::sum, {a, b}});
    return out;
  }
  if (std::get_if<ZeroType>(&e->node)) return initial(ambient.complex());
  return terminal(ambient.complex());
}

std::pair<Instance, Ctx> Checker::elab_type_self(const TypePtr& e) {
  if (auto* x = std::get_if<NamedType>(&e->node)) {
    const TypeEntry* t = env_.find_type(x->name);
    if (!t) throw ModelError(Errc::unbound_name, x->name);
    return {t->inst, t->context};
  }
  if (auto* x = std::get_if<SubstType>(&e->node)) {
    auto [head, dst] = elab_type_self(x->head);
    auto [f, src] = elab_subst_backward(x->subst, dst);
    Instance out = substitute(head, f);
    if (const FormationNote* n = find_note(head)) {
      if (n->kind == FormationNote::Kind::pi || n->kind == FormationNote::Kind::sigma)
        note_formation(out, FormationNote{n->kind,
                                          {substitute(n->parts[0], f),
                                           substitute(n->parts[1], lift(f, n->parts[0]))}});
    }
    return {out, src};
  }
  if (auto* x = std::get_if<PiType>(&e->node)) {
    auto [j, ctx] = elab_type_self(x->index);
    Instance g = elab_type(x->fiber, Ctx::extend(ctx, j));
    Instance out = pi_instance(j, g);
    note_formation(out, FormationNote{FormationNote::Kind::pi, {j, g}});
    return {out, ctx};
  }
  if (auto* x = std::get_if<SigmaType>(&e->node)) {
    auto [j, ctx] = elab_type_self(x->index);
    Instance g = elab_type(x->fiber, Ctx::extend(ctx, j));
    Instance out = sigma_instance(j, g);
    note_formation(out, FormationNote{FormationNote::Kind::sigma, {j, g}});
    return {out, ctx};
  }
  if (auto* x = std::get_if<PlusType>(&e->node)) {
    auto [a, ctx] = elab_type_self(x->lhs);
    Instance b = elab_type(x->rhs, ctx);
    Instance out = sum_instance(a, b);
    note_formation(out, FormationNote{FormationNote::Kind::sum, {a, b}});
    return {out, ctx};
  }
  if (auto* x = std::get_if<IdType>(&e->node)) {
    auto [j, ctx] = elab_type_self(x->over);
    Ctx ga = Ctx::extend(ctx, j);
    Ctx gaa = Ctx::extend(ga, substitute(j, ga.elem().projection()));
    Instance out = identity_instance(j);
    note_formation(out, FormationNote{FormationNote::Kind::id_type, {j}});
    return {out, gaa};
  }
  throw ModelError(Errc::context_mismatch, "cannot infer the context of this type expression");
}

std::pair<SchemaMorphism, Ctx> Checker::elab_subst_forward(const SubstPtr& e, const Ctx& src) {
  if (std::get_if<IdentitySubst>(&e->node)) return {identity(src.complex()), src};
  if (std::get_if<ProjectSubst>(&e->node)) {
    if (!src.is_extended())
      throw ModelError(Errc::context_mismatch, "projection from an unextended context");
    return {src.elem().projection(), src.parent()};
  }
  if (auto* x = std::get_if<FaceMapSubst>(&e->node)) {
    if (!src.is_simplex())
      throw ModelError(Errc::context_mismatch, "face map from a non-simplex context");
    int n = src.simplex_dim();
    return {face_map(n, x->i), Ctx::simplex_ctx(n + 1)};
  }
  if (auto* x = std::get_if<EvalSubst>(&e->node)) {
    FullTuple t = elab_term(x->term, src);
    Ctx dst = Ctx::extend(src, t.instance());
    return {section(t), dst};
  }
  if (auto* x = std::get_if<LiftSubst>(&e->node)) {
    if (!src.is_extended())
      throw ModelError(Errc::context_mismatch, "lift from an unextended context");
    auto [f, gamma] = elab_subst_forward(x->subst, src.parent());
    Instance a = elab_type(x->type, gamma);
    if (src.ext_type() != substitute(a, f))
      throw ModelError(Errc::context_mismatch, "lift source is not D.A[s]");
    return {lift(f, a), Ctx::extend(gamma, a)};
  }
  auto* x = std::get_if<ComposeSubst>(&e->node);
  auto [fi, mid] = elab_subst_forward(x->inner, src);
  auto [fo, dst] = elab_subst_forward(x->outer, mid);
  return {compose(fo, fi), dst};
}

std::pair<SchemaMorphism, Ctx> Checker::elab_subst_backward(const SubstPtr& e, const Ctx& dst) {
  if (std::get_if<IdentitySubst>(&e->node)) return {identity(dst.complex()), dst};
  if (auto* x = std::get_if<FaceMapSubst>(&e->node)) {
    if (!dst.is_simplex() || dst.simplex_dim() < 1)
      throw ModelError(Errc::context_mismatch, "face map must land in a positive simplex");
    int n = dst.simplex_dim() - 1;
    return {face_map(n, x->i), Ctx::simplex_ctx(n)};
  }
  if (auto* x = std::get_if<LiftSubst>(&e->node)) {
    if (!dst.is_extended())
      throw ModelError(Errc::context_mismatch, "lift must land in an extended context");
    auto [f, delta] = elab_subst_backward(x->subst, dst.parent());
    Instance a = elab_type(x->type, dst.parent());
    if (a != dst.ext_type())
      throw ModelError(Errc::context_mismatch, "lift type does not match the target context");
    return {lift(f, a), Ctx::extend(delta, substitute(a, f))};
  }
  if (auto* x = std::get_if<ComposeSubst>(&e->node)) {
    auto [fo, mid] = elab_subst_backward(x->outer, dst);
    auto [fi, src] = elab_subst_backward(x->inner, mid);
    return {compose(fo, fi), src};
  }
  throw ModelError(Errc::context_mismatch,
                   "cannot infer the source of this substitution; state the judgement in full");
}

FullTuple Checker::elab_term(const TermPtr& e, const Ctx& ambient) {
  if (auto* x = std::get_if<NamedTerm>(&e->node)) {
    const TermEntry* t = env_.find_term(x->name);
    if (!t) throw ModelError(Errc::unbound_name, x->name);
    if (t->context.complex() != ambient.complex())
      throw ModelError(Errc::context_mismatch,
                       "term " + x->name + " lives over a different context");
    return t->tuple;
  }
  if (std::get_if<VarTerm>(&e->node)) {
    if (!ambient.is_extended())
      throw ModelError(Errc::context_mismatch, "variable in an unextended context");
    return generic_element(ambient.ext_type());
  }
  if (std::get_if<StarTerm>(&e->node)) return star_tuple(ambient.complex());
  if (auto* x = std::get_if<SubstTerm>(&e->node)) {
    auto [f, dst] = elab_subst_forward(x->subst, ambient);
    FullTuple u = elab_term(x->head, dst);
    return subst_tuple(u, f);
  }
  if (auto* x = std::get_if<LambdaTerm>(&e->node)) {
    auto [u, delta] = elab_term_self(x->body);
    if (!delta.is_extended() || delta.parent().complex() != ambient.complex())
      throw ModelError(Errc::context_mismatch, "lambda body context does not extend the ambient");
    Instance j = delta.ext_type();
    FullTuple out = lambda_tuple(j, u);
    note_formation(out.instance(), FormationNote{FormationNote::Kind::pi, {j, u.instance()}});
    return out;
  }
  if (auto* x = std::get_if<ApplyTerm>(&e->node)) {
    auto [s, gamma] = elab_term_self(x->fn);
    const FormationNote* n = find_note(s.instance());
    if (!n || n->kind != FormationNote::Kind::pi)
      throw ModelError(Errc::context_mismatch, "apply needs a term of a known product type");
    if (Ctx::extend(gamma, n->parts[0]).complex() != ambient.complex())
      throw ModelError(Errc::context_mismatch, "apply used in the wrong context");
    return apply_tuple(n->parts[0], n->parts[1], s);
  }
  if (std::get_if<PairTerm>(&e->node)) {
    if (!ambient.is_extended() || !ambient.parent().is_extended())
      throw ModelError(Errc::context_mismatch, "pair needs a doubly extended context");
    return pair_tuple(ambient.parent().ext_type(), ambient.ext_type());
  }
  if (std::get_if<ReflTerm>(&e->node)) {
    if (!ambient.is_extended())
      throw ModelError(Errc::context_mismatch, "refl needs an extended context");
    return refl_tuple(ambient.ext_type());
  }
  if (auto* x = std::get_if<RecDeclaredTerm>(&e->node)) {
    Ctx out_ctx = ambient;
    FullTuple t = elab_rec_declared(*x, &out_ctx);
    if (out_ctx.complex() != ambient.complex())
      throw ModelError(Errc::context_mismatch, "eliminator used in the wrong context");
    return t;
  }
  throw ModelError(Errc::context_mismatch,
                   "this term form needs an explicit type; state it in a term judgement");
}

std::pair<FullTuple, Ctx> Checker::elab_term_self(const TermPtr& e) {
  if (auto* x = std::get_if<NamedTerm>(&e->node)) {
    const TermEntry* t = env_.find_term(x->name);
    if (!t) throw ModelError(Errc::unbound_name, x->name);
    return {t->tuple, t->context};
  }
  if (auto* x = std::get_if<SubstTerm>(&e->node)) {
    auto [u, delta] = elab_term_self(x->head);
    auto [f, src] = elab_subst_backward(x->subst, delta);
    return {subst_tuple(u, f), src};
  }
  if (auto* x = std::get_if<LambdaTerm>(&e->node)) {
    auto [u, delta] = elab_term_self(x->body);
    if (!delta.is_extended())
      throw ModelError(Errc::context_mismatch, "lambda body must live in an extended context");
    Instance j = delta.ext_type();
    FullTuple out = lambda_tuple(j, u);
    note_formation(out.instance(), FormationNote{FormationNote::Kind::pi, {j, u.instance()}});
    return {out, delta.parent()};
  }
  if (auto* x = std::get_if<ApplyTerm>(&e->node)) {
    auto [s, gamma] = elab_term_self(x->fn);
    const FormationNote* n = find_note(s.instance());
    if (!n || n->kind != FormationNote::Kind::pi)
      throw ModelError(Errc::context_mismatch, "apply needs a term of a known product type");
    return {apply_tuple(n->parts[0], n->parts[1], s), Ctx::extend(gamma, n->parts[0])};
  }
  if (auto* x = std::get_if<RecDeclaredTerm>(&e->node)) {
    Ctx out_ctx = Ctx::simplex_ctx(0);
    FullTuple t = elab_rec_declared(*x, &out_ctx);
    return {t, out_ctx};
  }
  throw ModelError(Errc::context_mismatch, "cannot infer the context of this term expression");
}

FullTuple Checker::elab_rec_declared(const RecDeclaredTerm& r, Ctx* out_ctx) {
  const TypeEntry* te = env_.find_type(r.name);
  if (!te || !te->sig)
    throw ModelError(Errc::unbound_name, "no declared eliminator rec_" + r.name);
  const DeclaredSig& sig = *te->sig;
  if (r.args.size() != sig.gens.size())
    throw ModelError(Errc::missing_component,
                     "rec_" + r.name + " expects " + std::to_string(sig.gens.size()) +
                         " components");
  std::vector<FullTuple> comps;
  std::string target;
  for (const TermPtr& a : r.args) {
    auto* named = std::get_if<NamedTerm>(&a->node);
    if (!named)
      throw ModelError(Errc::component_type_mismatch,
                       "eliminator components must be declared generators");
    const TermEntry* t = env_.find_term(named->name);
    if (!t) throw ModelError(Errc::unbound_name, named->name);
    if (t->of_type.empty())
      throw ModelError(Errc::component_type_mismatch,
                       named->name + " is not a generator of a declared type");
    if (target.empty()) target = t->of_type;
    if (t->of_type != target)
      throw ModelError(Errc::component_type_mismatch,
                       "components name generators of different types");
    comps.push_back(t->tuple);
  }
  const TypeEntry* ce = env_.find_type(target);
  internal_check(ce != nullptr, "generator provenance names an unbound type");
  FullTuple out = eliminate_declared(sig, ce->inst, comps);
  *out_ctx = ce->context;
  return out;
}

// ------------------------------------------------------- free generation

SchemaMorphism Checker::elab_path(const Path& p, const Ctx& target) {
  internal_check(target.is_simplex(), "paths land in simplex contexts");
  int n = target.simplex_dim();
  if (p.is_identity) return identity(target.complex());
  SchemaMorphism m = [&] {
    try {
      return face_map(n - 1, p.steps[0]);
    } catch (const ModelError& e) {
      throw ModelError(Errc::path_not_into_base, e.what());
    }
  }();
  for (std::size_t k = 1; k < p.steps.size(); ++k) {
    int src_dim = static_cast<int>(m.src().vertices().size()) - 1;
    try {
      m = compose(m, face_map(src_dim - 1, p.steps[k]));
    } catch (const ModelError& e) {
      throw ModelError(Errc::path_not_into_base, e.what());
    }
  }
  return m;
}

namespace {

int vertex_index(AttributeId a) { return std::stoi(a.name()); }

// Face of the generator's source simplex as a bitmask.
Face mask_to_face(const SchemaMorphism& path, unsigned mask) {
  std::vector<AttributeId> vs;
  for (int b = 0; b < 32; ++b)
    if (mask & (1u << b)) vs.push_back(path.apply(AttributeId(std::to_string(b))));
  return Face(std::move(vs));
}

std::string fresh_suffix(int k, int vertex) {
  std::string out;
  for (int c = k; c >= 0; --c)
    if (c != vertex) out += ".d" + std::to_string(c);
  return out;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

DeclaredSig Checker::generate(const std::string& name, const Ctx& context,
                              const std::vector<std::pair<std::string, SchemaMorphism>>& gens,
                              const std::vector<DeclEq>& eqs, const std::vector<int>& eq_lhs_gen,
                              const std::vector<int>& eq_rhs_gen,
                              std::vector<std::string>* merge_log) {
  const Complex& base = context.complex();
  const int ngens = static_cast<int>(gens.size());

  // Symbols: one cell per generator and nonempty subset of its source
  // simplex. A term over simplex(k) has components at every subface.
  struct Sym {
    int gen;
    unsigned mask;
  };
  std::vector<Sym> syms;
  std::vector<int> gen_dim(ngens);
  std::map<std::pair<int, unsigned>, int> sym_index;
  for (int i = 0; i < ngens; ++i) {
    gen_dim[i] = static_cast<int>(gens[i].second.src().vertices().size()) - 1;
    internal_check(gen_dim[i] >= 0, "generator over the empty simplex");
    internal_check(gens[i].second.is_display(), "generator paths must be display");
    unsigned full = (1u << (gen_dim[i] + 1)) - 1;
    for (unsigned mask = 1; mask <= full; ++mask) {
      sym_index[{i, mask}] = static_cast<int>(syms.size());
      syms.push_back({i, mask});
    }
  }

  Dsu dsu(syms.size());
  auto loc = [&](int s) { return mask_to_face(gens[syms[s].gen].second, syms[s].mask); };

  // Maps a subset of one generator's simplex to the corresponding subset of
  // another's, through their common image face.
  auto correspond = [&](int gi, unsigned sub, int gj, unsigned maskj) -> unsigned {
    unsigned out = 0;
    for (int b = 0; b <= gen_dim[gi]; ++b) {
      if (!(sub & (1u << b))) continue;
      AttributeId v = gens[gi].second.apply(AttributeId(std::to_string(b)));
      bool found = false;
      for (int c = 0; c <= gen_dim[gj]; ++c) {
        if (!(maskj & (1u << c))) continue;
        if (gens[gj].second.apply(AttributeId(std::to_string(c))) == v) {
          out |= 1u << c;
          found = true;
          break;
        }
      }
      internal_check(found, "no corresponding vertex under a congruence merge");
    }
    return out;
  };

  std::deque<std::pair<int, int>> queue;
  auto merge_symbols = [&](int s1, int s2) {
    queue.emplace_back(s1, s2);
    while (!queue.empty()) {
      auto [a, b] = queue.front();
      queue.pop_front();
      if (!dsu.merge(a, b)) continue;
      const Sym& sa = syms[a];
      const Sym& sb = syms[b];
      for (unsigned sub = (sa.mask - 1) & sa.mask; sub; sub = (sub - 1) & sa.mask) {
        unsigned corr = correspond(sa.gen, sub, sb.gen, sb.mask);
        queue.emplace_back(sym_index.at({sa.gen, sub}), sym_index.at({sb.gen, corr}));
      }
    }
  };

  // Declared equations merge the images of both paths.
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    int gi = eq_lhs_gen[k];
    int gj = eq_rhs_gen[k];
    SchemaMorphism pi_path = elab_path(eqs[k].lhs_path, Ctx::simplex_ctx(gen_dim[gi]));
    SchemaMorphism rho_path = elab_path(eqs[k].rhs_path, Ctx::simplex_ctx(gen_dim[gj]));
    SchemaMorphism lhs = compose(gens[gi].second, pi_path);
    SchemaMorphism rhs = compose(gens[gj].second, rho_path);
    if (lhs != rhs)
      throw ModelError(Errc::equation_context_mismatch,
                       "equation sides land at different cells: " + eqs[k].lhs_name + "[" +
                           print_path(eqs[k].lhs_path) + "] vs " + eqs[k].rhs_name + "[" +
                           print_path(eqs[k].rhs_path) + "]");
    unsigned mi = 0, mj = 0;
    for (AttributeId a : pi_path.src().vertices())
      mi |= 1u << vertex_index(pi_path.apply(a));
    for (AttributeId a : rho_path.src().vertices())
      mj |= 1u << vertex_index(rho_path.apply(a));
    merge_symbols(sym_index.at({gi, mi}), sym_index.at({gj, mj}));
  }

  // Tuple-form quotient: same face, identical attribute projections.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Face, std::vector<int>> by_face;
    for (int s = 0; s < static_cast<int>(syms.size()); ++s)
      if (dsu.find(s) == s) by_face[loc(s)].push_back(s);
    for (auto& [face, roots] : by_face) {
      if (face.size() < 2 || roots.size() < 2) continue;
      std::map<std::vector<int>, int> by_signature;
      for (int r : roots) {
        const Sym& sym = syms[r];
        std::vector<int> sig;
        for (AttributeId v : face.vertices()) {
          unsigned single = 0;
          for (int b = 0; b <= gen_dim[sym.gen]; ++b)
            if ((sym.mask & (1u << b)) &&
                gens[sym.gen].second.apply(AttributeId(std::to_string(b))) == v)
              single = 1u << b;
          internal_check(single != 0, "face vertex not covered by the generator");
          sig.push_back(dsu.find(sym_index.at({sym.gen, single})));
        }
        auto [it, inserted] = by_signature.emplace(sig, r);
        if (!inserted) {
          if (merge_log)
            merge_log->push_back("merged two cells at face " + face.print() +
                                 " with equal attribute projections");
          merge_symbols(it->second, r);
          changed = true;
        }
      }
    }
  }

  // Name the vertex classes: a declared point generator names its class,
  // projections get generator-derived fresh names.
  std::map<int, std::string> class_name;
  for (int s = 0; s < static_cast<int>(syms.size()); ++s) {
    if (loc(s).size() != 1) continue;
    int root = dsu.find(s);
    if (class_name.count(root)) continue;
    std::string chosen;
    for (int t = 0; t < static_cast<int>(syms.size()); ++t) {
      if (dsu.find(t) != root) continue;
      const Sym& sym = syms[t];
      if (gen_dim[sym.gen] == 0) {
        chosen = gens[sym.gen].first;
        break;
      }
      if (chosen.empty()) {
        int vertex = 0;
        for (int b = 0; b <= gen_dim[sym.gen]; ++b)
          if (sym.mask & (1u << b)) vertex = b;
        chosen = gens[sym.gen].first + fresh_suffix(gen_dim[sym.gen], vertex);
      }
    }
    class_name[root] = chosen;
  }

  auto vertex_name = [&](int gen, int b) {
    return class_name.at(dsu.find(sym_index.at({gen, 1u << b})));
  };

  // Rows, in tuple form directly.
  std::map<Face, std::vector<Value>> rows;
  std::map<int, Value> class_row;
  for (int s = 0; s < static_cast<int>(syms.size()); ++s) {
    if (dsu.find(s) != s) continue;
    Face face = loc(s);
    Value row = [&]() -> Value {
      if (face.size() == 1) return Value::atom(class_name.at(s));
      std::vector<std::pair<AttributeId, Value>> cells;
      const Sym& sym = syms[s];
      for (int b = 0; b <= gen_dim[sym.gen]; ++b)
        if (sym.mask & (1u << b))
          cells.emplace_back(gens[sym.gen].second.apply(AttributeId(std::to_string(b))),
                             Value::atom(vertex_name(sym.gen, b)));
      return Value::row(std::move(cells));
    }();
    class_row.emplace(s, row);
    rows[face].push_back(std::move(row));
  }
  Instance inst = Instance::make(base, std::move(rows));

  DeclaredSig sig;
  sig.name = name;
  sig.context = base;
  sig.type = inst;
  SchemaElements et(inst);
  for (int i = 0; i < ngens; ++i) {
    const SchemaMorphism& path = gens[i].second;
    unsigned full = (1u << (gen_dim[i] + 1)) - 1;
    Value cell = class_row.at(dsu.find(sym_index.at({i, full})));
    std::map<AttributeId, AttributeId> embed;
    std::map<AttributeId, Value> choice;
    for (int b = 0; b <= gen_dim[i]; ++b) {
      AttributeId j(std::to_string(b));
      Value v = Value::atom(vertex_name(i, b));
      embed.emplace(j, et.vertex_of(path.apply(j), v));
      choice.emplace(j, std::move(v));
    }
    sig.gens.push_back(DeclaredGenerator{
        gens[i].first, path, SchemaMorphism::make(path.src(), et.total(), std::move(embed)),
        std::move(cell), FullTuple::make(substitute(inst, path), std::move(choice))});
  }
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    DeclaredEquation de{static_cast<std::size_t>(eq_lhs_gen[k]),
                        elab_path(eqs[k].lhs_path, Ctx::simplex_ctx(gen_dim[eq_lhs_gen[k]])),
                        static_cast<std::size_t>(eq_rhs_gen[k]),
                        elab_path(eqs[k].rhs_path, Ctx::simplex_ctx(gen_dim[eq_rhs_gen[k]]))};
    sig.eqs.push_back(std::move(de));
  }
  return sig;
}

DeclaredSig Checker::generate_instance(const SchemaDecl& d, std::vector<std::string>* merge_log) {
  Ctx base = Ctx::simplex_ctx(d.base_dim);
  std::vector<std::pair<std::string, SchemaMorphism>> gens;
  std::map<std::string, int> index;
  for (const SchemaGen& g : d.gens) {
    if (index.count(g.name))
      throw ModelError(Errc::context_mismatch, "duplicate generator " + g.name);
    index[g.name] = static_cast<int>(gens.size());
    gens.emplace_back(g.name, elab_path(g.path, base));
  }
  std::vector<int> lhs, rhs;
  for (const DeclEq& e : d.eqs) {
    if (!index.count(e.lhs_name)) throw ModelError(Errc::unbound_name, e.lhs_name);
    if (!index.count(e.rhs_name)) throw ModelError(Errc::unbound_name, e.rhs_name);
    lhs.push_back(index[e.lhs_name]);
    rhs.push_back(index[e.rhs_name]);
  }
  return generate(d.name, base, gens, d.eqs, lhs, rhs, merge_log);
}

DeclaredSig Checker::generate_instance(const InstanceDecl& d, std::vector<std::string>* merge_log) {
  const TypeEntry* of = env_.find_type(d.of);
  if (!of) throw ModelError(Errc::unbound_name, d.of);
  if (!of->sig)
    throw ModelError(Errc::context_mismatch, d.of + " is not a declared schema");
  Ctx base = Ctx::extend(of->context, of->inst);

  std::vector<std::pair<std::string, SchemaMorphism>> gens;
  std::map<std::string, int> index;
  for (const InstanceGen& g : d.gens) {
    const DeclaredGenerator* over = nullptr;
    for (const DeclaredGenerator& sg : of->sig->gens)
      if (sg.name == g.over) over = &sg;
    if (!over)
      throw ModelError(Errc::unbound_name, g.over + " is not a generator of " + d.of);
    if (index.count(g.name))
      throw ModelError(Errc::context_mismatch, "duplicate generator " + g.name);
    index[g.name] = static_cast<int>(gens.size());
    // The embedding of the schema generator is the path of the row over it.
    gens.emplace_back(g.name, over->embed);
  }
  std::vector<int> lhs, rhs;
  for (const DeclEq& e : d.eqs) {
    if (!index.count(e.lhs_name)) throw ModelError(Errc::unbound_name, e.lhs_name);
    if (!index.count(e.rhs_name)) throw ModelError(Errc::unbound_name, e.rhs_name);
    lhs.push_back(index[e.lhs_name]);
    rhs.push_back(index[e.rhs_name]);
  }
  return generate(d.name, base, gens, d.eqs, lhs, rhs, merge_log);
}

// ---------------------------------------------------------------- process

void Checker::process_schema(const SchemaDecl& d, ReportItem& item) {
  item.label = "schema " + d.name;
  std::vector<std::string> log;
  DeclaredSig sig = generate_instance(d, &log);
  env_.bind_type(d.name, TypeEntry{Ctx::simplex_ctx(d.base_dim), sig.type, sig});
  for (std::size_t i = 0; i < sig.gens.size(); ++i) {
    const DeclaredGenerator& g = sig.gens[i];
    Ctx gctx = Ctx::simplex_ctx(static_cast<int>(g.path.src().vertices().size()) - 1);
    env_.bind_term(g.name, TermEntry{gctx, g.term, d.name, static_cast<int>(i)});
  }
  item.notes = std::move(log);
}

void Checker::process_instance(const InstanceDecl& d, ReportItem& item) {
  item.label = "instance " + d.name;
  std::vector<std::string> log;
  DeclaredSig sig = generate_instance(d, &log);
  const TypeEntry* of = env_.find_type(d.of);
  env_.bind_type(d.name, TypeEntry{Ctx::extend(of->context, of->inst), sig.type, sig});
  for (std::size_t i = 0; i < sig.gens.size(); ++i) {
    const DeclaredGenerator& g = sig.gens[i];
    Ctx gctx = Ctx::simplex_ctx(static_cast<int>(g.path.src().vertices().size()) - 1);
    env_.bind_term(g.name, TermEntry{gctx, g.term, d.name, static_cast<int>(i)});
  }
  item.notes = std::move(log);
}

void Checker::process_query(const QueryDecl& d, ReportItem& item) {
  item.label = "query " + d.name;
  if (d.type_body) {
    auto [inst, ctx] = elab_type_self(d.type_body);
    env_.bind_type(d.name, TypeEntry{ctx, inst, std::nullopt});
  } else {
    auto [tuple, ctx] = elab_term_self(d.term_body);
    env_.bind_term(d.name, TermEntry{ctx, tuple, "", -1});
  }
}

SchemaMorphism Checker::elab_subst_checked(const SubstPtr& e, const Ctx& src, const Ctx& dst) {
  try {
    auto [f, actual_dst] = elab_subst_forward(e, src);
    if (actual_dst.complex() != dst.complex())
      throw ModelError(Errc::context_mismatch,
                       "substitution lands in " + actual_dst.complex().print());
    return f;
  } catch (const ModelError&) {
    auto [f, actual_src] = elab_subst_backward(e, dst);
    if (actual_src.complex() != src.complex())
      throw ModelError(Errc::context_mismatch,
                       "substitution starts at " + actual_src.complex().print());
    return f;
  }
}

FullTuple Checker::elab_term_checked(const TermPtr& e, const Ctx& ambient,
                                     const Instance& expected, const TypePtr& expected_ast) {
  // left/right need the sibling summand, recoverable only from the stated
  // type (A+B)[down].
  bool is_left = std::get_if<LeftTerm>(&e->node) != nullptr;
  bool is_right = std::get_if<RightTerm>(&e->node) != nullptr;
  if (is_left || is_right) {
    if (!ambient.is_extended())
      throw ModelError(Errc::context_mismatch, "injection in an unextended context");
    const auto* sub = std::get_if<SubstType>(&expected_ast->node);
    const auto* plus = sub ? std::get_if<PlusType>(&sub->head->node) : nullptr;
    if (!plus || !std::get_if<ProjectSubst>(&sub->subst->node))
      throw ModelError(Errc::context_mismatch,
                       "injections need a stated type of the shape (A + B)[down]");
    const Ctx& g0 = ambient.parent();
    Instance a = elab_type(plus->lhs, g0);
    Instance b = elab_type(plus->rhs, g0);
    if (ambient.ext_type() != (is_left ? a : b))
      throw ModelError(Errc::context_mismatch, "injection context does not match the summand");
    FullTuple out = is_left ? left_tuple(a, b) : right_tuple(a, b);
    if (out.instance() != expected)
      throw ModelError(Errc::component_type_mismatch, "injection type mismatch");
    return out;
  }
  if (auto* x = std::get_if<RecTerm>(&e->node)) {
    if (!ambient.is_extended())
      throw ModelError(Errc::context_mismatch, "eliminator in an unextended context");
    const Ctx& g0 = ambient.parent();
    const Instance& over = ambient.ext_type();
    auto need_args = [&](std::size_t n) {
      if (x->args.size() != n)
        throw ModelError(Errc::missing_component, "eliminator takes " + std::to_string(n) +
                                                      " component(s)");
    };
    switch (x->kind) {
      case RecKind::zero: {
        need_args(0);
        if (over != initial(g0.complex()))
          throw ModelError(Errc::kind_mismatch, "rec zero needs a context extended by 0");
        return eliminate_zero(g0.complex(), expected);
      }
      case RecKind::one: {
        need_args(1);
        if (over != terminal(g0.complex()))
          throw ModelError(Errc::kind_mismatch, "rec one needs a context extended by 1");
        FullTuple c0 = elab_term(x->args[0], g0);
        return eliminate_one(g0.complex(), expected, c0);
      }
      case RecKind::sigma: {
        need_args(1);
        const FormationNote* n = find_note(over);
        if (!n || n->kind != FormationNote::Kind::sigma)
          throw ModelError(Errc::kind_mismatch, "rec sigma needs a context extended by a Sigma");
        Ctx cab = Ctx::extend(Ctx::extend(g0, n->parts[0]), n->parts[1]);
        FullTuple c0 = elab_term(x->args[0], cab);
        return eliminate_sigma(n->parts[0], n->parts[1], expected, c0);
      }
      case RecKind::id: {
        need_args(1);
        const FormationNote* n = find_note(over);
        if (!n || n->kind != FormationNote::Kind::id_type)
          throw ModelError(Errc::kind_mismatch, "rec id needs a context extended by Id");
        Ctx ca = Ctx::extend(g0.parent().parent(), n->parts[0]);
        FullTuple c0 = elab_term(x->args[0], ca);
        return eliminate_id(n->parts[0], expected, c0);
      }
      case RecKind::plus: {
        need_args(2);
        const FormationNote* n = find_note(over);
        if (!n || n->kind != FormationNote::Kind::sum)
          throw ModelError(Errc::kind_mismatch, "rec plus needs a context extended by a sum");
        FullTuple c0 = elab_term(x->args[0], Ctx::extend(g0, n->parts[0]));
        FullTuple c1 = elab_term(x->args[1], Ctx::extend(g0, n->parts[1]));
        return eliminate_plus(n->parts[0], n->parts[1], expected, c0, c1);
      }
    }
    throw InternalError("unreachable eliminator kind");
  }
  return elab_term(e, ambient);
}

namespace {

std::string instances_diff(const Instance& a, const Instance& b) {
  if (a.base() != b.base()) return "the contexts differ";
  for (const Face& f : a.base().faces()) {
    const auto& ra = a.rows(f);
    const auto& rb = b.rows(f);
    if (ra != rb)
      return "instances differ at face " + f.print() + ": " + std::to_string(ra.size()) +
             " vs " + std::to_string(rb.size()) + " rows";
  }
  return "";
}

}  // namespace

ReportItem Checker::check_judgement(const Judgement& j) {
  ReportItem item;
  item.label = print_judgement(j);
  try {
    if (auto* x = std::get_if<JCtx>(&j.node)) {
      elab_ctx(x->ctx);
    } else if (auto* x = std::get_if<JCtxEq>(&j.node)) {
      Ctx a = elab_ctx(x->lhs);
      Ctx b = elab_ctx(x->rhs);
      if (a.complex() != b.complex()) {
        item.verdict = Verdict::fails;
        item.message = "schemas differ: " + a.complex().print() + " vs " + b.complex().print();
      }
    } else if (auto* x = std::get_if<JType>(&j.node)) {
      elab_type(x->type, elab_ctx(x->ctx));
    } else if (auto* x = std::get_if<JTypeEq>(&j.node)) {
      Ctx g = elab_ctx(x->ctx);
      Instance a = elab_type(x->lhs, g);
      Instance b = elab_type(x->rhs, g);
      if (a != b) {
        item.verdict = Verdict::fails;
        item.message = instances_diff(a, b);
      }
    } else if (auto* x = std::get_if<JTerm>(&j.node)) {
      Ctx g = elab_ctx(x->ctx);
      Instance expected = elab_type(x->type, g);
      FullTuple t = elab_term_checked(x->term, g, expected, x->type);
      if (t.instance() != expected) {
        item.verdict = Verdict::fails;
        item.message = "term type mismatch: " + instances_diff(t.instance(), expected);
      }
    } else if (auto* x = std::get_if<JTermEq>(&j.node)) {
      Ctx g = elab_ctx(x->ctx);
      Instance expected = elab_type(x->type, g);
      FullTuple a = elab_term_checked(x->lhs, g, expected, x->type);
      FullTuple b = elab_term_checked(x->rhs, g, expected, x->type);
      if (a.instance() != expected || b.instance() != expected) {
        item.verdict = Verdict::fails;
        item.message = "term type mismatch";
      } else if (a.choice() != b.choice()) {
        item.verdict = Verdict::fails;
        for (AttributeId v : g.complex().vertices())
          if (a.at(v) != b.at(v)) {
            item.message = "tuples differ at " + v.name() + ": " + a.at(v).print() + " vs " +
                           b.at(v).print();
            break;
          }
      }
    } else if (auto* x = std::get_if<JSubst>(&j.node)) {
      Ctx src = elab_ctx(x->src);
      Ctx dst = elab_ctx(x->dst);
      SchemaMorphism f = elab_subst_checked(x->subst, src, dst);
      (void)f;
    } else if (auto* x = std::get_if<JSubstEq>(&j.node)) {
      Ctx src = elab_ctx(x->src);
      Ctx dst = elab_ctx(x->dst);
      SchemaMorphism a = elab_subst_checked(x->lhs, src, dst);
      SchemaMorphism b = elab_subst_checked(x->rhs, src, dst);
      if (a != b) {
        item.verdict = Verdict::fails;
        item.message = "morphisms differ: " + a.print() + " vs " + b.print();
      }
    }
  } catch (const ModelError& e) {
    item.verdict = Verdict::ill_formed;
    item.message = e.what();
  }
  return item;
}

CheckReport Checker::process(const std::vector<Declaration>& decls) {
  CheckReport report;
  for (const Declaration& d : decls) {
    ReportItem item;
    item.line = d.line;
    item.column = d.column;
    try {
      if (auto* x = std::get_if<SchemaDecl>(&d.node)) {
        process_schema(*x, item);
      } else if (auto* x = std::get_if<InstanceDecl>(&d.node)) {
        process_instance(*x, item);
      } else if (auto* x = std::get_if<QueryDecl>(&d.node)) {
        item.label = "query " + x->name;
        process_query(*x, item);
      } else {
        auto* x2 = std::get_if<JudgementDecl>(&d.node);
        int line = item.line, col = item.column;
        item = check_judgement(x2->judgement);
        item.line = line;
        item.column = col;
      }
    } catch (const ModelError& e) {
      item.verdict = Verdict::ill_formed;
      item.message = e.what();
    }
    report.items.push_back(std::move(item));
  }
  return report;
}

}  // namespace sdb
