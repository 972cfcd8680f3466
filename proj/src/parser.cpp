#include "sdb/parser.hpp"

#include <cctype>
#include <optional>
#include <set>

#include "sdb/error.hpp"

namespace sdb {

using namespace ast;

namespace {

enum class Tok { ident, nat, punct, eof };

struct Token {
  Tok kind;
  std::string text;
  int line = 1;
  int column = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kws = {
      "schema", "instance", "over", "of",   "gen",   "eq",    "query", "judgement",
      "id",     "down",     "lambda", "apply", "rec",  "v",     "o",     "D",
      "Pi",     "Sigma",    "Id",   "pair", "refl",  "left",  "right", "context",
      "type",   "zero",     "one",  "sigma", "plus"};
  return kws;
}

bool is_face_token(std::string_view s) {
  if (s.size() < 2 || s[0] != 'd') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
              text[j] == '\''))
        ++j;
      out.push_back({Tok::ident, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::nat, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::punct, "->", tl, tc});
      advance(2);
      continue;
    }
    if (c == '|' && i + 1 < text.size() && text[i + 1] == '-') {
      out.push_back({Tok::punct, "|-", tl, tc});
      advance(2);
      continue;
    }
    if (std::string("{}[]()=:.!+*").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw SyntaxError(tl, tc, "a token (unexpected character '" + std::string(1, c) + "')");
  }
  int el = line, ec = col;
  out.push_back({Tok::eof, "", el, ec});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  std::vector<Declaration> file() {
    std::vector<Declaration> out;
    while (!at_eof()) out.push_back(declaration());
    return out;
  }

  Judgement single_judgement() {
    expect_kw("judgement");
    Judgement j = judgement_body();
    if (!at_eof()) fail("end of input");
    return j;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  // Deepest failure seen along backtracking paths, for error messages.
  std::size_t best_fail_pos_ = 0;
  std::string best_fail_expected_;

  const Token& cur() const { return toks_[pos_]; }
  bool at_eof() const { return cur().kind == Tok::eof; }

  [[noreturn]] void fail(const std::string& expected) {
    if (pos_ >= best_fail_pos_) {
      best_fail_pos_ = pos_;
      best_fail_expected_ = expected;
    }
    const Token& t = toks_[best_fail_pos_];
    throw SyntaxError(t.line, t.column, best_fail_expected_);
  }

  bool peek_punct(const std::string& p) const {
    return cur().kind == Tok::punct && cur().text == p;
  }
  bool peek_kw(const std::string& k) const { return cur().kind == Tok::ident && cur().text == k; }

  bool eat_punct(const std::string& p) {
    if (!peek_punct(p)) return false;
    ++pos_;
    return true;
  }
  bool eat_kw(const std::string& k) {
    if (!peek_kw(k)) return false;
    ++pos_;
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!eat_punct(p)) fail("'" + p + "'");
  }
  void expect_kw(const std::string& k) {
    if (!eat_kw(k)) fail("'" + k + "'");
  }

  int expect_nat() {
    if (cur().kind != Tok::nat) fail("a number");
    int n = std::stoi(cur().text);
    ++pos_;
    return n;
  }

  std::string expect_name() {
    if (cur().kind != Tok::ident || !is_valid_name(cur().text)) fail("a name");
    std::string s = cur().text;
    ++pos_;
    return s;
  }

  // --- declarations ---

  Declaration declaration() {
    Declaration d;
    d.line = cur().line;
    d.column = cur().column;
    if (eat_kw("schema")) {
      d.node = schema_decl();
    } else if (eat_kw("instance")) {
      d.node = instance_decl();
    } else if (eat_kw("query")) {
      d.node = query_decl();
    } else if (eat_kw("judgement")) {
      d.node = JudgementDecl{judgement_body()};
    } else {
      fail("a declaration (schema, instance, query or judgement)");
    }
    return d;
  }

  SchemaDecl schema_decl() {
    SchemaDecl s;
    s.name = expect_name();
    expect_kw("over");
    expect_kw("D");
    s.base_dim = expect_nat();
    expect_punct("{");
    while (!eat_punct("}")) {
      if (eat_kw("gen")) {
        SchemaGen g;
        g.name = expect_name();
        expect_punct(":");
        g.path = path();
        s.gens.push_back(std::move(g));
      } else if (eat_kw("eq")) {
        s.eqs.push_back(decl_eq());
      } else {
        fail("'gen', 'eq' or '}'");
      }
    }
    return s;
  }

  InstanceDecl instance_decl() {
    InstanceDecl s;
    s.name = expect_name();
    expect_kw("of");
    s.of = expect_name();
    expect_punct("{");
    while (!eat_punct("}")) {
      if (eat_kw("gen")) {
        InstanceGen g;
        g.name = expect_name();
        expect_kw("over");
        g.over = expect_name();
        s.gens.push_back(std::move(g));
      } else if (eat_kw("eq")) {
        s.eqs.push_back(decl_eq());
      } else {
        fail("'gen', 'eq' or '}'");
      }
    }
    return s;
  }

  QueryDecl query_decl() {
    QueryDecl q;
    q.name = expect_name();
    expect_punct("=");
    std::size_t save = pos_;
    try {
      TypePtr t = type_expr();
      if (at_decl_boundary()) {
        q.type_body = t;
        return q;
      }
      fail("end of query");  // recorded as the deepest failure
    } catch (const SyntaxError&) {
    }
    pos_ = save;
    q.term_body = term_expr();
    if (!at_decl_boundary()) fail("end of query");
    return q;
  }

  bool at_decl_boundary() const {
    return at_eof() || peek_kw("schema") || peek_kw("instance") || peek_kw("query") ||
           peek_kw("judgement");
  }

  Path path() {
    Path p;
    if (eat_kw("id")) {
      p.is_identity = true;
      return p;
    }
    p.steps.push_back(face_index());
    while (true) {
      std::size_t save = pos_;
      if (!eat_punct(".")) break;
      if (cur().kind == Tok::ident && is_face_token(cur().text)) {
        p.steps.push_back(face_index());
      } else {
        pos_ = save;
        break;
      }
    }
    return p;
  }

  int face_index() {
    if (cur().kind == Tok::ident && is_face_token(cur().text)) {
      int i = std::stoi(cur().text.substr(1));
      ++pos_;
      return i;
    }
    if (peek_kw("d")) {
      ++pos_;
      return expect_nat();
    }
    fail("a face map dN");
  }

  DeclEq decl_eq() {
    DeclEq e;
    e.lhs_name = expect_name();
    expect_punct("[");
    e.lhs_path = path();
    expect_punct("]");
    expect_punct("=");
    e.rhs_name = expect_name();
    expect_punct("[");
    e.rhs_path = path();
    expect_punct("]");
    return e;
  }

  // --- judgements: try each form, longest-progress error on failure ---

  Judgement judgement_body() {
    std::size_t save = pos_;
    auto attempt = [&](auto&& fn) -> std::optional<Judgement> {
      pos_ = save;
      try {
        Judgement j = fn();
        if (!at_decl_boundary()) fail("end of judgement");
        return j;
      } catch (const SyntaxError&) {
        return std::nullopt;
      }
    };
    if (auto j = attempt([&] { return j_ctx(); })) return *j;
    if (auto j = attempt([&] { return j_term(); })) return *j;
    if (auto j = attempt([&] { return j_term_eq(); })) return *j;
    if (auto j = attempt([&] { return j_type(); })) return *j;
    if (auto j = attempt([&] { return j_type_eq(); })) return *j;
    if (auto j = attempt([&] { return j_subst(); })) return *j;
    if (auto j = attempt([&] { return j_subst_eq(); })) return *j;
    if (auto j = attempt([&] { return j_ctx_eq(); })) return *j;
    pos_ = best_fail_pos_;
    fail(best_fail_expected_.empty() ? "a judgement" : best_fail_expected_);
  }

  Judgement j_ctx() {
    CtxPtr c = ctx_expr();
    expect_kw("context");
    return Judgement{JCtx{c}};
  }
  Judgement j_ctx_eq() {
    CtxPtr a = ctx_expr();
    expect_punct("=");
    CtxPtr b = ctx_expr();
    return Judgement{JCtxEq{a, b}};
  }
  Judgement j_type() {
    CtxPtr c = ctx_expr();
    expect_punct("|-");
    TypePtr t = type_expr();
    expect_kw("type");
    return Judgement{JType{c, t}};
  }
  Judgement j_type_eq() {
    CtxPtr c = ctx_expr();
    expect_punct("|-");
    TypePtr a = type_expr();
    expect_punct("=");
    TypePtr b = type_expr();
    return Judgement{JTypeEq{c, a, b}};
  }
  Judgement j_term() {
    CtxPtr c = ctx_expr();
    expect_punct("|-");
    TermPtr t = term_expr();
    expect_punct(":");
    TypePtr ty = type_expr();
    return Judgement{JTerm{c, t, ty}};
  }
  Judgement j_term_eq() {
    CtxPtr c = ctx_expr();
    expect_punct("|-");
    TermPtr a = term_expr();
    expect_punct("=");
    TermPtr b = term_expr();
    expect_punct(":");
    TypePtr ty = type_expr();
    return Judgement{JTermEq{c, a, b, ty}};
  }
  Judgement j_subst() {
    SubstPtr s = subst_expr();
    expect_punct(":");
    CtxPtr src = ctx_expr();
    expect_punct("->");
    CtxPtr dst = ctx_expr();
    return Judgement{JSubst{s, src, dst}};
  }
  Judgement j_subst_eq() {
    SubstPtr a = subst_expr();
    expect_punct("=");
    SubstPtr b = subst_expr();
    expect_punct(":");
    CtxPtr src = ctx_expr();
    expect_punct("->");
    CtxPtr dst = ctx_expr();
    return Judgement{JSubstEq{a, b, src, dst}};
  }

  // --- expressions ---

  CtxPtr ctx_expr() {
    CtxPtr c = ctx_atom();
    while (true) {
      std::size_t save = pos_;
      if (!eat_punct(".")) break;
      try {
        TypePtr t = type_atom();
        c = ctx(CtxExpr{ExtendCtx{c, t}});
      } catch (const SyntaxError&) {
        pos_ = save;
        break;
      }
    }
    return c;
  }

  CtxPtr ctx_atom() {
    if (eat_kw("D")) return ctx(CtxExpr{SimplexCtx{expect_nat()}});
    if (cur().kind == Tok::ident && is_valid_name(cur().text)) {
      std::string n = cur().text;
      ++pos_;
      return ctx(CtxExpr{NamedCtx{std::move(n)}});
    }
    fail("a context");
  }

  TypePtr type_expr() {
    if (eat_kw("Pi")) {
      TypePtr a = type_atom();
      TypePtr b = type_atom();
      return type(TypeExpr{PiType{a, b}});
    }
    if (eat_kw("Sigma")) {
      TypePtr a = type_atom();
      TypePtr b = type_atom();
      return type(TypeExpr{SigmaType{a, b}});
    }
    if (eat_kw("Id")) return type(TypeExpr{IdType{type_atom()}});
    TypePtr t = type_postfix();
    while (eat_punct("+")) {
      TypePtr rhs = type_postfix();
      t = type(TypeExpr{PlusType{t, rhs}});
    }
    return t;
  }

  TypePtr type_postfix() {
    TypePtr t = type_atom();
    while (eat_punct("[")) {
      SubstPtr s = subst_expr();
      expect_punct("]");
      t = type(TypeExpr{SubstType{t, s}});
    }
    return t;
  }

  TypePtr type_atom() {
    if (cur().kind == Tok::nat && cur().text == "0") {
      ++pos_;
      return type(TypeExpr{ZeroType{}});
    }
    if (cur().kind == Tok::nat && cur().text == "1") {
      ++pos_;
      return type(TypeExpr{OneType{}});
    }
    if (eat_punct("(")) {
      TypePtr t = type_expr();
      expect_punct(")");
      return t;
    }
    if (cur().kind == Tok::ident && is_valid_name(cur().text)) {
      std::string n = cur().text;
      ++pos_;
      return type(TypeExpr{NamedType{std::move(n)}});
    }
    fail("a type");
  }

  TermPtr term_expr() {
    if (eat_kw("lambda")) return term(TermExpr{LambdaTerm{term_expr()}});
    if (eat_kw("apply")) return term(TermExpr{ApplyTerm{term_expr()}});
    if (eat_kw("rec")) return rec_term();
    return term_postfix();
  }

  TermPtr rec_term() {
    std::string head;
    if (cur().kind != Tok::ident) fail("an eliminator name");
    head = cur().text;
    ++pos_;
    std::vector<TermPtr> args;
    while (true) {
      std::size_t save = pos_;
      if (peek_punct("(")) {
        try {
          args.push_back(term_atom());
          continue;
        } catch (const SyntaxError&) {
          pos_ = save;
          break;
        }
      }
      if (cur().kind == Tok::ident &&
          (is_valid_name(cur().text) || cur().text == "v" || cur().text == "pair" ||
           cur().text == "refl" || cur().text == "left" || cur().text == "right")) {
        args.push_back(term_atom());
        continue;
      }
      if (peek_punct("*")) {
        args.push_back(term_atom());
        continue;
      }
      break;
    }
    if (head == "zero") return term(TermExpr{RecTerm{RecKind::zero, std::move(args)}});
    if (head == "one") return term(TermExpr{RecTerm{RecKind::one, std::move(args)}});
    if (head == "sigma") return term(TermExpr{RecTerm{RecKind::sigma, std::move(args)}});
    if (head == "id") return term(TermExpr{RecTerm{RecKind::id, std::move(args)}});
    if (head == "plus") return term(TermExpr{RecTerm{RecKind::plus, std::move(args)}});
    if (!is_valid_name(head)) fail("an eliminator name");
    return term(TermExpr{RecDeclaredTerm{std::move(head), std::move(args)}});
  }

  TermPtr term_postfix() {
    TermPtr t = term_atom();
    while (eat_punct("[")) {
      SubstPtr s = subst_expr();
      expect_punct("]");
      t = term(TermExpr{SubstTerm{t, s}});
    }
    return t;
  }

  TermPtr term_atom() {
    if (eat_kw("v")) return term(TermExpr{VarTerm{}});
    if (eat_punct("*")) return term(TermExpr{StarTerm{}});
    if (eat_kw("pair")) return term(TermExpr{PairTerm{}});
    if (eat_kw("refl")) return term(TermExpr{ReflTerm{}});
    if (eat_kw("left")) return term(TermExpr{LeftTerm{}});
    if (eat_kw("right")) return term(TermExpr{RightTerm{}});
    if (eat_punct("(")) {
      TermPtr t = term_expr();
      expect_punct(")");
      return t;
    }
    if (cur().kind == Tok::ident && is_valid_name(cur().text)) {
      std::string n = cur().text;
      ++pos_;
      return term(TermExpr{NamedTerm{std::move(n)}});
    }
    fail("a term");
  }

  SubstPtr subst_expr() {
    SubstPtr s = subst_postfix();
    while (eat_kw("o")) {
      SubstPtr rhs = subst_postfix();
      s = subst(SubstExpr{ComposeSubst{s, rhs}});
    }
    return s;
  }

  SubstPtr subst_postfix() {
    SubstPtr s = subst_atom();
    while (true) {
      std::size_t save = pos_;
      if (!eat_punct(".")) break;
      try {
        TypePtr t = type_atom();
        s = subst(SubstExpr{LiftSubst{s, t}});
      } catch (const SyntaxError&) {
        pos_ = save;
        break;
      }
    }
    return s;
  }

  SubstPtr subst_atom() {
    if (eat_kw("id")) return subst(SubstExpr{IdentitySubst{}});
    if (eat_kw("down")) return subst(SubstExpr{ProjectSubst{}});
    if (cur().kind == Tok::ident && is_face_token(cur().text)) {
      int i = std::stoi(cur().text.substr(1));
      ++pos_;
      return subst(SubstExpr{FaceMapSubst{i}});
    }
    if (peek_kw("d")) {
      // "d NAT" is a face map; a bare "d" may still be a term name below.
      std::size_t save = pos_;
      ++pos_;
      if (cur().kind == Tok::nat) return subst(SubstExpr{FaceMapSubst{expect_nat()}});
      pos_ = save;
    }
    if (peek_punct("(")) {
      std::size_t save = pos_;
      try {
        ++pos_;
        SubstPtr s = subst_expr();
        expect_punct(")");
        if (peek_punct("!")) throw SyntaxError(cur().line, cur().column, "a term before '!'");
        return s;
      } catch (const SyntaxError&) {
        pos_ = save;
      }
    }
    // evaluation: a term followed by '!'
    TermPtr t = term_postfix();
    expect_punct("!");
    return subst(SubstExpr{EvalSubst{t}});
  }
};

}  // namespace

bool is_valid_name(std::string_view token) {
  if (token.empty()) return false;
  char c = token[0];
  if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return false;
  if (keywords().count(std::string(token))) return false;
  if (is_face_token(token)) return false;
  return true;
}

std::vector<ast::Declaration> parse(std::string_view text) {
  Parser p(text);
  return p.file();
}

ast::Judgement parse_judgement(std::string_view text) {
  Parser p(text);
  return p.single_judgement();
}

}  // namespace sdb
