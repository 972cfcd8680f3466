#include "sdb/complex.hpp"

#include <algorithm>
#include <set>

#include "sdb/error.hpp"

namespace sdb {

struct Complex::Rep {
  std::vector<AttributeId> vertices;  // sorted
  std::vector<Face> faces;            // sorted by (dim, lex)
};

Complex::Complex() {
  static const auto rep = std::make_shared<const Rep>();
  rep_ = rep;
}

Complex Complex::make(std::vector<AttributeId> vertices, std::vector<Face> faces) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());

  auto has_face = [&faces](const Face& f) {
    return std::binary_search(faces.begin(), faces.end(), f);
  };

  for (const Face& f : faces)
    for (AttributeId a : f.vertices())
      if (!std::binary_search(vertices.begin(), vertices.end(), a))
        throw ModelError(Errc::unknown_vertex,
                         "face " + f.print() + " uses undeclared vertex " + a.name());
  for (AttributeId a : vertices)
    if (!has_face(Face({a})))
      throw ModelError(Errc::missing_singleton, "vertex " + a.name() + " has no singleton face");
  for (const Face& f : faces)
    for (const Face& sub : f.facets())
      if (!has_face(sub))
        throw ModelError(Errc::not_downward_closed,
                         "face " + f.print() + " is missing subface " + sub.print());

  Complex c;
  auto rep = std::make_shared<Complex::Rep>();
  rep->vertices = std::move(vertices);
  rep->faces = std::move(faces);
  c.rep_ = std::move(rep);
  return c;
}

std::span<const AttributeId> Complex::vertices() const { return rep_->vertices; }
std::span<const Face> Complex::faces() const { return rep_->faces; }

bool Complex::has_vertex(AttributeId a) const {
  return std::binary_search(rep_->vertices.begin(), rep_->vertices.end(), a);
}

bool Complex::has_face(const Face& f) const {
  return std::binary_search(rep_->faces.begin(), rep_->faces.end(), f);
}

std::vector<Face> Complex::strata(int n) const {
  std::vector<Face> out;
  for (const Face& f : rep_->faces)
    if (f.dimension() == n) out.push_back(f);
  return out;
}

int Complex::dimension() const {
  return rep_->faces.empty() ? -1 : rep_->faces.back().dimension();
}

bool operator==(const Complex& a, const Complex& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->vertices == b.rep_->vertices && a.rep_->faces == b.rep_->faces;
}

std::string Complex::print() const {
  std::string out = "complex{";
  for (std::size_t i = 0; i < rep_->faces.size(); ++i) {
    if (i) out += " ";
    out += rep_->faces[i].print();
  }
  return out + "}";
}

Complex simplex(int n) {
  internal_check(n >= 0, "simplex dimension must be >= 0");
  std::vector<AttributeId> vertices;
  vertices.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) vertices.emplace_back(std::to_string(k));
  Face top(vertices);
  return Complex::make(std::move(vertices), top.all_subfaces());
}

struct SchemaMorphism::Rep {
  Complex src, dst;
  std::map<AttributeId, AttributeId> vertex_map;
  bool display = false;
};

SchemaMorphism SchemaMorphism::make(Complex src, Complex dst,
                                    std::map<AttributeId, AttributeId> vertex_map) {
  for (const auto& [a, b] : vertex_map) {
    if (!src.has_vertex(a))
      throw ModelError(Errc::unknown_vertex, "map defined on non-vertex " + a.name());
    if (!dst.has_vertex(b))
      throw ModelError(Errc::unknown_vertex, "map sends " + a.name() + " outside the target: " +
                                                 b.name());
  }
  if (vertex_map.size() != src.vertices().size())
    throw ModelError(Errc::unknown_vertex, "map must be defined on every source vertex");

  auto rep = std::make_shared<Rep>();
  rep->src = std::move(src);
  rep->dst = std::move(dst);
  rep->vertex_map = std::move(vertex_map);

  bool display = true;
  for (const Face& f : rep->src.faces()) {
    std::vector<AttributeId> image;
    image.reserve(f.size());
    for (AttributeId a : f.vertices()) image.push_back(rep->vertex_map.at(a));
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (image.size() != f.size()) display = false;
    Face img(std::move(image));
    if (!rep->dst.has_face(img))
      throw ModelError(Errc::unknown_face, "image of face " + f.print() +
                                               " is not a target face: " + img.print());
  }
  rep->display = display;

  SchemaMorphism m;
  m.rep_ = std::move(rep);
  return m;
}

const Complex& SchemaMorphism::src() const { return rep_->src; }
const Complex& SchemaMorphism::dst() const { return rep_->dst; }
const std::map<AttributeId, AttributeId>& SchemaMorphism::vertex_map() const {
  return rep_->vertex_map;
}
bool SchemaMorphism::is_display() const { return rep_->display; }

AttributeId SchemaMorphism::apply(AttributeId a) const {
  auto it = rep_->vertex_map.find(a);
  internal_check(it != rep_->vertex_map.end(), "morphism applied outside its source");
  return it->second;
}

Face SchemaMorphism::apply(const Face& f) const {
  std::vector<AttributeId> image;
  image.reserve(f.size());
  for (AttributeId a : f.vertices()) image.push_back(apply(a));
  return Face(std::move(image));
}

bool operator==(const SchemaMorphism& a, const SchemaMorphism& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->src == b.rep_->src && a.rep_->dst == b.rep_->dst &&
         a.rep_->vertex_map == b.rep_->vertex_map;
}

std::string SchemaMorphism::print() const {
  std::string out = "morphism{";
  bool first = true;
  for (const auto& [a, b] : rep_->vertex_map) {
    if (!first) out += " ";
    first = false;
    out += a.name() + "->" + b.name();
  }
  return out + "}";
}

SchemaMorphism face_map(int n, int i) {
  if (n < 0 || i < 0 || i > n + 1)
    throw ModelError(Errc::index_out_of_range,
                     "face map d_" + std::to_string(i) + " into simplex " + std::to_string(n + 1));
  std::map<AttributeId, AttributeId> vm;
  for (int k = 0; k <= n; ++k)
    vm.emplace(AttributeId(std::to_string(k)), AttributeId(std::to_string(k < i ? k : k + 1)));
  return SchemaMorphism::make(simplex(n), simplex(n + 1), std::move(vm));
}

SchemaMorphism compose(const SchemaMorphism& g, const SchemaMorphism& f) {
  if (f.dst() != g.src())
    throw ModelError(Errc::non_composable, "middle schemas differ: " + f.dst().print() +
                                               " vs " + g.src().print());
  std::map<AttributeId, AttributeId> vm;
  for (const auto& [a, b] : f.vertex_map()) vm.emplace(a, g.apply(b));
  return SchemaMorphism::make(f.src(), g.dst(), std::move(vm));
}

SchemaMorphism identity(const Complex& x) {
  std::map<AttributeId, AttributeId> vm;
  for (AttributeId a : x.vertices()) vm.emplace(a, a);
  return SchemaMorphism::make(x, x, std::move(vm));
}

}  // namespace sdb
