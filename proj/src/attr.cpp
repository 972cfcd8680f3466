#include "sdb/attr.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "sdb/error.hpp"

namespace sdb {

namespace {

const std::string* intern(std::string_view token) {
  static std::mutex mu;
  static std::set<std::string, std::less<>> pool;  // node-based: stable addresses
  std::lock_guard<std::mutex> lock(mu);
  auto it = pool.find(token);
  if (it == pool.end()) it = pool.emplace(token).first;
  return &*it;
}

}  // namespace

AttributeId::AttributeId(std::string_view token) {
  internal_check(!token.empty(), "attribute token must be nonempty");
  name_ = intern(token);
}

Face::Face(std::vector<AttributeId> vertices) : vertices_(std::move(vertices)) {
  internal_check(!vertices_.empty(), "face must be nonempty");
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

bool Face::contains(AttributeId a) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), a);
}

bool Face::subset_of(const Face& other) const {
  return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(),
                       vertices_.end());
}

std::vector<Face> Face::facets() const {
  std::vector<Face> out;
  if (vertices_.size() < 2) return out;
  for (std::size_t skip = 0; skip < vertices_.size(); ++skip) {
    std::vector<AttributeId> vs;
    vs.reserve(vertices_.size() - 1);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (i != skip) vs.push_back(vertices_[i]);
    out.emplace_back(std::move(vs));
  }
  return out;
}

std::vector<Face> Face::all_subfaces() const {
  std::vector<Face> out;
  const std::size_t n = vertices_.size();
  for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
    std::vector<AttributeId> vs;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t(1) << i)) vs.push_back(vertices_[i]);
    out.emplace_back(std::move(vs));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::strong_ordering operator<=>(const Face& a, const Face& b) {
  if (auto c = a.vertices_.size() <=> b.vertices_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.vertices_.size(); ++i)
    if (auto c = a.vertices_[i] <=> b.vertices_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Face::print() const {
  std::string out = "[";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += " ";
    out += vertices_[i].name();
  }
  out += "]";
  return out;
}

}  // namespace sdb
