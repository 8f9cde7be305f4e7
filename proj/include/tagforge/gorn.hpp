#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/error.hpp"

namespace tagforge {

// Tree address: the path of 1-based child positions from the root.
// The root is the empty path and is spelled "0"; "0.2.1" and "2.1" name the
// same node.
class GornAddress {
 public:
  GornAddress() = default;
  explicit GornAddress(std::vector<unsigned> path) : path_(std::move(path)) {
    for (unsigned step : path_)
      if (step == 0) throw Error(Errc::invalid_address, "path steps must be >= 1");
  }

  static GornAddress root() { return {}; }

  static GornAddress parse(std::string_view text) {
    if (text.empty()) throw Error(Errc::invalid_address, "empty address");
    std::vector<unsigned> path;
    std::size_t pos = 0;
    bool first = true;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      if (dot == std::string_view::npos) dot = text.size();
      std::string_view part = text.substr(pos, dot - pos);
      if (part.empty()) throw Error(Errc::invalid_address, "malformed address '" + std::string(text) + "'");
      unsigned long value = 0;
      for (char c : part) {
        if (c < '0' || c > '9')
          throw Error(Errc::invalid_address, "malformed address '" + std::string(text) + "'");
        value = value * 10 + static_cast<unsigned long>(c - '0');
        if (value > 1000000) throw Error(Errc::invalid_address, "address step too large");
      }
      if (value == 0) {
        // A leading 0 denotes the root; it may only appear first.
        if (!first) throw Error(Errc::invalid_address, "0 inside address '" + std::string(text) + "'");
      } else {
        path.push_back(static_cast<unsigned>(value));
      }
      first = false;
      pos = dot + 1;
    }
    return GornAddress(std::move(path));
  }

  bool is_root() const noexcept { return path_.empty(); }
  std::size_t depth() const noexcept { return path_.size(); }
  const std::vector<unsigned>& path() const noexcept { return path_; }

  GornAddress child(unsigned i) const {
    if (i == 0) throw Error(Errc::invalid_address, "child index must be >= 1");
    auto p = path_;
    p.push_back(i);
    return GornAddress(std::move(p));
  }

  GornAddress parent() const {
    if (is_root()) throw Error(Errc::invalid_address, "the root has no parent");
    auto p = path_;
    p.pop_back();
    return GornAddress(std::move(p));
  }

  // Last path step; root has none.
  unsigned last() const {
    if (is_root()) throw Error(Errc::invalid_address, "the root has no position");
    return path_.back();
  }

  // True when *this is an ancestor of, or equal to, other.
  bool is_prefix_of(const GornAddress& other) const noexcept {
    if (path_.size() > other.path_.size()) return false;
    for (std::size_t i = 0; i < path_.size(); ++i)
      if (path_[i] != other.path_[i]) return false;
    return true;
  }

  // other must extend *this; returns the remaining steps.
  GornAddress suffix_after(const GornAddress& prefix) const {
    if (!prefix.is_prefix_of(*this)) throw Error(Errc::invalid_address, "not a prefix");
    return GornAddress(std::vector<unsigned>(path_.begin() + static_cast<std::ptrdiff_t>(prefix.depth()), path_.end()));
  }

  GornAddress concat(const GornAddress& tail) const {
    auto p = path_;
    p.insert(p.end(), tail.path_.begin(), tail.path_.end());
    return GornAddress(std::move(p));
  }

  std::string str() const {
    if (path_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(path_[i]);
    }
    return out;
  }

  friend bool operator==(const GornAddress&, const GornAddress&) = default;
  friend auto operator<=>(const GornAddress& a, const GornAddress& b) { return a.path_ <=> b.path_; }

 private:
  std::vector<unsigned> path_;
};

inline GornAddress gorn_child(const GornAddress& a, unsigned i) { return a.child(i); }
inline GornAddress gorn_parent(const GornAddress& a) { return a.parent(); }
inline bool is_prefix(const GornAddress& a, const GornAddress& b) { return a.is_prefix_of(b); }

}  // namespace tagforge

template <>
struct std::hash<tagforge::GornAddress> {
  std::size_t operator()(const tagforge::GornAddress& a) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (unsigned s : a.path()) h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};
