#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"

namespace tagforge {

enum class SymbolKind { terminal, nonterminal };

struct Symbol {
  std::string text;
  SymbolKind kind = SymbolKind::nonterminal;

  static Symbol nt(std::string t) { return {std::move(t), SymbolKind::nonterminal}; }
  static Symbol t(std::string t) { return {std::move(t), SymbolKind::terminal}; }
  static Symbol epsilon() { return {std::string(), SymbolKind::terminal}; }

  bool is_terminal() const noexcept { return kind == SymbolKind::terminal; }
  bool is_nonterminal() const noexcept { return kind == SymbolKind::nonterminal; }
  bool is_epsilon() const noexcept { return is_terminal() && text.empty(); }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// `slot` only occurs in tree-family skeletons: a parameter leaf such as
// $adposition that instantiation turns into a plain terminal.
enum class Marker { none, substitution, foot, anchor, lexical, slot };

inline std::string_view to_string(Marker m) {
  switch (m) {
    case Marker::none: return "none";
    case Marker::substitution: return "substitution";
    case Marker::foot: return "foot";
    case Marker::anchor: return "anchor";
    case Marker::lexical: return "lexical";
    case Marker::slot: return "slot";
  }
  return "?";
}

// Per-node adjunction policy. `names == nullopt` stands for the set of all
// auxiliary trees of the grammar.
class AdjConstraint {
 public:
  enum class Kind { selective, null, obligatory };

  AdjConstraint() = default;

  static AdjConstraint any() { return {}; }
  static AdjConstraint na() { return AdjConstraint(Kind::null, std::set<std::string>{}); }
  static AdjConstraint sa(std::set<std::string> names) { return AdjConstraint(Kind::selective, std::move(names)); }
  static AdjConstraint oa() { return AdjConstraint(Kind::obligatory, std::nullopt); }
  static AdjConstraint oa(std::set<std::string> names) {
    if (names.empty()) return oa();
    return AdjConstraint(Kind::obligatory, std::move(names));
  }

  Kind kind() const noexcept { return kind_; }
  const std::optional<std::set<std::string>>& names() const noexcept { return names_; }
  bool is_null() const noexcept { return kind_ == Kind::null; }
  bool is_obligatory() const noexcept { return kind_ == Kind::obligatory; }
  bool is_unrestricted() const noexcept { return kind_ == Kind::selective && !names_; }

  // NA is SA over the empty set; OA with no explicit names is OA over all.
  AdjConstraint normalized() const {
    if (kind_ == Kind::null) return AdjConstraint(Kind::selective, std::set<std::string>{});
    if (kind_ == Kind::obligatory && names_ && names_->empty()) return oa();
    return *this;
  }

  bool admits(std::string_view aux_name) const {
    if (kind_ == Kind::null) return false;
    if (!names_) return true;
    return names_->count(std::string(aux_name)) > 0;
  }

  bool admits_none() const {
    auto n = normalized();
    return n.kind_ == Kind::selective && n.names_ && n.names_->empty();
  }

  friend bool operator==(const AdjConstraint& a, const AdjConstraint& b) {
    auto na = a.normalized();
    auto nb = b.normalized();
    return na.kind_ == nb.kind_ && na.names_ == nb.names_;
  }

 private:
  AdjConstraint(Kind k, std::optional<std::set<std::string>> n) : kind_(k), names_(std::move(n)) {}

  Kind kind_ = Kind::selective;
  std::optional<std::set<std::string>> names_;
};

struct TreeNode {
  Symbol label;
  Marker marker = Marker::none;
  // Unset means the default policy: SA(A) on ordinary nodes, NA on
  // substitution sites.
  std::optional<AdjConstraint> constraint;
  std::vector<TreeNode> children;
  std::optional<std::string> lexeme;

  static TreeNode nonterminal(std::string label, Marker m = Marker::none) {
    TreeNode n;
    n.label = Symbol::nt(std::move(label));
    n.marker = m;
    return n;
  }
  static TreeNode terminal(std::string word) {
    TreeNode n;
    n.label = Symbol::t(std::move(word));
    return n;
  }
  static TreeNode lexical(std::string word) {
    TreeNode n;
    n.label = Symbol::t(word);
    n.marker = Marker::lexical;
    n.lexeme = std::move(word);
    return n;
  }
  static TreeNode epsilon() {
    TreeNode n;
    n.label = Symbol::epsilon();
    return n;
  }

  TreeNode&& with(std::vector<TreeNode> kids) && {
    children = std::move(kids);
    return std::move(*this);
  }
  TreeNode&& with_constraint(AdjConstraint c) && {
    constraint = std::move(c);
    return std::move(*this);
  }

  bool is_leaf() const noexcept { return children.empty(); }

  AdjConstraint effective_constraint() const {
    if (marker == Marker::substitution) return AdjConstraint::na();
    if (label.is_terminal()) return AdjConstraint::na();
    return constraint.value_or(AdjConstraint::any());
  }

  // Anchor with its lexical child already in place.
  bool is_anchored_anchor() const {
    return marker == Marker::anchor && children.size() == 1 && children[0].marker == Marker::lexical;
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const TreeNode& a, const TreeNode& b) {
    return a.label == b.label && a.marker == b.marker && a.constraint == b.constraint &&
           a.lexeme == b.lexeme && a.children == b.children;
  }
};

// Preorder walk with addresses.
template <typename Fn>
void for_each_node(const TreeNode& root, Fn&& fn, const GornAddress& at = GornAddress::root()) {
  fn(at, root);
  for (std::size_t i = 0; i < root.children.size(); ++i)
    for_each_node(root.children[i], fn, at.child(static_cast<unsigned>(i + 1)));
}

inline const TreeNode* find_node(const TreeNode& root, const GornAddress& addr) {
  const TreeNode* cur = &root;
  for (unsigned step : addr.path()) {
    if (step > cur->children.size()) return nullptr;
    cur = &cur->children[step - 1];
  }
  return cur;
}

inline const TreeNode& node_at(const TreeNode& root, const GornAddress& addr) {
  const TreeNode* n = find_node(root, addr);
  if (!n) throw Error(Errc::address_out_of_range, "no node at " + addr.str());
  return *n;
}

inline TreeNode& mutable_node_at(TreeNode& root, const GornAddress& addr) {
  TreeNode* cur = &root;
  for (unsigned step : addr.path()) {
    if (step > cur->children.size()) throw Error(Errc::address_out_of_range, "no node at " + addr.str());
    cur = &cur->children[step - 1];
  }
  return *cur;
}

inline std::vector<GornAddress> addresses_where(const TreeNode& root, const std::function<bool(const TreeNode&)>& pred) {
  std::vector<GornAddress> out;
  for_each_node(root, [&](const GornAddress& a, const TreeNode& n) {
    if (pred(n)) out.push_back(a);
  });
  return out;
}

enum class TreeKind { initial, auxiliary };

inline std::string_view to_string(TreeKind k) { return k == TreeKind::initial ? "initial" : "auxiliary"; }

// A named elementary tree. Immutable once built; the address tables are
// computed on construction.
class ElementaryTree {
 public:
  ElementaryTree() = default;
  ElementaryTree(std::string name, TreeKind kind, TreeNode root)
      : name_(std::move(name)), kind_(kind), root_(std::move(root)) {
    reindex();
  }

  const std::string& name() const noexcept { return name_; }
  TreeKind kind() const noexcept { return kind_; }
  bool is_initial() const noexcept { return kind_ == TreeKind::initial; }
  bool is_auxiliary() const noexcept { return kind_ == TreeKind::auxiliary; }
  const TreeNode& root() const noexcept { return root_; }

  const TreeNode& node_at(const GornAddress& addr) const { return tagforge::node_at(root_, addr); }
  bool has_address(const GornAddress& addr) const { return find_node(root_, addr) != nullptr; }

  const std::vector<GornAddress>& addresses() const noexcept { return addresses_; }
  const std::vector<GornAddress>& foot_addresses() const noexcept { return feet_; }
  const std::vector<GornAddress>& anchor_addresses() const noexcept { return anchors_; }
  const std::vector<GornAddress>& substitution_sites() const noexcept { return sites_; }

  std::optional<GornAddress> foot() const {
    if (feet_.size() != 1) return std::nullopt;
    return feet_.front();
  }
  std::optional<GornAddress> anchor() const {
    if (anchors_.size() != 1) return std::nullopt;
    return anchors_.front();
  }

  // Lexeme of the single anchor, when present.
  std::optional<std::string> anchor_lexeme() const {
    auto a = anchor();
    if (!a) return std::nullopt;
    const TreeNode& n = node_at(*a);
    if (!n.is_anchored_anchor()) return std::nullopt;
    return n.children[0].lexeme;
  }

  ElementaryTree renamed(std::string name) const {
    ElementaryTree t = *this;
    t.name_ = std::move(name);
    return t;
  }

  std::size_t size() const { return addresses_.size(); }

  friend bool operator==(const ElementaryTree& a, const ElementaryTree& b) {
    return a.name_ == b.name_ && a.kind_ == b.kind_ && a.root_ == b.root_;
  }

 private:
  void reindex() {
    addresses_.clear();
    feet_.clear();
    anchors_.clear();
    sites_.clear();
    for_each_node(root_, [&](const GornAddress& a, const TreeNode& n) {
      addresses_.push_back(a);
      if (n.marker == Marker::foot) feet_.push_back(a);
      if (n.marker == Marker::anchor) anchors_.push_back(a);
      if (n.marker == Marker::substitution) sites_.push_back(a);
    });
  }

  std::string name_;
  TreeKind kind_ = TreeKind::initial;
  TreeNode root_;
  std::vector<GornAddress> addresses_;
  std::vector<GornAddress> feet_;
  std::vector<GornAddress> anchors_;
  std::vector<GornAddress> sites_;
};

inline const TreeNode& node_at(const ElementaryTree& tree, const GornAddress& addr) { return tree.node_at(addr); }

}  // namespace tagforge
