#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tagforge/grammar.hpp"

namespace tagforge {

using Tokens = std::vector<std::string>;

// A tree under construction. `kind` remembers whether it grew out of an
// initial or an auxiliary tree, which decides where it may be composed.
struct WorkTree {
  TreeNode root;
  TreeKind kind = TreeKind::initial;
  std::optional<std::string> provenance;

  WorkTree() = default;
  WorkTree(TreeNode r, TreeKind k, std::optional<std::string> from = std::nullopt)
      : root(std::move(r)), kind(k), provenance(std::move(from)) {}
  explicit WorkTree(const ElementaryTree& t) : root(t.root()), kind(t.kind()), provenance(t.name()) {}

  std::size_t size() const { return root.size(); }
  const TreeNode& node_at(const GornAddress& a) const { return tagforge::node_at(root, a); }

  std::optional<GornAddress> foot() const {
    auto feet = addresses_where(root, [](const TreeNode& n) { return n.marker == Marker::foot; });
    if (feet.size() != 1) return std::nullopt;
    return feet.front();
  }

  friend bool operator==(const WorkTree& a, const WorkTree& b) { return a.root == b.root && a.kind == b.kind; }
};

struct AdjoinCheck {
  bool ok = false;
  std::string reason;
  explicit operator bool() const noexcept { return ok; }
};

// `beta_det[the]` is an instance of `beta_det`.
inline std::string_view base_tree_name(std::string_view name) {
  auto b = name.find('[');
  return b == std::string_view::npos ? name : name.substr(0, b);
}

// Policy check for putting an auxiliary tree named aux_name, rooted in
// aux_root, at host node n. Constraint sets may name the tree or, for
// lexicon instances, the tree it was instantiated from.
inline AdjoinCheck can_adjoin_node(const TreeNode& n, const Symbol& aux_root, std::string_view aux_name) {
  if (n.marker == Marker::substitution) return {false, "substitution site"};
  if (n.label.is_terminal()) return {false, "terminal node"};
  if (!(n.label == aux_root)) return {false, "label mismatch"};
  const AdjConstraint c = n.effective_constraint();
  if (c.admits_none()) return {false, "null adjunction"};
  if (!c.admits(aux_name) && !c.admits(base_tree_name(aux_name)))
    return {false, c.is_obligatory() ? "not in obligatory adjunction set" : "not in selective adjunction set"};
  return {true, {}};
}

inline AdjoinCheck can_adjoin(const WorkTree& host, const GornAddress& addr, const WorkTree& aux) {
  const TreeNode& n = host.node_at(addr);
  if (aux.kind != TreeKind::auxiliary) return {false, "not an auxiliary tree"};
  if (!aux.foot()) return {false, "auxiliary tree without unique foot"};
  return can_adjoin_node(n, aux.root.label, aux.provenance.value_or(""));
}

inline AdjoinCheck can_adjoin(const WorkTree& host, const GornAddress& addr, const ElementaryTree& aux) {
  return can_adjoin(host, addr, WorkTree(aux));
}

// The subtree at addr moves to aux's foot; aux takes its place. Inputs are
// left untouched.
inline WorkTree adjoin(const WorkTree& host, const GornAddress& addr, const WorkTree& aux) {
  if (auto chk = can_adjoin(host, addr, aux); !chk) throw Error(Errc::constraint_violation, chk.reason + " at " + addr.str());
  const GornAddress foot = *aux.foot();
  TreeNode planted = aux.root;
  TreeNode& foot_node = mutable_node_at(planted, foot);
  foot_node = host.node_at(addr);

  WorkTree out = host;
  mutable_node_at(out.root, addr) = std::move(planted);
  return out;
}

inline WorkTree adjoin(const WorkTree& host, const GornAddress& addr, const ElementaryTree& aux) {
  return adjoin(host, addr, WorkTree(aux));
}

inline WorkTree substitute(const WorkTree& host, const GornAddress& addr, const WorkTree& init) {
  const TreeNode& n = host.node_at(addr);
  if (n.marker != Marker::substitution || !n.is_leaf())
    throw Error(Errc::not_a_substitution_site, addr.str());
  if (init.kind != TreeKind::initial)
    throw Error(Errc::auxiliary_tree_rejected, init.provenance.value_or("<unnamed>"));
  if (!(n.label == init.root.label))
    throw Error(Errc::label_mismatch, n.label.text + " vs " + init.root.label.text);
  WorkTree out = host;
  mutable_node_at(out.root, addr) = init.root;
  return out;
}

inline WorkTree substitute(const WorkTree& host, const GornAddress& addr, const ElementaryTree& init) {
  return substitute(host, addr, WorkTree(init));
}

// Where a host node ends up after adjoining at site an auxiliary tree whose
// foot is at aux_foot. Nodes outside the displaced subtree keep their address.
inline GornAddress remap_after_adjoin(const GornAddress& node, const GornAddress& site, const GornAddress& aux_foot) {
  if (!site.is_prefix_of(node)) return node;
  return site.concat(aux_foot).concat(node.suffix_after(site));
}

// Substitution only replaces a leaf, so every surviving host node keeps its
// address.
inline GornAddress remap_after_substitute(const GornAddress& node, const GornAddress&) { return node; }

struct Yield {
  Tokens tokens;
  // Number of tokens left of the foot, when the tree has one.
  std::optional<std::size_t> foot_position;
};

namespace detail {
inline void collect_yield(const TreeNode& n, Yield& y) {
  if (n.marker == Marker::foot) {
    y.foot_position = y.tokens.size();
    return;
  }
  if (n.marker == Marker::lexical) {
    if (n.lexeme) y.tokens.push_back(*n.lexeme);
    return;
  }
  if (n.is_leaf()) {
    if (n.label.is_terminal() && !n.label.is_epsilon() && n.marker != Marker::slot) y.tokens.push_back(n.label.text);
    return;
  }
  for (const auto& c : n.children) collect_yield(c, y);
}
}  // namespace detail

inline Yield tree_yield(const TreeNode& root) {
  Yield y;
  detail::collect_yield(root, y);
  return y;
}

inline Tokens yield_terminals(const TreeNode& root) { return tree_yield(root).tokens; }
inline Tokens yield_terminals(const WorkTree& t) { return yield_terminals(t.root); }
inline Tokens yield_terminals(const ElementaryTree& t) { return yield_terminals(t.root()); }

// (S (NP (Det a) (N man)) ...) style; lexical nodes print as their word.
inline std::string bracketed(const TreeNode& n) {
  if (n.marker == Marker::lexical) return n.lexeme.value_or("");
  if (n.is_leaf()) {
    if (n.label.is_epsilon()) return "''";
    if (n.marker == Marker::substitution) return n.label.text + "!";
    if (n.marker == Marker::foot) return n.label.text + "*";
    if (n.marker == Marker::slot) return "$" + n.label.text;
    if (n.marker == Marker::anchor) return n.label.text + "@";
    return n.label.text;
  }
  std::string out = "(" + n.label.text;
  for (const auto& c : n.children) out += " " + bracketed(c);
  return out + ")";
}

inline std::string bracketed(const WorkTree& t) { return bracketed(t.root); }

inline std::string join_tokens(const Tokens& toks, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += sep;
    out += toks[i];
  }
  return out;
}

inline Tokens split_tokens(std::string_view text) {
  Tokens out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace tagforge
