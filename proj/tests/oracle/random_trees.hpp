#pragma once

// Seeded random elementary trees for property tests.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "tagforge/tagforge.hpp"

namespace oracle {

using tagforge::AdjConstraint;
using tagforge::ElementaryTree;
using tagforge::GornAddress;
using tagforge::Marker;
using tagforge::TreeKind;
using tagforge::TreeNode;

class TreeGen {
 public:
  explicit TreeGen(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  std::string label() { return pick(labels_); }
  std::string word() { return pick(words_); }
  std::string aux_name() { return pick(aux_names_); }
  const std::vector<std::string>& aux_names() const { return aux_names_; }

  AdjConstraint constraint() {
    switch (uniform(0, 5)) {
      case 0: return AdjConstraint::na();
      case 1: return AdjConstraint::oa();
      case 2: return AdjConstraint::oa(subset());
      case 3: return AdjConstraint::sa(subset());
      default: return AdjConstraint::any();
    }
  }

  // Interior nodes get 1-3 children; leaves are words, substitution sites
  // or (rarely) the empty word.
  TreeNode subtree(int depth) {
    if (depth <= 0 || coin(0.3)) return leaf();
    TreeNode n = TreeNode::nonterminal(label());
    if (coin(0.4)) n.constraint = constraint();
    const int kids = uniform(1, 3);
    for (int i = 0; i < kids; ++i) n.children.push_back(subtree(depth - 1));
    return n;
  }

  TreeNode leaf() {
    const int r = uniform(0, 9);
    if (r < 6) return TreeNode::terminal(word());
    if (r < 9) return TreeNode::nonterminal(label(), Marker::substitution);
    return TreeNode::epsilon();
  }

  ElementaryTree initial(const std::string& name, int depth = 3) {
    TreeNode root = TreeNode::nonterminal(label());
    const int kids = uniform(1, 3);
    for (int i = 0; i < kids; ++i) root.children.push_back(subtree(depth - 1));
    return ElementaryTree(name, TreeKind::initial, std::move(root));
  }

  // An initial tree rooted in `root_label`.
  ElementaryTree initial_rooted(const std::string& name, const std::string& root_label, int depth = 3) {
    TreeNode root = TreeNode::nonterminal(root_label);
    const int kids = uniform(1, 3);
    for (int i = 0; i < kids; ++i) root.children.push_back(subtree(depth - 1));
    return ElementaryTree(name, TreeKind::initial, std::move(root));
  }

  // A spine from root to foot with random material on either side.
  ElementaryTree auxiliary(const std::string& name, const std::string& root_label, int depth = 3) {
    TreeNode root = TreeNode::nonterminal(root_label);
    TreeNode* cur = &root;
    const int spine = uniform(1, depth);
    for (int d = 0; d < spine; ++d) {
      const int left = uniform(0, 1), right = uniform(0, 1);
      for (int i = 0; i < left; ++i) cur->children.push_back(subtree(1));
      const bool last = d + 1 == spine;
      cur->children.push_back(last ? TreeNode::nonterminal(root_label, Marker::foot) : TreeNode::nonterminal(label()));
      const std::size_t spine_idx = cur->children.size() - 1;
      for (int i = 0; i < right; ++i) cur->children.push_back(subtree(1));
      cur = &cur->children[spine_idx];
    }
    return ElementaryTree(name, TreeKind::auxiliary, std::move(root));
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::set<std::string> subset() {
    std::set<std::string> s;
    for (const auto& n : aux_names_)
      if (coin()) s.insert(n);
    return s;
  }

  std::mt19937 rng_;
  std::vector<std::string> labels_{"A", "B", "C"};
  std::vector<std::string> words_{"x", "y", "z"};
  std::vector<std::string> aux_names_{"beta1", "beta2", "beta3"};
};

// Yield of `host` with the subtree at `site` cut out: the tokens to its left
// and to its right.
inline std::pair<tagforge::Tokens, tagforge::Tokens> yield_around(const TreeNode& host, const GornAddress& site) {
  TreeNode copy = host;
  tagforge::mutable_node_at(copy, site) = TreeNode::nonterminal("HOLE", Marker::foot);
  auto y = tagforge::tree_yield(copy);
  const auto split = static_cast<std::ptrdiff_t>(*y.foot_position);
  return {tagforge::Tokens(y.tokens.begin(), y.tokens.begin() + split),
          tagforge::Tokens(y.tokens.begin() + split, y.tokens.end())};
}

// Independent statement of the adjunction policy: the reason a composition
// must be refused, or empty when it is allowed.
inline std::string expected_refusal(const TreeNode& n, const std::string& aux_root, const std::string& aux_name) {
  if (n.marker == Marker::substitution) return "substitution site";
  if (n.label.is_terminal()) return "terminal node";
  if (n.label.text != aux_root) return "label mismatch";
  if (!n.constraint) return "";
  const AdjConstraint& c = *n.constraint;
  if (c.kind() == AdjConstraint::Kind::null) return "null adjunction";
  if (c.kind() == AdjConstraint::Kind::selective) {
    if (!c.names()) return "";
    if (c.names()->empty()) return "null adjunction";
    return c.names()->count(aux_name) ? "" : "not in selective adjunction set";
  }
  if (c.names() && !c.names()->empty() && !c.names()->count(aux_name)) return "not in obligatory adjunction set";
  return "";
}

}  // namespace oracle
