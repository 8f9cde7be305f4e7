#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tagforge/tree.hpp"

namespace tagforge {

enum class HeadDirection { head_initial, head_final };
enum class AdpositionOrder { pre, post };

inline std::string_view to_string(HeadDirection d) { return d == HeadDirection::head_initial ? "head-initial" : "head-final"; }
inline std::string_view to_string(AdpositionOrder o) { return o == AdpositionOrder::pre ? "pre" : "post"; }

inline std::optional<HeadDirection> parse_head_direction(std::string_view s) {
  if (s == "head-initial") return HeadDirection::head_initial;
  if (s == "head-final") return HeadDirection::head_final;
  return std::nullopt;
}
inline std::optional<AdpositionOrder> parse_adposition_order(std::string_view s) {
  if (s == "pre") return AdpositionOrder::pre;
  if (s == "post") return AdpositionOrder::post;
  return std::nullopt;
}

// A verb-class tree family as shipped in grammar files: skeleton trees with
// an unfilled anchor and optional $adposition slot, written in one head
// direction.
struct TreeFamily {
  std::string name;
  HeadDirection direction = HeadDirection::head_initial;
  std::optional<AdpositionOrder> adposition_order;
  std::vector<ElementaryTree> trees;

  bool needs_adposition() const {
    for (const auto& t : trees) {
      bool found = false;
      for_each_node(t.root(), [&](const GornAddress&, const TreeNode& n) { found |= n.marker == Marker::slot; });
      if (found) return true;
    }
    return false;
  }

  friend bool operator==(const TreeFamily&, const TreeFamily&) = default;
};

struct Violation {
  std::string tree;
  std::string address;
  std::string rule;

  std::string str() const { return tree + ":" + address + ": " + rule; }
  friend bool operator==(const Violation&, const Violation&) = default;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

inline std::ostream& operator<<(std::ostream& os, const Violation& v) { return os << v.str(); }

// The quintuple (terminals, nonterminals, initial trees, auxiliary trees,
// start). The two vocabularies are read off the trees and family skeletons.
class Grammar {
 public:
  Grammar() = default;
  Grammar(std::string start, std::vector<ElementaryTree> trees, std::optional<bool> lexicalized = std::nullopt,
          std::vector<TreeFamily> families = {})
      : start_(std::move(start)),
        trees_(std::move(trees)),
        declared_lexicalized_(lexicalized),
        families_(std::move(families)) {
    for (std::size_t i = 0; i < trees_.size(); ++i) by_name_.emplace(trees_[i].name(), i);
    auto collect = [&](const ElementaryTree& t) {
      for_each_node(t.root(), [&](const GornAddress&, const TreeNode& n) {
        if (n.label.is_nonterminal()) {
          nonterminals_.insert(n.label.text);
        } else if (!n.label.is_epsilon() && n.marker != Marker::slot) {
          terminals_.insert(n.label.text);
        }
      });
    };
    for (const auto& t : trees_) collect(t);
    for (const auto& f : families_)
      for (const auto& t : f.trees) collect(t);
  }

  const std::string& start() const noexcept { return start_; }
  const std::vector<ElementaryTree>& trees() const noexcept { return trees_; }
  const std::vector<TreeFamily>& families() const noexcept { return families_; }
  const std::set<std::string>& terminals() const noexcept { return terminals_; }
  const std::set<std::string>& nonterminals() const noexcept { return nonterminals_; }
  const std::optional<bool>& declared_lexicalized() const noexcept { return declared_lexicalized_; }

  // Declared flag if present, otherwise "every tree has exactly one anchor".
  bool lexicalized() const {
    if (declared_lexicalized_) return *declared_lexicalized_;
    if (trees_.empty()) return false;
    for (const auto& t : trees_)
      if (t.anchor_addresses().size() != 1) return false;
    return true;
  }

  const ElementaryTree* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &trees_[it->second];
  }
  const ElementaryTree& at(std::string_view name) const {
    const auto* t = find(name);
    if (!t) throw Error(Errc::unknown_tree, std::string(name));
    return *t;
  }

  const TreeFamily* find_family(std::string_view name) const {
    for (const auto& f : families_)
      if (f.name == name) return &f;
    return nullptr;
  }

  std::vector<const ElementaryTree*> initial_trees() const {
    std::vector<const ElementaryTree*> out;
    for (const auto& t : trees_)
      if (t.is_initial()) out.push_back(&t);
    return out;
  }
  std::vector<const ElementaryTree*> auxiliary_trees() const {
    std::vector<const ElementaryTree*> out;
    for (const auto& t : trees_)
      if (t.is_auxiliary()) out.push_back(&t);
    return out;
  }

 private:
  std::string start_;
  std::vector<ElementaryTree> trees_;
  std::optional<bool> declared_lexicalized_;
  std::vector<TreeFamily> families_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::set<std::string> terminals_;
  std::set<std::string> nonterminals_;
};

namespace detail {

inline bool has_whitespace(std::string_view s) {
  for (unsigned char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return true;
  return false;
}

inline std::size_t terminal_yield_size(const TreeNode& n) {
  if (n.marker == Marker::lexical) return 1;
  if (n.label.is_terminal()) return n.label.is_epsilon() ? 0 : 1;
  std::size_t k = 0;
  for (const auto& c : n.children) k += terminal_yield_size(c);
  return k;
}

// Structural checks for one tree; shared by grammar validation and the
// family templates.
inline void validate_tree(const ElementaryTree& tree, const std::set<std::string>& aux_names, bool check_names,
                          ValidationReport& out) {
  auto add = [&](const GornAddress& a, std::string rule) { out.push_back({tree.name(), a.str(), std::move(rule)}); };

  for_each_node(tree.root(), [&](const GornAddress& a, const TreeNode& n) {
    const bool leaf = n.is_leaf();
    if (n.label.is_nonterminal()) {
      if (n.label.text.empty()) add(a, "empty label");
      else if (has_whitespace(n.label.text)) add(a, "whitespace in label");
    } else if (!n.label.is_epsilon() && has_whitespace(n.label.text)) {
      add(a, "whitespace in terminal");
    }

    if (n.label.is_terminal() && !leaf) add(a, "interior node labelled by terminal");

    switch (n.marker) {
      case Marker::substitution:
        if (!leaf) add(a, "substitution marker on interior node");
        if (n.label.is_terminal()) add(a, "substitution marker on terminal");
        if (n.constraint && !n.constraint->is_null()) add(a, "constraint on substitution node");
        break;
      case Marker::foot:
        if (!leaf) add(a, "foot marker on interior node");
        if (n.label.is_terminal()) add(a, "foot marker on terminal");
        break;
      case Marker::anchor:
        if (n.label.is_terminal()) add(a, "anchor labelled by terminal");
        if (n.children.size() > 1) add(a, "anchor with more than one child");
        if (n.children.size() == 1 && n.children[0].marker != Marker::lexical)
          add(a, "anchor child is not a lexical node");
        break;
      case Marker::lexical:
        if (!leaf) add(a, "lexical node with children");
        if (!n.lexeme || n.lexeme->empty()) add(a, "lexical node without lexeme");
        break;
      case Marker::none:
      case Marker::slot:
        break;
    }

    if (n.marker == Marker::none && leaf && n.label.is_nonterminal()) {
      add(a, "frontier nonterminal not marked for substitution");
    }

    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (n.children[i].marker == Marker::lexical && n.marker != Marker::anchor)
        add(a.child(static_cast<unsigned>(i + 1)), "lexical node outside anchor");
    }

    if (check_names && n.constraint && n.constraint->names()) {
      for (const auto& nm : *n.constraint->names())
        if (!aux_names.count(nm)) add(a, "constraint names unknown auxiliary tree '" + nm + "'");
    }
  });

  const auto& feet = tree.foot_addresses();
  if (tree.is_initial()) {
    for (const auto& f : feet) add(f, "foot node in initial tree");
  } else {
    if (feet.empty()) add(GornAddress::root(), "auxiliary tree without foot");
    if (feet.size() > 1)
      for (std::size_t i = 1; i < feet.size(); ++i) add(feet[i], "auxiliary tree with more than one foot");
    if (feet.size() == 1 && !(tree.node_at(feet[0]).label == tree.root().label))
      add(feet[0], "foot/root label mismatch");
    if (tree.root().label.is_terminal()) add(GornAddress::root(), "auxiliary root labelled by terminal");
  }
}

}  // namespace detail

// Checks every structural invariant of the grammar. Violations are data;
// this never throws and never modifies g.
inline ValidationReport validate_grammar(const Grammar& g) {
  ValidationReport out;
  std::set<std::string> aux_names;
  for (const auto* t : g.auxiliary_trees()) aux_names.insert(t->name());

  if (g.start().empty() || !g.nonterminals().count(g.start()))
    out.push_back({"<grammar>", "-", "start symbol '" + g.start() + "' is not a nonterminal of the grammar"});

  for (const auto& s : g.terminals())
    if (g.nonterminals().count(s)) out.push_back({"<grammar>", "-", "symbol '" + s + "' is both terminal and nonterminal"});

  std::set<std::string> seen;
  for (const auto& t : g.trees()) {
    if (t.name().empty()) out.push_back({"<grammar>", "-", "tree without name"});
    if (!seen.insert(t.name()).second) out.push_back({t.name(), "0", "duplicate tree name"});
  }

  const bool lexicalized = g.lexicalized();
  for (const auto& t : g.trees()) {
    detail::validate_tree(t, aux_names, true, out);
    for_each_node(t.root(), [&](const GornAddress& a, const TreeNode& n) {
      if (n.marker == Marker::slot) out.push_back({t.name(), a.str(), "parameter slot outside tree family"});
    });
    if (lexicalized) {
      if (t.anchor_addresses().size() != 1)
        out.push_back({t.name(), "0", "postulate 5: tree must carry exactly one anchor"});
      if (t.is_auxiliary() && detail::terminal_yield_size(t.root()) == 0 && !t.anchor())
        out.push_back({t.name(), "0", "auxiliary tree with empty terminal yield"});
    }
  }

  for (const auto& f : g.families()) {
    for (const auto& t : f.trees) {
      detail::validate_tree(t, aux_names, true, out);
      if (t.anchor_addresses().size() != 1)
        out.push_back({f.name + "/" + t.name(), "0", "postulate 5: tree must carry exactly one anchor"});
    }
  }
  return out;
}

}  // namespace tagforge
