#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagforge/algebra.hpp"

namespace tagforge {

struct LexEntry {
  std::string target;  // tree or family name
  std::optional<std::string> adposition;
  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

// Word -> elementary structures the word can anchor.
class Lexicon {
 public:
  void add(const std::string& word, LexEntry e) {
    auto& v = entries_[word];
    if (std::find(v.begin(), v.end(), e) == v.end()) v.push_back(std::move(e));
  }

  const std::vector<LexEntry>* find(const std::string& word) const {
    auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, std::vector<LexEntry>>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<std::string, std::vector<LexEntry>> entries_;
};

// Puts `word` under the tree's single anchor as a lexical node.
inline ElementaryTree anchor_attach(const ElementaryTree& tree, const std::string& word) {
  const auto& anchors = tree.anchor_addresses();
  if (anchors.empty()) throw Error(Errc::no_anchor, tree.name());
  if (anchors.size() > 1) throw Error(Errc::no_anchor, tree.name() + " has " + std::to_string(anchors.size()) + " anchors");
  if (!tree.node_at(anchors[0]).children.empty()) throw Error(Errc::already_anchored, tree.name());
  TreeNode root = tree.root();
  mutable_node_at(root, anchors[0]).children.push_back(TreeNode::lexical(word));
  return ElementaryTree(tree.name(), tree.kind(), std::move(root));
}

namespace detail {

inline bool has_slot_child(const TreeNode& n) {
  for (const auto& c : n.children)
    if (c.marker == Marker::slot) return true;
  return false;
}

// The head child of a VP is the anchor; of a PP, the preterminal over the
// adposition slot. Each is moved to the front or back of its parent.
inline void orient_heads(TreeNode& n, HeadDirection verb_dir, AdpositionOrder adp_order) {
  for (auto& c : n.children) orient_heads(c, verb_dir, adp_order);
  auto move_head = [&](auto is_head, bool to_front) {
    auto it = std::find_if(n.children.begin(), n.children.end(), is_head);
    if (it == n.children.end()) return;
    TreeNode head = std::move(*it);
    n.children.erase(it);
    if (to_front) n.children.insert(n.children.begin(), std::move(head));
    else n.children.push_back(std::move(head));
  };
  move_head([](const TreeNode& c) { return c.marker == Marker::anchor; }, verb_dir == HeadDirection::head_initial);
  move_head([](const TreeNode& c) { return has_slot_child(c); }, adp_order == AdpositionOrder::pre);
}

inline void fill_slots(TreeNode& n, const std::optional<std::string>& adposition, const std::string& family) {
  for (auto& c : n.children) fill_slots(c, adposition, family);
  if (n.marker == Marker::slot) {
    if (n.label.text != "adposition") throw Error(Errc::invalid_argument, "unknown slot $" + n.label.text + " in " + family);
    if (!adposition) throw Error(Errc::missing_adposition, family);
    n = TreeNode::terminal(*adposition);
  }
}

inline AdpositionOrder default_order(HeadDirection d) {
  return d == HeadDirection::head_initial ? AdpositionOrder::pre : AdpositionOrder::post;
}

}  // namespace detail

// Anchored trees of `family` for `verb`, oriented for the requested head
// direction. Instance names are `<tree>[verb]` or `<tree>[verb/adposition]`.
inline std::vector<ElementaryTree> instantiate_family(const TreeFamily& family, const std::string& verb,
                                                      const std::optional<std::string>& adposition,
                                                      std::optional<HeadDirection> direction = std::nullopt,
                                                      std::optional<AdpositionOrder> adp_order = std::nullopt) {
  const bool uses_adposition = family.needs_adposition();
  if (uses_adposition && !adposition) throw Error(Errc::missing_adposition, family.name);
  const HeadDirection dir = direction.value_or(family.direction);
  const AdpositionOrder order =
      adp_order.value_or(direction ? detail::default_order(dir) : family.adposition_order.value_or(detail::default_order(dir)));

  std::vector<ElementaryTree> out;
  for (const auto& skel : family.trees) {
    TreeNode root = skel.root();
    detail::orient_heads(root, dir, order);
    detail::fill_slots(root, adposition, family.name);
    std::string name = skel.name() + "[" + verb + (uses_adposition ? "/" + *adposition : std::string()) + "]";
    out.push_back(anchor_attach(ElementaryTree(name, skel.kind(), std::move(root)), verb));
  }
  return out;
}

// Every structure `word` anchors, fully anchored. Unknown words give an
// empty set.
inline std::vector<ElementaryTree> select_trees(const Lexicon& lex, const std::string& word, const Grammar& g) {
  std::vector<ElementaryTree> out;
  const auto* entries = lex.find(word);
  if (!entries) return out;
  std::set<std::string> names;
  auto push = [&](ElementaryTree t) {
    if (names.insert(t.name()).second) out.push_back(std::move(t));
  };
  for (const auto& e : *entries) {
    if (const auto* t = g.find(e.target)) {
      if (t->anchor_addresses().size() != 1) continue;
      const TreeNode& a = t->node_at(t->anchor_addresses()[0]);
      if (a.is_anchored_anchor()) {
        if (t->anchor_lexeme() == word) push(*t);
      } else if (a.children.empty()) {
        push(anchor_attach(*t, word).renamed(t->name() + "[" + word + "]"));
      }
    } else if (const auto* f = g.find_family(e.target)) {
      if (f->needs_adposition() && !e.adposition) continue;
      for (auto& t : instantiate_family(*f, word, f->needs_adposition() ? e.adposition : std::nullopt)) push(std::move(t));
    }
  }
  return out;
}

// The grammar actually handed to the parser for one sentence: trees selected
// by the sentence's words plus every anchor-free tree. Without a lexicon,
// all trees that do not wait for a word.
inline Grammar working_grammar(const Grammar& g, const Lexicon* lex, const Tokens& tokens) {
  std::vector<ElementaryTree> trees;
  std::set<std::string> names;
  auto push = [&](const ElementaryTree& t) {
    if (names.insert(t.name()).second) trees.push_back(t);
  };
  auto waits_for_word = [](const ElementaryTree& t) {
    for (const auto& a : t.anchor_addresses())
      if (!t.node_at(a).is_anchored_anchor()) return true;
    return false;
  };
  if (!lex) {
    for (const auto& t : g.trees())
      if (!waits_for_word(t)) push(t);
  } else {
    for (const auto& t : g.trees())
      if (t.anchor_addresses().empty()) push(t);
    std::set<std::string> words(tokens.begin(), tokens.end());
    for (const auto& w : words)
      for (const auto& t : select_trees(*lex, w, g)) push(t);
  }
  return Grammar(g.start(), std::move(trees), g.declared_lexicalized());
}

// The anchor labels (POS classes) the lexicon can supply.
inline std::set<std::string> anchor_labels(const Lexicon& lex, const Grammar& g) {
  std::set<std::string> out;
  auto take = [&](const ElementaryTree& t) {
    for (const auto& a : t.anchor_addresses()) out.insert(t.node_at(a).label.text);
  };
  for (const auto& [word, entries] : lex.entries()) {
    for (const auto& e : entries) {
      if (const auto* t = g.find(e.target)) take(*t);
      else if (const auto* f = g.find_family(e.target))
        for (const auto& t : f->trees) take(t);
    }
  }
  for (const auto& t : g.trees())
    if (t.anchor_lexeme()) take(t);
  return out;
}

namespace detail {
inline void check_tree_postulates(const ElementaryTree& t, const std::string& shown, const std::set<std::string>* pos,
                                  ValidationReport& out) {
  const auto& anchors = t.anchor_addresses();
  if (anchors.size() != 1)
    out.push_back({shown, "0", "postulate 5: exactly one anchor per tree (found " + std::to_string(anchors.size()) + ")"});
  for (const auto& a : anchors) {
    const TreeNode& n = t.node_at(a);
    if (!n.label.is_nonterminal()) out.push_back({shown, a.str(), "postulate 2: anchor must be labelled by a nonterminal"});
    if (pos && !pos->count(n.label.text))
      out.push_back({shown, a.str(), "postulate 3: anchor label '" + n.label.text + "' is not a POS class of the lexicon"});
    if (n.children.size() > 1 || (n.children.size() == 1 && n.children[0].marker != Marker::lexical))
      out.push_back({shown, a.str(), "postulate 6: anchor may only dominate its lexical node"});
  }
  for_each_node(t.root(), [&](const GornAddress& a, const TreeNode& n) {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const TreeNode& c = n.children[i];
      if (c.marker == Marker::lexical && n.marker != Marker::anchor)
        out.push_back({shown, a.child(static_cast<unsigned>(i + 1)).str(), "postulate 6: lexical node outside anchor"});
    }
    if (n.marker == Marker::lexical && (!n.is_leaf() || !n.lexeme))
      out.push_back({shown, a.str(), "postulate 7: lexical node must be a leaf carrying its word"});
  });
}
}  // namespace detail

// Lexicalization postulates per tree (and per family skeleton). When a
// lexicon is supplied, anchor labels must be POS classes it can fill.
inline ValidationReport check_postulates(const Grammar& g, const Lexicon* lex = nullptr) {
  ValidationReport out;
  std::optional<std::set<std::string>> pos;
  if (lex) pos = anchor_labels(*lex, g);
  for (const auto& t : g.trees()) detail::check_tree_postulates(t, t.name(), pos ? &*pos : nullptr, out);
  for (const auto& f : g.families())
    for (const auto& t : f.trees) detail::check_tree_postulates(t, f.name + "/" + t.name(), pos ? &*pos : nullptr, out);
  return out;
}

// Every entry must reference something the grammar defines.
inline ValidationReport check_lexicon(const Lexicon& lex, const Grammar& g) {
  ValidationReport out;
  for (const auto& [word, entries] : lex.entries()) {
    for (const auto& e : entries) {
      if (const auto* t = g.find(e.target)) {
        if (t->anchor_addresses().size() != 1) {
          out.push_back({"<lexicon>", word, "tree '" + e.target + "' has no single anchor"});
        } else if (auto lexeme = t->anchor_lexeme(); lexeme && *lexeme != word) {
          out.push_back({"<lexicon>", word, "tree '" + e.target + "' is anchored by '" + *lexeme + "'"});
        }
      } else if (const auto* f = g.find_family(e.target)) {
        if (f->needs_adposition() && !e.adposition)
          out.push_back({"<lexicon>", word, "family '" + e.target + "' needs an adposition"});
      } else {
        out.push_back({"<lexicon>", word, "unknown tree or family '" + e.target + "'"});
      }
    }
  }
  return out;
}

}  // namespace tagforge
