#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tagforge/algebra.hpp"

namespace tagforge {

enum class DerivationOp { root, substitution, adjunction };

inline std::string_view to_string(DerivationOp op) {
  switch (op) {
    case DerivationOp::root: return "root";
    case DerivationOp::substitution: return "substitution";
    case DerivationOp::adjunction: return "adjunction";
  }
  return "?";
}

// One elementary tree in a derivation. `site` is an address in the
// elementary tree of the parent node.
struct DerivationNode {
  std::string tree_name;
  DerivationOp op = DerivationOp::root;
  std::optional<GornAddress> site;
  std::vector<DerivationNode> children;

  std::string label() const { return tree_name + "@" + (site ? site->str() : std::string("root")); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
  std::size_t edge_count() const { return size() - 1; }

  friend bool operator==(const DerivationNode&, const DerivationNode&) = default;
};

namespace detail {
inline std::string site_key(const DerivationNode& n) { return n.site ? n.site->str() : std::string(); }

inline std::vector<const DerivationNode*> sorted_children(const DerivationNode& n) {
  std::vector<const DerivationNode*> out;
  for (const auto& c : n.children) out.push_back(&c);
  std::stable_sort(out.begin(), out.end(), [](const DerivationNode* a, const DerivationNode* b) {
    auto ka = site_key(*a), kb = site_key(*b);
    if (ka != kb) return ka < kb;
    return a->tree_name < b->tree_name;
  });
  return out;
}

inline void render_into(const DerivationNode& n, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += n.label();
  out += '\n';
  for (const auto* c : sorted_children(n)) render_into(*c, depth + 1, out);
}
}  // namespace detail

// Canonical text: one node per line, two spaces per depth, children in site
// string order.
inline std::string render_derivation(const DerivationNode& d) {
  std::string out;
  detail::render_into(d, 0, out);
  return out;
}

inline DerivationNode canonicalized(const DerivationNode& d) {
  DerivationNode out{d.tree_name, d.op, d.site, {}};
  for (const auto* c : detail::sorted_children(d)) out.children.push_back(canonicalized(*c));
  return out;
}

// Reads the canonical rendering back. Operations are inferred from the kind
// of each named tree.
inline DerivationNode parse_derivation_text(std::string_view text, const Grammar& g) {
  struct Line {
    std::size_t depth;
    std::string name;
    std::optional<GornAddress> site;
    std::size_t lineno;
  };
  std::vector<Line> lines;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.find_first_not_of(' ') == std::string_view::npos) continue;
    std::size_t spaces = raw.find_first_not_of(' ');
    if (spaces % 2) throw Error(Errc::syntax_error, "line " + std::to_string(lineno) + ": odd indentation");
    std::string_view body = raw.substr(spaces);
    std::size_t at = body.rfind('@');
    if (at == std::string_view::npos || at == 0)
      throw Error(Errc::syntax_error, "line " + std::to_string(lineno) + ": expected name@site");
    Line l{spaces / 2, std::string(body.substr(0, at)), std::nullopt, lineno};
    std::string_view site = body.substr(at + 1);
    if (site != "root") l.site = GornAddress::parse(site);
    lines.push_back(std::move(l));
  }
  if (lines.empty()) throw Error(Errc::syntax_error, "empty derivation");
  if (lines[0].depth != 0 || lines[0].site) throw Error(Errc::syntax_error, "first line must be name@root at depth 0");

  std::size_t idx = 0;
  auto op_for = [&](const std::string& name) {
    const auto* t = g.find(name);
    if (!t) throw Error(Errc::unknown_tree, name);
    return t->is_auxiliary() ? DerivationOp::adjunction : DerivationOp::substitution;
  };
  std::function<DerivationNode(std::size_t)> build = [&](std::size_t depth) {
    const Line& l = lines[idx++];
    DerivationNode n{l.name, depth == 0 ? DerivationOp::root : op_for(l.name), l.site, {}};
    if (depth > 0 && !l.site) throw Error(Errc::syntax_error, "line " + std::to_string(l.lineno) + ": only the root may be @root");
    while (idx < lines.size() && lines[idx].depth > depth) {
      if (lines[idx].depth != depth + 1)
        throw Error(Errc::syntax_error, "line " + std::to_string(lines[idx].lineno) + ": indentation jumps");
      n.children.push_back(build(depth + 1));
    }
    return n;
  };
  DerivationNode root = build(0);
  if (idx != lines.size()) throw Error(Errc::syntax_error, "more than one root");
  return root;
}

namespace detail {

inline void validate_node(const DerivationNode& d, const ElementaryTree& tree, const Grammar& g, ValidationReport& out) {
  auto add = [&](const std::string& addr, std::string rule) { out.push_back({tree.name(), addr, std::move(rule)}); };

  for (const auto& a : tree.anchor_addresses())
    if (!tree.node_at(a).is_anchored_anchor()) add(a.str(), "anchor without lexical item");

  std::set<GornAddress> subst_filled;
  std::set<GornAddress> adjoined;
  std::set<GornAddress> seen;

  for (const auto& c : d.children) {
    if (!c.site) {
      add("-", "child '" + c.tree_name + "' without site");
      continue;
    }
    const GornAddress& site = *c.site;
    if (!seen.insert(site).second) add(site.str(), "duplicate site");
    const ElementaryTree* ct = g.find(c.tree_name);
    if (!ct) {
      add(site.str(), "unknown tree '" + c.tree_name + "'");
      continue;
    }
    const TreeNode* host = find_node(tree.root(), site);
    if (!host) {
      add(site.str(), "site out of range");
      continue;
    }
    switch (c.op) {
      case DerivationOp::root:
        add(site.str(), "nested root '" + c.tree_name + "'");
        break;
      case DerivationOp::substitution:
        if (!ct->is_initial()) add(site.str(), "substitution of auxiliary tree '" + c.tree_name + "'");
        else if (host->marker != Marker::substitution) add(site.str(), "not a substitution site");
        else if (!(host->label == ct->root().label)) add(site.str(), "label mismatch");
        else subst_filled.insert(site);
        break;
      case DerivationOp::adjunction:
        if (!ct->is_auxiliary()) {
          add(site.str(), "adjunction of initial tree '" + c.tree_name + "'");
        } else if (auto chk = can_adjoin_node(*host, ct->root().label, c.tree_name); !chk) {
          add(site.str(), chk.reason);
        } else {
          adjoined.insert(site);
        }
        break;
    }
    validate_node(c, *ct, g, out);
  }

  for (const auto& s : tree.substitution_sites())
    if (!subst_filled.count(s)) add(s.str(), "unfilled substitution site " + s.str());

  for (const auto& a : tree.addresses()) {
    const TreeNode& n = tree.node_at(a);
    if (n.marker != Marker::substitution && n.effective_constraint().is_obligatory() && !adjoined.count(a))
      add(a.str(), "obligatory adjunction unmet");
  }
}

}  // namespace detail

inline ValidationReport validate_derivation(const DerivationNode& d, const Grammar& g) {
  ValidationReport out;
  const ElementaryTree* t = g.find(d.tree_name);
  if (!t) {
    out.push_back({d.tree_name, "root", "unknown tree '" + d.tree_name + "'"});
    return out;
  }
  if (d.op != DerivationOp::root || d.site) out.push_back({d.tree_name, "root", "derivation root must have op=root"});
  if (!t->is_initial()) out.push_back({d.tree_name, "root", "derivation root is not an initial tree"});
  if (!(t->root().label == Symbol::nt(g.start())))
    out.push_back({d.tree_name, "root", "derivation root is not " + g.start() + "-type"});
  detail::validate_node(d, *t, g, out);
  return out;
}

// Builds the derived tree bottom-up. Within a node, substitutions go first,
// then adjunctions deepest-first, so every recorded site still names the
// node of the elementary tree it was written against.
inline WorkTree replay(const DerivationNode& d, const Grammar& g) {
  const ElementaryTree& t = g.at(d.tree_name);
  WorkTree cur(t);

  std::vector<const DerivationNode*> subs, adjs;
  for (const auto& c : d.children) {
    if (!c.site) throw Error(Errc::invalid_argument, "derivation child without site");
    (c.op == DerivationOp::adjunction ? adjs : subs).push_back(&c);
  }
  std::sort(subs.begin(), subs.end(), [](auto* a, auto* b) { return a->site->str() < b->site->str(); });
  std::sort(adjs.begin(), adjs.end(), [](auto* a, auto* b) {
    if (a->site->depth() != b->site->depth()) return a->site->depth() > b->site->depth();
    return a->site->str() < b->site->str();
  });

  for (const auto* c : subs) cur = substitute(cur, *c->site, replay(*c, g));
  for (const auto* c : adjs) cur = adjoin(cur, *c->site, replay(*c, g));
  cur.provenance = t.name();
  return cur;
}

struct DependencyArg {
  std::string lexeme;
  GornAddress site;
  friend bool operator==(const DependencyArg&, const DependencyArg&) = default;
};

struct DependencyRecord {
  std::string head;
  std::string tree;
  std::vector<DependencyArg> arguments;
  std::vector<DependencyArg> modifiers;

  // head <- arg@site, ... | mod@site, ...
  std::string str() const {
    std::string out = head + " <-";
    for (std::size_t i = 0; i < arguments.size(); ++i)
      out += (i ? ", " : " ") + arguments[i].lexeme + "@" + arguments[i].site.str();
    out += " |";
    for (std::size_t i = 0; i < modifiers.size(); ++i)
      out += (i ? ", " : " ") + modifiers[i].lexeme + "@" + modifiers[i].site.str();
    return out;
  }
  friend bool operator==(const DependencyRecord&, const DependencyRecord&) = default;
};

namespace detail {
inline std::string require_anchor(const Grammar& g, const std::string& name) {
  const ElementaryTree& t = g.at(name);
  auto lex = t.anchor_lexeme();
  if (!lex) throw Error(Errc::missing_anchor, name);
  return *lex;
}

inline void collect_dependencies(const DerivationNode& d, const Grammar& g, std::vector<DependencyRecord>& out) {
  DependencyRecord rec{require_anchor(g, d.tree_name), d.tree_name, {}, {}};
  for (const auto& c : d.children) {
    DependencyArg arg{require_anchor(g, c.tree_name), *c.site};
    (c.op == DerivationOp::adjunction ? rec.modifiers : rec.arguments).push_back(std::move(arg));
  }
  auto by_site = [](const DependencyArg& a, const DependencyArg& b) { return a.site < b.site; };
  std::sort(rec.arguments.begin(), rec.arguments.end(), by_site);
  std::sort(rec.modifiers.begin(), rec.modifiers.end(), by_site);
  out.push_back(std::move(rec));
  for (const auto* c : sorted_children(d)) collect_dependencies(*c, g, out);
}
}  // namespace detail

// One record per derivation node in canonical preorder; substitution
// children are the positional arguments, adjunction children the modifiers.
inline std::vector<DependencyRecord> dependencies(const DerivationNode& d, const Grammar& g) {
  std::vector<DependencyRecord> out;
  detail::collect_dependencies(d, g, out);
  return out;
}

}  // namespace tagforge
