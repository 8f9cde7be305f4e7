#pragma once

// Context-free grammars, their conversion to tree-adjoining grammars, and a
// bounded-length comparison of string languages.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagforge/io.hpp"

namespace tagforge {

struct Production {
  std::string lhs;
  std::vector<Symbol> rhs;
  friend bool operator==(const Production&, const Production&) = default;
};

class ContextFreeGrammar {
 public:
  ContextFreeGrammar() = default;
  ContextFreeGrammar(std::string start, std::vector<Production> productions)
      : start_(std::move(start)), productions_(std::move(productions)) {
    nonterminals_.insert(start_);
    for (const auto& p : productions_) {
      nonterminals_.insert(p.lhs);
      for (const auto& s : p.rhs) (s.is_nonterminal() ? nonterminals_ : terminals_).insert(s.text);
    }
  }

  const std::string& start() const noexcept { return start_; }
  const std::vector<Production>& productions() const noexcept { return productions_; }
  const std::set<std::string>& terminals() const noexcept { return terminals_; }
  const std::set<std::string>& nonterminals() const noexcept { return nonterminals_; }

  std::vector<const Production*> productions_of(const std::string& lhs) const {
    std::vector<const Production*> out;
    for (const auto& p : productions_)
      if (p.lhs == lhs) out.push_back(&p);
    return out;
  }

 private:
  std::string start_;
  std::vector<Production> productions_;
  std::set<std::string> terminals_;
  std::set<std::string> nonterminals_;
};

// One production per line, `LHS -> sym sym ...`, terminals in single quotes,
// `|` separating alternatives, `#` to end of line. The first left-hand side
// is the start symbol. An empty right-hand side (or '') is an ε-production.
inline ContextFreeGrammar parse_cfg_text(std::string_view text) {
  std::vector<Production> prods;
  std::string start;
  std::size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    auto fail = [&](std::size_t col, const std::string& msg) { detail::syntax_error(lineno, col, msg); };

    std::vector<std::pair<std::string, std::size_t>> toks;  // text, column
    std::vector<bool> quoted;
    for (std::size_t i = 0; i < line.size();) {
      char c = line[i];
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '\'') {
        auto close = line.find('\'', i + 1);
        if (close == std::string::npos) fail(i + 1, "unterminated terminal");
        toks.emplace_back(line.substr(i + 1, close - i - 1), i + 1);
        quoted.push_back(true);
        i = close + 1;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '\'' && line[j] != '#') ++j;
      toks.emplace_back(line.substr(i, j - i), i + 1);
      quoted.push_back(false);
      i = j;
    }
    if (toks.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (toks.size() < 2 || quoted[0] || quoted[1] || toks[1].first != "->") fail(toks[0].second, "expected 'LHS -> ...'");
    const std::string lhs = toks[0].first;
    if (start.empty()) start = lhs;
    Production cur{lhs, {}};
    for (std::size_t t = 2; t < toks.size(); ++t) {
      const auto& [word, col] = toks[t];
      if (!quoted[t] && word == "|") {
        prods.push_back(std::move(cur));
        cur = Production{lhs, {}};
      } else if (quoted[t]) {
        if (!word.empty()) cur.rhs.push_back(Symbol::t(word));
      } else {
        if (word == "->") fail(col, "unexpected '->'");
        cur.rhs.push_back(Symbol::nt(word));
      }
    }
    prods.push_back(std::move(cur));
    if (nl == text.size()) break;
  }
  if (prods.empty()) throw Error(Errc::syntax_error, "no productions");
  return ContextFreeGrammar(start, std::move(prods));
}

inline ContextFreeGrammar load_cfg(const std::string& name) { return parse_cfg_text(read_file(resolve_data_path(name))); }

// Checks the conversion's preconditions: no ε-productions and no cycle of
// unit productions.
inline void check_cfg_preconditions(const ContextFreeGrammar& cfg) {
  for (const auto& p : cfg.productions())
    if (p.rhs.empty()) throw Error(Errc::empty_string_derivable, p.lhs + " -> ''");

  std::map<std::string, std::set<std::string>> unit;
  for (const auto& p : cfg.productions())
    if (p.rhs.size() == 1 && p.rhs[0].is_nonterminal()) unit[p.lhs].insert(p.rhs[0].text);
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::function<void(const std::string&, std::vector<std::string>&)> visit = [&](const std::string& a,
                                                                                 std::vector<std::string>& path) {
    state[a] = 1;
    path.push_back(a);
    for (const auto& b : unit[a]) {
      if (state[b] == 1) {
        std::string cycle;
        auto it = std::find(path.begin(), path.end(), b);
        for (; it != path.end(); ++it) cycle += *it + " -> ";
        throw Error(Errc::unit_cycle_detected, cycle + b);
      }
      if (state[b] == 0) visit(b, path);
    }
    path.pop_back();
    state[a] = 2;
  };
  for (const auto& a : cfg.nonterminals()) {
    std::vector<std::string> path;
    if (state[a] == 0) visit(a, path);
  }
}

namespace detail {

// Derivation trees and one-foot contexts in which no root-to-leaf path
// repeats a nonterminal. Both sets are finite.
class RepeatFree {
 public:
  explicit RepeatFree(const ContextFreeGrammar& cfg) : cfg_(cfg) {}

  // Trees rooted at `a` whose paths avoid `banned` and repeat nothing.
  const std::vector<TreeNode>& trees(const std::string& a, const std::set<std::string>& banned) {
    auto key = std::make_pair(a, banned);
    if (auto it = trees_memo_.find(key); it != trees_memo_.end()) return it->second;
    std::vector<TreeNode> out;
    if (!banned.count(a)) {
      std::set<std::string> below = banned;
      below.insert(a);
      for (const auto* p : cfg_.productions_of(a)) {
        std::vector<std::vector<TreeNode>> options;
        bool possible = true;
        for (const auto& s : p->rhs) {
          if (s.is_terminal()) {
            options.push_back({TreeNode::terminal(s.text)});
          } else {
            options.push_back(trees(s.text, below));
            if (options.back().empty()) possible = false;
          }
          if (!possible) break;
        }
        if (possible) product(TreeNode::nonterminal(a), options, out);
      }
    }
    return trees_memo_.emplace(key, std::move(out)).first->second;
  }

  // Contexts rooted at `c` with exactly one foot labelled `foot`, which ends
  // the path it lies on; every path (foot included) avoids `banned` and
  // repeats nothing.
  const std::vector<TreeNode>& contexts(const std::string& c, const std::string& foot, const std::set<std::string>& banned) {
    auto key = std::make_tuple(c, foot, banned);
    if (auto it = ctx_memo_.find(key); it != ctx_memo_.end()) return it->second;
    std::vector<TreeNode> out;
    if (!banned.count(c)) {
      if (c == foot) {
        out.push_back(TreeNode::nonterminal(foot, Marker::foot));
      } else {
        std::set<std::string> below = banned;
        below.insert(c);
        for (const auto* p : cfg_.productions_of(c)) spine_options(*p, foot, below, below, out);
      }
    }
    return ctx_memo_.emplace(key, std::move(out)).first->second;
  }

  // For production lhs -> rhs, every choice of spine child leading to `foot`.
  void spine_options(const Production& p, const std::string& foot, const std::set<std::string>& spine_banned,
                     const std::set<std::string>& other_banned, std::vector<TreeNode>& out) {
    for (std::size_t q = 0; q < p.rhs.size(); ++q) {
      if (!p.rhs[q].is_nonterminal()) continue;
      std::vector<std::vector<TreeNode>> options;
      bool possible = true;
      for (std::size_t i = 0; i < p.rhs.size() && possible; ++i) {
        const Symbol& s = p.rhs[i];
        if (i == q) options.push_back(contexts(s.text, foot, spine_banned));
        else if (s.is_terminal()) options.push_back({TreeNode::terminal(s.text)});
        else options.push_back(trees(s.text, other_banned));
        if (options.back().empty()) possible = false;
      }
      if (possible) product(TreeNode::nonterminal(p.lhs), options, out);
    }
  }

 private:
  static void product(const TreeNode& parent, const std::vector<std::vector<TreeNode>>& options, std::vector<TreeNode>& out) {
    std::vector<std::size_t> idx(options.size(), 0);
    for (;;) {
      TreeNode n = parent;
      for (std::size_t i = 0; i < options.size(); ++i) n.children.push_back(options[i][idx[i]]);
      out.push_back(std::move(n));
      std::size_t i = options.size();
      while (i > 0) {
        --i;
        if (++idx[i] < options[i].size()) break;
        idx[i] = 0;
        if (i == 0) return;
      }
      if (options.empty()) return;
    }
  }

  const ContextFreeGrammar& cfg_;
  std::map<std::pair<std::string, std::set<std::string>>, std::vector<TreeNode>> trees_memo_;
  std::map<std::tuple<std::string, std::string, std::set<std::string>>, std::vector<TreeNode>> ctx_memo_;
};

}  // namespace detail

// Initial trees are the repeat-free derivation trees from the start symbol.
// For each nonterminal B, auxiliary trees are the B-rooted contexts with a
// single B foot below which the subtrees under the root are repeat-free.
// Any derivation tree peels apart into these pieces, so the languages agree.
inline Grammar cfg_to_ltag(const ContextFreeGrammar& cfg) {
  check_cfg_preconditions(cfg);
  detail::RepeatFree rf(cfg);
  std::vector<ElementaryTree> trees;
  const auto& initial = rf.trees(cfg.start(), {});
  for (std::size_t i = 0; i < initial.size(); ++i)
    trees.emplace_back("alpha_" + std::to_string(i + 1), TreeKind::initial, initial[i]);
  for (const auto& b : cfg.nonterminals()) {
    std::vector<TreeNode> aux;
    for (const auto* p : cfg.productions_of(b)) rf.spine_options(*p, b, {}, {}, aux);
    for (std::size_t i = 0; i < aux.size(); ++i)
      trees.emplace_back("beta_" + b + "_" + std::to_string(i + 1), TreeKind::auxiliary, aux[i]);
  }
  return Grammar(cfg.start(), std::move(trees), false);
}

// Every string of length 1..k a grammar generates.
using LanguageSource = std::function<std::set<Tokens>(std::size_t k)>;

inline LanguageSource cfg_language(const ContextFreeGrammar& cfg) {
  return [cfg](std::size_t k) {
    // by_len[A][n]: strings of length n derived from A. Nullable symbols
    // are not supported; ε-productions contribute nothing.
    std::map<std::string, std::vector<std::set<Tokens>>> by_len;
    for (const auto& a : cfg.nonterminals()) by_len[a].assign(k + 1, {});
    for (std::size_t n = 1; n <= k; ++n) {
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : cfg.productions()) {
          if (p.rhs.empty() || p.rhs.size() > n) continue;
          std::vector<Tokens> partial(1);
          for (std::size_t i = 0; i < p.rhs.size(); ++i) {
            const std::size_t left = p.rhs.size() - i - 1;
            std::vector<Tokens> next;
            for (const auto& pre : partial) {
              const std::size_t room = n - pre.size() - left;
              if (p.rhs[i].is_terminal()) {
                if (room >= 1) {
                  Tokens t = pre;
                  t.push_back(p.rhs[i].text);
                  next.push_back(std::move(t));
                }
                continue;
              }
              const auto& sets = by_len[p.rhs[i].text];
              const std::size_t lo = left == 0 ? room : 1;
              for (std::size_t m = lo; m <= room; ++m)
                for (const auto& s : sets[m]) {
                  Tokens t = pre;
                  t.insert(t.end(), s.begin(), s.end());
                  next.push_back(std::move(t));
                }
            }
            partial = std::move(next);
          }
          for (auto& s : partial)
            if (s.size() == n && by_len[p.lhs][n].insert(std::move(s)).second) changed = true;
        }
      }
    }
    std::set<Tokens> out;
    for (std::size_t n = 1; n <= k; ++n) out.insert(by_len[cfg.start()][n].begin(), by_len[cfg.start()][n].end());
    return out;
  };
}

namespace detail {

// Least fixpoint over node languages, bounded by length k. Nodes that
// dominate the foot carry pairs (left, right) around it.
class TagLanguage {
 public:
  using Pair = std::pair<Tokens, Tokens>;

  TagLanguage(const Grammar& g, std::size_t k) : g_(g), k_(k) {}

  std::set<Tokens> run() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& t : g_.trees()) {
        if (t.is_initial()) {
          auto s = strings(t.root(), true);
          auto& dst = initial_[t.root().label.text];
          for (auto& x : s) changed |= dst.insert(std::move(x)).second;
        } else {
          auto p = pairs(t.root(), true);
          auto& dst = aux_[t.name()];
          for (auto& x : p) changed |= dst.insert(std::move(x)).second;
        }
      }
    }
    std::set<Tokens> out;
    for (const auto& s : initial_[g_.start()])
      if (!s.empty()) out.insert(s);
    return out;
  }

 private:
  static Tokens cat(const Tokens& a, const Tokens& b) {
    Tokens t = a;
    t.insert(t.end(), b.begin(), b.end());
    return t;
  }

  static bool dominates_foot(const TreeNode& n) {
    if (n.marker == Marker::foot) return true;
    for (const auto& c : n.children)
      if (dominates_foot(c)) return true;
    return false;
  }

  std::vector<const std::set<Pair>*> admissible_aux(const TreeNode& n) {
    std::vector<const std::set<Pair>*> out;
    if (n.marker == Marker::substitution || n.marker == Marker::lexical || !n.label.is_nonterminal()) return out;
    for (const auto* a : g_.auxiliary_trees())
      if (can_adjoin_node(n, a->root().label, a->name())) out.push_back(&aux_[a->name()]);
    return out;
  }

  bool obligatory(const TreeNode& n) const {
    return n.marker != Marker::substitution && n.effective_constraint().is_obligatory();
  }

  // Strings at a node that does not dominate the foot; `top` includes
  // adjunction at the node itself.
  std::set<Tokens> strings(const TreeNode& n, bool top) {
    std::set<Tokens> bottom;
    if (n.marker == Marker::lexical) {
      bottom.insert({n.lexeme.value_or("")});
    } else if (n.is_leaf()) {
      if (n.marker == Marker::substitution) {
        bottom = initial_[n.label.text];
      } else if (n.label.is_epsilon()) {
        bottom.insert(Tokens{});
      } else if (n.label.is_terminal() && n.marker != Marker::slot) {
        bottom.insert({n.label.text});
      }
    } else {
      std::set<Tokens> acc{Tokens{}};
      for (const auto& c : n.children) {
        auto cs = strings(c, true);
        std::set<Tokens> next;
        for (const auto& a : acc)
          for (const auto& b : cs)
            if (a.size() + b.size() <= k_) next.insert(cat(a, b));
        acc = std::move(next);
      }
      bottom = std::move(acc);
    }
    if (!top) return bottom;
    std::set<Tokens> out;
    if (!obligatory(n)) out = bottom;
    for (const auto* aux : admissible_aux(n))
      for (const auto& [l, r] : *aux)
        for (const auto& s : bottom)
          if (l.size() + s.size() + r.size() <= k_) out.insert(cat(cat(l, s), r));
    return out;
  }

  std::set<Pair> pairs(const TreeNode& n, bool top) {
    std::set<Pair> bottom;
    if (n.marker == Marker::foot) {
      bottom.insert(Pair{});
    } else {
      std::set<Pair> acc;
      std::set<Tokens> left{Tokens{}};
      std::size_t spine = 0;
      while (!dominates_foot(n.children[spine])) ++spine;
      for (std::size_t i = 0; i < spine; ++i) left = concat_sets(left, strings(n.children[i], true));
      std::set<Tokens> right{Tokens{}};
      for (std::size_t i = spine + 1; i < n.children.size(); ++i) right = concat_sets(right, strings(n.children[i], true));
      for (const auto& [pl, pr] : pairs(n.children[spine], true))
        for (const auto& l : left)
          for (const auto& r : right)
            if (l.size() + pl.size() + pr.size() + r.size() <= k_) bottom.insert({cat(l, pl), cat(pr, r)});
    }
    if (!top) return bottom;
    std::set<Pair> out;
    if (!obligatory(n)) out = bottom;
    for (const auto* aux : admissible_aux(n))
      for (const auto& [l, r] : *aux)
        for (const auto& [bl, br] : bottom)
          if (l.size() + bl.size() + br.size() + r.size() <= k_) out.insert({cat(l, bl), cat(br, r)});
    return out;
  }

  std::set<Tokens> concat_sets(const std::set<Tokens>& a, const std::set<Tokens>& b) const {
    std::set<Tokens> out;
    for (const auto& x : a)
      for (const auto& y : b)
        if (x.size() + y.size() <= k_) out.insert(cat(x, y));
    return out;
  }

  const Grammar& g_;
  std::size_t k_;
  std::map<std::string, std::set<Tokens>> initial_;
  std::map<std::string, std::set<Pair>> aux_;
};

}  // namespace detail

inline LanguageSource tag_language(const Grammar& g) {
  return [g](std::size_t k) { return detail::TagLanguage(g, k).run(); };
}

struct LanguageComparison {
  bool equal = true;
  std::optional<Tokens> counterexample;  // shortest, then lexicographically first
  bool in_first = false;                 // which side generates the counterexample

  explicit operator bool() const noexcept { return equal; }
};

inline LanguageComparison language_equal_upto(const LanguageSource& a, const LanguageSource& b, std::size_t k) {
  const auto la = a(k);
  const auto lb = b(k);
  LanguageComparison out;
  auto consider = [&](const Tokens& s, bool first) {
    if (!out.counterexample || s.size() < out.counterexample->size() ||
        (s.size() == out.counterexample->size() && s < *out.counterexample)) {
      out.counterexample = s;
      out.in_first = first;
    }
  };
  for (const auto& s : la)
    if (!lb.count(s)) consider(s, true);
  for (const auto& s : lb)
    if (!la.count(s)) consider(s, false);
  out.equal = !out.counterexample;
  return out;
}

}  // namespace tagforge
