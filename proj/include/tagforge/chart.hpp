#pragma once

// Bottom-up chart parsing for TAG.
//
// Items carry a node of a binarized elementary tree, the span i..l it covers,
// the gap j..k taken by the foot when the node dominates one, and whether
// adjunction at the node has been decided (top) or not (bottom):
//
//   LEX       terminal leaf over token i            => [v, top, i, -, i+1]
//   EPS       empty leaf                            => [v, top, i, -, i]
//   FOOT      foot node, any gap                    => [f, bot, i, (i,l), l]
//   UNARY     [c, top, x]                           => [parent, bot, x]
//   BINARY    [c1, top, i..m] [c2, top, m..l]       => [parent, bot, i..l]
//   NO-ADJ    [v, bot, x], v not OA                 => [v, top, x]
//   ADJOIN    [root b, top, i,(j,k),l] [v, bot, j,g,k] => [v, top, i,g,l]
//   SUBST     [root a, top, i..l], a initial        => [site, top, i..l]
//
// Every idempotent insertion accumulates back-pointers; derivations are read
// off the back-pointer graph.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "tagforge/derivation.hpp"

namespace tagforge {

struct BinNode {
  Symbol symbol;
  Marker marker = Marker::none;
  bool fresh = false;                    // introduced by binarization, never adjoinable
  std::optional<GornAddress> original;   // address in the elementary tree
  GornAddress internal;                  // address in the binarized tree
  const TreeNode* source = nullptr;
  int parent = -1;
  std::vector<int> children;
  bool dominates_foot = false;
  int label_id = -1;                     // interned nonterminal label
};

struct BinTree {
  std::string name;
  TreeKind kind = TreeKind::initial;
  std::vector<BinNode> nodes;  // nodes[0] is the root
  int foot = -1;
  std::size_t lexical_weight = 0;  // tokens the tree itself contributes
  std::size_t substitution_sites = 0;
};

struct BinarizedGrammar {
  std::string start;
  std::vector<BinTree> trees;
  std::vector<std::string> labels;  // label_id -> text

  // Internal address -> original Gorn address; nullopt for nodes added by
  // binarization.
  std::optional<GornAddress> original_address(std::size_t tree, const GornAddress& internal) const {
    for (const auto& n : trees.at(tree).nodes)
      if (n.internal == internal) return n.original;
    return std::nullopt;
  }
};

namespace detail {

struct BinBuilder {
  BinTree& tree;
  std::unordered_map<std::string, int>& label_ids;
  std::vector<std::string>& labels;

  int intern(const std::string& s) {
    auto [it, added] = label_ids.emplace(s, static_cast<int>(labels.size()));
    if (added) labels.push_back(s);
    return it->second;
  }

  int add(const TreeNode* src, const Symbol& sym, Marker m, bool fresh, std::optional<GornAddress> orig,
          GornAddress internal, int parent) {
    BinNode n;
    n.symbol = sym;
    n.marker = m;
    n.fresh = fresh;
    n.original = std::move(orig);
    n.internal = std::move(internal);
    n.source = src;
    n.parent = parent;
    if (sym.is_nonterminal()) n.label_id = intern(sym.text);
    tree.nodes.push_back(std::move(n));
    return static_cast<int>(tree.nodes.size() - 1);
  }

  // Children [from, end) of `src` hang under node `at`; more than two are
  // folded right-branching into fresh copies of the parent label.
  void attach_children(const TreeNode& src, const GornAddress& src_addr, std::size_t from, int at) {
    const std::size_t remaining = src.children.size() - from;
    if (remaining == 0) return;
    auto child_addr = [&](std::size_t idx) { return tree.nodes[at].internal.child(static_cast<unsigned>(idx)); };
    if (remaining <= 2) {
      for (std::size_t c = from; c < src.children.size(); ++c) {
        int id = build(src.children[c], src_addr.child(static_cast<unsigned>(c + 1)), child_addr(c - from + 1), at);
        tree.nodes[at].children.push_back(id);
      }
      return;
    }
    int left = build(src.children[from], src_addr.child(static_cast<unsigned>(from + 1)), child_addr(1), at);
    tree.nodes[at].children.push_back(left);
    int rest = add(&src, src.label, Marker::none, true, std::nullopt, child_addr(2), at);
    tree.nodes[at].children.push_back(rest);
    attach_children(src, src_addr, from + 1, rest);
  }

  int build(const TreeNode& src, const GornAddress& src_addr, const GornAddress& internal, int parent) {
    int id = add(&src, src.label, src.marker, false, src_addr, internal, parent);
    if (src.marker == Marker::foot) tree.foot = id;
    attach_children(src, src_addr, 0, id);
    return id;
  }
};

}  // namespace detail

// Every node ends up with at most two children. Fresh intermediate nodes
// carry NA and never show up in derivations.
inline BinarizedGrammar binarize(const Grammar& g) {
  BinarizedGrammar out;
  out.start = g.start();
  std::unordered_map<std::string, int> label_ids;
  for (const auto& t : g.trees()) {
    BinTree bt;
    bt.name = t.name();
    bt.kind = t.kind();
    detail::BinBuilder b{bt, label_ids, out.labels};
    b.build(t.root(), GornAddress::root(), GornAddress::root(), -1);
    for (int f = bt.foot; f >= 0; f = bt.nodes[f].parent) bt.nodes[f].dominates_foot = true;
    for (const auto& n : bt.nodes) {
      if (n.marker == Marker::lexical || (n.symbol.is_terminal() && !n.symbol.is_epsilon() && n.marker != Marker::slot))
        ++bt.lexical_weight;
      if (n.marker == Marker::substitution) ++bt.substitution_sites;
    }
    out.trees.push_back(std::move(bt));
  }
  return out;
}

struct ChartItem {
  std::uint32_t tree = 0;
  std::uint32_t node = 0;
  bool top = false;  // adjunction at the node already decided
  std::int32_t i = 0, j = -1, k = -1, l = 0;

  bool has_gap() const noexcept { return j >= 0; }
  friend bool operator==(const ChartItem&, const ChartItem&) = default;
};

struct ChartItemHash {
  std::size_t operator()(const ChartItem& it) const noexcept {
    std::uint64_t h = it.tree;
    h = h * 1000003u + it.node;
    h = h * 1000003u + (it.top ? 1u : 0u);
    h = h * 1000003u + static_cast<std::uint32_t>(it.i);
    h = h * 1000003u + static_cast<std::uint32_t>(it.j + 1);
    h = h * 1000003u + static_cast<std::uint32_t>(it.k + 1);
    h = h * 1000003u + static_cast<std::uint32_t>(it.l);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

enum class Rule : std::uint8_t { lex, eps, foot, unary, binary, subst, adjoin, no_adjoin };

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::lex: return "LEX";
    case Rule::eps: return "EPS";
    case Rule::foot: return "FOOT";
    case Rule::unary: return "UNARY";
    case Rule::binary: return "BINARY";
    case Rule::subst: return "SUBST";
    case Rule::adjoin: return "ADJOIN";
    case Rule::no_adjoin: return "NO-ADJOIN";
  }
  return "?";
}

// For ADJOIN, `a` is the auxiliary root item and `b` the host item.
struct BackPointer {
  Rule rule;
  std::int64_t a = -1;
  std::int64_t b = -1;
  friend bool operator==(const BackPointer&, const BackPointer&) = default;
};

enum class Schedule { serial, parallel };

struct ParseLimits {
  std::optional<std::size_t> max_parses;
  std::optional<std::size_t> max_tree_uses;
  Schedule schedule = Schedule::serial;
  unsigned threads = 0;  // parallel only; 0 picks a default
};

// Deduplicating item store with back-pointer accumulation. All mutation goes
// through one mutex, so agenda processing may run on several threads.
class Chart {
 public:
  struct Insert {
    std::uint32_t id;
    bool fresh;
  };

  Insert insert(const ChartItem& item, const BackPointer& bp) {
    std::lock_guard lock(mu_);
    return insert_locked(item, bp);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

  ChartItem item(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    return items_[id];
  }

  std::optional<std::uint32_t> find(const ChartItem& item) const {
    std::lock_guard lock(mu_);
    auto it = index_.find(item);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<BackPointer> back_pointers(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    return backs_[id];
  }

  std::vector<ChartItem> items() const {
    std::lock_guard lock(mu_);
    return items_;
  }

  std::mutex& mutex() const { return mu_; }

  Insert insert_locked(const ChartItem& item, const BackPointer& bp) {
    auto [it, added] = index_.emplace(item, static_cast<std::uint32_t>(items_.size()));
    if (added) {
      items_.push_back(item);
      backs_.emplace_back();
    }
    auto& list = backs_[it->second];
    if (std::find(list.begin(), list.end(), bp) == list.end()) list.push_back(bp);
    return {it->second, added};
  }

  const ChartItem& item_locked(std::uint32_t id) const { return items_[id]; }

 private:
  mutable std::mutex mu_;
  std::vector<ChartItem> items_;
  std::vector<std::vector<BackPointer>> backs_;
  std::unordered_map<ChartItem, std::uint32_t, ChartItemHash> index_;
};

namespace detail {

inline bool adjoinable(const BinNode& n) {
  if (n.fresh || n.marker == Marker::substitution || n.marker == Marker::lexical) return false;
  if (!n.symbol.is_nonterminal()) return false;
  return !n.source->effective_constraint().admits_none();
}

inline bool admits_aux(const BinNode& host, const BinTree& aux) {
  return static_cast<bool>(can_adjoin_node(*host.source, aux.nodes[0].symbol, aux.name));
}

inline std::uint64_t key3(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return (a << 42) ^ (b << 21) ^ c; }

class Deducer {
 public:
  Deducer(const BinarizedGrammar& g, const Tokens& tokens, Chart& chart)
      : g_(g), tokens_(tokens), chart_(chart), n_(static_cast<std::int32_t>(tokens.size())) {
    for (std::uint32_t t = 0; t < g_.trees.size(); ++t)
      for (std::uint32_t v = 0; v < g_.trees[t].nodes.size(); ++v)
        if (g_.trees[t].nodes[v].marker == Marker::substitution)
          sites_by_label_[g_.trees[t].nodes[v].label_id].emplace_back(t, v);
  }

  void run(const ParseLimits& limits) {
    seed();
    if (limits.schedule == Schedule::serial) {
      while (!agenda_.empty()) {
        auto id = agenda_.front();
        agenda_.pop_front();
        step(id);
      }
      return;
    }
    unsigned threads = limits.threads ? limits.threads : std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back([this] { worker(); });
    for (auto& th : pool) th.join();
  }

 private:
  using Consequence = std::pair<ChartItem, BackPointer>;

  void seed() {
    for (std::uint32_t t = 0; t < g_.trees.size(); ++t) {
      const BinTree& tree = g_.trees[t];
      for (std::uint32_t v = 0; v < tree.nodes.size(); ++v) {
        const BinNode& n = tree.nodes[v];
        if (!n.children.empty()) continue;
        if (n.marker == Marker::foot) {
          for (std::int32_t i = 0; i <= n_; ++i)
            for (std::int32_t l = i; l <= n_; ++l) push({t, v, false, i, i, l, l}, {Rule::foot});
        } else if (n.symbol.is_epsilon()) {
          for (std::int32_t i = 0; i <= n_; ++i) push({t, v, true, i, -1, -1, i}, {Rule::eps});
        } else if (n.symbol.is_terminal() && n.marker != Marker::slot) {
          const std::string& word = n.marker == Marker::lexical ? *n.source->lexeme : n.symbol.text;
          for (std::int32_t i = 0; i < n_; ++i)
            if (tokens_[i] == word) push({t, v, true, i, -1, -1, i + 1}, {Rule::lex});
        }
      }
    }
  }

  void push(const ChartItem& item, const BackPointer& bp) {
    auto r = chart_.insert_locked(item, bp);
    if (r.fresh) agenda_.push_back(r.id);
  }

  void worker() {
    for (;;) {
      std::uint32_t id;
      {
        std::unique_lock lock(chart_.mutex());
        cv_.wait(lock, [&] { return !agenda_.empty() || active_ == 0; });
        if (agenda_.empty()) {
          cv_.notify_all();
          return;
        }
        id = agenda_.front();
        agenda_.pop_front();
        ++active_;
      }
      std::vector<Consequence> out;
      auto partners = register_and_snapshot(id);
      derive(partners, out);
      {
        std::lock_guard lock(chart_.mutex());
        for (const auto& [item, bp] : out) push(item, bp);
        --active_;
      }
      cv_.notify_all();
    }
  }

  void step(std::uint32_t id) {
    std::vector<Consequence> out;
    auto partners = register_and_snapshot(id);
    derive(partners, out);
    std::lock_guard lock(chart_.mutex());
    for (const auto& [item, bp] : out) push(item, bp);
  }

  struct Snapshot {
    std::uint32_t id;
    ChartItem item;
    std::vector<std::pair<std::uint32_t, ChartItem>> partners;
  };

  // Registers the item in the combination indices and collects the partners
  // already there, as one atomic step: of two items that can combine, the
  // later one to register sees the earlier.
  Snapshot register_and_snapshot(std::uint32_t id) {
    std::lock_guard lock(chart_.mutex());
    Snapshot s{id, chart_.item_locked(id), {}};
    const ChartItem& x = s.item;
    const BinTree& tree = g_.trees[x.tree];
    const BinNode& v = tree.nodes[x.node];
    auto take = [&](const std::vector<std::uint32_t>* ids) {
      if (!ids) return;
      for (auto p : *ids) s.partners.emplace_back(p, chart_.item_locked(p));
    };
    auto find = [](auto& map, std::uint64_t key) -> const std::vector<std::uint32_t>* {
      auto it = map.find(key);
      return it == map.end() ? nullptr : &it->second;
    };

    if (!x.top) {
      if (adjoinable(v)) {
        const auto key = key3(static_cast<std::uint64_t>(v.label_id), static_cast<std::uint32_t>(x.i), static_cast<std::uint32_t>(x.l));
        hosts_[key].push_back(id);
        take(find(aux_roots_, key));
      }
      return s;
    }
    if (v.parent < 0) {
      if (tree.kind == TreeKind::auxiliary && x.has_gap()) {
        const auto key = key3(static_cast<std::uint64_t>(v.label_id), static_cast<std::uint32_t>(x.j), static_cast<std::uint32_t>(x.k));
        aux_roots_[key].push_back(id);
        take(find(hosts_, key));
      }
      return s;
    }
    const BinNode& p = tree.nodes[v.parent];
    if (p.children.size() == 2) {
      const bool left = p.children[0] == static_cast<int>(x.node);
      const std::uint32_t sibling = static_cast<std::uint32_t>(p.children[left ? 1 : 0]);
      // Left children are indexed by where they end, right children by
      // where they start.
      if (left) {
        by_end_[key3(x.tree, x.node, static_cast<std::uint32_t>(x.l))].push_back(id);
        take(find(by_start_, key3(x.tree, sibling, static_cast<std::uint32_t>(x.l))));
      } else {
        by_start_[key3(x.tree, x.node, static_cast<std::uint32_t>(x.i))].push_back(id);
        take(find(by_end_, key3(x.tree, sibling, static_cast<std::uint32_t>(x.i))));
      }
    }
    return s;
  }

  // Deductions from one item and its partners; touches only immutable data.
  void derive(const Snapshot& s, std::vector<Consequence>& out) {
    const ChartItem& x = s.item;
    const BinTree& tree = g_.trees[x.tree];
    const BinNode& v = tree.nodes[x.node];
    const std::int64_t id = s.id;

    if (!x.top) {
      const bool obligatory = !v.fresh && v.source->effective_constraint().is_obligatory();
      if (v.fresh || !obligatory) out.push_back({{x.tree, x.node, true, x.i, x.j, x.k, x.l}, {Rule::no_adjoin, id}});
      for (const auto& [aid, a] : s.partners) {
        if (!admits_aux(v, g_.trees[a.tree])) continue;
        out.push_back({{x.tree, x.node, true, a.i, x.j, x.k, a.l}, {Rule::adjoin, aid, id}});
      }
      return;
    }

    if (v.parent < 0) {
      if (tree.kind == TreeKind::initial && !x.has_gap()) {
        auto it = sites_by_label_.find(v.label_id);
        if (it != sites_by_label_.end())
          for (const auto& [t, w] : it->second) out.push_back({{t, w, true, x.i, -1, -1, x.l}, {Rule::subst, id}});
      } else if (tree.kind == TreeKind::auxiliary && x.has_gap()) {
        for (const auto& [hid, h] : s.partners) {
          const BinNode& host = g_.trees[h.tree].nodes[h.node];
          if (!admits_aux(host, tree)) continue;
          out.push_back({{h.tree, h.node, true, x.i, h.j, h.k, x.l}, {Rule::adjoin, id, hid}});
        }
      }
      return;
    }

    const BinNode& p = tree.nodes[v.parent];
    const auto parent = static_cast<std::uint32_t>(v.parent);
    if (p.children.size() == 1) {
      out.push_back({{x.tree, parent, false, x.i, x.j, x.k, x.l}, {Rule::unary, id}});
      return;
    }
    const bool left = p.children[0] == static_cast<int>(x.node);
    for (const auto& [oid, o] : s.partners) {
      const ChartItem& lhs = left ? x : o;
      const ChartItem& rhs = left ? o : x;
      if (lhs.l != rhs.i) continue;
      if (lhs.has_gap() && rhs.has_gap()) continue;
      const ChartItem& gap = lhs.has_gap() ? lhs : rhs;
      out.push_back({{x.tree, parent, false, lhs.i, gap.j, gap.k, rhs.l},
                     {Rule::binary, left ? id : static_cast<std::int64_t>(oid), left ? static_cast<std::int64_t>(oid) : id}});
    }
  }

  const BinarizedGrammar& g_;
  const Tokens& tokens_;
  Chart& chart_;
  std::int32_t n_;
  std::deque<std::uint32_t> agenda_;
  std::condition_variable cv_;
  unsigned active_ = 0;

  std::unordered_map<int, std::vector<std::pair<std::uint32_t, std::uint32_t>>> sites_by_label_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> hosts_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> aux_roots_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_start_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_end_;
};

// Upper bound on elementary trees per derivation, or nullopt when the
// grammar can derive without consuming input and no bound was given.
inline std::optional<std::size_t> tree_use_bound(const BinarizedGrammar& g, std::size_t n, const ParseLimits& limits) {
  bool empty_yield = false;
  bool auto_bound = true;
  std::size_t s_max = 0;
  for (const auto& t : g.trees) {
    s_max = std::max(s_max, t.substitution_sites);
    if (t.lexical_weight == 0) {
      empty_yield = true;
      if (t.kind == TreeKind::auxiliary || t.substitution_sites > 0) auto_bound = false;
    }
  }
  if (!empty_yield) return limits.max_tree_uses ? std::min(n, *limits.max_tree_uses) : n;
  if (limits.max_tree_uses) return limits.max_tree_uses;
  // Every non-empty tree eats a token; the empty ones are initial trees that
  // can only fill a substitution site or be the root.
  if (auto_bound) return n * (1 + s_max) + 1;
  return std::nullopt;
}

}  // namespace detail

// Result of parse_all: the chart, the accepting items, and the distinct
// derivations in canonical order.
class ParseForest {
 public:
  const std::vector<DerivationNode>& derivations() const noexcept { return derivations_; }
  std::size_t size() const noexcept { return derivations_.size(); }
  bool empty() const noexcept { return derivations_.empty(); }
  bool truncated() const noexcept { return truncated_; }
  bool recognized() const noexcept { return !goals_.empty(); }
  std::size_t chart_size() const { return chart_->size(); }
  const std::vector<std::uint32_t>& accepting_items() const noexcept { return goals_; }
  const Chart& chart() const noexcept { return *chart_; }
  const BinarizedGrammar& binarized() const noexcept { return *bin_; }
  std::size_t tree_use_bound() const noexcept { return bound_; }

  auto begin() const { return derivations_.begin(); }
  auto end() const { return derivations_.end(); }

  // Derivations joined by blank lines; used to compare schedules.
  std::string canonical_text() const {
    std::string out;
    for (std::size_t i = 0; i < derivations_.size(); ++i) {
      if (i) out += '\n';
      out += render_derivation(derivations_[i]);
    }
    return out;
  }

  std::string describe(const ChartItem& it) const {
    const BinTree& t = bin_->trees[it.tree];
    std::string out = "[" + t.name + ":" + t.nodes[it.node].internal.str() + (it.top ? " top " : " bot ") +
                      std::to_string(it.i) + ",";
    out += it.has_gap() ? std::to_string(it.j) + "," + std::to_string(it.k) : std::string("-,-");
    return out + "," + std::to_string(it.l) + "]";
  }

 private:
  friend ParseForest parse_all(const Grammar&, const Tokens&, const ParseLimits&);
  friend bool recognize(const Grammar&, const Tokens&, const ParseLimits&);

  std::shared_ptr<BinarizedGrammar> bin_;
  std::shared_ptr<Chart> chart_;
  std::vector<std::uint32_t> goals_;
  std::vector<DerivationNode> derivations_;
  bool truncated_ = false;
  std::size_t bound_ = 0;
};

namespace detail {

struct Partial {
  std::vector<DerivationNode> kids;
  std::size_t uses = 0;
};

// Reads derivations off the back-pointer graph. Every edge that enters a new
// elementary tree spends one unit of budget, so cycles terminate.
class Extractor {
 public:
  Extractor(const BinarizedGrammar& g, const Chart& chart) : g_(g), chart_(chart) {}

  const std::vector<Partial>& partials(std::uint32_t id, std::size_t budget) {
    const auto key = (static_cast<std::uint64_t>(id) << 20) | budget;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Partial> out;
    const ChartItem item = chart_.item(id);
    const BinNode& node = g_.trees[item.tree].nodes[item.node];
    for (const auto& bp : chart_.back_pointers(id)) {
      switch (bp.rule) {
        case Rule::lex:
        case Rule::eps:
        case Rule::foot:
          out.push_back({});
          break;
        case Rule::unary:
        case Rule::no_adjoin:
          for (const auto& p : partials(static_cast<std::uint32_t>(bp.a), budget)) out.push_back(p);
          break;
        case Rule::binary: {
          const auto lhs = partials(static_cast<std::uint32_t>(bp.a), budget);
          for (const auto& p1 : lhs) {
            const auto& rhs = partials(static_cast<std::uint32_t>(bp.b), budget - p1.uses);
            for (const auto& p2 : rhs) {
              Partial p = p1;
              p.kids.insert(p.kids.end(), p2.kids.begin(), p2.kids.end());
              p.uses += p2.uses;
              out.push_back(std::move(p));
            }
          }
          break;
        }
        case Rule::subst: {
          if (budget == 0) break;
          const ChartItem root = chart_.item(static_cast<std::uint32_t>(bp.a));
          for (const auto& p : partials(static_cast<std::uint32_t>(bp.a), budget - 1)) {
            Partial q;
            q.kids.push_back({g_.trees[root.tree].name, DerivationOp::substitution, node.original, p.kids});
            q.uses = p.uses + 1;
            out.push_back(std::move(q));
          }
          break;
        }
        case Rule::adjoin: {
          if (budget == 0) break;
          const ChartItem aux = chart_.item(static_cast<std::uint32_t>(bp.a));
          const auto host = partials(static_cast<std::uint32_t>(bp.b), budget - 1);
          for (const auto& ph : host) {
            const auto& auxp = partials(static_cast<std::uint32_t>(bp.a), budget - 1 - ph.uses);
            for (const auto& pa : auxp) {
              Partial q = ph;
              q.kids.push_back({g_.trees[aux.tree].name, DerivationOp::adjunction, node.original, pa.kids});
              q.uses = ph.uses + pa.uses + 1;
              out.push_back(std::move(q));
            }
          }
          break;
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const BinarizedGrammar& g_;
  const Chart& chart_;
  std::unordered_map<std::uint64_t, std::vector<Partial>> memo_;
};

inline std::vector<std::uint32_t> goal_items(const BinarizedGrammar& g, const Chart& chart, std::int32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t t = 0; t < g.trees.size(); ++t) {
    const BinTree& tree = g.trees[t];
    if (tree.kind != TreeKind::initial || !(tree.nodes[0].symbol == Symbol::nt(g.start))) continue;
    if (auto id = chart.find({t, 0, true, 0, -1, -1, n})) out.push_back(*id);
  }
  return out;
}

inline void fill_chart(const BinarizedGrammar& bin, const Tokens& tokens, Chart& chart, const ParseLimits& limits) {
  Deducer(bin, tokens, chart).run(limits);
}

}  // namespace detail

// All distinct valid derivations of `tokens`, sorted by canonical rendering.
inline ParseForest parse_all(const Grammar& g, const Tokens& tokens, const ParseLimits& limits = {}) {
  ParseForest f;
  f.bin_ = std::make_shared<BinarizedGrammar>(binarize(g));
  auto bound = detail::tree_use_bound(*f.bin_, tokens.size(), limits);
  if (!bound)
    throw Error(Errc::unbounded_grammar, "a tree with empty yield can repeat without consuming input; supply max_tree_uses");
  f.bound_ = *bound;
  f.chart_ = std::make_shared<Chart>();
  detail::fill_chart(*f.bin_, tokens, *f.chart_, limits);
  f.goals_ = detail::goal_items(*f.bin_, *f.chart_, static_cast<std::int32_t>(tokens.size()));

  detail::Extractor ex(*f.bin_, *f.chart_);
  std::map<std::string, DerivationNode> unique;
  for (auto goal : f.goals_) {
    if (f.bound_ == 0) break;
    const ChartItem it = f.chart_->item(goal);
    for (const auto& p : ex.partials(goal, f.bound_ - 1)) {
      DerivationNode d = canonicalized({f.bin_->trees[it.tree].name, DerivationOp::root, std::nullopt, p.kids});
      unique.emplace(render_derivation(d), std::move(d));
    }
  }
  for (auto& [text, d] : unique) {
    if (limits.max_parses && f.derivations_.size() >= *limits.max_parses) {
      f.truncated_ = true;
      break;
    }
    f.derivations_.push_back(std::move(d));
  }
  return f;
}

inline bool recognize(const Grammar& g, const Tokens& tokens, const ParseLimits& limits = {}) {
  if (limits.max_tree_uses) {
    ParseLimits one = limits;
    one.max_parses = 1;
    return !parse_all(g, tokens, one).empty();
  }
  auto bin = binarize(g);
  if (!detail::tree_use_bound(bin, tokens.size(), limits))
    throw Error(Errc::unbounded_grammar, "a tree with empty yield can repeat without consuming input; supply max_tree_uses");
  Chart chart;
  detail::fill_chart(bin, tokens, chart, limits);
  return !detail::goal_items(bin, chart, static_cast<std::int32_t>(tokens.size())).empty();
}

// Chart size for the input, for complexity measurements.
inline std::size_t chart_item_count(const Grammar& g, const Tokens& tokens, const ParseLimits& limits = {}) {
  auto bin = binarize(g);
  Chart chart;
  detail::fill_chart(bin, tokens, chart, limits);
  return chart.size();
}

}  // namespace tagforge
