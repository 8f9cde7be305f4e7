#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/lexicon.hpp"

namespace tagforge {

// Grammar files
// -------------
//   start: S
//   lexicalized: true            (optional)
//
//   tree alpha_saw : initial
//     S
//       NP!                      substitution site
//       VP
//         V@ = saw               anchor with its word
//         NP!
//
//   family Tnx0V
//     direction: head-initial
//     tree alpha_nx0V : initial
//       S
//         NP!
//         VP
//           V@
//
// Markers: `!` substitution, `*` foot, `@` anchor. Constraints follow the
// marker: {NA} {OA} {OA: a,b} {SA: a,b} {SA}. Quoted leaves are terminals,
// '' is the empty word, $adposition is a family parameter slot.

struct ParsedGrammar {
  Grammar grammar;
  ValidationReport report;
};

namespace detail {

struct SourceLine {
  std::size_t number;
  std::size_t depth;
  std::string body;
};

[[noreturn]] inline void syntax_error(std::size_t line, std::size_t column, const std::string& msg) {
  throw Error(Errc::syntax_error, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<SourceLine> split_lines(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t pos = 0, number = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++number;
    pos = nl + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t spaces = 0;
    while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
    if (spaces < raw.size() && raw[spaces] == '\t') syntax_error(number, spaces + 1, "tabs are not allowed for indentation");
    std::string body = trim(raw.substr(spaces));
    if (body.empty() || body[0] == '#') {
      if (nl == text.size()) break;
      continue;
    }
    if (spaces % 2) syntax_error(number, 1, "indentation must be a multiple of two spaces");
    out.push_back({number, spaces / 2, std::move(body)});
    if (nl == text.size()) break;
  }
  return out;
}

inline bool is_label_char(char c) {
  switch (c) {
    case '!': case '*': case '@': case '{': case '}': case '=': case '\'': case '$':
    case ' ': case '\t': case ',': case ':': case '(': case ')':
      return false;
    default:
      return true;
  }
}

inline std::set<std::string> parse_name_list(std::string_view s, std::size_t line, std::size_t col) {
  std::set<std::string> names;
  std::string cur;
  auto flush = [&] {
    std::string t = trim(cur);
    if (!t.empty()) names.insert(t);
    else if (!cur.empty()) syntax_error(line, col, "empty tree name in constraint");
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') {
      if (trim(cur).empty()) syntax_error(line, col, "empty tree name in constraint");
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return names;
}

inline AdjConstraint parse_constraint(std::string_view inner, std::size_t line, std::size_t col) {
  std::string body = trim(inner);
  auto colon = body.find(':');
  std::string head = trim(std::string_view(body).substr(0, colon));
  if (colon == std::string::npos) {
    if (head == "NA") return AdjConstraint::na();
    if (head == "OA") return AdjConstraint::oa();
    if (head == "SA") return AdjConstraint::any();
    syntax_error(line, col, "unknown constraint '" + head + "'");
  }
  auto names = parse_name_list(std::string_view(body).substr(colon + 1), line, col);
  if (head == "OA") return AdjConstraint::oa(std::move(names));
  if (head == "SA") return AdjConstraint::sa(std::move(names));
  syntax_error(line, col, "constraint '" + head + "' takes no tree list");
}

inline TreeNode parse_node(const SourceLine& l, std::size_t indent_cols) {
  const std::string& s = l.body;
  auto col = [&](std::size_t i) { return indent_cols + i + 1; };
  if (s[0] == '\'') {
    auto close = s.find('\'', 1);
    if (close == std::string::npos) syntax_error(l.number, col(0), "unterminated quoted terminal");
    if (close + 1 != s.size()) syntax_error(l.number, col(close + 1), "trailing text after terminal");
    std::string word = s.substr(1, close - 1);
    if (word.empty()) return TreeNode::epsilon();
    if (has_whitespace(word)) syntax_error(l.number, col(1), "terminal contains whitespace");
    return TreeNode::terminal(word);
  }
  if (s[0] == '$') {
    std::string name = s.substr(1);
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_label_char))
      syntax_error(l.number, col(0), "malformed slot");
    TreeNode n;
    n.label = Symbol::t(name);
    n.marker = Marker::slot;
    return n;
  }
  std::size_t i = 0;
  while (i < s.size() && is_label_char(s[i])) ++i;
  if (i == 0) syntax_error(l.number, col(0), "expected a node label");
  TreeNode n = TreeNode::nonterminal(s.substr(0, i));
  if (i < s.size()) {
    switch (s[i]) {
      case '!': n.marker = Marker::substitution; ++i; break;
      case '*': n.marker = Marker::foot; ++i; break;
      case '@': n.marker = Marker::anchor; ++i; break;
      default: break;
    }
  }
  if (i < s.size() && s[i] == '{') {
    auto close = s.find('}', i);
    if (close == std::string::npos) syntax_error(l.number, col(i), "unterminated constraint");
    n.constraint = parse_constraint(std::string_view(s).substr(i + 1, close - i - 1), l.number, col(i));
    i = close + 1;
  }
  while (i < s.size() && s[i] == ' ') ++i;
  if (i < s.size() && s[i] == '=') {
    if (n.marker != Marker::anchor) syntax_error(l.number, col(i), "only anchors take '= word'");
    std::string word = trim(std::string_view(s).substr(i + 1));
    if (word.empty() || has_whitespace(word)) syntax_error(l.number, col(i), "expected a single word after '='");
    n.children.push_back(TreeNode::lexical(word));
    i = s.size();
  }
  if (i != s.size()) syntax_error(l.number, col(i), "unexpected '" + s.substr(i) + "'");
  return n;
}

// Parses node lines starting at lines[idx] with depth `depth` as one subtree.
inline TreeNode parse_subtree(const std::vector<SourceLine>& lines, std::size_t& idx, std::size_t depth) {
  const SourceLine& l = lines[idx++];
  TreeNode n = parse_node(l, depth * 2);
  while (idx < lines.size() && lines[idx].depth > depth) {
    if (lines[idx].depth != depth + 1) syntax_error(lines[idx].number, 1, "indentation jumps more than one level");
    if (n.marker == Marker::anchor && !n.children.empty())
      syntax_error(lines[idx].number, 1, "anchor with '= word' cannot have child lines");
    n.children.push_back(parse_subtree(lines, idx, depth + 1));
  }
  return n;
}

inline ElementaryTree parse_tree_block(const std::vector<SourceLine>& lines, std::size_t& idx, std::size_t depth) {
  const SourceLine& head = lines[idx];
  // tree NAME : initial|auxiliary
  std::string rest = trim(std::string_view(head.body).substr(4));
  auto colon = rest.rfind(':');
  if (colon == std::string::npos) syntax_error(head.number, 1, "expected 'tree NAME : initial|auxiliary'");
  std::string name = trim(std::string_view(rest).substr(0, colon));
  std::string kind = trim(std::string_view(rest).substr(colon + 1));
  if (name.empty() || has_whitespace(name)) syntax_error(head.number, 6, "malformed tree name");
  TreeKind k;
  if (kind == "initial") k = TreeKind::initial;
  else if (kind == "auxiliary") k = TreeKind::auxiliary;
  else syntax_error(head.number, 1, "tree kind must be initial or auxiliary");
  ++idx;
  if (idx >= lines.size() || lines[idx].depth != depth + 1)
    syntax_error(head.number, 1, "tree '" + name + "' has no root node");
  TreeNode root = parse_subtree(lines, idx, depth + 1);
  if (idx < lines.size() && lines[idx].depth > depth)
    syntax_error(lines[idx].number, 1, "tree '" + name + "' has more than one root");
  return ElementaryTree(name, k, std::move(root));
}

inline bool starts_with_word(const std::string& s, std::string_view w) {
  return s.size() > w.size() && s.compare(0, w.size(), w) == 0 && s[w.size()] == ' ';
}

}  // namespace detail

// Parses a grammar document and runs validate_grammar on the result.
inline ParsedGrammar parse_grammar_text(std::string_view text) {
  using namespace detail;
  auto lines = split_lines(text);
  std::optional<std::string> start;
  std::optional<bool> lexicalized;
  std::vector<ElementaryTree> trees;
  std::vector<TreeFamily> families;
  std::set<std::string> names;

  std::size_t idx = 0;
  while (idx < lines.size()) {
    const SourceLine& l = lines[idx];
    if (l.depth != 0) syntax_error(l.number, 1, "unexpected indentation");
    if (l.body.rfind("start:", 0) == 0) {
      if (start) syntax_error(l.number, 1, "duplicate start declaration");
      start = trim(std::string_view(l.body).substr(6));
      if (start->empty()) syntax_error(l.number, 7, "missing start symbol");
      ++idx;
    } else if (l.body.rfind("lexicalized:", 0) == 0) {
      std::string v = trim(std::string_view(l.body).substr(12));
      if (v == "true") lexicalized = true;
      else if (v == "false") lexicalized = false;
      else syntax_error(l.number, 13, "lexicalized must be true or false");
      ++idx;
    } else if (starts_with_word(l.body, "tree")) {
      auto t = parse_tree_block(lines, idx, 0);
      if (!names.insert(t.name()).second) throw Error(Errc::duplicate_tree_name, t.name() + " (line " + std::to_string(l.number) + ")");
      trees.push_back(std::move(t));
    } else if (starts_with_word(l.body, "family")) {
      TreeFamily f;
      f.name = trim(std::string_view(l.body).substr(7));
      if (f.name.empty() || has_whitespace(f.name)) syntax_error(l.number, 8, "malformed family name");
      if (!names.insert(f.name).second) throw Error(Errc::duplicate_tree_name, f.name);
      ++idx;
      bool saw_direction = false;
      while (idx < lines.size() && lines[idx].depth >= 1) {
        const SourceLine& p = lines[idx];
        if (p.depth != 1) syntax_error(p.number, 1, "unexpected indentation in family");
        if (p.body.rfind("direction:", 0) == 0) {
          auto d = parse_head_direction(trim(std::string_view(p.body).substr(10)));
          if (!d) syntax_error(p.number, 12, "direction must be head-initial or head-final");
          f.direction = *d;
          saw_direction = true;
          ++idx;
        } else if (p.body.rfind("adposition:", 0) == 0) {
          auto o = parse_adposition_order(trim(std::string_view(p.body).substr(11)));
          if (!o) syntax_error(p.number, 13, "adposition must be pre or post");
          f.adposition_order = *o;
          ++idx;
        } else if (starts_with_word(p.body, "tree")) {
          f.trees.push_back(parse_tree_block(lines, idx, 1));
        } else {
          syntax_error(p.number, 3, "expected direction:, adposition: or tree inside family");
        }
      }
      if (!saw_direction) syntax_error(l.number, 1, "family '" + f.name + "' lacks a direction");
      families.push_back(std::move(f));
    } else {
      syntax_error(l.number, 1, "expected start:, lexicalized:, tree or family");
    }
  }
  if (!start) throw Error(Errc::syntax_error, "missing 'start:' header");
  Grammar g(*start, std::move(trees), lexicalized, std::move(families));
  auto report = validate_grammar(g);
  return {std::move(g), std::move(report)};
}

namespace detail {

inline std::string constraint_text(const AdjConstraint& c) {
  auto list = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& n : s) out += (out.empty() ? "" : ",") + n;
    return out;
  };
  switch (c.kind()) {
    case AdjConstraint::Kind::null: return "{NA}";
    case AdjConstraint::Kind::obligatory: return c.names() ? "{OA: " + list(*c.names()) + "}" : "{OA}";
    case AdjConstraint::Kind::selective:
      if (!c.names()) return "{SA}";
      return c.names()->empty() ? "{SA:}" : "{SA: " + list(*c.names()) + "}";
  }
  return {};
}

inline void serialize_node(const TreeNode& n, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  if (n.marker == Marker::slot) {
    out += "$" + n.label.text + "\n";
    return;
  }
  if (n.label.is_terminal() || n.marker == Marker::lexical) {
    out += "'" + (n.marker == Marker::lexical ? n.lexeme.value_or("") : n.label.text) + "'\n";
    return;
  }
  out += n.label.text;
  if (n.marker == Marker::substitution) out += '!';
  else if (n.marker == Marker::foot) out += '*';
  else if (n.marker == Marker::anchor) out += '@';
  if (n.constraint) out += constraint_text(*n.constraint);
  if (n.is_anchored_anchor()) {
    out += " = " + *n.children[0].lexeme + "\n";
    return;
  }
  out += '\n';
  for (const auto& c : n.children) serialize_node(c, depth + 1, out);
}

inline void serialize_tree(const ElementaryTree& t, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += "tree " + t.name() + " : " + std::string(to_string(t.kind())) + "\n";
  serialize_node(t.root(), depth + 1, out);
}

}  // namespace detail

inline std::string serialize_tree_text(const ElementaryTree& t) {
  std::string out;
  detail::serialize_tree(t, 0, out);
  return out;
}

// Canonical form: header, families by name, then trees by name; one blank
// line before every block; LF line ends.
inline std::string serialize_grammar(const Grammar& g) {
  std::string out = "start: " + g.start() + "\n";
  if (g.declared_lexicalized()) out += std::string("lexicalized: ") + (*g.declared_lexicalized() ? "true" : "false") + "\n";

  std::vector<const TreeFamily*> fams;
  for (const auto& f : g.families()) fams.push_back(&f);
  std::sort(fams.begin(), fams.end(), [](auto* a, auto* b) { return a->name < b->name; });
  for (const auto* f : fams) {
    out += "\nfamily " + f->name + "\n";
    out += "  direction: " + std::string(to_string(f->direction)) + "\n";
    if (f->adposition_order) out += "  adposition: " + std::string(to_string(*f->adposition_order)) + "\n";
    std::vector<const ElementaryTree*> ts;
    for (const auto& t : f->trees) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) { return a->name() < b->name(); });
    for (const auto* t : ts) detail::serialize_tree(*t, 1, out);
  }

  std::vector<const ElementaryTree*> ts;
  for (const auto& t : g.trees()) ts.push_back(&t);
  std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) { return a->name() < b->name(); });
  for (const auto* t : ts) {
    out += "\n";
    detail::serialize_tree(*t, 0, out);
  }
  return out;
}

// Lexicon files
// -------------
//   word : tree_or_family [, tree_or_family ...]
//   put : Tnx0Vnx1pnx2(adposition='on')
inline Lexicon parse_lexicon_text(std::string_view text) {
  using namespace detail;
  Lexicon lex;
  for (const auto& l : split_lines(text)) {
    if (l.depth != 0) syntax_error(l.number, 1, "unexpected indentation");
    auto colon = l.body.find(" : ");
    std::size_t sep_len = 3;
    if (colon == std::string::npos) {
      colon = l.body.find(':');
      sep_len = 1;
    }
    if (colon == std::string::npos) syntax_error(l.number, 1, "expected 'word : tree'");
    std::string word = trim(std::string_view(l.body).substr(0, colon));
    if (word.empty() || has_whitespace(word)) syntax_error(l.number, 1, "malformed word");
    std::string rest = l.body.substr(colon + sep_len);

    std::vector<std::pair<std::string, std::size_t>> parts;
    std::string cur;
    int paren = 0;
    bool quoted = false;
    std::size_t part_col = colon + sep_len + 1;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      char c = rest[i];
      if (c == '\'') quoted = !quoted;
      if (!quoted && c == '(') ++paren;
      if (!quoted && c == ')') --paren;
      if (!quoted && paren == 0 && c == ',') {
        parts.emplace_back(trim(cur), part_col);
        cur.clear();
        part_col = colon + sep_len + i + 2;
      } else {
        cur += c;
      }
    }
    if (quoted || paren != 0) syntax_error(l.number, colon + 1, "unbalanced quotes or parentheses");
    parts.emplace_back(trim(cur), part_col);

    for (const auto& [p, pcol] : parts) {
      if (p.empty()) syntax_error(l.number, pcol, "empty entry");
      LexEntry e;
      auto open = p.find('(');
      if (open == std::string::npos) {
        e.target = p;
      } else {
        if (p.back() != ')') syntax_error(l.number, pcol, "expected ')'");
        e.target = trim(std::string_view(p).substr(0, open));
        std::string arg = trim(std::string_view(p).substr(open + 1, p.size() - open - 2));
        const std::string key = "adposition=";
        if (arg.rfind(key, 0) != 0) syntax_error(l.number, pcol + open + 1, "only adposition='...' is supported");
        std::string val = trim(std::string_view(arg).substr(key.size()));
        if (val.size() < 3 || val.front() != '\'' || val.back() != '\'')
          syntax_error(l.number, pcol + open + 1, "adposition must be quoted");
        e.adposition = val.substr(1, val.size() - 2);
        if (has_whitespace(*e.adposition)) syntax_error(l.number, pcol + open + 1, "adposition contains whitespace");
      }
      if (e.target.empty() || has_whitespace(e.target)) syntax_error(l.number, pcol, "malformed tree name");
      lex.add(word, std::move(e));
    }
  }
  return lex;
}

inline std::string serialize_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& [word, entries] : lex.entries()) {
    out += word + " :";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out += (i ? ", " : " ") + entries[i].target;
      if (entries[i].adposition) out += "(adposition='" + *entries[i].adposition + "')";
    }
    out += "\n";
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Looks the name up as given, then in each directory of
// TAGFORGE_GRAMMAR_PATH (colon separated), then in the bundled data.
inline std::filesystem::path resolve_data_path(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("TAGFORGE_GRAMMAR_PATH")) {
    std::string_view s(env);
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto c = s.find(':', pos);
      if (c == std::string_view::npos) c = s.size();
      if (c > pos) dirs.emplace_back(std::string(s.substr(pos, c - pos)));
      pos = c + 1;
    }
  }
#ifdef TAGFORGE_DATA_DIR
  dirs.emplace_back(TAGFORGE_DATA_DIR);
#endif
  for (const auto& d : dirs)
    if (fs::exists(d / name)) return d / name;
  throw Error(Errc::io_error, "cannot find " + name);
}

inline ParsedGrammar load_grammar(const std::string& name) { return parse_grammar_text(read_file(resolve_data_path(name))); }
inline Lexicon load_lexicon(const std::string& name) { return parse_lexicon_text(read_file(resolve_data_path(name))); }

}  // namespace tagforge
