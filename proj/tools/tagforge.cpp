// tagforge: validate grammars, parse sentences, instantiate tree families and
// convert context-free grammars.
//
// Exit status: 0 success, 1 clean negative (violations, no parse, languages
// differ), 2 usage or input error.

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tagforge/tagforge.hpp"

namespace {

using namespace tagforge;

struct ParseOptions {
  std::string grammar;
  std::string lexicon;
  std::string sentence;
  std::string input;
  std::string show = "all";
  bool all_parses = false;
  std::size_t max_parses = 0;
  std::size_t max_tree_uses = 0;
  std::string schedule = "serial";
};

struct FamilyOptions {
  std::string grammar = "english_families.tag";
  std::string family;
  std::string verb;
  std::string adposition;
  std::string direction;
};

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

std::vector<std::string> reject_invalid(const ParsedGrammar& pg) {
  std::vector<std::string> out;
  for (const auto& v : pg.report) out.push_back(v.str());
  return out;
}

int cmd_validate(const std::string& grammar_path, const std::string& lexicon_path) {
  auto pg = load_grammar(grammar_path);
  std::vector<std::string> lines;
  std::set<std::string> seen;
  auto add = [&](const ValidationReport& r) {
    for (const auto& v : r)
      if (seen.insert(v.str()).second) lines.push_back(v.str());
  };
  add(pg.report);
  std::optional<Lexicon> lex;
  if (!lexicon_path.empty()) {
    lex = load_lexicon(lexicon_path);
    add(check_lexicon(*lex, pg.grammar));
  }
  if (pg.grammar.lexicalized()) add(check_postulates(pg.grammar, lex ? &*lex : nullptr));
  for (const auto& l : lines) std::cout << l << "\n";
  if (!lines.empty()) return 1;
  std::cout << grammar_path << ": ok (" << pg.grammar.trees().size() << " trees, " << pg.grammar.families().size()
            << " families)\n";
  return 0;
}

void print_parse(const DerivationNode& d, const Grammar& g, const std::string& show, std::size_t index) {
  const bool all = show == "all";
  std::cout << "parse " << index << "\n";
  if (all || show == "derived") std::cout << "derived: " << bracketed(replay(d, g)) << "\n";
  if (all || show == "derivation") std::cout << "derivation:\n" << render_derivation(d);
  if (all || show == "deps") {
    std::cout << "deps:\n";
    try {
      for (const auto& r : dependencies(d, g)) std::cout << r.str() << "\n";
    } catch (const Error& e) {
      if (e.code() != Errc::missing_anchor) throw;
      std::cout << "(unavailable: " << e.what() << ")\n";
    }
  }
}

// Returns the number of parses found.
std::size_t parse_one(const Grammar& g, const Lexicon* lex, const std::string& sentence, const ParseOptions& o) {
  const Tokens tokens = split_tokens(sentence);
  const Grammar working = working_grammar(g, lex, tokens);
  ParseLimits limits;
  if (o.max_parses) limits.max_parses = o.max_parses;
  if (o.max_tree_uses) limits.max_tree_uses = o.max_tree_uses;
  limits.schedule = o.schedule == "parallel" ? Schedule::parallel : Schedule::serial;
  const auto forest = parse_all(working, tokens, limits);
  const std::size_t shown = o.all_parses ? forest.size() : std::min<std::size_t>(forest.size(), 1);
  for (std::size_t i = 0; i < shown; ++i) {
    print_parse(forest.derivations()[i], working, o.show, i + 1);
    std::cout << "\n";
  }
  std::cout << forest.size() << (forest.size() == 1 ? " parse" : " parses");
  if (forest.truncated()) std::cout << " (truncated at --max-parses " << o.max_parses << ")";
  std::cout << "\n";
  return forest.size();
}

int cmd_parse(const ParseOptions& o) {
  if (o.sentence.empty() == o.input.empty()) return fail("give exactly one of --sentence or --input");
  auto pg = load_grammar(o.grammar);
  if (auto v = reject_invalid(pg); !v.empty()) {
    for (const auto& l : v) std::cerr << l << "\n";
    return fail("grammar " + o.grammar + " is not valid");
  }
  std::optional<Lexicon> lex;
  if (!o.lexicon.empty()) lex = load_lexicon(o.lexicon);
  const Lexicon* lp = lex ? &*lex : nullptr;

  if (!o.sentence.empty()) return parse_one(pg.grammar, lp, o.sentence, o) > 0 ? 0 : 1;

  std::ifstream in(o.input);
  if (!in) return fail("io-error: cannot open " + o.input);
  std::string line;
  bool first = true, all_parsed = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_tokens(line).empty()) continue;
    if (!first) std::cout << "\n";
    first = false;
    std::cout << "sentence: " << line << "\n";
    if (parse_one(pg.grammar, lp, line, o) == 0) all_parsed = false;
  }
  return all_parsed ? 0 : 1;
}

int cmd_families(const FamilyOptions& o) {
  auto pg = load_grammar(o.grammar);
  const TreeFamily* f = pg.grammar.find_family(o.family);
  if (!f) return fail("unknown-tree: no family '" + o.family + "' in " + o.grammar);
  std::optional<std::string> adposition;
  if (!o.adposition.empty()) {
    if (f->needs_adposition()) adposition = o.adposition;
    else std::cerr << "warning: " << f->name << " takes no adposition; ignoring --adposition\n";
  }
  std::optional<HeadDirection> dir;
  if (!o.direction.empty()) dir = parse_head_direction(o.direction);
  const auto trees = instantiate_family(*f, o.verb, adposition, dir);
  std::cout << "start: " << pg.grammar.start() << "\n";
  for (const auto& t : trees) std::cout << "\n" << serialize_tree_text(t);
  return 0;
}

int cmd_cfg2tag(const std::string& path, std::size_t k) {
  const auto cfg = load_cfg(path);
  const Grammar g = cfg_to_ltag(cfg);
  std::cout << serialize_grammar(g);
  const auto cmp = language_equal_upto(cfg_language(cfg), tag_language(g), k);
  if (cmp) {
    std::cout << "\nlanguages equal up to length " << k << "\n";
    return 0;
  }
  std::cout << "\nlanguages differ: '" << join_tokens(*cmp.counterexample) << "' only in the "
            << (cmp.in_first ? "context-free grammar" : "tree-adjoining grammar") << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-adjoining grammar toolkit"};
  app.require_subcommand(1);

  std::string validate_positional, validate_grammar_opt, validate_lexicon;
  auto* validate = app.add_subcommand("validate", "Check a grammar (and lexicon) for well-formedness");
  validate->add_option("file", validate_positional, "Grammar file");
  validate->add_option("--grammar", validate_grammar_opt, "Grammar file");
  validate->add_option("--lexicon", validate_lexicon, "Lexicon file");

  ParseOptions po;
  auto* parse = app.add_subcommand("parse", "Parse a sentence or a file of sentences");
  parse->add_option("--grammar", po.grammar, "Grammar file")->required();
  parse->add_option("--lexicon", po.lexicon, "Lexicon file");
  parse->add_option("--sentence", po.sentence, "Sentence, tokens separated by whitespace");
  parse->add_option("--input", po.input, "File with one sentence per line");
  parse->add_option("--show", po.show, "What to print per parse")
      ->check(CLI::IsMember({"derived", "derivation", "deps", "all"}));
  parse->add_flag("--all-parses", po.all_parses, "Print every parse, not just the first");
  parse->add_option("--max-parses", po.max_parses, "Stop after this many parses (0 = no limit)");
  parse->add_option("--max-tree-uses", po.max_tree_uses, "Bound on elementary trees per derivation (0 = automatic)");
  parse->add_option("--schedule", po.schedule, "Agenda schedule")->check(CLI::IsMember({"serial", "parallel"}));

  FamilyOptions fo;
  auto* families = app.add_subcommand("families", "Instantiate a tree family for a verb");
  families->add_option("family", fo.family, "Family name")->required();
  families->add_option("--grammar", fo.grammar, "Grammar file containing the family");
  families->add_option("--verb", fo.verb, "Verb anchoring the trees")->required();
  families->add_option("--adposition", fo.adposition, "Co-anchor for families with an adpositional phrase");
  families->add_option("--direction", fo.direction, "Head direction")
      ->check(CLI::IsMember({"head-initial", "head-final"}));

  std::string cfg_path;
  std::size_t k = 10;
  auto* cfg2tag = app.add_subcommand("cfg2tag", "Convert a context-free grammar and compare languages");
  cfg2tag->add_option("cfg", cfg_path, "CFG file")->required();
  cfg2tag->add_option("--max-length", k, "Compare languages up to this length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      if (validate_positional.empty() == validate_grammar_opt.empty())
        return fail("give the grammar either positionally or with --grammar");
      return cmd_validate(validate_positional.empty() ? validate_grammar_opt : validate_positional, validate_lexicon);
    }
    if (*parse) return cmd_parse(po);
    if (*families) return cmd_families(fo);
    if (*cfg2tag) return cmd_cfg2tag(cfg_path, k);
  } catch (const Error& e) {
    return fail(e.what());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return 2;
}
