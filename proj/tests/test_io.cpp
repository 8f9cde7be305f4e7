#include <gtest/gtest.h>

#include "tagforge/tagforge.hpp"

using namespace tagforge;

namespace {

std::string syntax_message(const std::string& text) {
  try {
    (void)parse_grammar_text(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::syntax_error);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

}  // namespace

TEST(GrammarText, BundledFilesAreCanonical) {
  for (const char* f : {"english_basic.tag", "english_families.tag", "tamil_families.tag", "ambiguity_fixture.tag",
                        "count_anbncndn.tag"}) {
    const auto text = read_file(resolve_data_path(f));
    EXPECT_EQ(serialize_grammar(parse_grammar_text(text).grammar), text) << f;
  }
}

TEST(LexiconText, BundledFilesAreCanonical) {
  for (const char* f : {"english_basic.lex", "english_families.lex", "tamil_families.lex", "ambiguity_fixture.lex"}) {
    const auto text = read_file(resolve_data_path(f));
    EXPECT_EQ(serialize_lexicon(parse_lexicon_text(text)), text) << f;
  }
}

TEST(GrammarText, SerializeCanonicalizes) {
  const std::string messy =
      "# comment\nstart: S\n\n\ntree b : auxiliary\n  S{NA}\n    'a'\n    S*\n\ntree a : initial\n  S{SA: b}\n    ''\n";
  const auto g = parse_grammar_text(messy).grammar;
  const std::string canon = serialize_grammar(g);
  EXPECT_EQ(canon, "start: S\n\ntree a : initial\n  S{SA: b}\n    ''\n\ntree b : auxiliary\n  S{NA}\n    'a'\n    S*\n");
  EXPECT_EQ(serialize_grammar(parse_grammar_text(canon).grammar), canon);
}

TEST(GrammarText, CountingGrammarPrintsNull) {
  const auto text = serialize_grammar(load_grammar("count_anbncndn.tag").grammar);
  EXPECT_NE(text.find("  S{NA}\n"), std::string::npos);
  EXPECT_NE(text.find("S*{NA}"), std::string::npos);
}

TEST(GrammarText, ConstraintForms) {
  const std::string text =
      "start: S\n\ntree a : initial\n  S{OA}\n    X{OA: b,c}\n      'w'\n\ntree b : auxiliary\n  X{SA:}\n    X*\n\n"
      "tree c : auxiliary\n  X{SA: b}\n    X*{NA}\n";
  const auto pg = parse_grammar_text(text);
  EXPECT_EQ(pg.grammar.at("a").root().constraint, AdjConstraint::oa());
  EXPECT_EQ(pg.grammar.at("a").root().children[0].constraint, AdjConstraint::oa({"b", "c"}));
  EXPECT_EQ(pg.grammar.at("b").root().constraint, AdjConstraint::na());
  EXPECT_EQ(serialize_grammar(pg.grammar),
            "start: S\n\ntree a : initial\n  S{OA}\n    X{OA: b,c}\n      'w'\n\ntree b : auxiliary\n  X{SA:}\n    X*\n\n"
            "tree c : auxiliary\n  X{SA: b}\n    X*{NA}\n");
}

TEST(GrammarText, FamilyBlocksPrecedeTrees) {
  const auto text = serialize_grammar(load_grammar("tamil_families.tag").grammar);
  EXPECT_LT(text.find("family Tnx0V\n  direction: head-final"), text.find("tree alpha_N"));
  // head-final verb phrase: object before verb
  EXPECT_NE(text.find("      VP\n        NP!\n        V@\n"), std::string::npos);
}

TEST(GrammarText, TamilTokensSurvive) {
  const auto g = load_grammar("tamil_families.tag").grammar;
  const auto lex = load_lexicon("tamil_families.lex");
  const auto ts = select_trees(lex, "வைத்தான்", g);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_NE(serialize_tree_text(ts[0]).find("'மேல்'"), std::string::npos);
  EXPECT_NE(serialize_tree_text(ts[0]).find("V@ = வைத்தான்"), std::string::npos);
}

TEST(GrammarText, SyntaxErrorsCarryPosition) {
  EXPECT_NE(syntax_message("start: S\n\ntree a : initial\n  S\n      NP!\n").find("line 5"), std::string::npos);
  EXPECT_NE(syntax_message("start: S\ntree a : initial\n\tS\n").find("line 3"), std::string::npos);
  EXPECT_NE(syntax_message("start: S\n\ntree a : initial\n  S{XX}\n").find("column"), std::string::npos);
  syntax_message("start: S\n\ntree a : sometimes\n  S\n");
  syntax_message("start: S\n\ntree a : initial\n  S\n    'unterminated\n");
  syntax_message("tree a : initial\n  S\n    'x'\n");
  syntax_message("start: S\n\ntree a : initial\n  S\n    NP! = w\n");
}

TEST(GrammarText, DuplicateTreeName) {
  try {
    (void)parse_grammar_text("start: S\n\ntree a : initial\n  S\n    'x'\n\ntree a : initial\n  S\n    'y'\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::duplicate_tree_name);
  }
}

TEST(GrammarText, ValidationSurfacesInReport) {
  const auto pg = parse_grammar_text("start: S\n\ntree a : initial\n  S\n    'x'\n    S*\n");
  ASSERT_FALSE(pg.report.empty());
  EXPECT_EQ(pg.report[0].tree, "a");
}

TEST(LexiconText, EntriesAndAdpositions) {
  const auto lex = parse_lexicon_text("# words\nput : Tnx0Vnx1pnx2(adposition='on'), alpha_x\nsaw:alpha_saw\n");
  const auto* put = lex.find("put");
  ASSERT_NE(put, nullptr);
  ASSERT_EQ(put->size(), 2u);
  EXPECT_EQ((*put)[0].target, "Tnx0Vnx1pnx2");
  EXPECT_EQ((*put)[0].adposition, "on");
  EXPECT_EQ((*put)[1].target, "alpha_x");
  EXPECT_EQ(lex.find("saw")->at(0).target, "alpha_saw");
  EXPECT_THROW(parse_lexicon_text("put : F(adposition=on)\n"), Error);
  EXPECT_THROW(parse_lexicon_text("put F\n"), Error);
}

TEST(Files, MissingFileIsIoError) {
  try {
    (void)load_grammar("no_such_grammar.tag");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}
