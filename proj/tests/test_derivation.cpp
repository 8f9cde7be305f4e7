#include <gtest/gtest.h>

#include "tagforge/tagforge.hpp"

using namespace tagforge;

namespace {

const char* kReference =
    "alpha_saw@root\n"
    "  beta_yesterday@0\n"
    "  alpha_man@1\n"
    "    alpha_a@1\n"
    "  alpha_Mary@2.2\n";

Grammar basic() { return load_grammar("english_basic.tag").grammar; }

std::vector<std::string> rules(const DerivationNode& d, const Grammar& g) {
  std::vector<std::string> out;
  for (const auto& v : validate_derivation(d, g)) out.push_back(v.rule);
  return out;
}

}  // namespace

TEST(Derivation, RenderParseRoundTrip) {
  auto g = basic();
  auto d = parse_derivation_text(kReference, g);
  EXPECT_EQ(render_derivation(d), kReference);
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.edge_count(), 4u);
  EXPECT_EQ(d.children[0].op, DerivationOp::adjunction);
  EXPECT_EQ(d.children[1].op, DerivationOp::substitution);
}

TEST(Derivation, RenderingSortsChildrenBySite) {
  auto g = basic();
  auto d = parse_derivation_text(
      "alpha_saw@root\n  alpha_Mary@2.2\n  alpha_man@1\n    alpha_a@1\n  beta_yesterday@0\n", g);
  EXPECT_EQ(render_derivation(d), kReference);
}

TEST(Derivation, ValidReferenceReplaysToSentence) {
  auto g = basic();
  auto d = parse_derivation_text(kReference, g);
  EXPECT_TRUE(validate_derivation(d, g).empty());
  auto t = replay(d, g);
  EXPECT_EQ(join_tokens(yield_terminals(t)), "yesterday a man saw Mary");
  EXPECT_EQ(bracketed(t), "(S (Ad yesterday) (S (NP (Det a) (N man)) (VP (V saw) (NP (N Mary)))))");
}

TEST(Derivation, ReplayOrderIndependentOfChildOrder) {
  auto g = basic();
  auto d = parse_derivation_text(kReference, g);
  auto shuffled = d;
  std::reverse(shuffled.children.begin(), shuffled.children.end());
  EXPECT_EQ(replay(d, g), replay(shuffled, g));
}

TEST(Derivation, UnfilledSite) {
  auto g = basic();
  auto d = parse_derivation_text("alpha_saw@root\n  alpha_Mary@2.2\n", g);
  auto rs = rules(d, g);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0], "unfilled substitution site 1");
}

TEST(Derivation, Violations) {
  auto g = basic();
  EXPECT_FALSE(rules(parse_derivation_text("alpha_Mary@root\n", g), g).empty());  // NP-rooted
  auto wrong_site = parse_derivation_text("alpha_saw@root\n  alpha_Mary@2\n  alpha_man@1\n    alpha_a@1\n", g);
  EXPECT_FALSE(rules(wrong_site, g).empty());
  auto dup = parse_derivation_text(
      "alpha_saw@root\n  alpha_Mary@1\n  alpha_Mary@2.2\n  beta_yesterday@0\n  beta_yesterday@0\n", g);
  auto rs = rules(dup, g);
  EXPECT_NE(std::find(rs.begin(), rs.end(), "duplicate site"), rs.end());
  auto out_of_range = parse_derivation_text("alpha_saw@root\n  alpha_Mary@1\n  alpha_Mary@2.2\n  beta_yesterday@7\n", g);
  rs = rules(out_of_range, g);
  EXPECT_NE(std::find(rs.begin(), rs.end(), "site out of range"), rs.end());
}

TEST(Derivation, UnknownTreeInText) {
  auto g = basic();
  EXPECT_THROW(parse_derivation_text("alpha_saw@root\n  nope@1\n", g), Error);
  EXPECT_THROW(parse_derivation_text("  alpha_saw@root\n", g), Error);
}

TEST(Dependencies, ReferenceRecords) {
  auto g = basic();
  auto deps = dependencies(parse_derivation_text(kReference, g), g);
  ASSERT_EQ(deps.size(), 5u);
  EXPECT_EQ(deps[0].str(), "saw <- man@1, Mary@2.2 | yesterday@0");
  EXPECT_EQ(deps[2].str(), "man <- a@1 |");
  EXPECT_EQ(deps[1].str(), "yesterday <- |");
}

TEST(Dependencies, MissingAnchor) {
  auto g = load_grammar("count_anbncndn.tag").grammar;
  auto d = parse_derivation_text("alpha@root\n  beta@0\n", g);
  try {
    (void)dependencies(d, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::missing_anchor);
  }
}
