#include <gtest/gtest.h>

#include <unordered_set>

#include "tagforge/gorn.hpp"

using tagforge::Errc;
using tagforge::Error;
using tagforge::GornAddress;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Gorn, RootSpelledZero) {
  EXPECT_TRUE(GornAddress::parse("0").is_root());
  EXPECT_EQ(GornAddress::root().str(), "0");
  EXPECT_EQ(GornAddress::root().depth(), 0u);
}

TEST(Gorn, LeadingZeroIsOptional) {
  EXPECT_EQ(GornAddress::parse("0.2.1"), GornAddress::parse("2.1"));
  EXPECT_EQ(GornAddress::parse("0.2.1").str(), "2.1");
}

TEST(Gorn, ChildAndParent) {
  auto a = GornAddress::parse("2");
  EXPECT_EQ(a.child(2).str(), "2.2");
  EXPECT_EQ(a.child(2).parent(), a);
  EXPECT_EQ(a.parent(), GornAddress::root());
  EXPECT_EQ(a.child(2).last(), 2u);
}

TEST(Gorn, RootHasNoParent) {
  EXPECT_EQ(code_of([] { (void)GornAddress::root().parent(); }), Errc::invalid_address);
}

TEST(Gorn, Malformed) {
  for (const char* s : {"", "1..2", "a", "1.0", "1.", ".1", "-1"})
    EXPECT_EQ(code_of([&] { (void)GornAddress::parse(s); }), Errc::invalid_address) << s;
  EXPECT_EQ(code_of([] { (void)GornAddress::root().child(0); }), Errc::invalid_address);
}

TEST(Gorn, PrefixAndSuffix) {
  auto a = GornAddress::parse("2");
  auto b = GornAddress::parse("2.1.3");
  EXPECT_TRUE(a.is_prefix_of(b));
  EXPECT_TRUE(GornAddress::root().is_prefix_of(b));
  EXPECT_FALSE(b.is_prefix_of(a));
  EXPECT_EQ(b.suffix_after(a).str(), "1.3");
  EXPECT_EQ(a.concat(GornAddress::parse("1.3")), b);
}

TEST(Gorn, OrderingIsPathLexicographic) {
  std::vector<GornAddress> v{GornAddress::parse("2.2"), GornAddress::parse("1"), GornAddress::root(),
                             GornAddress::parse("2"), GornAddress::parse("10")};
  std::sort(v.begin(), v.end());
  std::vector<std::string> s;
  for (const auto& a : v) s.push_back(a.str());
  EXPECT_EQ(s, (std::vector<std::string>{"0", "1", "2", "2.2", "10"}));
}

TEST(Gorn, Hashable) {
  std::unordered_set<GornAddress> set{GornAddress::parse("1.2"), GornAddress::parse("0.1.2")};
  EXPECT_EQ(set.size(), 1u);
}
