// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/brute_force.hpp"
#include "oracle/corpus.hpp"
#include "oracle/random_trees.hpp"
#include "tagforge/tagforge.hpp"

using namespace tagforge;

namespace {

constexpr double kReferenceSeconds = 1.0;
constexpr double kCountingSeconds = 30.0;
constexpr double kConversionSeconds = 10.0;
constexpr double kComplexitySeconds = 10.0;
constexpr double kMaxSlope = 6.5;
constexpr std::size_t kBlockMax = 6;
constexpr std::size_t kOracleMaxTokens = 12;
constexpr std::size_t kOracleDepth = 8;
constexpr std::size_t kConversionLength = 10;
constexpr std::size_t kPropertyCases = 1000;
constexpr int kConcurrencyRuns = 20;

const char* kReference = "yesterday a man saw Mary";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

Grammar working(const std::string& grammar, const std::optional<std::string>& lexicon, const Tokens& tokens) {
  auto g = load_grammar(grammar).grammar;
  if (!lexicon) return g;
  auto lex = load_lexicon(*lexicon);
  return working_grammar(g, &lex, tokens);
}

Outcome ac1() {
  Outcome o;
  const auto t0 = Clock::now();
  const Tokens tokens = split_tokens(kReference);
  const Grammar g = working("english_basic.tag", "english_basic.lex", tokens);
  const auto forest = parse_all(g, tokens);
  const double secs = seconds_since(t0);
  o.check(forest.size() == 1, "expected 1 derivation, got " + std::to_string(forest.size()));
  if (!o.ok) return o;
  const auto& d = forest.derivations()[0];
  o.check(d.tree_name == "alpha_saw" && d.op == DerivationOp::root, "root is " + d.tree_name);
  std::map<std::string, const DerivationNode*> by_tree;
  for (const auto& c : d.children) by_tree[c.tree_name] = &c;
  auto site_is = [&](const std::string& tree, const std::string& site, DerivationOp op) {
    auto it = by_tree.find(tree);
    return it != by_tree.end() && it->second->site && it->second->site->str() == site && it->second->op == op;
  };
  o.check(d.children.size() == 3, "root has " + std::to_string(d.children.size()) + " children");
  o.check(site_is("beta_yesterday", "0", DerivationOp::adjunction), "beta_yesterday not adjoined at 0");
  o.check(site_is("alpha_man", "1", DerivationOp::substitution), "alpha_man not substituted at 1");
  o.check(site_is("alpha_Mary", "2.2", DerivationOp::substitution), "alpha_Mary not substituted at 2.2");
  if (o.ok) {
    const auto& man = *by_tree["alpha_man"];
    o.check(man.children.size() == 1 && man.children[0].tree_name == "alpha_a", "alpha_man lacks alpha_a");
    if (o.ok) {
      // The determiner slot is whatever substitution site alpha_man has.
      const auto sites = g.at("alpha_man").substitution_sites();
      o.check(sites.size() == 1 && man.children[0].site == sites[0], "alpha_a not at the determiner slot");
    }
  }
  o.check(validate_derivation(d, g).empty(), "derivation does not validate");
  o.check(yield_terminals(replay(d, g)) == tokens, "replayed yield differs from input");
  o.check(secs < kReferenceSeconds, "took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = std::to_string(secs) + " s";
  return o;
}

Outcome ac2() {
  Outcome o;
  const Tokens tokens = split_tokens(kReference);
  const Grammar g = working("english_basic.tag", "english_basic.lex", tokens);
  const auto forest = parse_all(g, tokens);
  o.check(forest.size() == 1, "expected 1 derivation");
  if (!o.ok) return o;
  std::vector<std::string> lines;
  for (const auto& r : dependencies(forest.derivations()[0], g)) lines.push_back(r.str());
  const std::vector<std::string> want{"saw <- man@1, Mary@2.2 | yesterday@0", "yesterday <- |", "man <- a@1 |",
                                      "a <- |", "Mary <- |"};
  o.check(lines == want, "got '" + (lines.empty() ? "" : lines[0]) + "'");
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = Clock::now();
  const Grammar g = load_grammar("count_anbncndn.tag").grammar;
  std::size_t cases = 0, accepted = 0;
  for (std::size_t i = 0; i <= kBlockMax; ++i)
    for (std::size_t j = 0; j <= kBlockMax; ++j)
      for (std::size_t k = 0; k <= kBlockMax; ++k)
        for (std::size_t l = 0; l <= kBlockMax; ++l) {
          const Tokens t = oracle::blocks(i, j, k, l);
          const bool got = recognize(g, t), want = oracle::is_anbncndn(t);
          ++cases;
          accepted += got;
          std::ostringstream s;
          s << "a^" << i << " b^" << j << " c^" << k << " d^" << l << (want ? " rejected" : " accepted");
          o.check(got == want, s.str());
        }
  const double secs = seconds_since(t0);
  o.check(cases == 2401, "ran " + std::to_string(cases) + " cases");
  o.check(secs < kCountingSeconds, "took " + std::to_string(secs) + " s");
  if (o.ok) o.detail = std::to_string(cases) + " cases, " + std::to_string(accepted) + " accepted, " + std::to_string(secs) + " s";
  return o;
}

Outcome ac4() {
  Outcome o;
  std::size_t sentences = 0, derivations = 0;
  for (const auto& c : oracle::corpus()) {
    for (const auto& s : c.sentences) {
      const Tokens tokens = split_tokens(s);
      if (tokens.size() > kOracleMaxTokens) continue;
      const Grammar g = working(c.grammar, c.lexicon, tokens);
      const auto chart = oracle::renderings(parse_all(g, tokens));
      const auto brute = oracle::enumerate_brute_force(g, tokens, kOracleDepth);
      ++sentences;
      derivations += chart.size();
      o.check(chart == brute, c.grammar + ": '" + s + "' chart " + std::to_string(chart.size()) + " vs oracle " +
                                  std::to_string(brute.size()));
    }
  }
  if (o.ok) o.detail = std::to_string(sentences) + " sentences, " + std::to_string(derivations) + " derivations";
  return o;
}

Outcome ac5() {
  Outcome o;
  const Tokens tokens = split_tokens(oracle::kAmbiguousSentence);
  const Grammar g = working("ambiguity_fixture.tag", "ambiguity_fixture.lex", tokens);
  const auto n = parse_all(g, tokens).size();
  o.check(n == 2, "got " + std::to_string(n) + " derivations");
  return o;
}

Outcome ac6() {
  Outcome o;
  std::ostringstream detail;
  for (const char* file : {"anbn.cfg", "arithmetic.cfg"}) {
    const auto t0 = Clock::now();
    const auto cfg = load_cfg(file);
    const auto cmp = language_equal_upto(cfg_language(cfg), tag_language(cfg_to_ltag(cfg)), kConversionLength);
    const double secs = seconds_since(t0);
    o.check(static_cast<bool>(cmp), std::string(file) + " differs on '" +
                                         (cmp.counterexample ? join_tokens(*cmp.counterexample) : "") + "'");
    o.check(secs < kConversionSeconds, std::string(file) + " took " + std::to_string(secs) + " s");
    detail << file << " " << secs << " s ";
  }
  if (o.ok) o.detail = detail.str();
  return o;
}

Outcome ac7() {
  Outcome o;
  auto count = [](const std::string& grammar, const std::string& lexicon, const std::string& s) {
    const Tokens t = split_tokens(s);
    return parse_all(working(grammar, lexicon, t), t).size();
  };
  o.check(count("tamil_families.tag", "tamil_families.lex", "ராமன் பழம் சாப்பிட்டான்") >= 1, "Tamil SOV not parsed");
  o.check(count("tamil_families.tag", "tamil_families.lex", "ராமன் சாப்பிட்டான் பழம்") == 0, "Tamil SVO parsed");
  o.check(count("english_families.tag", "english_families.lex", "Al ate an apple") >= 1, "English SVO not parsed");
  o.check(count("english_families.tag", "english_families.lex", "Al an apple ate") == 0, "English SOV parsed");
  return o;
}

Outcome ac8() {
  Outcome o;
  oracle::TreeGen gen(8u);
  std::size_t adjoin_cases = 0, subst_cases = 0, refusals = 0;
  while (adjoin_cases < kPropertyCases) {
    auto host = gen.initial("alpha", 4);
    auto aux = gen.auxiliary(gen.aux_name(), gen.label(), 3);
    const auto addrs = host.addresses();
    const auto site = gen.pick(addrs);
    ++adjoin_cases;
    const std::string expected = oracle::expected_refusal(host.node_at(site), aux.root().label.text, aux.name());
    const auto chk = can_adjoin(WorkTree(host), site, aux);
    if (!expected.empty()) {
      ++refusals;
      o.check(!chk && chk.reason == expected, "expected refusal '" + expected + "', got '" + chk.reason + "'");
      bool threw = false;
      try {
        (void)adjoin(WorkTree(host), site, aux);
      } catch (const Error&) {
        threw = true;
      }
      o.check(threw, "refused adjunction did not throw");
      continue;
    }
    o.check(static_cast<bool>(chk), "allowed adjunction refused: " + chk.reason);
    if (!chk) continue;
    const auto out = adjoin(WorkTree(host), site, aux);
    o.check(out.size() == host.size() + aux.size() - 1, "adjunction node count");
    auto [left, right] = oracle::yield_around(host.root(), site);
    const auto inner = yield_terminals(host.node_at(site));
    const auto ay = tree_yield(aux.root());
    const auto split = ay.tokens.begin() + static_cast<std::ptrdiff_t>(*ay.foot_position);
    Tokens expect = left;
    expect.insert(expect.end(), ay.tokens.begin(), split);
    expect.insert(expect.end(), inner.begin(), inner.end());
    expect.insert(expect.end(), split, ay.tokens.end());
    expect.insert(expect.end(), right.begin(), right.end());
    o.check(yield_terminals(out) == expect, "adjunction yield splice");
  }
  while (subst_cases < kPropertyCases) {
    auto host = gen.initial("alpha", 4);
    if (host.substitution_sites().empty()) continue;
    const auto site = gen.pick(host.substitution_sites());
    auto arg = gen.initial_rooted("arg", host.node_at(site).label.text, 3);
    ++subst_cases;
    const auto out = substitute(WorkTree(host), site, arg);
    o.check(out.size() == host.size() + arg.size() - 1, "substitution node count");
  }
  o.check(refusals > 0, "no constraint violations generated");
  if (o.ok)
    o.detail = std::to_string(adjoin_cases) + " adjunctions (" + std::to_string(refusals) + " refused), " +
               std::to_string(subst_cases) + " substitutions";
  return o;
}

Outcome ac9() {
  Outcome o;
  const Tokens tokens = split_tokens(oracle::kAmbiguousSentence);
  const Grammar g = working("ambiguity_fixture.tag", "ambiguity_fixture.lex", tokens);
  ParseLimits serial_limits, parallel_limits;
  parallel_limits.schedule = Schedule::parallel;
  parallel_limits.threads = 4;
  const std::string serial = parse_all(g, tokens, serial_limits).canonical_text();
  for (int r = 0; r < kConcurrencyRuns; ++r) {
    const std::string par = parse_all(g, tokens, parallel_limits).canonical_text();
    o.check(par == serial, "run " + std::to_string(r) + " differs");
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  const Grammar g = load_grammar("count_anbncndn.tag").grammar;
  std::vector<double> xs, ys;
  std::ostringstream detail;
  double last_secs = 0;
  for (std::size_t n : {8u, 16u, 24u, 32u}) {
    const auto t0 = Clock::now();
    const std::size_t q = n / 4;
    const auto items = chart_item_count(g, oracle::blocks(q, q, q, q));
    last_secs = seconds_since(t0);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(static_cast<double>(items)));
    detail << "n=" << n << ":" << items << " ";
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  detail << "slope " << slope << ", n=32 " << last_secs << " s";
  o.check(slope <= kMaxSlope, "slope " + std::to_string(slope));
  o.check(last_secs < kComplexitySeconds, "n=32 took " + std::to_string(last_secs) + " s");
  o.detail = detail.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 reference derivation", ac1},      {"AC2 dependency records", ac2},
      {"AC3 counting language", ac3},         {"AC4 oracle equivalence", ac4},
      {"AC5 two-way ambiguity", ac5},         {"AC6 CFG conversion languages", ac6},
      {"AC7 head direction", ac7},            {"AC8 composition properties", ac8},
      {"AC9 schedule determinism", ac9},      {"AC10 chart growth", ac10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.ok;
    std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << name << (o.detail.empty() ? "" : ": " + o.detail) << std::endl;
  }
  return failures ? 1 : 0;
}
