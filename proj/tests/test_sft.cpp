#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

using namespace symtherm;
using oracle::gold;

namespace {
Word w(const Sft& s, const char* t) { return s.parse_word(t); }
ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kValidation;
}
}  // namespace

TEST_CASE("is_admissible on GOLD") {
  const Sft g = gold();
  CHECK_FALSE(is_admissible(w(g, "11"), g));
  CHECK(is_admissible(w(g, "010"), g));
  CHECK(is_admissible(Word{}, g));
  CHECK(is_admissible(Word{1}, g));
  CHECK(kind_of([&] { is_admissible(Word{0, 2}, g); }) == ErrorKind::kValidation);
}

TEST_CASE("cyclic admissibility") {
  const Sft g = gold();
  CHECK_FALSE(is_cyclically_admissible(w(g, "1"), g));
  CHECK(is_cyclically_admissible(w(g, "01"), g));
  CHECK(kind_of([&] { is_cyclically_admissible(Word{}, g); }) == ErrorKind::kValidation);
  const Sft f = Sft::full(2);
  for (const auto& x : oracle::brute_words(f, 5)) CHECK(is_cyclically_admissible(x, f));
}

TEST_CASE("mixing") {
  CHECK(is_mixing(Sft::full(2)));
  CHECK(is_mixing(gold()));
  CHECK_FALSE(is_mixing(Sft({"0", "1"}, {{0, 1}, {1, 0}})));
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.4);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 5;
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& r : inc) {
      for (auto& x : r) x = coin(rng);
      if (std::count(r.begin(), r.end(), 1) == 0) r[static_cast<std::size_t>(t % n)] = 1;
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    const Sft s(names, inc);
    CHECK(is_mixing(s) == oracle::primitive(s));
  }
}

TEST_CASE("empty incidence row rejected") {
  CHECK(kind_of([] { Sft({"0", "1"}, {{1, 1}, {0, 0}}); }) == ErrorKind::kValidation);
}

TEST_CASE("connecting words") {
  const InfixSet r2 = connecting_words(Sft::full(2));
  CHECK(r2.norm() == 0);
  const Sft g = gold();
  const InfixSet rg = connecting_words(g);
  CHECK(rg(1, 1) == w(g, "0"));
  CHECK(rg(0, 1).empty());
  CHECK(kind_of([] { connecting_words(Sft({"0", "1"}, {{0, 1}, {1, 0}})); }) == ErrorKind::kUnsupportedSpec);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const Sft s = oracle::random_mixing_sft(rng, 2 + t % 4, 0.35);
    const InfixSet r = connecting_words(s);
    for (Symbol a = 0; a < s.size(); ++a) {
      for (Symbol b = 0; b < s.size(); ++b) {
        const Word& rho = r(a, b);
        Word full{a};
        full.insert(full.end(), rho.begin(), rho.end());
        full.push_back(b);
        CHECK(is_admissible(full, s));
        // nothing shorter works
        if (!rho.empty()) {
          for (const auto& c : oracle::brute_words(s, static_cast<int>(rho.size()) - 1)) {
            Word x{a};
            x.insert(x.end(), c.begin(), c.end());
            x.push_back(b);
            CHECK_FALSE(is_admissible(x, s));
          }
          if (rho.size() == 1) CHECK_FALSE(s.allowed(a, b));
        }
      }
    }
  }
}

TEST_CASE("mixing window") {
  CHECK(mixing_window(Sft::full(2)) == 2);
  CHECK(mixing_window(gold()) == 3);
  CHECK(mixing_window(Sft({"x"}, {{1}})) == 2);
  CHECK(kind_of([] { mixing_window(Sft({"0", "1"}, {{0, 1}, {1, 0}})); }) == ErrorKind::kUnsupportedSpec);
}

TEST_CASE("enumerate_words") {
  const Sft g = gold();
  const auto two = enumerate_words(g, 2);
  CHECK(two == std::vector<Word>{w(g, "00"), w(g, "01"), w(g, "10")});
  CHECK(enumerate_words(Sft::full(2), 3).size() == 8);
  CHECK(enumerate_words(g, 5).size() == 13);
  CHECK(enumerate_words(g, 0).size() == 1);
  // Fibonacci counts and agreement with brute force
  std::size_t prev = 1, cur = 2;  // counts at n-1 and n
  for (int n = 1; n <= 12; ++n) {
    const auto words = enumerate_words(g, n);
    CHECK(words.size() == cur);
    const auto next = prev + cur;
    prev = cur;
    cur = next;
    std::vector<Word> brute;
    for (const auto& x : oracle::brute_words(Sft::full(2), n))
      if (is_admissible(x, g)) brute.push_back(x);
    CHECK(words == brute);
  }
  CHECK(kind_of([] { enumerate_words(Sft::full(2), 20, Limits{1000}); }) == ErrorKind::kCapacity);
}

TEST_CASE("word_power") {
  const Sft f = Sft::full(2);
  CHECK(word_power(w(f, "01"), 3, f) == w(f, "010101"));
  CHECK(word_power(w(f, "01"), 0, f).empty());
  CHECK(kind_of([] { const Sft g = gold(); word_power(Word{1}, 2, g); }) == ErrorKind::kValidation);
}

TEST_CASE("higher block recoding") {
  const HigherBlock id(Sft::full(2), 2);
  CHECK(id.spec() == Sft::full(2));
  const HigherBlock g3(gold(), 3);
  CHECK(g3.states() == 3);
  int edges = 0;
  for (Symbol u = 0; u < g3.states(); ++u) edges += static_cast<int>(g3.spec().successors(u).size());
  CHECK(edges == 5);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Sft s = oracle::random_mixing_sft(rng, 2 + t % 3);
    for (int d = 2; d <= 4; ++d) {
      const HigherBlock hb(s, d);
      for (int n = d - 1; n <= 7; ++n) {
        const auto base = enumerate_words(s, n);
        CHECK(base.size() == enumerate_words(hb.spec(), n - d + 2).size());
        for (const auto& x : base) {
          const Word e = hb.encode(x);
          CHECK(e.size() == static_cast<std::size_t>(n - d + 2));
          CHECK(hb.decode(e) == x);
        }
      }
      for (const auto& e : enumerate_words(hb.spec(), 6)) CHECK(hb.encode(hb.decode(e)) == e);
    }
  }
}

TEST_CASE("junction lookup decides concatenation") {
  const Sft g = gold();
  const auto ws = enumerate_words(g, 3);
  for (const auto& a : ws)
    for (const auto& b : ws) CHECK(is_admissible(concat({a, b}), g) == g.allowed(a.back(), b.front()));
}

TEST_CASE("names and parsing") {
  const Sft s({"up", "down"}, {{1, 1}, {1, 1}});
  const Word x = s.parse_word("up down down");
  CHECK(x == Word{0, 1, 1});
  CHECK(s.parse_word(s.format(x)) == x);
  CHECK(kind_of([&] { s.parse_word("up left"); }) == ErrorKind::kValidation);
  const Sft g = gold();
  CHECK(g.format(g.parse_word("0100")) == "0100");
}
