#include <algorithm>
#include <map>
#include <set>

#include <stdexcept>
#include "doctest.h"
#include "prefnet/prefmath.hpp"

using namespace prefnet;

namespace {

Preference pref(std::initializer_list<int> ids) {
  std::vector<Alt> v;
  for (int x : ids) v.push_back(static_cast<Alt>(x));
  return Preference(std::move(v));
}

Preference reversed(const Preference& p) {
  std::vector<Alt> v(p.order().rbegin(), p.order().rend());
  return Preference(std::move(v));
}

Preference random_pref(int r, Rng& rng) {
  std::vector<Alt> v(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = static_cast<Alt>(i);
  for (int i = 0; i < r; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(r - i)));
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  return Preference(std::move(v));
}

}  // namespace

TEST_SUITE("prefmath") {

TEST_CASE("kendall tau worked example and bounds") {
  // alternatives X=0, Y=1, Z=2: two pairs {X,Y}, {X,Z} invert
  const auto p = pref({0, 1, 2});
  const auto q = pref({1, 2, 0});
  CHECK(kendall_tau(p, q) == 2);
  CHECK(norm_kt(p, q) == doctest::Approx(2.0 / 3.0));
  CHECK(kendall_tau(p, p) == 0);

  const auto five = pref({0, 1, 2, 3, 4});
  CHECK(kendall_tau(five, reversed(five)) == 10);
  CHECK(norm_kt(five, reversed(five)) == 1.0);

  CHECK_THROWS_AS(kendall_tau(p, five), std::domain_error);
}

TEST_CASE("footrule worked example and normalization") {
  // A=0 ... E=4
  const auto p = pref({0, 1, 2, 3, 4});
  const auto q = pref({1, 4, 2, 0, 3});
  CHECK(footrule(p, q) == doctest::Approx(2.0 / 3.0));
  CHECK(1.0 - footrule(p, q) == doctest::Approx(1.0 / 3.0));
  CHECK(footrule(p, p) == 0.0);
  CHECK(footrule(p, reversed(p)) == 1.0);  // raw distance 12 = 2*ceil(5/2)*floor(5/2)
  CHECK_THROWS_AS(footrule(p, pref({0, 1, 2})), std::domain_error);
}

TEST_CASE("preference parsing and validation") {
  const auto p = Preference::from_string("2>0>1>3>4");
  CHECK(p.order() == std::vector<Alt>{2, 0, 1, 3, 4});
  CHECK(p.to_string() == "2>0>1>3>4");
  CHECK_THROWS_AS(Preference::from_string("0>0>1"), std::domain_error);
  CHECK_THROWS_AS(Preference::from_string("0>3"), std::domain_error);
  CHECK_THROWS_AS(Preference::from_string("0"), std::domain_error);
  CHECK_THROWS_AS(Preference::from_string("a>b"), std::domain_error);
}

TEST_CASE("mahonian counts against brute force") {
  const auto all3 = all_preferences(3);
  const auto base = pref({0, 1, 2});
  std::map<int, int> brute;
  for (const auto& q : all3) ++brute[kendall_tau(base, q)];
  CHECK(brute[0] == 1);
  CHECK(brute[1] == 2);
  CHECK(brute[2] == 2);
  CHECK(brute[3] == 1);
  for (int k = 0; k <= 3; ++k)
    CHECK(count_at_distance(3, k) == static_cast<std::uint64_t>(brute[k]));

  CHECK(count_at_distance(5, 1) == 4);
  CHECK(count_at_distance(7, 0) == 1);

  for (int r = 2; r <= 7; ++r) {
    std::uint64_t total = 0;
    std::uint64_t fact = 1;
    for (int i = 2; i <= r; ++i) fact *= static_cast<std::uint64_t>(i);
    for (int k = 0; k <= max_raw_distance(r); ++k) {
      total += count_at_distance(r, k);
      CHECK(count_at_distance(r, k) ==
            count_at_distance(r, max_raw_distance(r) - k));
    }
    CHECK(total == fact);
  }
  CHECK_THROWS_AS(count_at_distance(5, 11), std::domain_error);
  CHECK_THROWS_AS(count_at_distance(5, -1), std::domain_error);
}

TEST_CASE("sample_at_distance hits the distance and is uniform") {
  Rng rng(101);
  const auto base = pref({3, 1, 4, 0, 2});
  CHECK(sample_at_distance(base, 0, rng) == base);

  // r=5, k=1: exactly the 4 adjacent transpositions of the base
  std::set<std::string> seen;
  for (int i = 0; i < 4000; ++i) {
    const auto q = sample_at_distance(base, 1, rng);
    CHECK(kendall_tau(base, q) == 1);
    seen.insert(q.to_string());
  }
  CHECK(seen.size() == 4);

  // r=4, k=3: uniform over the 6 enumerated targets within 3 sigma
  const auto base4 = pref({0, 1, 2, 3});
  std::map<std::string, int> freq;
  std::set<std::string> targets;
  for (const auto& q : all_preferences(4))
    if (kendall_tau(base4, q) == 3) targets.insert(q.to_string());
  CHECK(targets.size() == count_at_distance(4, 3));
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto q = sample_at_distance(base4, 3, rng);
    CHECK(kendall_tau(base4, q) == 3);
    ++freq[q.to_string()];
  }
  const double p = 1.0 / static_cast<double>(targets.size());
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& t : targets) {
    CHECK(freq[t] > draws * p - 3 * sigma);
    CHECK(freq[t] < draws * p + 3 * sigma);
  }
  CHECK_THROWS_AS(sample_at_distance(base, 11, rng), std::domain_error);
}

TEST_CASE("random samples verify the distance contract across r") {
  Rng rng(55);
  for (int r : {3, 6, 8, 12}) {
    const auto base = random_pref(r, rng);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_raw_distance(r) + 1)));
      CHECK(kendall_tau(base, sample_at_distance(base, k, rng)) == k);
    }
  }
}

TEST_CASE("metric properties on random triples") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_pref(5, rng);
    const auto b = random_pref(5, rng);
    const auto c = random_pref(5, rng);
    CHECK(norm_kt(a, b) == norm_kt(b, a));
    CHECK(footrule(a, b) == footrule(b, a));
    CHECK((norm_kt(a, b) == 0.0) == (a == b));
    CHECK(norm_kt(a, c) <= norm_kt(a, b) + norm_kt(b, c) + 1e-12);
    CHECK(footrule(a, c) <= footrule(a, b) + footrule(b, c) + 1e-12);
  }
}

TEST_CASE("all_preferences enumeration and guards") {
  CHECK(all_preferences(3).size() == 6);
  const auto all5 = all_preferences(5);
  CHECK(all5.size() == 120);
  CHECK(std::set<Preference>(all5.begin(), all5.end()).size() == 120);
  CHECK_THROWS_AS(all_preferences(1), std::domain_error);
  CHECK_THROWS_AS(all_preferences(9), std::length_error);
}

TEST_CASE("rank and unrank round trip in lexicographic order") {
  const auto all4 = all_preferences(4);
  for (std::uint32_t i = 0; i < all4.size(); ++i) {
    CHECK(perm_rank(all4[i].order()) == i);
    Alt out[8];
    perm_unrank(4, i, out);
    CHECK(std::equal(out, out + 4, all4[i].order().begin()));
  }
}

TEST_CASE("PermSpace distance table agrees with kendall_tau") {
  const auto& space = PermSpace::get(4);
  const auto all4 = all_preferences(4);
  for (std::uint32_t a = 0; a < space.count(); ++a)
    for (std::uint32_t b = 0; b < space.count(); ++b)
      CHECK(space.distance(a, b) == kendall_tau(all4[a], all4[b]));
}

TEST_CASE("topic profiles round trip") {
  TopicProfiles topics(5, 3, 2);
  Rng rng(9);
  for (int t = 0; t < 2; ++t)
    for (int v = 0; v < 3; ++v)
      topics.at(t, v) = static_cast<std::uint16_t>(rng.below(120));
  const auto profile = topics.profile(1);
  CHECK(profile.size() == 3);
  for (int v = 0; v < 3; ++v)
    CHECK(perm_rank(profile[static_cast<std::size_t>(v)].order()) == topics.at(1, v));
}

}  // TEST_SUITE
