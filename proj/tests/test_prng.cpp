#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "irtpart/prng.hpp"

using namespace irtpart;

// Reference values from scripts/make_reference_values.py (independent Python
// implementations of the published algorithms).

TEST_CASE("splitmix64 matches the reference sequence", "[prng]") {
  std::uint64_t s = 0;
  CHECK(splitmix64_next(s) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64_next(s) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64_next(s) == 0x06c45d188009454fULL);

  s = 1234567;
  CHECK(splitmix64_next(s) == 0x599ed017fb08fc85ULL);
  CHECK(splitmix64_next(s) == 0x2c73f08458540fa5ULL);
  CHECK(splitmix64_next(s) == 0x883ebce5a3f27c77ULL);
}

TEST_CASE("xoshiro256** seeded by splitmix64 matches the reference sequence", "[prng]") {
  Rng rng(42);
  CHECK(rng.next_u64() == 0x15780b2e0c2ec716ULL);
  CHECK(rng.next_u64() == 0x6104d9866d113a7eULL);
  CHECK(rng.next_u64() == 0xae17533239e499a1ULL);
  CHECK(rng.next_u64() == 0xecb8ad4703b360a1ULL);
  CHECK(rng.next_u64() == 0xfde6dc7fe2ec5e64ULL);
}

TEST_CASE("fnv1a64 matches the reference constants", "[prng]") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("folds") == 0xd53294afa96a621bULL);
  CHECK(fnv1a64("models") == 0xbb021c3315a8cc0bULL);
}

TEST_CASE("derive_seed matches the reference scheme", "[prng]") {
  CHECK(derive_seed(0, "folds") == 0xd46f6e5c1f60c11aULL);
  CHECK(derive_seed(7, "models") == 0x2667304cbc377eceULL);
  CHECK(derive_seed(123456789, "tuning/Dis_min_max") == 0x02d26b355c1052baULL);
}

TEST_CASE("labeled streams are stable and do not consume parent state", "[prng]") {
  Rng rng(99);
  Rng a = rng.stream("alpha");
  const std::uint64_t first_after = rng.next_u64();

  Rng rng2(99);
  const std::uint64_t direct = rng2.next_u64();
  Rng a2 = rng2.stream("alpha");

  CHECK(first_after == direct);             // stream() left the parent untouched
  CHECK(a.next_u64() == a2.next_u64());     // same label, same child sequence
  CHECK(rng.stream("alpha").seed() == a.seed());
  CHECK(rng.stream("beta").seed() != a.seed());
}

TEST_CASE("next_double lies in [0,1) and next_below respects its bound", "[prng]") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) REQUIRE(rng.next_below(13) < 13);
  for (int i = 0; i < 100; ++i) REQUIRE(rng.next_below(1) == 0);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.next_int(-3, 3);
    REQUIRE(v >= -3);
    REQUIRE(v <= 3);
  }
}

TEST_CASE("next_below covers its range roughly uniformly", "[prng]") {
  Rng rng(2024);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[rng.next_below(10)];
  for (int c : counts) {
    CHECK(c > draws / 10 - 600);
    CHECK(c < draws / 10 + 600);
  }
}

TEST_CASE("next_normal has roughly standard moments", "[prng]") {
  Rng rng(5);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("shuffle is a deterministic permutation", "[prng]") {
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;

  Rng a(11), b(11);
  a.shuffle(v);
  b.shuffle(w);
  CHECK(v == w);

  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(50);
  for (int i = 0; i < 50; ++i) expect[i] = i;
  CHECK(sorted == expect);

  Rng c(12);
  auto u = expect;
  c.shuffle(u);
  CHECK(u != v);  // different seed, different order
}

TEST_CASE("log-uniform draws stay inside their bounds", "[prng]") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_log_uniform(0.01, 1.0);
    REQUIRE(x >= 0.01);
    REQUIRE(x <= 1.0);
  }
}
