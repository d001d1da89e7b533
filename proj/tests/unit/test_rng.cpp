#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "confirm/error.hpp"
#include "confirm/rng.hpp"

using Catch::Approx;
using namespace confirm;

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST_CASE("Philox4x32-10 known-answer vectors", "[rng][philox]") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams replay identically", "[rng][determinism]") {
  RngStream a(3, 0);
  RngStream b(3, 0);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_standard_normal() == b.next_standard_normal());
}

TEST_CASE("a draw depends only on (seed, stream, position)", "[rng][determinism]") {
  RngStream seq(11, 42);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 10; ++i) draws.push_back(seq.next_u64());
  for (std::uint64_t pos = 0; pos < 10; ++pos) {
    RngStream jump(11, 42, pos);
    CHECK(jump.next_u64() == draws[pos]);
  }
  CHECK(seq.position() == 10);
}

TEST_CASE("distinct seeds and streams give distinct sequences", "[rng]") {
  CHECK(RngStream(1, 0).next_u64() != RngStream(2, 0).next_u64());
  CHECK(RngStream(1, 0).next_u64() != RngStream(1, 1).next_u64());
  CHECK(RngStream(1, 1ull << 32).next_u64() != RngStream(1, 1).next_u64());
}

TEST_CASE("uniform draws lie strictly inside (0, 1) with the right moments", "[rng][uniform]") {
  RngStream s(7, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::fabs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal draws have mean 0, variance 1, and uncorrelated streams", "[rng][normal]") {
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, cross = 0.0, lag = 0.0, prev = 0.0;
  RngStream s(5, 9);
  RngStream t(5, 10);
  for (int i = 0; i < n; ++i) {
    const double x = s.next_standard_normal();
    const double y = t.next_standard_normal();
    sum += x;
    sum2 += x * x;
    cross += x * y;
    lag += x * prev;
    prev = x;
  }
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(sum / n) < 4.0 * se);
  CHECK(std::fabs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0) * se);
  CHECK(std::fabs(cross / n) < 4.0 * se);
  CHECK(std::fabs(lag / n) < 4.0 * se);
}

TEST_CASE("rng_normal scales, advances and validates", "[rng][normal]") {
  RngStream a(1, 2);
  RngStream b(1, 2);
  const double z = b.next_standard_normal();
  CHECK(rng_normal(a, 3.0, 2.0) == Approx(3.0 + 2.0 * z).epsilon(1e-15));

  RngStream c(1, 2);
  CHECK(rng_normal(c, 45.6, 0.0) == 45.6);
  CHECK(c.position() == 1);

  RngStream d(1, 2);
  CHECK_THROWS_AS(rng_normal(d, 0.0, -1.0), DomainError);
}
