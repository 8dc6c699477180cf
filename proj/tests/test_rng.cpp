#include <doctest.h>

#include <cmath>

#include "ncjt/rng.hpp"

using ncjt::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform stays in [0,1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Rng rng(123);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("complex gaussian has unit power") {
  Rng rng(5);
  double power = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    power += std::norm(rng.cgaussian());
  }
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson mean") {
  Rng rng(9);
  const int n = 100000;
  long total = 0;
  for (int i = 0; i < n; ++i) total += rng.poisson(0.3);
  CHECK(total / double(n) == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("forked substreams differ from each other and the parent") {
  Rng parent(77);
  Rng a = parent.fork(1);
  Rng b = parent.fork(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
  // Forking is a pure function of (seed, tag).
  Rng c = Rng(77).fork(1);
  Rng d = Rng(77).fork(1);
  CHECK(c.next_u64() == d.next_u64());
}

}  // TEST_SUITE
