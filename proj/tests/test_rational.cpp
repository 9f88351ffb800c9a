#include <doctest.h>

#include "reltest/bits.hpp"
#include "reltest/rational.hpp"

using namespace reltest;

TEST_CASE("rational arithmetic and ordering") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2, 1));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(1, -2) < Rational(0, 1));
  CHECK(Rational(3, 7) < Rational(4, 7));
  CHECK(Rational(999999999LL, 1000000000LL) < Rational(1, 1));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("1/10") == Rational(1, 10));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("0.1") == Rational(1, 10));
  CHECK(Rational::parse("2") == Rational(2, 1));
  CHECK(Rational::parse("-0.5") == Rational(-1, 2));
  CHECK(Rational(1, 3).to_string() == "1/3");
  CHECK(Rational(4, 2).to_string() == "2");
}

TEST_CASE("bit helpers") {
  CHECK(mask_n(3) == 0b111);
  CHECK(mask_n(0) == 0);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(80) == 7);
  Assignment a = Assignment::from_string("1010");
  CHECK(a.n == 4);
  CHECK(a.bits == 0b0101);  // x1 is the least significant bit
  CHECK(a.to_string() == "1010");
}

TEST_CASE("rng bound sampling covers the range") {
  Rng rng(123);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[static_cast<size_t>(rng.below(7))];
  for (int c : seen) CHECK(c > 700);
}

TEST_CASE("subset enumeration is complete and ordered") {
  int count = 0;
  std::vector<int> last;
  for_each_subset(6, 3, [&](const std::vector<int>& s) {
    CHECK(s.size() == 3);
    if (!last.empty()) CHECK(last < s);
    last = s;
    ++count;
  });
  CHECK(count == 20);
}
