#include <doctest.h>

#include <cmath>
#include <set>

#include "rsmooth/numerics.hpp"
#include "rsmooth/psi.hpp"

using namespace rsmooth;

TEST_CASE("extended scalar round trip") {
  RandomStream s{42, 0};
  for (int i = 0; i < 20000; ++i) {
    double expo = s.uniform_range(-300.0, 300.0);
    double mant = s.uniform_range(1.0, 10.0);
    double v = mant * std::pow(10.0, expo);
    double back = ExtendedScalar::from_double(v).to_double();
    CHECK(std::abs(back - v) / v <= 1e-12);
  }
}

TEST_CASE("extended scalar multiplication is the plain log addition") {
  RandomStream s{7, 0};
  for (int i = 0; i < 1000; ++i) {
    auto a = ExtendedScalar::from_log(1, s.uniform_range(-1e5, 1e5));
    auto b = ExtendedScalar::from_log(i % 2 ? 1 : -1, s.uniform_range(-1e5, 1e5));
    auto c = xs_mul(a, b);
    CHECK(c.logmag == a.logmag + b.logmag);
    CHECK(c.sign == a.sign * b.sign);
  }
  CHECK(xs_mul(ExtendedScalar::zero(), ExtendedScalar::from_double(3.0)).is_zero());
}

TEST_CASE("mul and pow examples") {
  auto two = ExtendedScalar::from_double(2.0);
  auto three = ExtendedScalar::from_double(3.0);
  CHECK(xs_mul(two, three).to_double() == doctest::Approx(6.0).epsilon(1e-14));

  auto ten = ExtendedScalar::from_double(10.0);
  auto cubed = xs_pow_int(ten, 3);
  CHECK(cubed.logmag == doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-15));
  CHECK(xs_pow_int(ten, 0).to_double() == 1.0);
  CHECK(xs_pow_int(ExtendedScalar::from_double(-2.0), 3).sign == -1);
  CHECK(xs_pow_int(ExtendedScalar::from_double(-2.0), 2).sign == 1);
}

TEST_CASE("same-sign addition agrees with plain floating addition") {
  RandomStream s{3, 0};
  int checked = 0;
  for (int i = 0; i < 1000000; ++i) {
    double a = s.uniform_range(1e-20, 1.0) * std::pow(10.0, s.uniform_range(-15, 15));
    double b = s.uniform_range(1e-20, 1.0) * std::pow(10.0, s.uniform_range(-15, 15));
    int sign = i % 2 ? 1 : -1;
    auto xs = xs_add_same_sign(ExtendedScalar::from_double(sign * a),
                               ExtendedScalar::from_double(sign * b));
    double plain = sign * (a + b);
    CHECK(std::abs(xs.to_double() - plain) / std::abs(plain) <= 1e-10);
    ++checked;
  }
  CHECK(checked == 1000000);
}

TEST_CASE("same-sign addition bounds and errors") {
  auto a = ExtendedScalar::from_log(1, 250.0);
  auto b = ExtendedScalar::from_log(1, 300.0);
  auto c = xs_add_same_sign(a, b);
  CHECK(xs_compare(b, c) <= 0);
  CHECK(xs_compare(c, xs_mul(ExtendedScalar::from_double(2.0), b)) <= 0);

  CHECK_THROWS_AS(xs_add_same_sign(ExtendedScalar::from_double(1.0),
                                   ExtendedScalar::from_double(-1.0)),
                  std::invalid_argument);
  CHECK(xs_add_same_sign(ExtendedScalar::zero(), a).logmag == a.logmag);
}

TEST_CASE("division by zero-sign operand rejected") {
  CHECK_THROWS_AS(xs_div(ExtendedScalar::from_double(1.0), ExtendedScalar::zero()),
                  std::domain_error);
  auto q = xs_div(ExtendedScalar::from_double(6.0), ExtendedScalar::from_double(3.0));
  CHECK(q.to_double() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("compare is a total order agreeing with reals") {
  RandomStream s{11, 0};
  for (int i = 0; i < 100000; ++i) {
    double a = s.uniform_range(-1e8, 1e8);
    double b = s.uniform_range(-1e8, 1e8);
    if (a == 0 || b == 0) continue;
    int want = a < b ? -1 : (a > b ? 1 : 0);
    CHECK(xs_compare(ExtendedScalar::from_double(a), ExtendedScalar::from_double(b)) == want);
  }
  // the divergence sequence pair: g_1 vs g_0 at unit parameters
  double g1 = 1152.0 * std::log(3.0);
  CHECK(g1 == doctest::Approx(1265.65).epsilon(1e-4));
  CHECK(xs_compare(ExtendedScalar::from_double(g1), ExtendedScalar::from_double(1.0)) == 1);
}

TEST_CASE("random stream determinism and splitting") {
  RandomStream a{123, 0}, b{123, 0};
  for (int i = 0; i < 100000; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c{123, 0}, d{124, 0};
  bool differs = false;
  for (int i = 0; i < 100; ++i)
    if (c.next_u64() != d.next_u64()) {
      differs = true;
      break;
    }
  CHECK(differs);

  // split streams draw from disjoint counter blocks
  RandomStream root{9, 0};
  auto s0 = root.split(0), s1 = root.split(1);
  CHECK(s1.counter - s0.counter == (1ull << 40));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(s0.next_u64());
    seen.insert(s1.next_u64());
  }
  CHECK(seen.size() == 2000);
}

TEST_CASE("uniform draws land in [0,1) and look flat") {
  RandomStream s{5, 0};
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("finite differences on a quadratic are exact") {
  auto f = [](const Vec& x) { return 0.5 * norm2(x); };
  Vec x = {1.0, 2.0};
  Vec g = finite_diff_gradient(f, x, 1e-5);
  CHECK(std::abs(g[0] - 1.0) <= 1e-8);
  CHECK(std::abs(g[1] - 2.0) <= 1e-8);
}

TEST_CASE("finite differences match the exponential profile derivative") {
  auto f = [](const Vec& x) { return psi_value_raw(x[0], 1.0, 1.0); };
  Vec at_zero = finite_diff_gradient(f, {0.0}, 1e-5);
  CHECK(std::abs(at_zero[0]) <= 1e-9);
  Vec at_one = finite_diff_gradient(f, {1.0}, 1e-5);
  CHECK(std::abs(at_one[0] - (std::exp(1.0) - 1.0)) <= 1e-6);
}

TEST_CASE("finite difference probe error names the coordinate") {
  auto f = [](const Vec& x) { return x[1] > 0.5 ? std::nan("") : x[0]; };
  Vec x = {0.0, 0.5};
  try {
    finite_diff_gradient(f, x, 1e-1);
    FAIL("expected probe error");
  } catch (const FiniteDiffProbeError& e) {
    CHECK(e.coordinate == 1);
  }
}

TEST_CASE("default step balances scale") {
  CHECK(fd_default_step({0.5, -0.25}) == doctest::Approx(1e-5));
  CHECK(fd_default_step({100.0}) == doctest::Approx(1e-3));
}

TEST_CASE("psi closed forms") {
  auto at0 = psi_eval(0.0, 1.0, 1.0);
  CHECK(at0.value == 0.0);
  CHECK(at0.first == 0.0);
  CHECK(at0.second == 1.0);

  auto at1 = psi_eval(1.0, 1.0, 1.0);
  CHECK(at1.value == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
  CHECK(at1.first == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(at1.second == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

  // psi'(m) = Delta L1 at m = log(1 + Delta L1^2/L0) / L1 with unit parameters
  double m = psi_prime_inverse(1.0, 1.0, 1.0);
  CHECK(m == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(psi_prime_raw(m, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  // |psi''| = L0 + L1 |psi'| identity
  RandomStream s{2, 0};
  for (int i = 0; i < 1000; ++i) {
    double x = s.uniform_range(-5.0, 5.0);
    double lhs = psi_second_raw(x, 2.0, 0.5);
    double rhs = 2.0 + 0.5 * std::abs(psi_prime_raw(x, 2.0, 0.5));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }

  CHECK_THROWS_AS(psi_eval(1e4, 1.0, 1.0), std::range_error);
}
