#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <thread>
#include <vector>

#include "sumrules/exact_coefficients.hpp"

using namespace sumrules;

namespace {

Rational R(long long n, long long d = 1) { return ratio(n, d); }
HalfInteger half(long long twice) { return HalfInteger::from_twice(twice); }

std::vector<std::string> strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("rational basics") {
  CHECK(R(6, -4) == R(-3, 2));
  CHECK(to_string(R(6, -4)) == "-3/2");
  CHECK(to_string(R(10, 5)) == "2");
  CHECK_THROWS(R(1, 0));
  CHECK_THROWS(Rational(1) / Rational(0));
  CHECK(half(-3).to_rational() == R(-3, 2));
  CHECK(half(4).is_integer());
  CHECK_FALSE(half(5).is_integer());
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == Integer("2432902008176640000"));
}

TEST_CASE("hierarchy names") {
  CHECK(parse_hierarchy("1") == Hierarchy::H1);
  CHECK(parse_hierarchy("H2") == Hierarchy::H2);
  CHECK(parse_hierarchy("3") == Hierarchy::H3);
  CHECK(parse_hierarchy("3c") == Hierarchy::H3Composite);
  CHECK(to_string(Hierarchy::H3Composite) == "H3c");
  CHECK_THROWS_AS(parse_hierarchy("4"), DomainError);
  CHECK_THROWS_AS(parse_hierarchy(""), DomainError);
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(3, 0) == 1);
  CHECK(pochhammer(half(-1), 3) == R(-3, 8));
  CHECK(pochhammer(half(5), -1) == R(2, 3));
  CHECK(pochhammer(4, -1) == R(1, 3));
  CHECK(pochhammer(-2, -1) == R(-1, 3));
  CHECK(pochhammer(1, 5) == 120);
  CHECK(pochhammer(-3, 5) == 0);
  CHECK(pochhammer(-3, 3) == -6);
  CHECK(pochhammer(half(1), 2) == R(3, 4));
  CHECK_THROWS_AS(pochhammer(1, -1), InternalPole);
  CHECK_THROWS_AS(pochhammer(half(2), -1), InternalPole);
  CHECK_THROWS_AS(pochhammer(2, -2), DomainError);
}

TEST_CASE("c and f coefficients") {
  CHECK(c_coefficient(0, 0) == 1);
  CHECK(c_coefficient(1, 0) == R(1, 2));
  CHECK(c_coefficient(1, 1) == 1);
  CHECK(f_weight(0, 0) == 1);
  CHECK(f_weight(1, 0) == R(-1, 2));
  CHECK(f_weight(1, 1) == 1);
  CHECK_THROWS_AS(c_coefficient(2, 3), DomainError);
  CHECK_THROWS_AS(c_coefficient(2, -1), DomainError);
  CHECK_THROWS_AS(f_weight(1, 2), DomainError);
}

TEST_CASE("c and f are inverse to each other") {
  for (int q = 0; q <= 12; ++q) {
    for (int m = 0; m <= q; ++m) {
      Rational s = 0;
      for (int p = m; p <= q; ++p) s += f_weight(q, p) * c_coefficient(p, m);
      CHECK(s == (m == q ? 1 : 0));
    }
  }
}

TEST_CASE("memoized coefficients under concurrent use") {
  std::vector<std::thread> pool;
  std::vector<int> bad(8, 0);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([t, &bad] {
      for (int p = 40 + t; p >= 0; --p) {
        for (int m = 0; m <= p; ++m) {
          const Rational expected = pochhammer(2 * m - p + 2, 2 * p - 2 * m) /
                                    (Rational(Integer(1) << (2 * p - 2 * m)) * factorial(m) * factorial(p - m));
          if (c_coefficient(p, m) != expected) ++bad[t];
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int b : bad) CHECK(b == 0);
}

TEST_CASE("lowest-order boundary polynomials") {
  for (int ell : {0, 4, 9}) {
    CAPTURE(ell);
    const auto h2 = boundary_polynomials(Hierarchy::H2, 0, ell);
    CHECK(h2.variable_kind == VariableKind::ZSquared);
    CHECK(h2.a_coeffs == std::vector<Rational>{-1});
    CHECK(h2.b_coeffs == std::vector<Rational>{-1});
    CHECK(h2.c_coeffs == std::vector<Rational>{2 * (ell + 1)});

    const auto h1 = boundary_polynomials(Hierarchy::H1, 0, ell);
    CHECK(h1.variable_kind == VariableKind::InverseZSquared);
    CHECK(h1.a_coeffs == std::vector<Rational>{R(-2, 2 * ell + 3)});
    CHECK(h1.c_coeffs == std::vector<Rational>{2});

    const auto h3 = boundary_polynomials(Hierarchy::H3, 0, ell);
    CHECK(h3.a_coeffs.empty());
    CHECK(h3.b_coeffs.empty());
    CHECK(h3.c_coeffs == std::vector<Rational>{ell % 2 ? -1 : 1});
  }
}

TEST_CASE("higher-level polynomials against frozen values") {
  const auto h1 = boundary_polynomials(Hierarchy::H1, 2, 3);
  CHECK(strings(h1.a_coeffs) == Strings{"-32/225225", "-32/10395", "-16/135"});
  CHECK(strings(h1.b_coeffs) == Strings{"-32/51975", "-32/4725", "-16/105"});
  CHECK(strings(h1.c_coeffs) == Strings{"32/17325", "32/945", "16/15"});

  const auto h2 = boundary_polynomials(Hierarchy::H2, 2, 5);
  CHECK(strings(h2.a_coeffs) == Strings{"-336", "-56/5", "-8/15"});
  CHECK(strings(h2.b_coeffs) == Strings{"-168", "-8", "-8/15"});
  CHECK(strings(h2.c_coeffs) == Strings{"2688", "112", "32/5"});

  const auto h3 = boundary_polynomials(Hierarchy::H3, 3, 5);
  CHECK(strings(h3.a_coeffs) == Strings{"-8865/4", "3"});
  CHECK(strings(h3.b_coeffs) == Strings{"4185/4", "-3"});
  CHECK(strings(h3.c_coeffs) == Strings{"-126675/4", "198"});

  const auto h3b = boundary_polynomials(Hierarchy::H3, 4, 6);
  CHECK(strings(h3b.a_coeffs) == Strings{"489237/2", "-612"});
  CHECK(strings(h3b.b_coeffs) == Strings{"-179865/2", "444"});
  CHECK(strings(h3b.c_coeffs) == Strings{"5967045/2", "-22614", "24"});
}

TEST_CASE("list lengths") {
  for (int p = 0; p <= 8; ++p) {
    CAPTURE(p);
    const auto h1 = boundary_polynomials(Hierarchy::H1, p, p + 2);
    CHECK(h1.a_coeffs.size() == std::size_t(p + 1));
    CHECK(h1.b_coeffs.size() == std::size_t(p + 1));
    CHECK(h1.c_coeffs.size() == std::size_t(p + 1));
    const auto h2 = boundary_polynomials(Hierarchy::H2, p, p + 2);
    CHECK(h2.a_coeffs.size() == std::size_t(p + 1));
    CHECK(h2.c_coeffs.size() == std::size_t(p + 1));
    const auto h3 = boundary_polynomials(Hierarchy::H3, p, p + 2);
    CHECK(h3.a_coeffs.size() == std::size_t((p + 1) / 2));
    CHECK(h3.b_coeffs.size() == std::size_t((p + 1) / 2));
    CHECK(h3.c_coeffs.size() == std::size_t(p / 2 + 1));
  }
}

TEST_CASE("shift property: A at ell equals B at ell + 1") {
  for (Hierarchy h : {Hierarchy::H1, Hierarchy::H2, Hierarchy::H3, Hierarchy::H3Composite}) {
    for (int p = 0; p <= 8; ++p) {
      for (int ell = min_ell(h, p); ell <= 30; ++ell) {
        const auto here = boundary_polynomials(h, p, ell);
        const auto next = boundary_polynomials(h, p, ell + 1);
        if (here.a_coeffs != next.b_coeffs) {
          CAPTURE(to_string(h));
          CAPTURE(p);
          CAPTURE(ell);
          CHECK(here.a_coeffs == next.b_coeffs);
        }
      }
    }
  }
}

TEST_CASE("domain of the boundary polynomials") {
  CHECK(min_ell(Hierarchy::H2, 3) == 3);
  CHECK(min_ell(Hierarchy::H1, 3) == 0);
  CHECK(min_ell(Hierarchy::H3Composite, 3) == 0);
  try {
    check_domain(Hierarchy::H2, 3, 2);
    FAIL("no throw");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("ell must be >= p") != std::string::npos);
  }
  CHECK_THROWS_AS(boundary_polynomials(Hierarchy::H1, -1, 0), DomainError);
  CHECK_THROWS_AS(boundary_polynomials(Hierarchy::H1, 0, -1), DomainError);
}

TEST_CASE("tail terms") {
  for (int p = 0; p <= 6; ++p) {
    CHECK(tail_term(Hierarchy::H2, p).coeffs == std::vector<Rational>{Rational(factorial(p)) / pochhammer(half(3), p)});
    CHECK(tail_term(Hierarchy::H3, p).coeffs == std::vector<Rational>{(p % 2 ? -1 : 1) * Rational(factorial(p))});
    CHECK(tail_term(Hierarchy::H1, p).coeffs.size() == std::size_t(p + 1));
  }
  CHECK(tail_term(Hierarchy::H2, 0).coeffs == std::vector<Rational>{1});
  CHECK(tail_term(Hierarchy::H1, 0).coeffs == std::vector<Rational>{-4});
  CHECK(tail_term(Hierarchy::H2, 2).describe() == "8/15 z^4");
}

TEST_CASE("left-hand-side weights") {
  CHECK(lhs_weight(Hierarchy::H2, 1, 0) == 0);
  CHECK(lhs_weight(Hierarchy::H1, 0, 1) == R(8, 5));
  CHECK(lhs_weight(Hierarchy::H3, 1, 2) == 30);
  for (int k = 0; k <= 20; ++k) CHECK(lhs_weight(Hierarchy::H1, 0, k) == R(8, (2 * k - 1) * (2 * k + 3)));
  CHECK_THROWS_AS(lhs_weight(Hierarchy::H1, 0, -1), DomainError);
}

TEST_CASE("composite weights") {
  for (int k = 0; k <= 10; ++k) CHECK(alternating_composite_weight(0, k) == 1);
  CHECK(alternating_composite_weight(1, 0) == R(1, 2));
  CHECK(alternating_composite_weight(1, 3) == R(25, 2));
}

TEST_CASE("H3 weights are the f-weighted combination of composite weights") {
  for (int p = 0; p <= 8; ++p) {
    for (int k = 0; k <= 30; ++k) {
      Rational s = 0;
      for (int q = 0; q <= p; ++q) s += f_weight(p, q) * alternating_composite_weight(q, k);
      s *= (k % 2 ? -1 : 1) * (2 * k + 1);
      if (s != lhs_weight(Hierarchy::H3, p, k)) {
        CAPTURE(p);
        CAPTURE(k);
        CHECK(s == lhs_weight(Hierarchy::H3, p, k));
      }
    }
  }
}

TEST_CASE("terminating 3F2 sum") {
  for (int q = 0; q <= 10; ++q) {
    for (int m = 1; 2 * m <= q; ++m) {
      for (int n = 0; 2 * m + n <= q; ++n) {
        CHECK(hypergeometric_finite_sum(q, m, n) == hypergeometric_closed_form(q, m, n));
      }
    }
  }
  CHECK_THROWS_AS(hypergeometric_closed_form(4, 0, 0), DomainError);
  CHECK_THROWS_AS(hypergeometric_finite_sum(2, 1, 1), DomainError);
}
