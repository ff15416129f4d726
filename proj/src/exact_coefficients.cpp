#include "sumrules/exact_coefficients.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <utility>

namespace sumrules {
namespace {

int sign(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

Rational pow2(int e) {
  Integer one = 1;
  return e >= 0 ? Rational(one << e) : ratio(1, one << -e);
}

// Read-mostly memo table keyed by an index pair.
class CoefficientCache {
 public:
  template <class Compute>
  Rational get(std::pair<int, int> key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    Rational value = compute();
    std::unique_lock lock(mutex_);
    return table_.emplace(key, std::move(value)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<int, int>, Rational> table_;
};

CoefficientCache& c_cache() {
  static CoefficientCache cache;
  return cache;
}

CoefficientCache& f_cache() {
  static CoefficientCache cache;
  return cache;
}

// Writes `value` into coeffs[index], growing the list as needed.
void accumulate(std::vector<Rational>& coeffs, std::size_t index, const Rational& value) {
  if (coeffs.size() <= index) coeffs.resize(index + 1, Rational(0));
  coeffs[index] += value;
}

std::vector<Rational> h1_a(int p, int ell) {
  std::vector<Rational> out;
  for (int k = 0; k <= p; ++k) {
    const Rational den =
        pochhammer(half_plus(p - k), k + 1) * pochhammer(half_plus(ell - p + k + 1), 2 * p - 2 * k + 1);
    out.push_back(Rational(-1, 2) * pochhammer(p - k + 1, k) / den);
  }
  return out;
}

std::vector<Rational> h1_c(int p, int ell) {
  std::vector<Rational> out;
  for (int k = 0; k <= p; ++k) {
    const Rational den =
        pochhammer(half_plus(p - k), k + 1) * pochhammer(half_plus(ell - p + k + 1), 2 * p - 2 * k);
    out.push_back(pochhammer(p - k + 1, k) / den);
  }
  return out;
}

std::vector<Rational> h2_a(int p, int ell) {
  std::vector<Rational> out;
  for (int k = 0; k <= p; ++k) {
    out.push_back(Rational(-1, 2) * pochhammer(p - k + 1, k) * pochhammer(ell - p + k + 2, 2 * p - 2 * k) /
                  pochhammer(half_plus(p - k), k + 1));
  }
  return out;
}

std::vector<Rational> h2_c(int p, int ell) {
  std::vector<Rational> out;
  for (int k = 0; k <= p; ++k) {
    out.push_back(pochhammer(p - k + 1, k) * pochhammer(ell - p + k + 1, 2 * p - 2 * k + 1) /
                  pochhammer(half_plus(p - k), k + 1));
  }
  return out;
}

// A_ell for the third hierarchy; the double sum runs over
// 0 <= m <= [(p-1)/2], 0 <= n <= p-2m-1.
std::vector<Rational> h3_a(int p, int ell) {
  std::vector<Rational> out;
  const Rational prefactor = Rational(sign(p + ell + 1), 2) * Rational(factorial(p));
  for (int m = 0; 2 * m <= p - 1; ++m) {
    Rational sum = 0;
    for (int n = 0; n <= p - 2 * m - 1; ++n) {
      sum += Rational(sign(m + n)) / Rational(factorial(m) * factorial(n)) *
             pochhammer(half_plus(m + n + 1), p - 2 * m - n - 1) * pochhammer(p - 2 * m - n, m) *
             pochhammer(ell - n + 2, 2 * n);
    }
    out.push_back(prefactor * sum);
  }
  return out;
}

std::vector<Rational> h3_c(int p, int ell) {
  std::vector<Rational> out;
  const Rational prefactor = Rational(sign(p + ell)) * Rational(factorial(p)) * Rational(ell + 1);
  for (int m = 0; 2 * m <= p; ++m) {
    Rational sum = 0;
    for (int n = 0; n <= p - 2 * m; ++n) {
      sum += Rational(sign(m + n)) / Rational(factorial(m) * factorial(n)) *
             pochhammer(half_plus(m + n), p - 2 * m - n) * pochhammer(p - 2 * m - n + 1, m) *
             pochhammer(ell - n + 2, 2 * n - 1);
    }
    out.push_back(prefactor * sum);
  }
  return out;
}

// Inner sums of the composite rule:
//   sum_n c_n^(q) / (n+1) (ell - n + shift)_{2n+2}            (shift 1: j_l^2, shift 0: j_{l+1}^2)
//   sum_n c_n^(q) / ((n+1)(n+2)) (ell - n)_{2n+3}             (j_l j_{l+1})
Rational composite_square_sum(int q, int ell, int shift) {
  Rational sum = 0;
  for (int n = 0; n <= q; ++n) {
    sum += c_coefficient(q, n) / Rational(n + 1) * pochhammer(ell - n + shift, 2 * n + 2);
  }
  return sum;
}

Rational composite_cross_sum(int q, int ell) {
  Rational sum = 0;
  for (int n = 0; n <= q; ++n) {
    sum += c_coefficient(q, n) / Rational((n + 1) * (n + 2)) * pochhammer(ell - n, 2 * n + 3);
  }
  return sum;
}

BoundaryPolynomials composite_polynomials(int p, int ell) {
  BoundaryPolynomials out;
  out.hierarchy = Hierarchy::H3Composite;
  out.p = p;
  out.ell = ell;
  out.variable_kind = VariableKind::ZSquared;

  const Rational half_sign = Rational(sign(ell), 2);
  for (int m = 1; m <= p / 2; ++m) {
    const auto index = static_cast<std::size_t>(m - 1);
    accumulate(out.a_coeffs, index, half_sign * sign(m + 1) * composite_square_sum(p - 2 * m, ell, 1));
    accumulate(out.b_coeffs, index, half_sign * sign(m) * composite_square_sum(p - 2 * m, ell, 0));
    accumulate(out.c_coeffs, index,
               Rational(sign(ell) * sign(m + 1)) * Rational(ell + 1) * composite_cross_sum(p - 2 * m, ell));
  }
  if (p % 2 == 1) {
    const auto index = static_cast<std::size_t>((p - 1) / 2);
    accumulate(out.a_coeffs, index, half_sign * sign((p - 1) / 2));
    accumulate(out.b_coeffs, index, half_sign * sign((p + 1) / 2));
    accumulate(out.c_coeffs, index, Rational(sign(ell) * sign((p - 1) / 2)) * Rational(ell + 1) * (ell + 1));
  } else {
    accumulate(out.c_coeffs, static_cast<std::size_t>(p / 2), Rational(sign(ell) * sign(p / 2)));
  }
  return out;
}

}  // namespace

Integer factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  Integer out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

std::string to_string(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string_view to_string(Hierarchy h) {
  switch (h) {
    case Hierarchy::H1: return "H1";
    case Hierarchy::H2: return "H2";
    case Hierarchy::H3: return "H3";
    case Hierarchy::H3Composite: return "H3c";
  }
  return "?";
}

Hierarchy parse_hierarchy(std::string_view text) {
  if (text.size() > 1 && (text.front() == 'H' || text.front() == 'h')) text.remove_prefix(1);
  if (text == "1") return Hierarchy::H1;
  if (text == "2") return Hierarchy::H2;
  if (text == "3") return Hierarchy::H3;
  if (text == "3c" || text == "3C") return Hierarchy::H3Composite;
  throw DomainError("unknown hierarchy '" + std::string(text) + "' (expected 1, 2, 3 or 3c)");
}

Rational pochhammer(const HalfInteger& start, int n) {
  if (n < -1) throw DomainError("Pochhammer length must be >= -1");
  if (n == -1) {
    if (start.twice_value() == 2) throw InternalPole("(1)_{-1} is a pole");
    return Rational(1) / (start.to_rational() - 1);
  }
  // Product of (twice + 2i) / 2; a zero factor makes the result exactly 0.
  Integer num = 1;
  Integer twice = start.twice_value();
  for (int i = 0; i < n; ++i, twice += 2) {
    if (twice == 0) return Rational(0);
    num *= twice;
  }
  return Rational(num) * pow2(-n);
}

Rational pochhammer(long long start, int n) {
  if (n < -1) throw DomainError("Pochhammer length must be >= -1");
  if (n == -1) {
    if (start == 1) throw InternalPole("(1)_{-1} is a pole");
    return ratio(1, Integer(start - 1));
  }
  Integer out = 1;
  for (long long i = 0; i < n; ++i) {
    if (start + i == 0) return Rational(0);
    out *= Integer(start + i);
  }
  return Rational(out);
}

Rational c_coefficient(int p, int m) {
  if (p < 0 || m < 0 || m > p) {
    throw DomainError("c_m^(p) needs 0 <= m <= p (got p=" + std::to_string(p) + ", m=" + std::to_string(m) + ")");
  }
  return c_cache().get({p, m}, [p, m] {
    return pochhammer(2 * m - p + 2, 2 * p - 2 * m) * pow2(-(2 * p - 2 * m)) /
           Rational(factorial(m) * factorial(p - m));
  });
}

Rational f_weight(int q, int p) {
  if (q < 0 || p < 0 || p > q) {
    throw DomainError("f_p^(q) needs 0 <= p <= q (got q=" + std::to_string(q) + ", p=" + std::to_string(p) + ")");
  }
  return f_cache().get({q, p}, [q, p] {
    return Rational(sign(p + q)) * Rational(factorial(q) * factorial(2 * q - p)) * pow2(-(2 * q - 2 * p)) /
           Rational(factorial(p) * factorial(q - p));
  });
}

int min_ell(Hierarchy h, int p) { return h == Hierarchy::H2 ? p : 0; }

void check_domain(Hierarchy h, int p, int ell) {
  if (p < 0) throw DomainError("p must be >= 0");
  if (ell < 0) throw DomainError("ell must be >= 0");
  if (ell < min_ell(h, p)) throw DomainError("ell must be >= p for hierarchy " + std::string(to_string(h)));
}

BoundaryPolynomials boundary_polynomials(Hierarchy h, int p, int ell) {
  check_domain(h, p, ell);
  BoundaryPolynomials out;
  out.hierarchy = h;
  out.p = p;
  out.ell = ell;
  switch (h) {
    case Hierarchy::H1:
      out.variable_kind = VariableKind::InverseZSquared;
      out.a_coeffs = h1_a(p, ell);
      out.b_coeffs = h1_a(p, ell - 1);
      out.c_coeffs = h1_c(p, ell);
      break;
    case Hierarchy::H2:
      out.variable_kind = VariableKind::ZSquared;
      out.a_coeffs = h2_a(p, ell);
      out.b_coeffs = h2_a(p, ell - 1);
      out.c_coeffs = h2_c(p, ell);
      break;
    case Hierarchy::H3:
      out.variable_kind = VariableKind::ZSquared;
      out.a_coeffs = h3_a(p, ell);
      out.b_coeffs = h3_a(p, ell - 1);
      out.c_coeffs = h3_c(p, ell);
      break;
    case Hierarchy::H3Composite:
      return composite_polynomials(p, ell);
  }
  return out;
}

TailTerm tail_term(Hierarchy h, int p) {
  if (p < 0) throw DomainError("p must be >= 0");
  TailTerm out;
  out.hierarchy = h;
  out.p = p;
  switch (h) {
    case Hierarchy::H1: {
      const Rational prefactor = Rational(1) / pochhammer(HalfInteger::from_twice(Integer(-2 * p - 1)), 2 * p + 2);
      for (int k = 0; k <= p; ++k) out.coeffs.push_back(prefactor * sign(k) * pochhammer(p - k + 1, k));
      break;
    }
    case Hierarchy::H2:
      out.coeffs.push_back(Rational(factorial(p)) / pochhammer(half_plus(1), p));
      break;
    case Hierarchy::H3:
      out.coeffs.push_back(Rational(sign(p)) * Rational(factorial(p)));
      break;
    case Hierarchy::H3Composite:
      out.coeffs.push_back(Rational(p % 2 == 0 ? sign(p / 2) : sign((p - 1) / 2)));
      break;
  }
  return out;
}

std::string TailTerm::describe() const {
  std::ostringstream os;
  switch (hierarchy) {
    case Hierarchy::H1:
      os << "sum_{k=0}^{" << p << "} t_k z^-(k+1) j_{k+1}(2z), t = [";
      for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? ", " : "") << to_string(coeffs[k]);
      os << "]";
      break;
    case Hierarchy::H2:
      os << to_string(coeffs[0]) << " z^" << 2 * p;
      break;
    case Hierarchy::H3:
      os << to_string(coeffs[0]) << " z^" << p << " j_" << p << "(2z)";
      break;
    case Hierarchy::H3Composite:
      if (p % 2 == 0) {
        os << to_string(coeffs[0]) << " z^" << p << " j_0(2z)";
      } else {
        os << to_string(coeffs[0]) << " z^" << p - 1 << " (j_0(2z)/2 - z j_1(2z))";
      }
      break;
  }
  return os.str();
}

Rational alternating_composite_weight(int p, int k) {
  if (p < 0 || k < 0) throw DomainError("p and k must be >= 0");
  Rational sum = 0;
  for (int m = 0; m <= p; ++m) sum += c_coefficient(p, m) * pochhammer(k - m + 1, 2 * m);
  return sum;
}

Rational lhs_weight(Hierarchy h, int p, int k) {
  if (p < 0 || k < 0) throw DomainError("p and k must be >= 0");
  switch (h) {
    case Hierarchy::H1:
      return Rational(2 * k + 1) / pochhammer(half_plus(k - p - 1), 2 * p + 3);
    case Hierarchy::H2:
      return Rational(2 * k + 1) * pochhammer(k - p + 1, 2 * p);
    case Hierarchy::H3:
      return Rational(sign(k) * (2 * k + 1)) * pochhammer(k - p + 1, 2 * p);
    case Hierarchy::H3Composite:
      return Rational(sign(k) * (2 * k + 1)) * alternating_composite_weight(p, k);
  }
  return Rational(0);
}

Rational hypergeometric_finite_sum(int q, int m, int n) {
  if (m < 0 || n < 0 || 2 * m + n > q) throw DomainError("need m, n >= 0 and 2m + n <= q");
  Rational sum = 0;
  for (int p = 2 * m + n; p <= q; ++p) {
    sum += Rational(sign(p)) * Rational(factorial(2 * q - p)) /
           Rational(factorial(p) * factorial(q - p) * factorial(p - 2 * m - n)) *
           pochhammer(2 * n - p + 2 * m + 2, 2 * p - 4 * m - 2 * n);
  }
  return sum;
}

Rational hypergeometric_closed_form(int q, int m, int n) {
  if (m < 1 || n < 0 || 2 * m + n > q) throw DomainError("need m >= 1, n >= 0 and 2m + n <= q");
  return Rational(sign(n)) * pow2(2 * q - 4 * m - 2 * n) / Rational(factorial(m - 1)) *
         pochhammer(q - 2 * m - n + 1, m - 1) * pochhammer(half_plus(m + n + 1), q - 2 * m - n);
}

}  // namespace sumrules
