#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sumrules/errors.hpp"
#include "sumrules/rational.hpp"

namespace sumrules {

/// The three hierarchies of finite sum rules, plus the alternating rule with
/// composite weights sum_m c_m^(p) (k-m+1)_{2m} from which the third one is
/// assembled.
enum class Hierarchy { H1, H2, H3, H3Composite };

std::string_view to_string(Hierarchy h);
/// Accepts "1", "2", "3", "3c" (and "H1".."H3c").
Hierarchy parse_hierarchy(std::string_view text);

/// Rising factorial (f)_n = f (f+1) ... (f+n-1), with (f)_0 = 1 and
/// (f)_{-1} = 1/(f-1).
Rational pochhammer(const HalfInteger& start, int n);
Rational pochhammer(long long start, int n);

/// c_m^(p) = (2m-p+2)_{2p-2m} / (2^{2p-2m} m! (p-m)!), 0 <= m <= p. Memoized.
Rational c_coefficient(int p, int m);

/// f_p^(q) = (-1)^{p+q} q! (2q-p)! / (2^{2q-2p} p! (q-p)!), 0 <= p <= q.
/// Memoized. Inverse of c in the sense sum_p f_p^(q) c_m^(p) = delta_{mq}.
Rational f_weight(int q, int p);

enum class VariableKind { InverseZSquared, ZSquared };

/// Exact coefficients of the right-hand side
///
///   z^2 A(z) j_l^2 + z^2 B(z) j_{l+1}^2 + z C(z) j_l j_{l+1} + tail.
///
/// For H1 the entry at index m multiplies 1/z^{2m+2}, so z^2 A is a
/// polynomial in u = 1/z^2 with coefficients a_coeffs. For the other
/// rules the entry at index m multiplies z^{2m}.
struct BoundaryPolynomials {
  Hierarchy hierarchy = Hierarchy::H1;
  int p = 0;
  int ell = 0;
  VariableKind variable_kind = VariableKind::InverseZSquared;
  std::vector<Rational> a_coeffs;
  std::vector<Rational> b_coeffs;
  std::vector<Rational> c_coeffs;
};

/// Smallest ell accepted for hierarchy h at level p.
int min_ell(Hierarchy h, int p);

/// Throws DomainError unless p >= 0 and ell >= min_ell(h, p).
void check_domain(Hierarchy h, int p, int ell);

BoundaryPolynomials boundary_polynomials(Hierarchy h, int p, int ell);

/// The ell-independent addend of a closed form.
///
///   H1:  sum_{k=0}^p coeffs[k] z^{-(k+1)} j_{k+1}(2z)
///   H2:  coeffs[0] z^{2p}
///   H3:  coeffs[0] z^p j_p(2z)
///   H3Composite, even p:  coeffs[0] z^p j_0(2z)
///   H3Composite, odd p:   coeffs[0] z^{p-1} (j_0(2z)/2 - z j_1(2z))
struct TailTerm {
  Hierarchy hierarchy = Hierarchy::H1;
  int p = 0;
  std::vector<Rational> coeffs;

  std::string describe() const;
};

TailTerm tail_term(Hierarchy h, int p);

/// Weight of [j_k(z)]^2 in the left-hand side of hierarchy h at level p.
Rational lhs_weight(Hierarchy h, int p, int k);

/// sum_{m=0}^p c_m^(p) (k-m+1)_{2m}.
Rational alternating_composite_weight(int p, int k);

/// Both sides of the terminating 3F2 evaluation used to derive the third
/// hierarchy: the alternating finite sum over p in [2m+n, q] and its
/// product form. The product form needs m >= 1.
Rational hypergeometric_finite_sum(int q, int m, int n);
Rational hypergeometric_closed_form(int q, int m, int n);

}  // namespace sumrules
