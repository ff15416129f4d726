#include "sumrules/sum_rules.hpp"

#include <cmath>
#include <string>

namespace sumrules {
namespace {

template <class Real>
Real horner(const std::vector<Real>& coeffs, const Real& x) {
  Real acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class Real>
Real ipow(const Real& x, int n) {
  Real out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

template <class Real>
std::vector<Real> to_reals(const std::vector<Rational>& values) {
  std::vector<Real> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_real<Real>(v));
  return out;
}

template <class Real>
Real parity_sign(int n) {
  return n % 2 == 0 ? Real(1) : Real(-1);
}

// Neumaier's variant of Kahan summation.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& term) {
    using std::abs;
    const Real s = sum_ + term;
    if (abs(sum_) >= abs(term)) {
      comp_ += (sum_ - s) + term;
    } else {
      comp_ += (term - s) + sum_;
    }
    sum_ = s;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

int lowest_term(Hierarchy h, int p) {
  return (h == Hierarchy::H2 || h == Hierarchy::H3) ? p : 0;
}

template <class Real>
Real real_z(const SumRuleQuery& q, const BesselSequence<Real>& at_z) {
  if (at_z.argument() != Real(q.z)) throw DomainError("Bessel sequence argument does not match query z");
  return at_z.argument();
}

}  // namespace

void validate(const SumRuleQuery& q) {
  check_domain(q.hierarchy, q.p, q.ell);
  if (q.ell > kMaxEll) throw DomainError("ell must be <= " + std::to_string(kMaxEll));
  if (!std::isfinite(q.z)) throw DomainError("z must be finite");
  if (q.z <= 0) throw DomainError("z must be > 0");
  if (q.z > kMaxZ) throw DomainError("z must be <= 1e4");
}

template <class Real>
BesselInputs<Real> make_bessel_inputs(const SumRuleQuery& q, const BesselOptions& options) {
  validate(q);
  const Real z(q.z);
  return BesselInputs<Real>{spherical_j_sequence<Real>(q.ell + 1, z, options),
                            spherical_j_sequence<Real>(q.p + 1, Real(2) * z, options)};
}

template <class Real>
DirectSumPlan<Real>::DirectSumPlan(Hierarchy h, int p, int ell) : first_(lowest_term(h, p)), ell_(ell) {
  check_domain(h, p, ell);
  for (int k = first_; k <= ell; ++k) weights_.push_back(to_real<Real>(lhs_weight(h, p, k)));
}

template <class Real>
Real DirectSumPlan<Real>::evaluate(const BesselSequence<Real>& bessel) const {
  bessel.require_order(ell_);
  CompensatedSum<Real> sum;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const Real& j = bessel[first_ + static_cast<int>(i)];
    sum.add(weights_[i] * j * j);
  }
  return sum.value();
}

template <class Real>
ClosedFormPlan<Real>::ClosedFormPlan(Hierarchy h, int p, int ell) : hierarchy_(h), p_(p), ell_(ell) {
  const BoundaryPolynomials poly = boundary_polynomials(h, p, ell);
  a_ = to_reals<Real>(poly.a_coeffs);
  b_ = to_reals<Real>(poly.b_coeffs);
  c_ = to_reals<Real>(poly.c_coeffs);
  tail_ = to_reals<Real>(tail_term(h, p).coeffs);
}

template <class Real>
Real ClosedFormPlan<Real>::tail(const Real& z, const BesselSequence<Real>& at_2z) const {
  switch (hierarchy_) {
    case Hierarchy::H1: {
      at_2z.require_order(p_ + 1);
      const Real inv_z = Real(1) / z;
      Real power = inv_z;
      Real sum = 0;
      for (int k = 0; k <= p_; ++k, power *= inv_z) sum += tail_[k] * power * at_2z[k + 1];
      return sum;
    }
    case Hierarchy::H2:
      return tail_[0] * ipow(z, 2 * p_);
    case Hierarchy::H3:
      at_2z.require_order(p_);
      return tail_[0] * ipow(z, p_) * at_2z[p_];
    case Hierarchy::H3Composite:
      if (p_ % 2 == 0) {
        at_2z.require_order(0);
        return tail_[0] * ipow(z, p_) * at_2z[0];
      }
      at_2z.require_order(1);
      return tail_[0] * ipow(z, p_ - 1) * (at_2z[0] / 2 - z * at_2z[1]);
  }
  return Real(0);
}

template <class Real>
Real ClosedFormPlan<Real>::evaluate(const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z) const {
  at_z.require_order(ell_ + 1);
  const Real& z = at_z.argument();
  const Real& jl = at_z[ell_];
  const Real& jl1 = at_z[ell_ + 1];
  Real za, zb, zc;
  if (hierarchy_ == Hierarchy::H1) {
    const Real u = Real(1) / (z * z);
    za = horner(a_, u);
    zb = horner(b_, u);
    zc = horner(c_, u) / z;
  } else {
    const Real u = z * z;
    za = u * horner(a_, u);
    zb = u * horner(b_, u);
    zc = z * horner(c_, u);
  }
  return za * jl * jl + zb * jl1 * jl1 + zc * jl * jl1 + tail(z, at_2z);
}

template <class Real>
Real direct_sum(const SumRuleQuery& q, const BesselSequence<Real>& bessel) {
  validate(q);
  real_z(q, bessel);
  return DirectSumPlan<Real>(q.hierarchy, q.p, q.ell).evaluate(bessel);
}

template <class Real>
Real closed_form(const SumRuleQuery& q, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z) {
  validate(q);
  real_z(q, at_z);
  return ClosedFormPlan<Real>(q.hierarchy, q.p, q.ell).evaluate(at_z, at_2z);
}

template <class Real>
SidePair<Real> base_rule(BaseRule rule, int ell, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z) {
  if (ell < 0) throw DomainError("ell must be >= 0");
  at_z.require_order(ell + 1);
  const Real& z = at_z.argument();
  if (!(z > 0)) throw DomainError("z must be > 0");
  const Real& jl = at_z[ell];
  const Real& jl1 = at_z[ell + 1];
  const Real sl = parity_sign<Real>(ell);

  CompensatedSum<Real> lhs;
  for (int k = 0; k <= ell; ++k) {
    Rational w;
    switch (rule) {
      case BaseRule::Reciprocal: w = ratio(1, (2 * k - 1) * (2 * k + 3)); break;
      case BaseRule::Odd: w = Rational(2 * k + 1); break;
      case BaseRule::AlternatingOdd: w = Rational((k % 2 == 0 ? 1 : -1) * (2 * k + 1)); break;
      case BaseRule::AlternatingOddQuadratic: w = Rational((k % 2 == 0 ? 1 : -1) * (2 * k + 1)) * k * (k + 1); break;
    }
    lhs.add(to_real<Real>(w) * at_z[k] * at_z[k]);
  }

  Real rhs = 0;
  const Real l(ell);
  switch (rule) {
    case BaseRule::Reciprocal:
      at_2z.require_order(1);
      rhs = -jl * jl / (4 * (2 * l + 3)) - jl1 * jl1 / (4 * (2 * l + 1)) + jl * jl1 / (4 * z) - at_2z[1] / (2 * z);
      break;
    case BaseRule::Odd:
      rhs = -z * z * jl * jl - z * z * jl1 * jl1 + 2 * (l + 1) * z * jl * jl1 + 1;
      break;
    case BaseRule::AlternatingOdd:
      at_2z.require_order(0);
      rhs = sl * z * jl * jl1 + at_2z[0];
      break;
    case BaseRule::AlternatingOddQuadratic:
      at_2z.require_order(1);
      rhs = sl * z * z * jl * jl / 2 - sl * z * z * jl1 * jl1 / 2 + sl * (l * l + 2 * l + Real(0.5)) * z * jl * jl1 -
            z * at_2z[1];
      break;
  }
  return {lhs.value(), rhs};
}

template <class Real>
Real recursive_form(const SumRuleQuery& q, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z) {
  validate(q);
  const Real z = real_z(q, at_z);
  at_z.require_order(q.ell + 1);
  const int ell = q.ell;
  const Real& jl = at_z[ell];
  const Real& jl1 = at_z[ell + 1];
  const Real z2 = z * z;

  switch (q.hierarchy) {
    case Hierarchy::H1: {
      // (2k+1)/(k-1/2)_3 = 8/((2k-1)(2k+3))
      Real sum = 8 * base_rule(BaseRule::Reciprocal, ell, at_z, at_2z).rhs;
      at_2z.require_order(1);
      for (int s = 0; s < q.p; ++s) {
        const Rational denom(2 * s + 3);
        const Rational c_l = Rational(-1) / (denom * pochhammer(half_plus(ell - s), 2 * s + 3));
        const Rational c_l1 = Rational(-1) / (denom * pochhammer(half_plus(ell - s - 1), 2 * s + 3));
        const Rational c_x = Rational(2) / (denom * pochhammer(half_plus(ell - s), 2 * s + 2));
        const Rational c_t = Rational(1) / pochhammer(HalfInteger::from_twice(Integer(-2 * s - 3)), 2 * s + 4);
        sum = to_real<Real>(Rational(2 * (s + 1)) / denom) / z2 * sum + to_real<Real>(c_l) * jl * jl +
              to_real<Real>(c_l1) * jl1 * jl1 + to_real<Real>(c_x) / z * jl * jl1 +
              to_real<Real>(c_t) * (Real(s + 1) / z2 * at_2z[0] + at_2z[1] / z);
      }
      return sum;
    }
    case Hierarchy::H2: {
      Real sum = base_rule(BaseRule::Odd, ell, at_z, at_2z).rhs;
      for (int s = 0; s < q.p; ++s) {
        const Rational inv = Rational(1, 2 * (s + 1));
        const Real rhs = z2 * sum - z2 * to_real<Real>(inv * pochhammer(ell - s + 1, 2 * s + 2)) * jl * jl -
                         z2 * to_real<Real>(inv * pochhammer(ell - s, 2 * s + 2)) * jl1 * jl1 +
                         z * to_real<Real>(Rational(1, s + 1) * pochhammer(ell - s, 2 * s + 3)) * jl * jl1;
        sum = to_real<Real>(Rational(2 * (s + 1), 2 * s + 3)) * rhs;
      }
      return sum;
    }
    case Hierarchy::H3:
    case Hierarchy::H3Composite: {
      const int top = q.p;
      std::vector<Real> level(static_cast<std::size_t>(top) + 1);
      const Real alt = base_rule(BaseRule::AlternatingOdd, ell, at_z, at_2z).rhs;
      level[0] = alt;
      if (top >= 1) level[1] = alt / 2 + base_rule(BaseRule::AlternatingOddQuadratic, ell, at_z, at_2z).rhs;
      const Real sl = parity_sign<Real>(ell);
      for (int s = 0; s + 2 <= top; ++s) {
        Rational sq_l = 0, sq_l1 = 0, cross = 0;
        for (int m = 0; m <= s; ++m) {
          const Rational c = c_coefficient(s, m);
          sq_l += c / Rational(m + 1) * pochhammer(ell - m + 1, 2 * m + 2);
          sq_l1 += c / Rational(m + 1) * pochhammer(ell - m, 2 * m + 2);
          cross += c / Rational((m + 1) * (m + 2)) * pochhammer(ell - m, 2 * m + 3);
        }
        level[s + 2] = -z2 * level[s] + sl * z2 * to_real<Real>(sq_l) * jl * jl / 2 -
                       sl * z2 * to_real<Real>(sq_l1) * jl1 * jl1 / 2 +
                       sl * Real(ell + 1) * to_real<Real>(cross) * z * jl * jl1;
      }
      if (q.hierarchy == Hierarchy::H3Composite) return level[top];
      CompensatedSum<Real> sum;
      for (int s = 0; s <= top; ++s) sum.add(to_real<Real>(f_weight(top, s)) * level[s]);
      return sum.value();
    }
  }
  return Real(0);
}

template <class Real>
Real relative_error(const Real& reference, const Real& value) {
  using std::abs;
  const Real floor(kRelativeErrorFloor);
  const Real mag = abs(reference);
  return abs(reference - value) / (mag > floor ? mag : floor);
}

template <class Real>
bool SumRuleEvaluation<Real>::passed(double rel_tol, double abs_tol) const {
  return rel_error <= Real(rel_tol) || abs_error <= Real(abs_tol);
}

template <class Real>
SumRuleEvaluation<Real> evaluate(const SumRuleQuery& q, const BesselInputs<Real>& bessel, bool with_recursive) {
  using std::abs;
  SumRuleEvaluation<Real> out{q, direct_sum(q, bessel.at_z), closed_form(q, bessel.at_z, bessel.at_2z),
                              std::nullopt, Real(0), Real(0)};
  if (with_recursive) out.rhs_recursive = recursive_form(q, bessel.at_z, bessel.at_2z);
  out.abs_error = abs(out.lhs_direct - out.rhs_closed);
  out.rel_error = relative_error(out.lhs_direct, out.rhs_closed);
  return out;
}

#define SUMRULES_INSTANTIATE(Real)                                                                               \
  template struct BesselInputs<Real>;                                                                            \
  template BesselInputs<Real> make_bessel_inputs(const SumRuleQuery&, const BesselOptions&);                     \
  template class DirectSumPlan<Real>;                                                                            \
  template class ClosedFormPlan<Real>;                                                                           \
  template Real direct_sum(const SumRuleQuery&, const BesselSequence<Real>&);                                    \
  template Real closed_form(const SumRuleQuery&, const BesselSequence<Real>&, const BesselSequence<Real>&);      \
  template Real recursive_form(const SumRuleQuery&, const BesselSequence<Real>&, const BesselSequence<Real>&);   \
  template SidePair<Real> base_rule(BaseRule, int, const BesselSequence<Real>&, const BesselSequence<Real>&);    \
  template struct SumRuleEvaluation<Real>;                                                                       \
  template SumRuleEvaluation<Real> evaluate(const SumRuleQuery&, const BesselInputs<Real>&, bool);               \
  template Real relative_error(const Real&, const Real&);

SUMRULES_INSTANTIATE(double)
SUMRULES_INSTANTIATE(ExtendedReal)

}  // namespace sumrules
