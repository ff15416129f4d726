#pragma once

#include <optional>
#include <vector>

#include "sumrules/exact_coefficients.hpp"
#include "sumrules/special_functions.hpp"

namespace sumrules {

inline constexpr int kMaxEll = 10000;
inline constexpr double kMaxZ = 1e4;
/// Relative errors are taken against max(|lhs|, kRelativeErrorFloor).
inline constexpr double kRelativeErrorFloor = 1e-30;

struct SumRuleQuery {
  Hierarchy hierarchy = Hierarchy::H1;
  int p = 0;
  int ell = 0;
  double z = 1.0;
};

/// Throws DomainError naming the violated constraint.
void validate(const SumRuleQuery& q);

/// Bessel inputs for one query: orders 0..ell+1 at z and 0..p+1 at 2z.
template <class Real>
struct BesselInputs {
  BesselSequence<Real> at_z;
  BesselSequence<Real> at_2z;
};

template <class Real>
BesselInputs<Real> make_bessel_inputs(const SumRuleQuery& q, const BesselOptions& options = {});

/// Left-hand-side weights of one rule converted to Real once.
template <class Real>
class DirectSumPlan {
 public:
  DirectSumPlan(Hierarchy h, int p, int ell);

  /// Compensated (Neumaier) sum of w_k [j_k(z)]^2 over the rule's range.
  Real evaluate(const BesselSequence<Real>& bessel) const;

  int first_index() const { return first_; }
  int ell() const { return ell_; }

 private:
  int first_ = 0;
  int ell_ = 0;
  std::vector<Real> weights_;  // weights_[i] multiplies j_{first_+i}^2
};

/// Boundary polynomials and tail of one rule converted to Real once, so
/// repeated evaluation is a few Horner steps.
template <class Real>
class ClosedFormPlan {
 public:
  ClosedFormPlan(Hierarchy h, int p, int ell);

  Real evaluate(const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z) const;

  Hierarchy hierarchy() const { return hierarchy_; }
  int p() const { return p_; }
  int ell() const { return ell_; }

 private:
  Real tail(const Real& z, const BesselSequence<Real>& at_2z) const;

  Hierarchy hierarchy_;
  int p_;
  int ell_;
  std::vector<Real> a_, b_, c_, tail_;
};

template <class Real>
Real direct_sum(const SumRuleQuery& q, const BesselSequence<Real>& bessel);

template <class Real>
Real closed_form(const SumRuleQuery& q, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z);

/// Level-p value reached by stepping up from the lowest-order rule:
/// H1 one level at a time from the p = 0 rule; H2 likewise from the
/// non-alternating (2k+1) rule; the alternating composite rule two levels at
/// a time from its p = 0 or p = 1 seed. H3 is the f_weight combination of
/// composite levels 0..p.
template <class Real>
Real recursive_form(const SumRuleQuery& q, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z);

/// The four lowest-order rules the hierarchies grow from.
///   Reciprocal:              sum 1/((2k-1)(2k+3)) j_k^2
///   Odd:                     sum (2k+1) j_k^2
///   AlternatingOdd:          sum (-1)^k (2k+1) j_k^2
///   AlternatingOddQuadratic: sum (-1)^k (2k+1) k(k+1) j_k^2
enum class BaseRule { Reciprocal, Odd, AlternatingOdd, AlternatingOddQuadratic };

template <class Real>
struct SidePair {
  Real lhs;
  Real rhs;
};

template <class Real>
SidePair<Real> base_rule(BaseRule rule, int ell, const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z);

template <class Real>
struct SumRuleEvaluation {
  SumRuleQuery query;
  Real lhs_direct;
  Real rhs_closed;
  std::optional<Real> rhs_recursive;
  Real abs_error;
  Real rel_error;

  /// rel_error <= rel_tol, or abs_error <= abs_tol for sums that vanish.
  bool passed(double rel_tol, double abs_tol = 0.0) const;
};

template <class Real>
SumRuleEvaluation<Real> evaluate(const SumRuleQuery& q, const BesselInputs<Real>& bessel, bool with_recursive);

template <class Real>
Real relative_error(const Real& reference, const Real& value);

#define SUMRULES_DECLARE(Real)                                                                                  \
  extern template struct BesselInputs<Real>;                                                                    \
  extern template BesselInputs<Real> make_bessel_inputs(const SumRuleQuery&, const BesselOptions&);             \
  extern template class DirectSumPlan<Real>;                                                                    \
  extern template class ClosedFormPlan<Real>;                                                                   \
  extern template Real direct_sum(const SumRuleQuery&, const BesselSequence<Real>&);                            \
  extern template Real closed_form(const SumRuleQuery&, const BesselSequence<Real>&, const BesselSequence<Real>&); \
  extern template Real recursive_form(const SumRuleQuery&, const BesselSequence<Real>&,                         \
                                      const BesselSequence<Real>&);                                             \
  extern template SidePair<Real> base_rule(BaseRule, int, const BesselSequence<Real>&, const BesselSequence<Real>&); \
  extern template struct SumRuleEvaluation<Real>;                                                               \
  extern template SumRuleEvaluation<Real> evaluate(const SumRuleQuery&, const BesselInputs<Real>&, bool);       \
  extern template Real relative_error(const Real&, const Real&);

SUMRULES_DECLARE(double)
SUMRULES_DECLARE(ExtendedReal)
#undef SUMRULES_DECLARE

}  // namespace sumrules
