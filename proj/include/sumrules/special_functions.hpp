#pragma once

#include <span>
#include <vector>

#include "sumrules/errors.hpp"
#include "sumrules/rational.hpp"

namespace sumrules {

inline constexpr int kDefaultMaxOrder = 10000;

struct BesselOptions {
  /// Largest n_max accepted by spherical_j_sequence.
  int max_order = kDefaultMaxOrder;
};

/// j_0(z), ..., j_N(z) at one real argument z >= 0. Immutable.
template <class Real>
class BesselSequence {
 public:
  BesselSequence(Real argument, std::vector<Real> values)
      : argument_(std::move(argument)), values_(std::move(values)) {}

  const Real& argument() const { return argument_; }
  int order_max() const { return static_cast<int>(values_.size()) - 1; }
  std::span<const Real> values() const { return values_; }

  /// j_k(z); k = -1 is allowed and gives cos(z)/z.
  Real at(int k) const;
  const Real& operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }

  /// Throws InsufficientSequence unless orders 0..order are present.
  void require_order(int order) const;

 private:
  Real argument_;
  std::vector<Real> values_;
};

/// Spherical Bessel functions of the first kind for orders 0..n_max.
///
/// Miller's algorithm in ratio form: the ratios j_k/j_{k-1} are produced by
/// downward recurrence from an order well past max(n_max, z) with trial
/// values (0, tiny), then anchored on j_0 = sin(z)/z. When |j_0| <= 1e-3 the
/// anchor switches to the normalization sum sum_k (2k+1) j_k^2 = 1, with the
/// sign taken from j_1. z = 0 returns the exact limits.
template <class Real>
BesselSequence<Real> spherical_j_sequence(int n_max, const Real& z, const BesselOptions& options = {});

/// Starting order of the downward recurrence for a target precision of
/// `digits` significant decimal digits.
int miller_start_order(int n_max, double z, int digits);

extern template class BesselSequence<double>;
extern template class BesselSequence<ExtendedReal>;
extern template BesselSequence<double> spherical_j_sequence(int, const double&, const BesselOptions&);
extern template BesselSequence<ExtendedReal> spherical_j_sequence(int, const ExtendedReal&, const BesselOptions&);

}  // namespace sumrules
