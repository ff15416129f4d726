#include "sumrules/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sumrules {
namespace {

template <class Real>
bool is_finite(const Real& x) {
  using boost::multiprecision::isfinite;
  using std::isfinite;
  return isfinite(x);
}

}  // namespace

template <class Real>
Real BesselSequence<Real>::at(int k) const {
  if (k == -1) {
    using std::cos;
    if (argument_ == 0) throw DomainError("j_{-1}(z) is singular at z = 0");
    return cos(argument_) / argument_;
  }
  require_order(k);
  return values_[static_cast<std::size_t>(k)];
}

template <class Real>
void BesselSequence<Real>::require_order(int order) const {
  if (order < 0 || order > order_max()) {
    throw InsufficientSequence("Bessel sequence holds orders 0.." + std::to_string(order_max()) +
                               ", order " + std::to_string(order) + " requested");
  }
}

int miller_start_order(int n_max, double z, int digits) {
  const double base = std::max(static_cast<double>(n_max), std::ceil(z));
  const double d = static_cast<double>(digits);
  const double margin = d + 2.0 * std::sqrt(d / 15.0) * std::sqrt(static_cast<double>(n_max) + z);
  return static_cast<int>(base + std::ceil(margin));
}

template <class Real>
BesselSequence<Real> spherical_j_sequence(int n_max, const Real& z, const BesselOptions& options) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;

  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (n_max > options.max_order) {
    throw DomainError("n_max " + std::to_string(n_max) + " exceeds the order ceiling " +
                      std::to_string(options.max_order));
  }
  if (!is_finite(z)) throw DomainError("z must be finite");
  if (z < 0) throw DomainError("z must be >= 0");

  std::vector<Real> values(static_cast<std::size_t>(n_max) + 1, Real(0));
  if (z == 0) {
    values[0] = 1;
    return BesselSequence<Real>(z, std::move(values));
  }

  const int digits = std::numeric_limits<Real>::digits10 + 1;
  const int start = miller_start_order(n_max, static_cast<double>(z), digits);

  // ratio[k] = j_k / j_{k-1}; ratio[start + 1] = 0 plays the role of the
  // trial pair (0, tiny).
  std::vector<Real> ratio(static_cast<std::size_t>(start) + 2, Real(0));
  for (int k = start; k >= 1; --k) {
    ratio[k] = z / (Real(2 * k + 1) - z * ratio[k + 1]);
  }

  const Real j0 = sin(z) / z;
  if (abs(j0) > Real(1e-3)) {
    values[0] = j0;
    for (int k = 1; k <= n_max; ++k) values[k] = ratio[k] * values[k - 1];
  } else {
    // Anchor on an unnormalized j_1 = 1 and fix the scale from the sum rule
    // sum_k (2k+1) j_k^2 = 1, carried far enough to reach the tail.
    const int n_norm = std::max(n_max, start - 1);  // start >= 16
    std::vector<Real> u(static_cast<std::size_t>(n_norm) + 1, Real(0));
    u[1] = 1;
    for (int k = 2; k <= n_norm; ++k) u[k] = ratio[k] * u[k - 1];
    u[0] = Real(3) / z * u[1] - u[2];
    Real norm = 0;
    for (int k = n_norm; k >= 0; --k) norm += Real(2 * k + 1) * u[k] * u[k];
    const Real j1 = sin(z) / (z * z) - cos(z) / z;
    Real scale = Real(1) / sqrt(norm);
    if (j1 < 0) scale = -scale;
    for (int k = 1; k <= n_max; ++k) values[k] = scale * u[k];
    // u[0] came from a cancelling difference; sin(z)/z does not.
    values[0] = j0;
  }
  // Past the normal range the products underflow gradually and then to
  // exactly zero; no clamping, so the recurrence still holds there to within
  // a few subnormal ulps.
  return BesselSequence<Real>(z, std::move(values));
}

template class BesselSequence<double>;
template class BesselSequence<ExtendedReal>;
template BesselSequence<double> spherical_j_sequence(int, const double&, const BesselOptions&);
template BesselSequence<ExtendedReal> spherical_j_sequence(int, const ExtendedReal&, const BesselOptions&);

}  // namespace sumrules
