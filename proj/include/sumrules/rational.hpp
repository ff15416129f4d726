#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace sumrules {

/// Arbitrary-precision integer and rational. cpp_rational keeps values in
/// lowest terms and throws on division by zero.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// num/den for any nonzero den. The two-argument cpp_rational constructor
/// rejects negative denominators, so go through division instead.
inline Rational ratio(const Integer& num, const Integer& den) { return Rational(num) / Rational(den); }

/// 113-bit binary floating point, used where double cannot resolve the
/// cancellation inside a closed form.
using ExtendedReal = boost::multiprecision::cpp_bin_float_quad;

/// A number of the form n/2 with n integer, stored as n.
///
/// Pochhammer symbols in the sum rules start at integers or half-integers;
/// keeping them in this form makes the zero-factor test an integer compare.
class HalfInteger {
 public:
  HalfInteger() = default;

  static HalfInteger from_twice(Integer twice) { return HalfInteger(std::move(twice)); }
  static HalfInteger from_integer(const Integer& value) { return HalfInteger(2 * value); }

  const Integer& twice_value() const { return twice_; }
  bool is_integer() const { return (twice_ & 1) == 0; }
  bool is_zero() const { return twice_ == 0; }
  Rational to_rational() const { return ratio(twice_, Integer(2)); }

  HalfInteger operator+(long long offset) const { return HalfInteger(twice_ + 2 * Integer(offset)); }
  HalfInteger operator-(long long offset) const { return HalfInteger(twice_ - 2 * Integer(offset)); }
  friend bool operator==(const HalfInteger&, const HalfInteger&) = default;

 private:
  explicit HalfInteger(Integer twice) : twice_(std::move(twice)) {}
  Integer twice_ = 0;
};

/// The half-integer n + 1/2.
inline HalfInteger half_plus(long long n) { return HalfInteger::from_twice(Integer(2 * n + 1)); }

Integer factorial(int n);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& value);

template <class Real>
Real to_real(const Rational& value) {
  return value.convert_to<Real>();
}

}  // namespace sumrules
