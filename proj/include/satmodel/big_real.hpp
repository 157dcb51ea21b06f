#pragma once

// <cstdint> must precede mpfr.h to enable the intmax_t setters.
#include <cstdint>
#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace satmodel {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;

/// Arbitrary-precision binary floating-point number (RAII wrapper over MPFR).
///
/// Every value carries its own mantissa precision. Binary operations round
/// to the larger precision of the two operands (round-to-nearest). The MPFR
/// exponent range is widened to its maximum on every thread that constructs
/// a BigReal, so values like exp(q * log r) with |log r| <= 50, q <= 1e6 are
/// far inside the representable range.
class BigReal {
 public:
  explicit BigReal(Precision prec = kDefaultPrecision);
  BigReal(double value, Precision prec);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal from_string(std::string_view text, Precision prec);
  static BigReal from_uint(std::uint64_t value, Precision prec);
  static BigReal from_int(std::int64_t value, Precision prec);
  /// Exact ratio num/den rounded once.
  static BigReal ratio(std::uint64_t num, std::uint64_t den, Precision prec);
  static BigReal pi(Precision prec);
  static BigReal two_pi(Precision prec);
  static BigReal ln2(Precision prec);
  static BigReal infinity(int sign, Precision prec);
  /// 2^exponent, exact.
  static BigReal pow2(long exponent, Precision prec);

  Precision precision() const { return mpfr_get_prec(value_); }
  /// Copy rounded (or exactly widened) to another precision.
  BigReal with_precision(Precision prec) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  bool is_inf() const { return mpfr_inf_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_integer() const { return mpfr_integer_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1. Undefined for 0.
  long exponent() const { return static_cast<long>(mpfr_get_exp(value_)); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Decimal scientific notation; digits == 0 picks enough to round-trip.
  std::string to_string(int digits = 0) const;

  BigReal operator-() const;
  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);

 private:
  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal asin(const BigReal& x);
BigReal floor(const BigReal& x);
/// Nearest integer, ties away from zero.
BigReal round(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& y);
BigReal min(const BigReal& a, const BigReal& b);
BigReal max(const BigReal& a, const BigReal& b);

/// Reduces an angle into (-pi, pi]. The reduction uses 2*pi at a precision
/// wide enough to cover the integer part of x / 2pi.
BigReal reduce_angle(const BigReal& x);
/// True when x is exactly pi rounded to its own precision.
bool is_pi(const BigReal& x);

/// Distance in units in the last place of `ref` (at `prec` bits).
double ulp_distance(const BigReal& a, const BigReal& b, const BigReal& ref, Precision prec);

/// Widens the MPFR exponent range on the calling thread (idempotent).
void ensure_wide_exponent_range();

}  // namespace satmodel
