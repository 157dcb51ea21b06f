#pragma once

#include <compare>
#include <string>

#include "satmodel/big_real.hpp"

namespace satmodel {

/// Extended-range real number: value = sign * exp^height(mag).
///
/// A plain BigReal tops out near 2^(2^62). Deep levels of a model with fast
/// growing denominators (q_{n+1} = 2^{q_n}) need counts and logarithms far
/// beyond that, so this type stacks exponentials the way level-index
/// arithmetic does. Height 0 is an ordinary signed BigReal. Height h >= 1
/// means |value| = exp(exp(...exp(mag))) with h exponentials and mag huge.
///
/// Only large magnitudes get the extra range; tiny values are never stored
/// here, only their logarithms. Additions of terms that differ by more than
/// 2^-(P+16) in relative size return the larger term unchanged.
class ExtReal {
 public:
  explicit ExtReal(Precision prec = kDefaultPrecision);
  explicit ExtReal(const BigReal& value);

  int sign() const { return sign_; }
  unsigned height() const { return height_; }
  /// |value| when height() == 0, otherwise the innermost argument.
  const BigReal& mantissa() const { return mag_; }
  Precision precision() const { return mag_.precision(); }

  bool is_zero() const { return sign_ == 0; }
  bool fits() const { return height_ == 0; }
  /// Throws NumericalError when the value does not fit a BigReal.
  BigReal to_big() const;
  /// +-inf beyond double range.
  double to_double() const;
  ExtReal with_precision(Precision prec) const;
  std::string to_string(int digits = 0) const;

  ExtReal operator-() const;
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator*(const ExtReal& a, const ExtReal& b);

  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b);

  friend ExtReal log_abs(const ExtReal& x);
  friend ExtReal exp(const ExtReal& x);

 private:
  void normalize();

  int sign_ = 0;
  unsigned height_ = 0;
  BigReal mag_;
};

/// log|x|; x must be non-zero.
ExtReal log_abs(const ExtReal& x);
/// e^x. Results below the BigReal range underflow to exact zero.
ExtReal exp(const ExtReal& x);
ExtReal abs(const ExtReal& x);
/// Compares |a| with |b|.
std::strong_ordering compare_abs(const ExtReal& a, const ExtReal& b);

}  // namespace satmodel
