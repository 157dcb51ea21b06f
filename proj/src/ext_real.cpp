#include "satmodel/ext_real.hpp"

#include <algorithm>
#include <limits>

#include "satmodel/errors.hpp"

namespace satmodel {

namespace {

// Height-0 magnitudes with more than this many exponent bits are promoted.
constexpr long kPromoteBits = 1L << 40;
// Height >= 1 mantissas below this are demoted; exp(2^39) still fits.
constexpr double kDemoteLog = 549755813888.0;  // 2^39

// Relative size below which the smaller term of a sum is dropped.
BigReal negligible_log(Precision prec) {
  return -(BigReal::ln2(64) * BigReal::from_uint(static_cast<std::uint64_t>(prec) + 16, 64));
}

}  // namespace

ExtReal::ExtReal(Precision prec) : mag_(prec) {}

ExtReal::ExtReal(const BigReal& value) : mag_(abs(value)) {
  if (!value.is_finite()) throw NumericalError("non-finite value in extended real");
  sign_ = value.sign();
  normalize();
}

void ExtReal::normalize() {
  if (mag_.is_zero()) {
    sign_ = 0;
    height_ = 0;
    return;
  }
  while (mag_.exponent() > kPromoteBits) {
    mag_ = log(mag_);
    ++height_;
  }
  const BigReal demote(kDemoteLog, 64);
  while (height_ > 0 && mag_ < demote) {
    mag_ = exp(mag_);
    --height_;
  }
}

BigReal ExtReal::to_big() const {
  if (height_ > 0) throw NumericalError("value " + to_string(12) + " exceeds the BigReal range");
  return sign_ < 0 ? -mag_ : mag_;
}

double ExtReal::to_double() const {
  if (height_ > 0) return sign_ > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return (sign_ < 0 ? -mag_ : mag_).to_double();
}

ExtReal ExtReal::with_precision(Precision prec) const {
  ExtReal r = *this;
  r.mag_ = mag_.with_precision(prec);
  return r;
}

std::string ExtReal::to_string(int digits) const {
  if (height_ == 0) return (sign_ < 0 ? -mag_ : mag_).to_string(digits);
  std::string s = sign_ < 0 ? "-" : "";
  s += "exp^" + std::to_string(height_) + "(" + mag_.to_string(digits) + ")";
  return s;
}

ExtReal ExtReal::operator-() const {
  ExtReal r = *this;
  r.sign_ = -sign_;
  return r;
}

std::strong_ordering compare_abs(const ExtReal& a, const ExtReal& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
    return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.height() == b.height()) {
    const int c = mpfr_cmp(a.mantissa().get(), b.mantissa().get());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  // Heights overlap near the promotion threshold, so compare logarithms.
  return log_abs(a) <=> log_abs(b);
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  return a.sign_ == b.sign_ && (a.sign_ == 0 || (a.height_ == b.height_ && a.mag_ == b.mag_));
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
  if (a.sign_ == 0) return std::strong_ordering::equal;
  const auto c = compare_abs(a, b);
  return a.sign_ > 0 ? c : (0 <=> c);
}

ExtReal log_abs(const ExtReal& x) {
  if (x.is_zero()) throw NumericalError("logarithm of zero");
  if (x.height_ == 0) return ExtReal(log(x.mag_));
  ExtReal r(x.precision());
  r.sign_ = 1;
  r.height_ = x.height_ - 1;
  r.mag_ = x.mag_;
  r.normalize();
  return r;
}

ExtReal exp(const ExtReal& x) {
  if (x.is_zero()) return ExtReal(BigReal(1.0, x.precision()));
  if (x.height_ > 0) {
    if (x.sign_ < 0) return ExtReal(x.precision());
    ExtReal r = x;
    ++r.height_;
    return r;
  }
  const BigReal demote(kDemoteLog, 64);
  if (x.sign_ > 0 && x.mag_ >= demote) {
    ExtReal r = x;
    r.height_ = 1;
    return r;
  }
  // exp of a very negative height-0 value underflows to exact zero in MPFR.
  return ExtReal(exp(x.to_big()));
}

ExtReal abs(const ExtReal& x) { return x.sign() < 0 ? -x : x; }

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
  const Precision prec = std::max(a.precision(), b.precision());
  if (a.is_zero() || b.is_zero()) return ExtReal(prec);
  if (a.height_ == 0 && b.height_ == 0) return ExtReal(a.to_big() * b.to_big());
  ExtReal r = exp(log_abs(a) + log_abs(b));
  return (a.sign_ * b.sign_ < 0) ? -r : r;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_zero()) return b.with_precision(std::max(a.precision(), b.precision()));
  if (b.is_zero()) return a.with_precision(std::max(a.precision(), b.precision()));
  if (a.height_ == 0 && b.height_ == 0) return ExtReal(a.to_big() + b.to_big());

  const Precision prec = std::max(a.precision(), b.precision());
  const bool a_larger = compare_abs(a, b) != std::strong_ordering::less;
  const ExtReal& big = a_larger ? a : b;
  const ExtReal& small = a_larger ? b : a;

  // |small| / |big| = e^d with d <= 0.
  const ExtReal log_big = log_abs(big);
  const ExtReal d = log_abs(small) + (-log_big);
  if (d < ExtReal(negligible_log(prec))) return big.with_precision(prec);
  const BigReal dd = d.to_big().with_precision(prec);

  if (a.sign_ == b.sign_) {
    ExtReal r = exp(log_big + ExtReal(log1p(exp(dd))));
    return big.sign_ < 0 ? -r : r;
  }
  if (dd.is_zero()) return ExtReal(prec);
  ExtReal r = exp(log_big + ExtReal(log(-expm1(dd))));
  return big.sign_ < 0 ? -r : r;
}

ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

}  // namespace satmodel
