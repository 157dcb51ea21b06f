#include "satmodel/big_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "satmodel/errors.hpp"

namespace satmodel {

ValidationError::ValidationError(std::vector<std::string> messages)
    : std::runtime_error(messages.empty() ? std::string("invalid input") : messages.front()),
      messages_(std::move(messages)) {}

void ensure_wide_exponent_range() {
  // MPFR keeps the exponent range in thread-local storage.
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    done = true;
  }
}

namespace {

Precision wider(const BigReal& a, const BigReal& b) { return std::max(a.precision(), b.precision()); }

template <typename Fn>
BigReal unary(const BigReal& x, Fn fn) {
  BigReal r(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

BigReal::BigReal(Precision prec) {
  ensure_wide_exponent_range();
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(double value, Precision prec) {
  ensure_wide_exponent_range();
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  ensure_wide_exponent_range();
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Leave `other` as a valid minimal-precision zero.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::from_string(std::string_view text, Precision prec) {
  BigReal r(prec);
  std::string s(text);
  if (mpfr_set_str(r.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw ValidationError("not a number: '" + s + "'");
  }
  return r;
}

BigReal BigReal::from_uint(std::uint64_t value, Precision prec) {
  BigReal r(prec);
  mpfr_set_uj(r.value_, value, MPFR_RNDN);
  return r;
}

BigReal BigReal::from_int(std::int64_t value, Precision prec) {
  BigReal r(prec);
  mpfr_set_sj(r.value_, value, MPFR_RNDN);
  return r;
}

BigReal BigReal::ratio(std::uint64_t num, std::uint64_t den, Precision prec) {
  // Exact operands, one rounding.
  BigReal n = from_uint(num, 64);
  BigReal d = from_uint(den, 64);
  BigReal r(prec);
  mpfr_div(r.value_, n.value_, d.value_, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi(Precision prec) {
  BigReal r(prec);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

BigReal BigReal::two_pi(Precision prec) {
  BigReal r = pi(prec);
  mpfr_mul_2ui(r.value_, r.value_, 1, MPFR_RNDN);
  return r;
}

BigReal BigReal::ln2(Precision prec) {
  BigReal r(prec);
  mpfr_const_log2(r.value_, MPFR_RNDN);
  return r;
}

BigReal BigReal::infinity(int sign, Precision prec) {
  BigReal r(prec);
  mpfr_set_inf(r.value_, sign);
  return r;
}

BigReal BigReal::pow2(long exponent, Precision prec) {
  BigReal r(prec);
  mpfr_set_ui_2exp(r.value_, 1, exponent, MPFR_RNDN);
  return r;
}

BigReal BigReal::with_precision(Precision prec) const {
  BigReal r(prec);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

std::string BigReal::to_string(int digits) const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return mpfr_signbit(value_) ? "-0" : "0";
  if (digits <= 0) digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 2;
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), value_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign_str;
  if (mant.front() == '-') {
    sign_str = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign_str + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  const long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

BigReal BigReal::operator-() const { return unary(*this, mpfr_neg); }

BigReal& BigReal::operator+=(const BigReal& rhs) { return *this = *this + rhs; }
BigReal& BigReal::operator-=(const BigReal& rhs) { return *this = *this - rhs; }
BigReal& BigReal::operator*=(const BigReal& rhs) { return *this = *this * rhs; }
BigReal& BigReal::operator/=(const BigReal& rhs) { return *this = *this / rhs; }

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(wider(a, b));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal abs(const BigReal& x) { return unary(x, mpfr_abs); }
BigReal sqrt(const BigReal& x) { return unary(x, mpfr_sqrt); }
BigReal log(const BigReal& x) { return unary(x, mpfr_log); }
BigReal log1p(const BigReal& x) { return unary(x, mpfr_log1p); }
BigReal exp(const BigReal& x) { return unary(x, mpfr_exp); }
BigReal expm1(const BigReal& x) { return unary(x, mpfr_expm1); }
BigReal sin(const BigReal& x) { return unary(x, mpfr_sin); }
BigReal cos(const BigReal& x) { return unary(x, mpfr_cos); }
BigReal asin(const BigReal& x) { return unary(x, mpfr_asin); }

BigReal floor(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

BigReal round(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_round(r.get(), x.get());
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(std::max(x.precision(), y.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal r(std::max(x.precision(), y.precision()));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigReal min(const BigReal& a, const BigReal& b) { return (b < a) ? b : a; }
BigReal max(const BigReal& a, const BigReal& b) { return (a < b) ? b : a; }

BigReal reduce_angle(const BigReal& x) {
  const Precision prec = x.precision();
  if (!x.is_finite() || x.is_zero()) return x;
  // The quotient x / 2pi may have up to exponent(x) integer bits; 2pi must
  // be known to that many bits beyond the target precision.
  const long extra = std::max<long>(0, x.exponent()) + 16;
  const BigReal two_pi = BigReal::two_pi(prec + extra);
  BigReal wide = x.with_precision(prec + extra);
  BigReal r(prec + extra);
  mpfr_remainder(r.get(), wide.get(), two_pi.get(), MPFR_RNDN);
  // remainder lands in [-pi, pi]; map -pi to pi.
  const BigReal pi = BigReal::pi(prec + extra);
  if (r <= -pi) r = r + two_pi;
  if (r > pi) r = r - two_pi;
  return r.with_precision(prec);
}

bool is_pi(const BigReal& x) { return x == BigReal::pi(x.precision()); }

double ulp_distance(const BigReal& a, const BigReal& b, const BigReal& ref, Precision prec) {
  const BigReal diff = abs(a - b);
  if (diff.is_zero()) return 0.0;
  if (ref.is_zero()) return std::numeric_limits<double>::infinity();
  // ulp(ref) = 2^(exponent(ref) - prec)
  BigReal ulp = BigReal::pow2(ref.exponent() - static_cast<long>(prec), 64);
  return (diff / ulp).to_double();
}

}  // namespace satmodel
