#include "satmodel/log_polar.hpp"

#include <bit>

#include "satmodel/errors.hpp"

namespace satmodel {

LogPolarComplex::LogPolarComplex(Precision prec) : log_r_(prec), theta_(prec) {}

LogPolarComplex::LogPolarComplex(ExtReal log_r, const BigReal& theta)
    : kind_(Kind::kFinite), log_r_(std::move(log_r)), theta_(reduce_angle(theta)) {}

LogPolarComplex::LogPolarComplex(const BigReal& log_r, const BigReal& theta)
    : LogPolarComplex(ExtReal(log_r), theta) {}

LogPolarComplex LogPolarComplex::zero(Precision prec) { return LogPolarComplex(prec); }

LogPolarComplex LogPolarComplex::infinity(Precision prec) {
  LogPolarComplex u(prec);
  u.kind_ = Kind::kInfinity;
  return u;
}

LogPolarComplex LogPolarComplex::one(Precision prec) { return LogPolarComplex(ExtReal(prec), BigReal(prec)); }

LogPolarComplex LogPolarComplex::from_log(ExtReal log_r) {
  const Precision prec = log_r.precision();
  return LogPolarComplex(std::move(log_r), BigReal(prec));
}

bool LogPolarComplex::is_one() const { return is_finite() && log_r_.is_zero() && theta_.is_zero(); }

LogPolarComplex LogPolarComplex::conj() const {
  LogPolarComplex r = *this;
  // theta = pi is its own conjugate on (-pi, pi].
  if (is_finite() && !is_pi(theta_)) r.theta_ = -theta_;
  return r;
}

LogPolarComplex LogPolarComplex::with_precision(Precision prec) const {
  LogPolarComplex r = *this;
  r.log_r_ = log_r_.with_precision(prec);
  r.theta_ = theta_.with_precision(prec);
  return r;
}

LogPolarComplex to_log_polar(const Complex& z) {
  const Precision prec = std::max(z.re.precision(), z.im.precision());
  if (z.re.is_zero() && z.im.is_zero()) return LogPolarComplex::zero(prec);
  if (!z.re.is_finite() || !z.im.is_finite()) return LogPolarComplex::infinity(prec);
  // Real inputs take the logarithm directly, so log(t) matches -(-log t).
  if (z.im.is_zero()) {
    const BigReal mag = abs(z.re).with_precision(prec);
    return LogPolarComplex(log(mag), z.re.sign() > 0 ? BigReal(prec) : BigReal::pi(prec));
  }
  // Guard bits keep |z| = exp(log_r) within a few ulp after the round trip.
  const Precision wide = prec + 16;
  const BigReal r = hypot(z.re.with_precision(wide), z.im.with_precision(wide));
  BigReal theta = atan2(z.im, z.re);
  if (theta == -BigReal::pi(prec)) theta = BigReal::pi(prec);
  return LogPolarComplex(log(r).with_precision(prec), theta);
}

Complex from_log_polar(const LogPolarComplex& u) {
  const Precision prec = u.precision();
  if (u.is_infinite()) throw NumericalError("point at infinity has no rectangular form");
  if (u.is_zero()) return {BigReal(prec), BigReal(prec)};
  const Precision wide = prec + 16;
  const BigReal r = exp(u.log_r().to_big().with_precision(wide));
  const BigReal th = u.theta().with_precision(wide);
  return {(r * cos(th)).with_precision(prec), (r * sin(th)).with_precision(prec)};
}

LogPolarComplex pow_int(const LogPolarComplex& u, std::uint64_t q) {
  if (q == 0) throw ValidationError("power must be at least 1");
  if (!u.is_finite()) return u;
  const Precision prec = u.precision();
  const ExtReal log_r = u.log_r() * ExtReal(BigReal::from_uint(q, 64));
  // theta * q is exact at prec + bitlen(q); reduction then loses nothing.
  const Precision exact = prec + static_cast<Precision>(std::bit_width(q));
  BigReal wide_theta = u.theta().with_precision(exact) * BigReal::from_uint(q, 64);
  return LogPolarComplex(log_r.with_precision(prec), reduce_angle(wide_theta).with_precision(prec));
}

bool in_closed_disk(const LogPolarComplex& u, const BigReal& eps) {
  if (u.is_zero()) return true;
  if (u.is_infinite()) return false;
  return u.log_r() <= ExtReal(eps);
}

BigReal disk_tolerance(Precision prec) { return BigReal::pow2(-static_cast<long>(prec / 2), 64); }

}  // namespace satmodel
