#include "satmodel/model.hpp"

#include <bit>

#include "satmodel/errors.hpp"

namespace satmodel {

namespace {

// Guard bits used inside a single level step.
constexpr Precision kGuard = 32;

std::string format_t_error(std::size_t n, const BigReal& t) {
  const std::string i = std::to_string(n);
  return "t_" + i + " = C*p_" + i + "/q_" + i + " = " + t.to_string(6) + " not in (0,1)";
}

// Beyond this |log|w|| the second-order terms of log(1 - w) drop below the
// working precision and the asymptotic forms are used.
BigReal asymptotic_threshold(Precision prec) {
  return BigReal::ln2(64) * BigReal::from_uint(static_cast<std::uint64_t>(prec) + kGuard, 64);
}

// (cos theta, sin theta) with exact values on the real axis.
std::pair<BigReal, BigReal> unit(const BigReal& theta, Precision prec) {
  if (theta.is_zero()) return {BigReal(1.0, prec), BigReal(prec)};
  if (is_pi(abs(theta))) return {BigReal(-1.0, prec), BigReal(prec)};
  const BigReal th = theta.with_precision(prec);
  return {cos(th), sin(th)};
}

// arg(-1/z) = pi - theta, exact on the real axis.
BigReal opposite_angle(const BigReal& theta, Precision prec) {
  if (theta.is_zero()) return BigReal::pi(theta.precision());
  if (is_pi(theta)) return BigReal(theta.precision());
  return reduce_angle(BigReal::pi(prec) - theta.with_precision(prec));
}

struct LogValue {
  bool zero = false;
  BigReal re;  // log|v|
  BigReal im;  // arg v
};

// log(1 - w) for w = e^lambda (cos a, sin a), |lambda| moderate.
LogValue log_one_minus(const BigReal& lambda, const BigReal& c, const BigReal& s, Precision prec) {
  const BigReal r = exp(lambda.with_precision(prec));
  const BigReal wr = r * c;
  const BigReal wi = r * s;
  const BigReal one(1.0, prec);
  const BigReal xr = one - wr;
  const BigReal xi = -wi;
  LogValue out{false, BigReal(prec), BigReal(prec)};
  if (xr.is_zero() && xi.is_zero()) {
    out.zero = true;
    return out;
  }
  if (r < BigReal(0.5, prec)) {
    // |1 - w|^2 = 1 - 2 Re w + |w|^2, computed without cancellation.
    out.re = log1p(r * r - wr - wr) / BigReal(2.0, prec);
  } else {
    out.re = log(hypot(xr, xi));
  }
  // Real 1 - w keeps an exact angle; atan2 would give -pi from a signed zero.
  if (xi.is_zero()) out.im = xr.sign() < 0 ? BigReal::pi(prec) : BigReal(prec);
  else out.im = atan2(xi, xr);
  return out;
}

BigReal narrow_angle(const BigReal& a, Precision prec) {
  return is_pi(a) ? BigReal::pi(prec) : a.with_precision(prec);
}

// q * theta reduced. For counts beyond 64 bits only the real-axis angles
// 0 and pi survive; anything else is reported through std::nullopt.
std::optional<BigReal> multiply_angle(const Denominator& q, const BigReal& angle, Precision prec) {
  if (angle.is_zero()) return BigReal(prec);
  if (q.exact) {
    const Precision exact = angle.precision() + static_cast<Precision>(std::bit_width(*q.exact));
    const BigReal prod = angle.with_precision(exact) * BigReal::from_uint(*q.exact, 64);
    return reduce_angle(prod).with_precision(prec);
  }
  if (is_pi(abs(angle)) && q.even) return *q.even ? BigReal(prec) : BigReal::pi(prec);
  return std::nullopt;
}

LogPolarComplex finish(const ExtReal& log_r, const std::optional<BigReal>& theta, const BigReal& eps, Precision prec,
                       const char* what) {
  if (theta) return LogPolarComplex(log_r.with_precision(prec), *theta);
  // The winding is lost. An escaping value does not need its argument.
  if (log_r > ExtReal(eps)) return LogPolarComplex(log_r.with_precision(prec), BigReal(prec));
  throw NumericalError(std::string("argument of ") + what + " cannot be resolved at " + std::to_string(prec) +
                       " bits");
}

}  // namespace

ModelParams::ModelParams(const BigReal& C, const RotationSequence& rotations, std::size_t count, Precision prec)
    : C_(C.with_precision(prec)), rotations_(rotations), prec_(prec), eps_(disk_tolerance(prec)) {
  std::vector<std::string> errors;
  if (!(C_ > BigReal(1.0, prec))) errors.push_back("C must exceed 1");
  if (count > rotations.available()) {
    errors.push_back("horizon needs " + std::to_string(count) + " rotation numbers but only " +
                     std::to_string(rotations.available()) + " are given");
  }
  if (!errors.empty()) throw ValidationError(errors);

  const Precision wide = prec + 64;
  for (RotationNumber& rn : rotations.expand(count, prec)) {
    Level lv;
    lv.p = rn.p;
    lv.q = rn.q;
    lv.cp = (C_.with_precision(wide) * BigReal::from_uint(rn.p, 64)).with_precision(prec);
    lv.log_cp = log(lv.cp);
    if (rn.q.exact) {
      // C*p is exact at the wide precision, so t is rounded once.
      const BigReal num = C_.with_precision(wide) * BigReal::from_uint(rn.p, 64);
      BigReal t(prec);
      mpfr_div(t.get(), num.get(), BigReal::from_uint(*rn.q.exact, 64).get(), MPFR_RNDN);
      lv.t = t;
    } else {
      // log t = log(C p) - log q; the value may lie far below the BigReal range.
      const ExtReal log_t = ExtReal(lv.log_cp) - log_abs(rn.q.value);
      if (log_t.fits()) {
        BigReal t = exp(log_t.to_big());
        if (!t.is_zero()) lv.t = t;
      }
      lv.neg_log_t = -log_t;
    }
    const std::size_t n = levels_.size();
    if (lv.t) {
      if (!(*lv.t < BigReal(1.0, prec)) || !(lv.t->sign() > 0)) {
        errors.push_back(format_t_error(n, *lv.t));
        levels_.push_back(std::move(lv));
        continue;
      }
      // Same rounding as to_log_polar(t), so that phi_n(t_n) is exactly 0.
      lv.neg_log_t = ExtReal(-log(*lv.t));
      lv.g = -log1p(-lv.t->with_precision(wide)) / lv.t->with_precision(wide);
      lv.g = lv.g.with_precision(prec);
    } else {
      if (lv.neg_log_t.sign() <= 0) errors.push_back("t_" + std::to_string(n) + " not in (0,1)");
      lv.g = BigReal(1.0, prec);
    }
    levels_.push_back(std::move(lv));
  }
  if (!errors.empty()) throw ValidationError(errors);
}

const Level& ModelParams::level(std::size_t n) const {
  if (n >= levels_.size()) {
    throw ValidationError("level " + std::to_string(n) + " is beyond the " + std::to_string(levels_.size()) +
                          " levels built");
  }
  return levels_[n];
}

ModelParams ModelParams::with_constant(const BigReal& C) const { return ModelParams(C, rotations_, size(), prec_); }

ModelParams ModelParams::with_precision(Precision prec) const {
  return ModelParams(C_.with_precision(prec), rotations_, size(), prec);
}

BigReal t_value(const ModelParams& params, std::size_t n) {
  const Level& lv = params.level(n);
  if (!lv.t) throw NumericalError("t_" + std::to_string(n) + " = exp(-" + lv.neg_log_t.to_string(12) +
                                  ") lies below the BigReal range");
  return *lv.t;
}

LogPolarComplex moebius_apply(const BigReal& t, const LogPolarComplex& z) {
  const Precision prec = std::max(t.precision(), z.precision());
  const Precision wide = prec + kGuard;
  const BigReal tw = t.with_precision(wide);
  const BigReal neg_log1m_t = -log1p(-tw);
  if (z.is_zero()) return LogPolarComplex::infinity(prec);
  if (z.is_infinite()) return LogPolarComplex(neg_log1m_t.with_precision(prec), BigReal(prec));
  if (z.is_one()) return LogPolarComplex::one(prec);

  // w = t / z
  // log t at t's own precision keeps lambda exactly 0 for z = t.
  const ExtReal lambda = ExtReal(log(t)) - z.log_r();
  const BigReal tau = asymptotic_threshold(prec);
  const auto [c, s] = unit(-z.theta(), wide);
  if (lambda > ExtReal(tau)) {
    // 1 - w ~ -w
    const ExtReal lr = lambda + ExtReal(neg_log1m_t);
    return LogPolarComplex(lr.with_precision(prec), opposite_angle(z.theta(), wide).with_precision(prec));
  }
  if (lambda < ExtReal(-tau)) {
    // log(1 - w) ~ -w, with |w| below every representable correction.
    const BigReal r = lambda.fits() ? exp(lambda.to_big()) : BigReal(wide);
    return LogPolarComplex((neg_log1m_t - r * c).with_precision(prec), (-(r * s)).with_precision(prec));
  }
  const LogValue l = log_one_minus(lambda.to_big(), c, s, wide);
  if (l.zero) return LogPolarComplex::zero(prec);
  return LogPolarComplex((l.re + neg_log1m_t).with_precision(prec), narrow_angle(l.im, prec));
}

Complex moebius_inverse(const BigReal& t, const Complex& u) {
  const Precision prec = std::max({t.precision(), u.re.precision(), u.im.precision()});
  const BigReal one(1.0, prec);
  const BigReal s = one - t;
  // d = 1 - (1-t) u
  const BigReal dr = one - s * u.re;
  const BigReal di = -(s * u.im);
  const BigReal den = dr * dr + di * di;
  if (den.is_zero()) return {BigReal::infinity(1, prec), BigReal(prec)};
  return {t * dr / den, -(t * di) / den};
}

Disk moebius_preimage_disk(const BigReal& t) {
  const Precision prec = t.precision();
  const BigReal one(1.0, prec);
  const BigReal left = t / (BigReal(2.0, prec) - t);
  return {(one + left) / BigReal(2.0, prec), (one - left) / BigReal(2.0, prec)};
}

LogPolarComplex phi_apply(const ModelParams& params, std::size_t n, const LogPolarComplex& z) {
  const Level& lv = params.level(n);
  const Precision prec = params.precision();
  const Precision wide = prec + kGuard;
  const BigReal cpg = lv.cp * lv.g;  // q * (-log(1 - t))

  if (z.is_zero()) return LogPolarComplex::infinity(prec);
  if (z.is_infinite()) return LogPolarComplex(cpg, BigReal(prec));
  if (z.is_one()) return LogPolarComplex::one(prec);

  const BigReal tau = asymptotic_threshold(prec);
  const ExtReal& ell = z.log_r();
  const BigReal& theta = z.theta();
  // lambda = log|w| with w = t/z; arg w = -theta.
  const ExtReal lambda = -lv.neg_log_t - ell;

  if (lambda > ExtReal(tau)) {
    // |z| far below t: 1 - w ~ -w, the point leaves the disk.
    const ExtReal lr = lv.q.value * lambda + ExtReal(cpg);
    const BigReal arg = opposite_angle(theta, wide);
    return finish(lr, multiply_angle(lv.q, arg, prec), params.tolerance(), prec, "phi");
  }

  if (lambda < ExtReal(-tau)) {
    // |z| far above t: q log(1 - w) ~ -q w = -(Cp/z), independent of q.
    const ExtReal kappa = ExtReal(lv.log_cp) - ell;
    if (kappa < ExtReal(-tau)) return LogPolarComplex(cpg, BigReal(prec));
    const bool real_pos = theta.is_zero();
    const bool real_neg = is_pi(theta);
    if (real_pos || real_neg) {
      const ExtReal e = exp(kappa);
      const ExtReal lr = real_pos ? ExtReal(cpg) - e : ExtReal(cpg) + e;
      return LogPolarComplex(lr.with_precision(prec), BigReal(prec));
    }
    const auto [c, s] = unit(theta, wide);
    // The winding e^kappa sin(theta) is resolvable while it has spare bits.
    const bool resolvable = kappa.fits() && kappa.to_big() < BigReal::ln2(64) * BigReal::from_uint(prec / 2, 64);
    if (resolvable) {
      const BigReal e = exp(kappa.to_big().with_precision(wide));
      return LogPolarComplex((cpg - e * c).with_precision(prec), reduce_angle(e * s).with_precision(prec));
    }
    if (c.sign() < 0) {
      const ExtReal lr = ExtReal(cpg) + exp(kappa + ExtReal(log(-c)));
      return LogPolarComplex(lr.with_precision(prec), BigReal(prec));
    }
    throw NumericalError("argument of phi_" + std::to_string(n) + " cannot be resolved at " + std::to_string(prec) +
                         " bits");
  }

  const auto [c, s] = unit(-theta, wide);
  const LogValue l = log_one_minus(lambda.to_big(), c, s, wide);
  if (l.zero) return LogPolarComplex::zero(prec);
  const ExtReal lr = lv.q.value * ExtReal(l.re) + ExtReal(cpg);
  std::optional<BigReal> arg = multiply_angle(lv.q, l.im, prec);
  if (!arg && !lv.q.exact) {
    // q t = C p exactly, so q log(1 - w) = (Cp / z) * log(1 - w) / w and q
    // itself is never needed. Resolvable while |Cp / z| leaves spare bits.
    const ExtReal kappa = ExtReal(lv.log_cp) - ell;
    if (kappa.fits() && kappa.to_big() < BigReal::ln2(64) * BigReal::from_uint(prec / 2, 64)) {
      const BigReal r = exp(lambda.to_big().with_precision(wide));
      const BigReal wr = r * c, wi = r * s;
      const BigReal den = wr * wr + wi * wi;
      // L = log(1 - w) / w
      const BigReal Lr = (l.re * wr + l.im * wi) / den;
      const BigReal Li = (l.im * wr - l.re * wi) / den;
      // Cp / z = e^kappa (c, s) since (c, s) is the direction of -theta.
      const BigReal e = exp(kappa.to_big().with_precision(wide));
      const BigReal Qr = e * (c * Lr - s * Li);
      const BigReal Qi = e * (c * Li + s * Lr);
      return LogPolarComplex((Qr + cpg).with_precision(prec), reduce_angle(Qi).with_precision(prec));
    }
  }
  return finish(lr, arg, params.tolerance(), prec, "phi");
}

LogPolarComplex root(const LogPolarComplex& u, std::uint64_t q, std::uint64_t k) {
  if (q == 0) throw ValidationError("root order must be at least 1");
  if (!u.is_finite()) return u;
  const Precision prec = u.precision();
  const BigReal qq = BigReal::from_uint(q, 64);
  const ExtReal lr = u.log_r().fits() ? ExtReal(u.log_r().to_big() / qq) : exp(log_abs(u.log_r()) - ExtReal(log(qq)));
  const ExtReal signed_lr = u.log_r().sign() < 0 ? -abs(lr) : abs(lr);
  const BigReal th = (u.theta() + BigReal::two_pi(prec) * BigReal::from_uint(k % q, 64)) / qq;
  return LogPolarComplex(signed_lr.with_precision(prec), th);
}

EscapeTrace orbit(const ModelParams& params, const LogPolarComplex& z, std::size_t horizon) {
  if (horizon > params.size()) {
    throw ValidationError("horizon " + std::to_string(horizon) + " exceeds the " + std::to_string(params.size()) +
                          " levels built");
  }
  EscapeTrace trace;
  trace.horizon = horizon;
  trace.levels.push_back(z);
  if (!in_closed_disk(z, params.tolerance())) {
    trace.depth = 0;
    return trace;
  }
  LogPolarComplex cur = z;
  for (std::size_t n = 0; n < horizon; ++n) {
    cur = phi_apply(params, n, cur);
    trace.levels.push_back(cur);
    if (!in_closed_disk(cur, params.tolerance())) {
      trace.depth = n;
      return trace;
    }
  }
  return trace;
}

std::size_t escape_depth(const ModelParams& params, const LogPolarComplex& z, std::size_t horizon) {
  if (horizon > params.size()) {
    throw ValidationError("horizon " + std::to_string(horizon) + " exceeds the " + std::to_string(params.size()) +
                          " levels built");
  }
  if (!in_closed_disk(z, params.tolerance())) return 0;
  LogPolarComplex cur = z;
  for (std::size_t n = 0; n < horizon; ++n) {
    cur = phi_apply(params, n, cur);
    if (!in_closed_disk(cur, params.tolerance())) return n;
  }
  return horizon;
}

}  // namespace satmodel
