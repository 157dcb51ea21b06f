#include "satmodel/rotation.hpp"

#include <bit>
#include <limits>

#include "satmodel/errors.hpp"

namespace satmodel {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Denominator Denominator::from_uint(std::uint64_t q, Precision prec) {
  Denominator d;
  d.value = ExtReal(BigReal::from_uint(q, std::max<Precision>(prec, 64)).with_precision(prec));
  d.exact = q;
  d.even = (q % 2 == 0);
  return d;
}

std::string Denominator::to_string() const {
  if (exact) return std::to_string(*exact);
  return value.to_string(20);
}

std::string to_string(GeneratorRule::Kind kind) {
  switch (kind) {
    case GeneratorRule::Kind::kAffine:
      return "affine";
    case GeneratorRule::Kind::kGeometric:
      return "geometric";
    case GeneratorRule::Kind::kTower:
      return "tower";
  }
  return "unknown";
}

namespace {

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::nullopt;
  }
  return r;
}

}  // namespace

Denominator GeneratorRule::next(const Denominator& q, Precision prec) const {
  Denominator d;
  switch (kind) {
    case Kind::kAffine: {
      std::uint64_t v = 0;
      if (q.exact && !__builtin_mul_overflow(a, *q.exact, &v) && !__builtin_add_overflow(v, b, &v)) {
        return Denominator::from_uint(v, prec);
      }
      d.value = q.value * ExtReal(BigReal::from_uint(a, prec)) + ExtReal(BigReal::from_uint(b, prec));
      if (q.even) d.even = !((a % 2 == 1 && !*q.even) != (b % 2 == 1));
      break;
    }
    case Kind::kGeometric: {
      std::uint64_t v = 0;
      if (q.exact && !__builtin_mul_overflow(ratio, *q.exact, &v)) return Denominator::from_uint(v, prec);
      d.value = q.value * ExtReal(BigReal::from_uint(ratio, prec));
      if (ratio % 2 == 0 || (q.even && *q.even)) {
        d.even = true;
      } else if (q.even) {
        d.even = false;
      }
      break;
    }
    case Kind::kTower: {
      if (q.exact) {
        if (auto v = checked_pow(base, std::min<std::uint64_t>(*q.exact, 64))) {
          if (*q.exact <= 64) return Denominator::from_uint(*v, prec);
        }
        // A power of two base stays exact as a BigReal for any q that fits.
        if (std::has_single_bit(base)) {
          const std::uint64_t k = static_cast<std::uint64_t>(std::countr_zero(base));
          std::uint64_t bits = 0;
          if (!__builtin_mul_overflow(k, *q.exact, &bits) && bits < (std::uint64_t{1} << 40)) {
            d.value = ExtReal(BigReal::pow2(static_cast<long>(bits), prec));
            d.even = true;
            return d;
          }
        }
      }
      d.value = exp(q.value * ExtReal(log(BigReal::from_uint(base, prec))));
      d.even = (base % 2 == 0);
      break;
    }
  }
  return d;
}

BigReal GeneratorRule::growth_log(const Denominator& q, Precision prec) const {
  if (kind == Kind::kTower) return log(BigReal::from_uint(base, prec));
  const Denominator nq = next(q, prec);
  if (nq.value.fits() && q.value.fits()) return log(nq.value.to_big()) / q.value.to_big();
  // log(q') / q = exp(log log q' - log q)
  return exp(log_abs(log_abs(nq.value)) - log_abs(q.value)).to_big();
}

std::string GeneratorRule::describe() const {
  std::string s = to_string(kind) + "(q0=" + std::to_string(q0) + ", p=" + std::to_string(p);
  switch (kind) {
    case Kind::kAffine:
      s += ", a=" + std::to_string(a) + ", b=" + std::to_string(b);
      break;
    case Kind::kGeometric:
      s += ", ratio=" + std::to_string(ratio);
      break;
    case Kind::kTower:
      s += ", base=" + std::to_string(base);
      break;
  }
  return s + ")";
}

RotationSequence::RotationSequence(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& fractions)
    : fractions_(fractions) {
  std::vector<std::string> errors;
  for (std::size_t n = 0; n < fractions_.size(); ++n) {
    const auto [p, q] = fractions_[n];
    const std::string name = "p_" + std::to_string(n) + "/q_" + std::to_string(n) + " = " + std::to_string(p) + "/" +
                             std::to_string(q);
    if (p == 0 || p >= q) errors.push_back(name + " not in (0,1)");
    else if (gcd_u64(p, q) != 1) errors.push_back(name + " is not reduced");
  }
  if (!errors.empty()) throw ValidationError(errors);
}

RotationSequence::RotationSequence(const GeneratorRule& rule) : rule_(rule) {
  std::vector<std::string> errors;
  if (rule.q0 < 2) errors.push_back("generator q0 must be at least 2");
  if (rule.p == 0 || rule.p >= rule.q0) errors.push_back("generator p must satisfy 0 < p < q0");
  else if (gcd_u64(rule.p, rule.q0) != 1) errors.push_back("generator p and q0 must be coprime");
  switch (rule.kind) {
    case GeneratorRule::Kind::kAffine:
      if (rule.a == 0 || (rule.a == 1 && rule.b == 0)) errors.push_back("affine rule must grow (a >= 1, a + b > 1)");
      break;
    case GeneratorRule::Kind::kGeometric:
      if (rule.ratio < 2) errors.push_back("geometric ratio must be at least 2");
      break;
    case GeneratorRule::Kind::kTower:
      if (rule.base < 2) errors.push_back("tower base must be at least 2");
      break;
  }
  if (!errors.empty()) throw ValidationError(errors);
}

std::size_t RotationSequence::available() const {
  return rule_ ? std::numeric_limits<std::size_t>::max() : fractions_.size();
}

std::vector<RotationNumber> RotationSequence::expand(std::size_t count, Precision prec) const {
  if (count > available()) {
    throw ValidationError("requested " + std::to_string(count) + " rotation numbers but only " +
                          std::to_string(available()) + " are available");
  }
  std::vector<RotationNumber> out;
  out.reserve(count);
  if (!rule_) {
    for (std::size_t n = 0; n < count; ++n) {
      out.push_back({fractions_[n].first, Denominator::from_uint(fractions_[n].second, prec)});
    }
    return out;
  }
  Denominator q = Denominator::from_uint(rule_->q0, prec);
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) q = rule_->next(q, prec);
    // Coprimality can only be checked where q is known exactly or by parity.
    if (q.exact && gcd_u64(rule_->p, *q.exact) != 1) {
      throw ValidationError("generator term q_" + std::to_string(n) + " = " + std::to_string(*q.exact) +
                            " is not coprime to p = " + std::to_string(rule_->p));
    }
    if (!q.exact && q.even && *q.even && rule_->p % 2 == 0) {
      throw ValidationError("generator term q_" + std::to_string(n) + " is even and p = " + std::to_string(rule_->p) +
                            " is even");
    }
    out.push_back({rule_->p, q});
  }
  return out;
}

std::vector<BigReal> RotationSequence::growth_logs(std::size_t count, Precision prec) const {
  const auto terms = expand(count, prec);
  std::vector<BigReal> out;
  for (std::size_t n = 0; n + 1 < terms.size(); ++n) {
    if (rule_) {
      out.push_back(rule_->growth_log(terms[n].q, prec));
    } else {
      out.push_back(log(terms[n + 1].q.value.to_big()) / terms[n].q.value.to_big());
    }
  }
  return out;
}

}  // namespace satmodel
