#include "satmodel/odometer.hpp"

#include <limits>
#include <string>

#include "satmodel/errors.hpp"

namespace satmodel {

OdometerScale::OdometerScale(std::vector<std::uint64_t> moduli) : moduli_(std::move(moduli)) {
  cumulative_.push_back(1);
  for (std::uint64_t q : moduli_) {
    if (q < 2) throw ValidationError("odometer moduli must be at least 2");
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(cumulative_.back(), q, &next)) next = std::numeric_limits<std::uint64_t>::max();
    cumulative_.push_back(next);
  }
}

Address sigma_succ(const Address& a, const OdometerScale& scale) {
  if (a.size() > scale.size()) throw ValidationError("address longer than its scale");
  Address out = a;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::uint64_t q = scale.moduli()[j];
    if (out[j] >= q) throw ValidationError("digit " + std::to_string(j) + " not reduced modulo " + std::to_string(q));
    if (out[j] + 1 < q) {
      ++out[j];
      return out;
    }
    out[j] = 0;
  }
  return out;
}

std::uint64_t sector_index(const LogPolarComplex& u, std::uint64_t q) {
  if (!u.is_finite()) throw ValidationError("sector index needs a finite non-zero point");
  if (q < 1) throw ValidationError("sector count must be positive");
  const Precision prec = u.precision();
  const Precision wide = prec + 64;
  // x = q theta / 2 pi in (-q/2, q/2]
  const BigReal x = u.theta().with_precision(wide) * BigReal::from_uint(q, 64) / BigReal::two_pi(wide);
  const BigReal m = round(x);
  // Distance to the nearest boundary (half-integer) in theta units.
  const BigReal half(0.5, wide);
  const BigReal slack = (half - abs(x - m)) * BigReal::two_pi(wide) / BigReal::from_uint(q, 64);
  if (slack <= BigReal::pow2(-static_cast<long>(prec / 4), 64)) throw NumericalError("on sector boundary");
  const std::int64_t mi = static_cast<std::int64_t>(mpfr_get_si(m.get(), MPFR_RNDN));
  const std::int64_t qi = static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(((mi % qi) + qi) % qi);
}

std::uint64_t mod_inverse(std::uint64_t p, std::uint64_t q) {
  if (q == 1) return 0;
  // Extended Euclid on signed 128-bit values.
  __int128 old_r = static_cast<__int128>(p % q), r = q;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 quot = old_r / r;
    __int128 tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw ValidationError("p not invertible modulo q");
  const __int128 qq = q;
  return static_cast<std::uint64_t>(((old_s % qq) + qq) % qq);
}

std::uint64_t component_label(std::uint64_t m, std::uint64_t p, std::uint64_t q) {
  const unsigned __int128 k = static_cast<unsigned __int128>(m % q) * mod_inverse(p, q);
  return static_cast<std::uint64_t>(k % q);
}

Address address_of(const ModelParams& params, const LogPolarComplex& z, std::size_t n) {
  if (n > params.size()) throw ValidationError("address depth exceeds the levels built");
  Address digits;
  if (!in_closed_disk(z, params.tolerance())) throw NumericalError("escaped before depth " + std::to_string(n));
  LogPolarComplex cur = z;
  for (std::size_t j = 0; j < n; ++j) {
    const Level& lv = params.level(j);
    if (!lv.q.exact) throw NumericalError("q_" + std::to_string(j) + " too large for sector labels");
    if (cur.is_zero()) throw NumericalError("hit component center at level " + std::to_string(j));
    const LogPolarComplex u = moebius_apply(t_value(params, j), cur);
    if (!in_closed_disk(u, params.tolerance())) throw NumericalError("escaped before depth " + std::to_string(n));
    if (u.is_zero()) throw NumericalError("hit component center at level " + std::to_string(j));
    digits.push_back(component_label(sector_index(u, *lv.q.exact), lv.p, *lv.q.exact));
    cur = phi_apply(params, j, cur);
  }
  return digits;
}

}  // namespace satmodel
