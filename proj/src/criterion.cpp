#include "satmodel/criterion.hpp"

#include <cmath>
#include <random>

#include "satmodel/errors.hpp"
#include "satmodel/odometer.hpp"

namespace satmodel {

LogPolarComplex real_point(const BigReal& x) { return to_log_polar({x, BigReal(x.precision())}); }

namespace {

// Phi_{n-1}(x) for real x; level count n may be 0 (identity).
LogPolarComplex forward(const ModelParams& params, const LogPolarComplex& z, std::size_t levels) {
  LogPolarComplex cur = z;
  for (std::size_t j = 0; j < levels; ++j) cur = phi_apply(params, j, cur);
  return cur;
}

// A real-axis value compared with t_n: sign of u - t_n.
int sign_minus_t(const LogPolarComplex& u, const Level& lv) {
  if (u.is_zero()) return -1;
  if (u.is_infinite()) return 1;
  if (!u.theta().is_zero()) return -1;  // theta = pi: negative real
  const ExtReal d = u.log_r() + lv.neg_log_t;
  return d.sign();
}

void require_levels(const ModelParams& params, std::size_t count, const char* what) {
  if (count > params.size()) {
    throw ValidationError(std::string(what) + " needs " + std::to_string(count) + " levels but only " +
                          std::to_string(params.size()) + " are built");
  }
}

BigReal uniform(std::mt19937_64& rng, Precision prec) {
  // 53 random bits; plenty for sampling.
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return BigReal(dist(rng), prec);
}

}  // namespace

BigReal solve_center(const ModelParams& params, std::size_t n, const BigReal& previous) {
  require_levels(params, n + 1, "solve_center");
  const Precision prec = params.precision();
  if (n == 0) return t_value(params, 0);
  const Level& target = params.level(n);
  auto pred = [&](const BigReal& x) { return sign_minus_t(forward(params, real_point(x), n), target) >= 0; };

  BigReal lo = previous.with_precision(prec);
  BigReal hi(1.0, prec);
  if (!pred(hi)) throw NumericalError("no sign change for s_" + std::to_string(n) + " on [s_{n-1}, 1]");
  // Saturated: s_n is within an ulp of s_{n-1}.
  if (pred(lo)) return lo;
  const BigReal two(2.0, prec);
  for (;;) {
    const BigReal mid = (lo + hi) / two;
    if (mid == lo || mid == hi) break;
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

std::vector<BigReal> solve_centers(const ModelParams& params, std::size_t N) {
  require_levels(params, N + 1, "solve_centers");
  std::vector<BigReal> s;
  s.push_back(solve_center(params, 0, BigReal(params.precision())));
  for (std::size_t n = 1; n <= N; ++n) s.push_back(solve_center(params, n, s.back()));
  return s;
}

X0Estimate estimate_x0(const ModelParams& params, std::size_t N) {
  if (N < 1) throw ValidationError("estimate_x0 needs a horizon of at least 1");
  X0Estimate e;
  e.centers = solve_centers(params, N);
  for (std::size_t n = 0; n + 1 < e.centers.size(); ++n) e.increments.push_back(e.centers[n + 1] - e.centers[n]);
  e.x0_lower = e.centers.back();
  e.gap = BigReal(1.0, params.precision()) - e.x0_lower;
  return e;
}

Candidate Candidate::theorem(double alpha, double beta) {
  Candidate c;
  c.kind = Kind::kTheorem;
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

Candidate Candidate::fixed(const BigReal& x) {
  Candidate c;
  c.kind = Kind::kFixed;
  c.x = x;
  return c;
}

Candidate Candidate::center_based(double delta) {
  Candidate c;
  c.kind = Kind::kCenterBased;
  c.delta = delta;
  return c;
}

std::string Candidate::describe() const {
  switch (kind) {
    case Kind::kTheorem:
      return "theorem: x = eta*t_0, eta = 1/(1 - beta*alpha), alpha = " + std::to_string(alpha) +
             ", beta = " + std::to_string(beta);
    case Kind::kFixed:
      return "fixed: x = " + x.to_string(20);
    case Kind::kCenterBased:
      return "center-based: x = s_N + delta*(1 - s_N), delta = " + std::to_string(delta);
  }
  return "unknown";
}

std::string CriterionReport::verdict() const {
  return fails_at ? "fails-at(" + std::to_string(*fails_at) + ")" : "holds-to-horizon";
}

CriterionReport check_class_membership(const ModelParams& params, const Candidate& candidate, std::size_t N) {
  if (N < 1) throw ValidationError("class membership needs a horizon of at least 1");
  require_levels(params, N + 1, "check_class_membership");
  const Precision prec = params.precision();
  const BigReal one(1.0, prec);
  CriterionReport r;
  r.horizon = N;
  r.precision = prec;
  r.tolerance = params.tolerance();
  r.candidate_rule = candidate.describe();

  // Candidate first, so an invalid one fails before any bisection.
  BigReal x(prec);
  switch (candidate.kind) {
    case Candidate::Kind::kTheorem: {
      if (!(candidate.alpha > 0 && candidate.alpha < 1 && candidate.beta > 1 && candidate.beta * candidate.alpha < 1)) {
        throw ValidationError("theorem candidate needs 0 < alpha < 1 < beta < 1/alpha");
      }
      const BigReal eta = one / (one - BigReal(candidate.beta, prec) * BigReal(candidate.alpha, prec));
      x = eta * t_value(params, 0);
      break;
    }
    case Candidate::Kind::kFixed:
      x = candidate.x.with_precision(prec);
      break;
    case Candidate::Kind::kCenterBased:
      break;
  }
  if (candidate.kind != Candidate::Kind::kCenterBased && !(x.sign() > 0 && x < one)) {
    throw ValidationError("candidate x = " + x.to_string(12) + " outside (0,1)");
  }
  if (candidate.kind == Candidate::Kind::kCenterBased && !(candidate.delta >= 0 && candidate.delta < 1)) {
    throw ValidationError("center-based candidate needs 0 <= delta < 1");
  }

  const X0Estimate est = estimate_x0(params, N);
  r.centers = est.centers;
  r.x0_lower = est.x0_lower;
  r.gap = est.gap;
  if (candidate.kind == Candidate::Kind::kCenterBased) {
    x = r.centers[N] + BigReal(candidate.delta, prec) * (one - r.centers[N]);
  }
  r.candidate_x = x;

  const bool below_t0 = x < t_value(params, 0);
  LogPolarComplex cur = real_point(x);
  for (std::size_t n = 0; n < N; ++n) {
    cur = phi_apply(params, n, cur);
    const Level& next = params.level(n + 1);
    Margin m;
    m.in_disk = in_closed_disk(cur, params.tolerance());
    m.sign = sign_minus_t(cur, next);
    if (cur.is_finite() && cur.theta().is_zero()) m.log_ratio = cur.log_r() + next.neg_log_t;
    if (next.t && (cur.is_zero() || (cur.is_finite() && cur.log_r().fits()))) {
      const BigReal v = cur.is_zero() ? BigReal(prec) : exp(cur.log_r().to_big());
      m.value = (cur.is_finite() && !cur.theta().is_zero() ? -v : v) - *next.t;
    }
    if (!r.fails_at && (m.sign < 0 || !m.in_disk || below_t0)) r.fails_at = n;
    r.margins.push_back(std::move(m));
  }
  return r;
}

LevinReport check_levin(const RotationSequence& rotations, std::size_t n0, std::size_t n1, double delta,
                        Precision prec) {
  if (n1 < n0) throw ValidationError("Levin window [n0, n1] is empty");
  if (n1 + 2 > rotations.available()) throw ValidationError("Levin window exceeds the rotation sequence");
  const auto terms = rotations.expand(n1 + 2, prec);
  const auto growth = rotations.growth_logs(n1 + 2, prec);
  LevinReport r;
  r.first = n0;
  r.delta = delta;
  r.sup = BigReal(prec);
  for (std::size_t n = n0; n <= n1; ++n) {
    // log v_n = log(p_{n+1}) / q_n - log(q_{n+1}) / q_n
    BigReal log_p_term(prec);
    const std::uint64_t p = terms[n + 1].p;
    if (p > 1) {
      const ExtReal lp(log(BigReal::from_uint(p, prec)));
      log_p_term = exp(log_abs(lp) - log_abs(terms[n].q.value)).to_big();
    }
    const BigReal v = exp(log_p_term - growth[n]);
    if (v > r.sup) r.sup = v;
    r.values.push_back(v);
  }
  r.satisfied = r.sup < BigReal(1.0 - delta, prec);
  for (std::size_t n = n0; n <= n1 && !r.degenerate; ++n) r.degenerate = !(terms[n + 1].q.value > terms[n].q.value);
  return r;
}

bool TheoremReport::all_pass() const {
  if (hypothesis_violated_at) return false;
  for (const auto& l : levels) {
    if (!l.bound_ok || !l.side_ok) return false;
  }
  return true;
}

TheoremReport verify_theorem_recursion(const ModelParams& params, double alpha, double beta, std::size_t N) {
  if (!(alpha > 0 && alpha < 1 && beta > 1 && beta * alpha < 1)) {
    throw ValidationError("theorem recursion needs 0 < alpha < 1 < beta < 1/alpha");
  }
  require_levels(params, N + 1, "verify_theorem_recursion");
  const Precision prec = params.precision();
  const BigReal one(1.0, prec);
  TheoremReport r;
  r.eta = one / (one - BigReal(beta, prec) * BigReal(alpha, prec));
  const ExtReal log_eta(log(r.eta));
  const ExtReal log_c_eta(log(params.C() * r.eta));
  const BigReal log_beta = log(BigReal(beta, prec));
  const BigReal log_alpha = log(BigReal(alpha, prec));
  const BigReal tol = params.tolerance();
  const auto growth = params.rotations().growth_logs(N + 1, prec);

  LogPolarComplex x = real_point(r.eta * t_value(params, 0));
  for (std::size_t n = 0; n <= N; ++n) {
    const Level& lv = params.level(n);
    TheoremLevel tl;
    tl.n = n;
    tl.x = x;
    tl.log_eta_t = log_eta - lv.neg_log_t;
    tl.bound_ok = x.is_infinite() ||
                  (x.is_finite() && x.theta().is_zero() && x.log_r() + ExtReal(tol) >= tl.log_eta_t);
    // (beta/(1-t_n))^{q_n} >= C eta  <=>  q_n (log beta - log(1-t_n)) >= log(C eta)
    const BigReal per_level = log_beta + (lv.t ? -log1p(-*lv.t) : BigReal(prec));
    tl.side_value = lv.q.value * ExtReal(per_level) - log_c_eta;
    tl.side_ok = tl.side_value.sign() >= 0;
    if (n < N) {
      // log(p_{n+1}/q_{n+1}) / q_n <= log alpha
      const Level& nx = params.level(n + 1);
      BigReal lp(prec);
      if (nx.p > 1) lp = exp(log_abs(ExtReal(log(BigReal::from_uint(nx.p, prec)))) - log_abs(lv.q.value)).to_big();
      tl.hypothesis_value = lp - growth[n] - log_alpha;
      tl.hypothesis_ok = *tl.hypothesis_value <= tol;
      if (!tl.hypothesis_ok && !r.hypothesis_violated_at) r.hypothesis_violated_at = n;
      x = phi_apply(params, n, x);
    }
    r.levels.push_back(std::move(tl));
  }
  return r;
}

std::partial_ordering compare_real(const LogPolarComplex& a, const LogPolarComplex& b) {
  auto sgn = [](const LogPolarComplex& u) {
    if (u.is_zero()) return 0;
    if (u.is_infinite()) return 2;
    return u.theta().is_zero() ? 1 : -1;
  };
  const int sa = sgn(a), sb = sgn(b);
  if (!a.is_zero() && !a.is_infinite() && !a.theta().is_zero() && !is_pi(a.theta())) {
    return std::partial_ordering::unordered;
  }
  if (!b.is_zero() && !b.is_infinite() && !b.theta().is_zero() && !is_pi(b.theta())) {
    return std::partial_ordering::unordered;
  }
  if (sa != sb || sa == 0 || sa == 2) return sa <=> sb;
  const auto c = a.log_r() <=> b.log_r();
  return sa > 0 ? c : (0 <=> c);
}

bool MonotonicityReport::all_pass() const {
  for (const auto& l : levels) {
    if (!l.ok) return false;
  }
  return transfer_ok;
}

MonotonicityReport verify_monotonicity(const ModelParams& params, const BigReal& c_prime, const BigReal& x0,
                                       std::size_t N) {
  const Precision prec = params.precision();
  const BigReal cp = c_prime.with_precision(prec);
  if (!(cp > BigReal(1.0, prec)) || cp > params.C()) throw ValidationError("monotonicity needs 1 < C' <= C");
  require_levels(params, N + 1, "verify_monotonicity");
  const ModelParams prime = params.with_constant(cp);
  MonotonicityReport r;
  LogPolarComplex x = real_point(x0.with_precision(prec));
  LogPolarComplex xp = x;
  const ExtReal tol(params.tolerance());
  for (std::size_t n = 0; n <= N; ++n) {
    MonotonicityLevel l;
    l.n = n;
    l.x = x;
    l.x_prime = xp;
    const auto c = compare_real(xp, x);
    // Equal within tolerance counts as ordered.
    bool close = false;
    if (x.is_finite() && xp.is_finite() && x.theta() == xp.theta()) close = abs(x.log_r() - xp.log_r()) <= tol;
    l.ok = c == std::partial_ordering::greater || c == std::partial_ordering::equivalent || close;
    r.levels.push_back(std::move(l));
    if (n < N) {
      x = phi_apply(params, n, x);
      xp = phi_apply(prime, n, xp);
    }
  }
  r.at_c = check_class_membership(params, Candidate::fixed(x0), N);
  r.at_c_prime = check_class_membership(prime, Candidate::fixed(x0), N);
  r.transfer_ok = !r.at_c.holds() || r.at_c_prime.holds();
  return r;
}

SectorReport check_sector_bound(const ModelParams& params, std::size_t n, std::size_t samples, std::uint64_t seed,
                                const BigReal* tolerance) {
  require_levels(params, n + 1, "check_sector_bound");
  const Precision prec = params.precision();
  SectorReport r;
  r.n = n;
  const BigReal pi = BigReal::pi(prec);
  BigReal ratio_pow(1.0, prec);
  for (std::size_t k = 0; k < n; ++k) ratio_pow = ratio_pow * (pi / params.C());
  r.bound = pi / BigReal(2.0, prec) * ratio_pow;
  const BigReal tol = tolerance ? *tolerance : BigReal::pow2(-64, 64);

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    // Uniform point of the closed disk as the value of Phi_n(z).
    const BigReal rad = sqrt(uniform(rng, prec));
    const BigReal ang = (uniform(rng, prec) * BigReal(2.0, prec) - BigReal(1.0, prec)) * pi;
    LogPolarComplex y = rad.is_zero() ? LogPolarComplex::zero(prec) : LogPolarComplex(log(rad), ang);
    Complex z{BigReal(prec), BigReal(prec)};
    bool ok = true;
    for (std::size_t j = n + 1; j-- > 0;) {
      const Level& lv = params.level(j);
      if (!lv.q.exact) throw NumericalError("sector sampling needs exact q_" + std::to_string(j));
      // Any branch at the last level, the component of 1 below it.
      const std::uint64_t branch = (j == n) ? std::uniform_int_distribution<std::uint64_t>(0, *lv.q.exact - 1)(rng) : 0;
      const LogPolarComplex u = root(y, *lv.q.exact, branch);
      const Complex ur = from_log_polar(u);
      z = moebius_inverse(t_value(params, j), ur);
      if (!z.re.is_finite()) {
        ok = false;
        break;
      }
      y = to_log_polar(z);
    }
    if (ok) {
      try {
        ok = in_closed_disk(y, params.tolerance()) && escape_depth(params, y, n + 1) == n + 1;
        if (ok) {
          for (std::uint64_t d : address_of(params, y, n)) ok = ok && d == 0;
        }
      } catch (const NumericalError&) {
        ok = false;
      }
    }
    if (!ok) {
      ++r.rejected;
      continue;
    }
    ++r.verified;
    const BigReal lhs = abs(y.theta());
    if (lhs > r.bound + tol) r.violations.push_back({z, lhs, r.bound, "sector"});
  }
  return r;
}

ArgReport check_arg_inequality(const BigReal& C, std::uint64_t q, std::size_t samples, std::uint64_t seed,
                               Precision prec) {
  const BigReal c = C.with_precision(prec);
  if (!(c > BigReal(1.0, prec))) throw ValidationError("C must exceed 1");
  const BigReal t = c / BigReal::from_uint(q, 64);
  if (!(t < BigReal(1.0, prec))) throw ValidationError("t = C/q must lie in (0,1)");
  const BigReal tol = disk_tolerance(prec);
  const BigReal one(1.0, prec);
  const BigReal qq = BigReal::from_uint(q, 64);
  const BigReal pi = BigReal::pi(prec);
  ArgReport r;
  std::mt19937_64 rng(seed);
  while (r.tested < samples) {
    // Rejection sampling of {|z| <= 1, Re z >= t}.
    const BigReal x = t + (one - t) * uniform(rng, prec);
    const BigReal y = uniform(rng, prec) * BigReal(2.0, prec) - one;
    const BigReal r2 = x * x + y * y;
    if (r2 > one) continue;
    ++r.tested;
    const BigReal arg_z = atan2(y, x);
    const BigReal arg_phi = qq * (atan2(y, x - t) - arg_z);
    const BigReal abs_phi = abs(arg_phi);
    const BigReal phi_rhs = c * abs(y) / (BigReal(2.0, prec) * r2);
    const Complex z{x, y};
    // Strict on the open half of the sample set, degenerate on the real axis.
    if (y.is_zero() ? abs_phi < phi_rhs - tol : !(abs_phi > phi_rhs - tol)) {
      r.violations.push_back({z, abs_phi, phi_rhs, "phi-argument"});
    }
    const BigReal cor_rhs = pi / c * abs_phi * sqrt(r2);
    if (abs(arg_z) > cor_rhs + tol) r.violations.push_back({z, abs(arg_z), cor_rhs, "z-argument"});
  }
  return r;
}

}  // namespace satmodel
