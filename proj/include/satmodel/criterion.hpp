#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satmodel/big_real.hpp"
#include "satmodel/ext_real.hpp"
#include "satmodel/model.hpp"

namespace satmodel {

/// x as a point of the real axis.
LogPolarComplex real_point(const BigReal& x);

/// s_n: the preimage of 0 under Phi_n in the critical component, found by
/// bisection on [s_{n-1}, 1] with predicate Phi_{n-1}(x) >= t_n.
///
/// At finite precision the centers of a fast-growing sequence become
/// indistinguishable after a few levels; then `previous` already satisfies
/// the predicate and is returned unchanged.
BigReal solve_center(const ModelParams& params, std::size_t n, const BigReal& previous);
/// s_0 .. s_N; needs N + 1 levels.
std::vector<BigReal> solve_centers(const ModelParams& params, std::size_t N);

struct X0Estimate {
  std::vector<BigReal> centers;
  /// s_{n+1} - s_n.
  std::vector<BigReal> increments;
  BigReal x0_lower;
  BigReal gap;
};
X0Estimate estimate_x0(const ModelParams& params, std::size_t N);

struct Candidate {
  enum class Kind { kTheorem, kFixed, kCenterBased };
  Kind kind = Kind::kTheorem;
  double alpha = 0.5;
  double beta = 1.5;
  BigReal x{kDefaultPrecision};
  double delta = 0.5;

  static Candidate theorem(double alpha, double beta);
  static Candidate fixed(const BigReal& x);
  static Candidate center_based(double delta);
  std::string describe() const;
};

/// Phi_n(x) - t_{n+1} described by its sign and log(Phi_n(x) / t_{n+1}).
struct Margin {
  int sign = 0;
  /// Meaningful when Phi_n(x) > 0.
  std::optional<ExtReal> log_ratio;
  /// The difference itself when it fits a BigReal.
  std::optional<BigReal> value;
  bool in_disk = true;
};

struct CriterionReport {
  std::size_t horizon = 0;
  Precision precision = kDefaultPrecision;
  BigReal tolerance;
  std::vector<BigReal> centers;
  BigReal x0_lower;
  BigReal gap;
  BigReal candidate_x;
  std::string candidate_rule;
  std::vector<Margin> margins;
  /// First level whose margin is negative or whose orbit leaves the disk.
  std::optional<std::size_t> fails_at;

  bool holds() const { return !fails_at.has_value(); }
  std::string verdict() const;
};

/// Margins Phi_n(x) - t_{n+1} for n < N. Besides the literal inequality the
/// orbit of x must stay in the closed disk and x >= t_0, which keeps the
/// candidate in the critical component.
CriterionReport check_class_membership(const ModelParams& params, const Candidate& candidate, std::size_t N);

struct LevinReport {
  std::size_t first = 0;
  std::vector<BigReal> values;
  BigReal sup;
  double delta = 1e-3;
  bool satisfied = false;
  /// Some q_{n+1} <= q_n in the window: the growth the theorem assumes is
  /// missing. Reported only.
  bool degenerate = false;
};

/// v_n = (p_{n+1}/q_{n+1})^{1/q_n} for n in [n0, n1].
LevinReport check_levin(const RotationSequence& rotations, std::size_t n0, std::size_t n1, double delta = 1e-3,
                        Precision prec = kDefaultPrecision);

struct TheoremLevel {
  std::size_t n = 0;
  /// x_n as a point of the real axis (sign via theta).
  LogPolarComplex x;
  /// log(eta t_n).
  ExtReal log_eta_t;
  bool bound_ok = false;
  /// q_n (log beta - log(1 - t_n)) - log(C eta).
  ExtReal side_value;
  bool side_ok = false;
  /// log(p_{n+1}/q_{n+1}) / q_n - log alpha; absent at the last level.
  std::optional<BigReal> hypothesis_value;
  bool hypothesis_ok = true;
};

struct TheoremReport {
  BigReal eta;
  std::vector<TheoremLevel> levels;
  std::optional<std::size_t> hypothesis_violated_at;
  bool all_pass() const;
};

/// x_0 = eta t_0 with eta = 1/(1 - beta alpha), x_{n+1} = phi_n(x_n); checks
/// x_n >= eta t_n for n <= N and the side condition at each level.
TheoremReport verify_theorem_recursion(const ModelParams& params, double alpha, double beta, std::size_t N);

struct MonotonicityLevel {
  std::size_t n = 0;
  LogPolarComplex x;
  LogPolarComplex x_prime;
  bool ok = false;
};

struct MonotonicityReport {
  std::vector<MonotonicityLevel> levels;
  CriterionReport at_c;
  CriterionReport at_c_prime;
  bool transfer_ok = false;
  bool all_pass() const;
};

/// Runs the same x_0 through the levels built with C and with C' <= C.
MonotonicityReport verify_monotonicity(const ModelParams& params, const BigReal& c_prime, const BigReal& x0,
                                       std::size_t N);

struct SampleViolation {
  Complex z;
  BigReal lhs;
  BigReal rhs;
  std::string which;
};

struct SectorReport {
  std::size_t n = 0;
  BigReal bound;
  std::size_t verified = 0;
  std::size_t rejected = 0;
  std::vector<SampleViolation> violations;
};

/// Samples points of K_{n,0} (first n address digits zero) by pulling back
/// uniform points of the closed disk, and checks |arg z| <= (pi/2)(pi/C)^n.
SectorReport check_sector_bound(const ModelParams& params, std::size_t n, std::size_t samples, std::uint64_t seed = 1,
                                const BigReal* tolerance = nullptr);

struct ArgReport {
  std::size_t tested = 0;
  std::vector<SampleViolation> violations;
};

/// For random z in the closed disk with Re z >= t, checks
///   |arg phi(z)| > C |Im z| / (2 |z|^2)   and   |arg z| <= (pi/C) |arg phi(z)| |z|,
/// where arg phi(z) = q (arg(z - t) - arg z) is the lifted argument.
ArgReport check_arg_inequality(const BigReal& C, std::uint64_t q, std::size_t samples, std::uint64_t seed = 1,
                               Precision prec = kDefaultPrecision);

/// Compares two real-axis points given in log-polar form.
std::partial_ordering compare_real(const LogPolarComplex& a, const LogPolarComplex& b);

}  // namespace satmodel
