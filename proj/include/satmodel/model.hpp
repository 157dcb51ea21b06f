#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "satmodel/big_real.hpp"
#include "satmodel/ext_real.hpp"
#include "satmodel/log_polar.hpp"
#include "satmodel/rotation.hpp"

namespace satmodel {

/// Per-level data derived from C and p_n/q_n.
struct Level {
  std::uint64_t p = 1;
  Denominator q;
  /// t_n = C p_n / q_n when it fits a BigReal.
  std::optional<BigReal> t;
  /// -log t_n; always available.
  ExtReal neg_log_t;
  /// C * p_n and its logarithm.
  BigReal cp;
  BigReal log_cp;
  /// -log(1 - t) / t, so that q * (-log(1 - t)) = cp * g exactly in form.
  BigReal g;
};

/// C together with a finite prefix of the rotation sequence. Immutable.
class ModelParams {
 public:
  /// Builds `count` levels. Throws ValidationError listing every violated
  /// constraint (C > 1, each t_n in (0,1)).
  ModelParams(const BigReal& C, const RotationSequence& rotations, std::size_t count,
              Precision prec = kDefaultPrecision);

  const BigReal& C() const { return C_; }
  const RotationSequence& rotations() const { return rotations_; }
  Precision precision() const { return prec_; }
  std::size_t size() const { return levels_.size(); }
  const Level& level(std::size_t n) const;
  /// Membership tolerance 2^-(P/2) on log|z|.
  const BigReal& tolerance() const { return eps_; }

  /// Same rotations, another constant or precision.
  ModelParams with_constant(const BigReal& C) const;
  ModelParams with_precision(Precision prec) const;

 private:
  BigReal C_;
  RotationSequence rotations_;
  Precision prec_;
  std::vector<Level> levels_;
  BigReal eps_;
};

/// t_n as a BigReal. NumericalError if it underflows the BigReal range.
BigReal t_value(const ModelParams& params, std::size_t n);

/// M_t(z) = (1 - t/z)/(1 - t).
LogPolarComplex moebius_apply(const BigReal& t, const LogPolarComplex& z);
/// M_t^{-1}(u) = t / (1 - (1-t) u), rectangular.
Complex moebius_inverse(const BigReal& t, const Complex& u);

struct Disk {
  BigReal center;
  BigReal radius;
};
/// Preimage of the closed unit disk under M_t: the disk on [t/(2-t), 1].
Disk moebius_preimage_disk(const BigReal& t);

/// phi_n(z) = M_n(z)^{q_n}, evaluated without forming M_n(z) when q_n is
/// too large for that to be meaningful.
LogPolarComplex phi_apply(const ModelParams& params, std::size_t n, const LogPolarComplex& z);

/// The k-th q-th root of u: (log_r / q, (theta + 2 pi k) / q).
LogPolarComplex root(const LogPolarComplex& u, std::uint64_t q, std::uint64_t k = 0);

struct EscapeTrace {
  /// z, Phi_0(z), Phi_1(z), ... up to and including the first value that
  /// leaves the closed disk.
  std::vector<LogPolarComplex> levels;
  /// First n with Phi_n(z) outside the closed disk (0 when |z| > 1 already);
  /// empty when the orbit survives every level of the horizon.
  std::optional<std::size_t> depth;
  std::size_t horizon = 0;

  bool survived() const { return !depth.has_value(); }
  /// z in K_n.
  bool in_level(std::size_t n) const { return !depth || *depth > n; }
};

/// Evaluates Phi_0 .. Phi_{horizon-1}.
EscapeTrace orbit(const ModelParams& params, const LogPolarComplex& z, std::size_t horizon);
/// Same as orbit but keeps only the depth; returns horizon when z survives.
std::size_t escape_depth(const ModelParams& params, const LogPolarComplex& z, std::size_t horizon);

}  // namespace satmodel
