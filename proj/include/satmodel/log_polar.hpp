#pragma once

#include <cstdint>

#include "satmodel/big_real.hpp"
#include "satmodel/ext_real.hpp"

namespace satmodel {

struct Complex {
  BigReal re;
  BigReal im;
};

/// Complex number stored as (log |z|, arg z), with 0 and infinity as
/// explicit sentinels. theta is kept in (-pi, pi].
///
/// log_r is an ExtReal so that |z|^q stays representable for any count q
/// the model can produce; for ordinary magnitudes it is just a BigReal.
class LogPolarComplex {
 public:
  enum class Kind { kZero, kFinite, kInfinity };

  explicit LogPolarComplex(Precision prec = kDefaultPrecision);
  /// theta is reduced on construction.
  LogPolarComplex(ExtReal log_r, const BigReal& theta);
  LogPolarComplex(const BigReal& log_r, const BigReal& theta);

  static LogPolarComplex zero(Precision prec);
  static LogPolarComplex infinity(Precision prec);
  static LogPolarComplex one(Precision prec);
  /// A positive real number given by its logarithm.
  static LogPolarComplex from_log(ExtReal log_r);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::kZero; }
  bool is_infinite() const { return kind_ == Kind::kInfinity; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  /// Exactly 1 (log_r == 0 and theta == 0).
  bool is_one() const;

  const ExtReal& log_r() const { return log_r_; }
  const BigReal& theta() const { return theta_; }
  Precision precision() const { return theta_.precision(); }

  LogPolarComplex conj() const;
  LogPolarComplex with_precision(Precision prec) const;

 private:
  Kind kind_ = Kind::kZero;
  ExtReal log_r_;
  BigReal theta_;
};

LogPolarComplex to_log_polar(const Complex& z);
/// Throws NumericalError for infinity or magnitudes outside the BigReal range.
Complex from_log_polar(const LogPolarComplex& u);

/// u^q with log_r multiplied by q in a single rounding and q*theta reduced
/// from an exact product.
LogPolarComplex pow_int(const LogPolarComplex& u, std::uint64_t q);

/// True when |u| <= 1 up to the tolerance eps on log|u|.
bool in_closed_disk(const LogPolarComplex& u, const BigReal& eps);

/// 2^-(prec/2), the membership tolerance used throughout.
BigReal disk_tolerance(Precision prec);

}  // namespace satmodel
