#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satmodel/ext_real.hpp"

namespace satmodel {

/// A denominator q_n. Small values are exact; tower growth quickly leaves
/// every fixed-width type behind, at which point only the extended value
/// and the parity survive.
struct Denominator {
  ExtReal value;
  std::optional<std::uint64_t> exact;
  std::optional<bool> even;

  static Denominator from_uint(std::uint64_t q, Precision prec);
  bool is_exact() const { return exact.has_value(); }
  std::string to_string() const;
};

struct RotationNumber {
  std::uint64_t p = 1;
  Denominator q;
};

/// Lazily extends a sequence with constant numerator p:
///   affine     q' = a*q + b
///   geometric  q' = ratio*q
///   tower      q' = base^q
struct GeneratorRule {
  enum class Kind { kAffine, kGeometric, kTower };
  Kind kind = Kind::kTower;
  std::uint64_t q0 = 3;
  std::uint64_t p = 1;
  std::uint64_t a = 1;      // affine
  std::uint64_t b = 1;      // affine
  std::uint64_t ratio = 2;  // geometric
  std::uint64_t base = 2;   // tower

  Denominator next(const Denominator& q, Precision prec) const;
  /// log(q') / q computed without forming q' when the rule allows it.
  BigReal growth_log(const Denominator& q, Precision prec) const;
  std::string describe() const;
};

std::string to_string(GeneratorRule::Kind kind);

/// An explicit prefix of fractions optionally continued by a generator.
class RotationSequence {
 public:
  RotationSequence() = default;
  /// Explicit fractions (p, q). Validates 0 < p < q and gcd(p, q) = 1.
  explicit RotationSequence(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& fractions);
  explicit RotationSequence(const GeneratorRule& rule);

  const std::optional<GeneratorRule>& rule() const { return rule_; }
  std::size_t explicit_size() const { return fractions_.size(); }
  /// Number of available terms; SIZE_MAX when a generator is attached.
  std::size_t available() const;

  /// First `count` terms at the given precision.
  std::vector<RotationNumber> expand(std::size_t count, Precision prec) const;
  /// log(q_{n+1}) / q_n for n + 1 < count, using the rule where possible.
  std::vector<BigReal> growth_logs(std::size_t count, Precision prec) const;

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fractions_;
  std::optional<GeneratorRule> rule_;
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace satmodel
