#pragma once

#include <cstdint>
#include <vector>

#include "satmodel/log_polar.hpp"
#include "satmodel/model.hpp"

namespace satmodel {

/// Moduli q_0, q_1, ... of the odometer and the cumulative products
/// N_0 = 1, N_{n+1} = N_n q_n (saturating at UINT64_MAX).
class OdometerScale {
 public:
  explicit OdometerScale(std::vector<std::uint64_t> moduli);

  const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  std::size_t size() const { return moduli_.size(); }
  /// N_n for n in [0, size()].
  std::uint64_t cumulative(std::size_t n) const { return cumulative_.at(n); }

 private:
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint64_t> cumulative_;
};

using Address = std::vector<std::uint64_t>;

/// Adding map: increment digit 0 and carry. The maximal address wraps to
/// all zeros (the carry leaves the truncated window).
Address sigma_succ(const Address& a, const OdometerScale& scale);

/// round(q theta / 2 pi) mod q. Throws NumericalError("on sector boundary")
/// when theta is within 2^-(P/4) of an odd multiple of pi/q.
std::uint64_t sector_index(const LogPolarComplex& u, std::uint64_t q);

/// m * p^{-1} mod q.
std::uint64_t component_label(std::uint64_t m, std::uint64_t p, std::uint64_t q);

/// Modular inverse by the extended Euclidean algorithm.
std::uint64_t mod_inverse(std::uint64_t p, std::uint64_t q);

/// Digits k_0 .. k_{n-1}: k_j labels the component of phi_j^{-1}(closed disk)
/// containing z_j = Phi_{j-1}(z).
Address address_of(const ModelParams& params, const LogPolarComplex& z, std::size_t n);

}  // namespace satmodel
