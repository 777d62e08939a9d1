#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#ifndef SPINREC_MAX_N
#define SPINREC_MAX_N 12
#endif

namespace spinrec {

inline constexpr int kMaxDimension = SPINREC_MAX_N;
static_assert(kMaxDimension >= 1 && kMaxDimension <= 30);

// Bit (a-1) set means generator e_a is present in the blade.
using BladeMask = std::uint32_t;

/// Metric signature of Cl(p,q): the first p generators square to +1, the
/// remaining q to -1.
class Signature {
 public:
  Signature(int p, int q);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int n() const noexcept { return p_ + q_; }

  /// Number of basis blades, 2^n.
  std::size_t blade_count() const noexcept { return std::size_t{1} << n(); }

  /// eta_aa for a 1-based generator index.
  int metric(int a) const;

  /// Mask of the generators with negative square.
  BladeMask negative_mask() const noexcept { return negative_mask_; }
  BladeMask pseudoscalar_mask() const noexcept {
    return static_cast<BladeMask>(blade_count() - 1);
  }

  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int p_;
  int q_;
  BladeMask negative_mask_;
};

/// (e_{1..n})^2 = (-1)^{n(n-1)/2 + q}.
int pseudoscalar_square(const Signature& sig);

}  // namespace spinrec
