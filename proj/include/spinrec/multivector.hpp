#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spinrec/signature.hpp"

namespace spinrec {

inline constexpr double kDefaultAlgebraTolerance = 1e-10;

int grade(BladeMask mask) noexcept;

/// Product of two basis blades: e_a e_b = sign * e_{a XOR b}.
struct BladeProduct {
  BladeMask mask;
  double sign;
};

/// The sign counts the transpositions needed to bring the concatenated index
/// list into ascending order, times eta_aa for each generator that cancels.
BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig);

/// e^A = (e_A)^{-1} = +-e_A; returns the sign.
double blade_inverse_sign(BladeMask a, const Signature& sig);

/// Converts an ascending 1-based multi-index into a mask and back.
BladeMask mask_from_indices(std::span<const int> indices, const Signature& sig);
std::vector<int> indices_from_mask(BladeMask mask);

enum class Involution { Grade, Reverse, Conjugate };

/// Dense element of Cl(p,q): coefficient of e_A stored at index mask(A).
class Multivector {
 public:
  explicit Multivector(Signature sig);
  Multivector(Signature sig, std::vector<double> coeffs);

  static Multivector scalar(Signature sig, double value);
  static Multivector blade(Signature sig, BladeMask mask, double value = 1.0);
  /// e_a for a 1-based generator index.
  static Multivector generator(Signature sig, int a);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double operator[](BladeMask mask) const { return coeffs_[mask]; }
  double& operator[](BladeMask mask) { return coeffs_[mask]; }

  double scalar_part() const noexcept { return coeffs_[0]; }
  double norm_inf() const noexcept;
  bool is_zero(double tol = 0.0) const noexcept { return norm_inf() <= tol; }

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double s);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

 private:
  Signature sig_;
  std::vector<double> coeffs_;
};

/// Infinity-norm distance; signatures must agree.
double distance_inf(const Multivector& u, const Multivector& v);

Multivector geometric_product(const Multivector& u, const Multivector& v);
inline Multivector operator*(const Multivector& u, const Multivector& v) {
  return geometric_product(u, v);
}

/// u * e_B (right multiplication by a single scaled blade), O(2^n).
Multivector multiply_blade_right(const Multivector& u, BladeMask b, double scale = 1.0);
/// e_B * u, O(2^n).
Multivector multiply_blade_left(BladeMask b, const Multivector& u, double scale = 1.0);

Multivector grade_project(const Multivector& u, int k);
Multivector even_part(const Multivector& u);
Multivector odd_part(const Multivector& u);

Multivector involution(const Multivector& u, Involution kind);
inline Multivector reverse(const Multivector& u) { return involution(u, Involution::Reverse); }
inline Multivector grade_involution(const Multivector& u) {
  return involution(u, Involution::Grade);
}
inline Multivector conjugate(const Multivector& u) {
  return involution(u, Involution::Conjugate);
}

/// Element of the center: span{e} for even n, span{e, e_{1..n}} for odd n.
struct CenterElement {
  Signature sig;
  double scalar_part = 0.0;
  double pseudo_part = 0.0;

  CenterElement(Signature s, double scalar, double pseudo = 0.0);

  Multivector embed() const;
};

/// Projection onto the center (pi_0, plus pi_n when n is odd).
CenterElement center_project(const Multivector& u);

/// Reynolds operator of the basis group, (1/2^n) sum_A e_A U e^A, evaluated
/// term by term. Mathematically equal to center_project; kept independent so
/// the two can check each other.
Multivector average_over_basis(const Multivector& u);

/// sum_a e_a U e^a. On grade k this acts as (-1)^k (n - 2k).
Multivector generator_conjugation(const Multivector& u);

/// Inverse of a unit versor: sigma reverse(S) where reverse(S) S = sigma e, sigma = +-1.
/// Throws NotAVersor if reverse(S) S is not +-e within `tol` (scaled by the
/// squared magnitude of S).
Multivector versor_inverse(const Multivector& s, double tol = 1e-9);

}  // namespace spinrec
