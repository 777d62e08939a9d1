#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinrec/multivector.hpp"
#include "spinrec/signature.hpp"

namespace spinrec {

inline constexpr double kDefaultOrthoTolerance = 1e-9;

/// Square row-major real matrix.
class SquareMatrix {
 public:
  explicit SquareMatrix(int size);
  SquareMatrix(int size, std::vector<double> row_major);
  static SquareMatrix identity(int size);

  int size() const noexcept { return size_; }
  double operator()(int row, int col) const { return data_[index(row, col)]; }
  double& operator()(int row, int col) { return data_[index(row, col)]; }
  std::span<const double> data() const noexcept { return data_; }

  double norm_inf() const noexcept;  // max |entry|

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
  SquareMatrix transposed() const;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(col);
  }

  int size_;
  std::vector<double> data_;
};

/// eta = diag(+1 x p, -1 x q).
SquareMatrix metric_matrix(const Signature& sig);

/// Determinant of a small dense matrix: cofactor expansion up to 3x3, LU with
/// partial pivoting above that, both in extended precision.
double determinant(const SquareMatrix& m);

/// An n x n matrix P with P^T eta P = eta. Entry (a, b) (0-based here) is
/// p_a^b, the e_b coordinate of the image of e_a, so beta_a = p_a^b e_b.
class OrthoMatrix {
 public:
  const Signature& signature() const noexcept { return sig_; }
  const SquareMatrix& entries() const noexcept { return entries_; }
  int n() const noexcept { return sig_.n(); }
  /// 1-based access: p_a^b.
  double at(int a, int b) const { return entries_(a - 1, b - 1); }
  /// ||P^T eta P - eta||_inf measured at validation time.
  double orthogonality_residual() const noexcept { return residual_; }

 private:
  OrthoMatrix(Signature sig, SquareMatrix entries, double residual)
      : sig_(sig), entries_(std::move(entries)), residual_(residual) {}
  friend OrthoMatrix validate_pseudo_orthogonal(const SquareMatrix&, const Signature&, double);

  Signature sig_;
  SquareMatrix entries_;
  double residual_;
};

/// ||P^T eta P - eta||_inf without any validation.
double orthogonality_residual(const SquareMatrix& p, const Signature& sig);

/// Throws NotPseudoOrthogonal (value = residual) when the residual exceeds tol,
/// InvalidArgument when the size does not match the signature.
OrthoMatrix validate_pseudo_orthogonal(const SquareMatrix& p, const Signature& sig,
                                       double tol = kDefaultOrthoTolerance);

/// p^{cols}_{rows}: determinant of the submatrix on the given rows and columns
/// (1-based ascending multi-indices of equal length). Empty minor is 1.
double minor(const OrthoMatrix& p, std::span<const int> rows, std::span<const int> cols);
double minor(const SquareMatrix& p, BladeMask rows, BladeMask cols);

struct GroupComponent {
  int det_sign = 1;
  int top_minor_sign = 1;     // sign of p^{1..p}_{1..p}
  int bottom_minor_sign = 1;  // sign of p^{p+1..n}_{p+1..n}
  double det = 1.0;
  double top_minor = 1.0;
  double bottom_minor = 1.0;

  bool in_O = true;
  bool in_SO = false;
  bool in_O_plus = false;
  bool in_O_minus = false;
  bool in_SO_plus = false;
};

/// Evaluates det P and the two principal block minors and derives membership in
/// O, SO, O+, O- and SO+. Throws Inconsistent if the block minors violate
/// top = bottom / det or |minor| >= 1 beyond `tol`. The identity gap is measured
/// relative to the minors and to ||P||_inf^2, like the validation of large boosts.
GroupComponent classify_component(const OrthoMatrix& p, double tol = kDefaultOrthoTolerance);

/// beta_a = sum_b p_a^b e_b for a 1-based a.
Multivector beta_vector(const OrthoMatrix& p, int a);

enum class BetaBladeMethod { Product, MinorSum };

/// beta_A = beta_{a1} ... beta_{ak} = sum_B p_A^B e_B. Product multiplies the
/// vectors in turn (extended precision, no grade projection); MinorSum
/// evaluates every k x k minor.
Multivector beta_blade(const OrthoMatrix& p, BladeMask a,
                       BetaBladeMethod method = BetaBladeMethod::Product);
Multivector beta_blade(const OrthoMatrix& p, std::span<const int> a,
                       BetaBladeMethod method = BetaBladeMethod::Product);

/// beta_A for every mask A, indexed by mask. Grades up to n/2 are built by one
/// vector product each; higher grades come from the complementary blade and
/// det P = +-1, which relies on P being pseudo-orthogonal.
std::vector<Multivector> all_beta_blades(const OrthoMatrix& p);

}  // namespace spinrec
