#include "spinrec/ortho_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "spinrec/errors.hpp"

namespace spinrec {

SquareMatrix::SquareMatrix(int size)
    : size_(size), data_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0) {
  if (size < 0) throw Error(ErrorKind::InvalidArgument, "negative matrix size");
}

SquareMatrix::SquareMatrix(int size, std::vector<double> row_major)
    : size_(size), data_(std::move(row_major)) {
  if (size < 0 || data_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw Error(ErrorKind::InvalidArgument, "matrix data does not match its size");
  }
}

SquareMatrix SquareMatrix::identity(int size) {
  SquareMatrix m(size);
  for (int i = 0; i < size; ++i) m(i, i) = 1.0;
  return m;
}

double SquareMatrix::norm_inf() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "matrix size mismatch");
  const int n = a.size();
  SquareMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "matrix size mismatch");
  SquareMatrix out(a);
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) out(i, j) -= b(i, j);
  }
  return out;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix out(size_);
  for (int i = 0; i < size_; ++i) {
    for (int j = 0; j < size_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

SquareMatrix metric_matrix(const Signature& sig) {
  SquareMatrix eta(sig.n());
  for (int a = 1; a <= sig.n(); ++a) eta(a - 1, a - 1) = sig.metric(a);
  return eta;
}

double determinant(const SquareMatrix& m) {
  // Minors of large boosts are small differences of large products, so the
  // arithmetic runs in extended precision and rounds once.
  using Extended = long double;
  const int k = m.size();
  const auto at = [&](int r, int c) { return static_cast<Extended>(m(r, c)); };
  switch (k) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return static_cast<double>(at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0));
    case 3:
      return static_cast<double>(at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                                 at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                                 at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0)));
    default: break;
  }
  std::vector<Extended> lu(m.data().begin(), m.data().end());
  const auto cell = [&](int r, int c) -> Extended& {
    return lu[static_cast<std::size_t>(r) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)];
  };
  Extended det = 1;
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::abs(cell(r, col)) > std::abs(cell(pivot, col))) pivot = r;
    }
    if (cell(pivot, col) == 0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < k; ++j) std::swap(cell(pivot, j), cell(col, j));
      det = -det;
    }
    const Extended diag = cell(col, col);
    det *= diag;
    for (int r = col + 1; r < k; ++r) {
      const Extended factor = cell(r, col) / diag;
      if (factor == 0) continue;
      for (int j = col + 1; j < k; ++j) cell(r, j) -= factor * cell(col, j);
    }
  }
  return static_cast<double>(det);
}

double orthogonality_residual(const SquareMatrix& p, const Signature& sig) {
  const SquareMatrix eta = metric_matrix(sig);
  return (p.transposed() * eta * p - eta).norm_inf();
}

OrthoMatrix validate_pseudo_orthogonal(const SquareMatrix& p, const Signature& sig, double tol) {
  if (p.size() != sig.n()) {
    throw Error(ErrorKind::InvalidArgument,
                "matrix is " + std::to_string(p.size()) + "x" + std::to_string(p.size()) +
                    " but signature " + sig.to_string() + " needs n = " +
                    std::to_string(sig.n()));
  }
  for (double x : p.data()) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NotPseudoOrthogonal, "non-finite matrix entry");
  }
  const double residual = orthogonality_residual(p, sig);
  if (!(residual <= tol)) {
    throw Error(ErrorKind::NotPseudoOrthogonal,
                "P^T eta P differs from eta by " + std::to_string(residual), residual);
  }
  return OrthoMatrix(sig, p, residual);
}

double minor(const SquareMatrix& p, BladeMask rows, BladeMask cols) {
  const int k = std::popcount(rows);
  if (k != std::popcount(cols)) {
    throw Error(ErrorKind::InvalidArgument, "minor needs row and column sets of equal size");
  }
  const BladeMask limit = p.size() >= 32 ? ~BladeMask{0} : (BladeMask{1} << p.size()) - 1;
  if ((rows & ~limit) != 0 || (cols & ~limit) != 0) {
    throw Error(ErrorKind::InvalidArgument, "minor index out of range");
  }
  const std::vector<int> r = indices_from_mask(rows);
  const std::vector<int> c = indices_from_mask(cols);
  SquareMatrix sub(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sub(i, j) = p(r[i] - 1, c[j] - 1);
  }
  return determinant(sub);
}

double minor(const OrthoMatrix& p, std::span<const int> rows, std::span<const int> cols) {
  if (rows.size() != cols.size()) {
    throw Error(ErrorKind::InvalidArgument, "minor needs multi-indices of equal length");
  }
  return minor(p.entries(), mask_from_indices(rows, p.signature()),
               mask_from_indices(cols, p.signature()));
}

GroupComponent classify_component(const OrthoMatrix& p, double tol) {
  const Signature& sig = p.signature();
  const BladeMask top_mask = (BladeMask{1} << sig.p()) - 1;
  const BladeMask bottom_mask = sig.negative_mask();

  GroupComponent g;
  g.det = determinant(p.entries());
  g.top_minor = minor(p.entries(), top_mask, top_mask);
  g.bottom_minor = minor(p.entries(), bottom_mask, bottom_mask);
  g.det_sign = g.det < 0 ? -1 : 1;
  g.top_minor_sign = g.top_minor < 0 ? -1 : 1;
  g.bottom_minor_sign = g.bottom_minor < 0 ? -1 : 1;

  // Minors of a stored matrix carry relative roundoff of about eps ||P||^2.
  const double size = p.entries().norm_inf();
  const double scale =
      std::max({1.0, std::abs(g.top_minor), std::abs(g.bottom_minor)}) * std::max(1.0, size * size);
  const double identity_gap = std::abs(g.top_minor - g.bottom_minor / g.det);
  if (identity_gap > tol * scale || std::abs(g.top_minor) < 1.0 - tol ||
      std::abs(g.bottom_minor) < 1.0 - tol) {
    throw Error(ErrorKind::Inconsistent,
                "block minors violate top = bottom / det or |minor| >= 1 (gap " +
                    std::to_string(identity_gap) + ")",
                identity_gap);
  }

  g.in_O = true;
  g.in_SO = g.det_sign > 0;
  g.in_O_plus = g.top_minor_sign > 0;
  g.in_O_minus = g.bottom_minor_sign > 0;
  g.in_SO_plus = g.in_SO && g.in_O_plus;
  return g;
}

Multivector beta_vector(const OrthoMatrix& p, int a) {
  if (a < 1 || a > p.n()) throw Error(ErrorKind::InvalidArgument, "generator index out of range");
  Multivector v(p.signature());
  for (int b = 1; b <= p.n(); ++b) v[BladeMask{1} << (b - 1)] = p.at(a, b);
  return v;
}

Multivector beta_blade(const OrthoMatrix& p, BladeMask a, BetaBladeMethod method) {
  const Signature& sig = p.signature();
  if (a >= sig.blade_count()) throw Error(ErrorKind::InvalidArgument, "multi-index out of range");
  if (method == BetaBladeMethod::MinorSum) {
    Multivector out(sig);
    const int k = grade(a);
    for (BladeMask b = 0; b < sig.blade_count(); ++b) {
      if (grade(b) == k) out[b] = minor(p.entries(), a, b);
    }
    return out;
  }
  // Right multiplication by one vector at a time, accumulated in extended
  // precision; the lower-grade cross terms cancel only up to roundoff.
  std::vector<long double> acc(sig.blade_count(), 0.0L);
  std::vector<long double> next(sig.blade_count());
  acc[0] = 1.0L;
  for (int index : indices_from_mask(a)) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (BladeMask i = 0; i < sig.blade_count(); ++i) {
      if (acc[i] == 0.0L) continue;
      for (int b = 1; b <= sig.n(); ++b) {
        const double pab = p.at(index, b);
        if (pab == 0.0) continue;
        const auto [mask, sign] = blade_product(i, BladeMask{1} << (b - 1), sig);
        next[mask] += sign * acc[i] * pab;
      }
    }
    acc.swap(next);
  }
  Multivector out(sig);
  for (BladeMask i = 0; i < sig.blade_count(); ++i) out[i] = static_cast<double>(acc[i]);
  return out;
}

Multivector beta_blade(const OrthoMatrix& p, std::span<const int> a, BetaBladeMethod method) {
  return beta_blade(p, mask_from_indices(a, p.signature()), method);
}

std::vector<Multivector> all_beta_blades(const OrthoMatrix& p) {
  const Signature& sig = p.signature();
  const int n = sig.n();
  std::vector<Multivector> generators;
  for (int a = 1; a <= n; ++a) generators.push_back(beta_vector(p, a));

  std::vector<Multivector> betas(sig.blade_count(), Multivector(sig));
  betas[0] = Multivector::scalar(sig, 1.0);
  for (BladeMask mask = 1; mask < sig.blade_count(); ++mask) {
    if (2 * grade(mask) > n) continue;
    const int top = std::bit_width(mask) - 1;
    const BladeMask rest = mask ^ (BladeMask{1} << top);
    // Lower-grade terms of the product cancel exactly in theory; dropping them
    // keeps their roundoff out of later products.
    betas[mask] = grade_project(betas[rest] * generators[static_cast<std::size_t>(top)],
                                grade(mask));
  }

  // High grades through the complement: with e_A I^{-1} = c e_{A'} and
  // beta_I = det(P) I, beta_A = c det(P) beta_{A'} I. Products of more than n/2
  // entries cancel badly for large boosts; this route never forms them.
  const BladeMask full = sig.pseudoscalar_mask();
  const double det = determinant(p.entries()) < 0 ? -1.0 : 1.0;
  const double full_inverse = blade_inverse_sign(full, sig);
  for (BladeMask mask = 1; mask < sig.blade_count(); ++mask) {
    if (2 * grade(mask) <= n) continue;
    const double c = blade_product(mask, full, sig).sign * full_inverse;
    betas[mask] = multiply_blade_right(betas[mask ^ full], full, c * det);
  }
  return betas;
}

}  // namespace spinrec
