#include "spinrec/rotor_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "spinrec/errors.hpp"

namespace spinrec {

namespace {

using Extended = long double;

double inverse_metric_sign(int a, const Signature& sig) { return sig.metric(a); }

double reverse_sign(BladeMask mask) {
  const int k = grade(mask);
  return (k * (k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
}

// Ŝ e_a S^{-1} for a = 1..n, accumulated in extended precision and rounded once.
// S^{-1} is taken as +-reverse(S): for large boosts the measured sigma carries
// cancellation error of order ||S||^2 eps, which dividing by it would spread
// over every entry.
std::vector<Multivector> twisted_images(const Multivector& s) {
  (void)versor_inverse(s, 1e-6);  // throws NotAVersor
  const Signature& sig = s.signature();
  const auto count = static_cast<BladeMask>(sig.blade_count());
  std::vector<Extended> rev(count);
  Extended sigma = 0;
  for (BladeMask i = 0; i < count; ++i) {
    rev[i] = reverse_sign(i) * static_cast<Extended>(s[i]);
    sigma += blade_inverse_sign(i, sig) * rev[i] * static_cast<Extended>(s[i]);
  }
  std::vector<Multivector> images;
  std::vector<Extended> left(count);
  std::vector<Extended> acc(count);
  for (int a = 1; a <= sig.n(); ++a) {
    const BladeMask ea = BladeMask{1} << (a - 1);
    std::fill(left.begin(), left.end(), Extended{0});
    for (BladeMask i = 0; i < count; ++i) {
      const auto [mask, sign] = blade_product(i, ea, sig);
      left[mask] += (grade(i) % 2 == 0 ? sign : -sign) * static_cast<Extended>(s[i]);
    }
    std::fill(acc.begin(), acc.end(), Extended{0});
    for (BladeMask i = 0; i < count; ++i) {
      if (left[i] == 0) continue;
      for (BladeMask j = 0; j < count; ++j) {
        if (rev[j] == 0) continue;
        const auto [mask, sign] = blade_product(i, j, sig);
        acc[mask] += sign * left[i] * rev[j];
      }
    }
    Multivector image(sig);
    for (BladeMask i = 0; i < count; ++i) image[i] = static_cast<double>(sigma < 0 ? -acc[i] : acc[i]);
    images.push_back(std::move(image));
  }
  return images;
}

int det_sign_of(const OrthoMatrix& p) { return determinant(p.entries()) < 0 ? -1 : 1; }

double magnitude_scale(const Multivector& s) {
  const double m = s.norm_inf();
  return std::max(1.0, m * m);
}

// Inverse of a central element, or nothing when it is a zero divisor.
std::optional<Multivector> center_inverse(const CenterElement& r) {
  const Signature& sig = r.sig;
  if (sig.n() % 2 == 0) {
    if (r.scalar_part == 0.0) return std::nullopt;
    return Multivector::scalar(sig, 1.0 / r.scalar_part);
  }
  // (r0 + rn I)(r0 - rn I) = r0^2 - rn^2 I^2
  const double denom = r.scalar_part * r.scalar_part -
                       pseudoscalar_square(sig) * r.pseudo_part * r.pseudo_part;
  const double size = r.scalar_part * r.scalar_part + r.pseudo_part * r.pseudo_part;
  if (size == 0.0 || std::abs(denom) <= 1e-14 * size) return std::nullopt;
  return CenterElement(sig, r.scalar_part / denom, -r.pseudo_part / denom).embed();
}

void check_degeneracy(const Multivector& m, double degenerate_tol, ErrorKind kind,
                      const char* what) {
  const double threshold = static_cast<double>(m.size()) * degenerate_tol;
  const double norm = m.norm_inf();
  if (norm < threshold) {
    throw Error(kind,
                std::string(what) + " vanishes (||.||_inf = " + std::to_string(norm) +
                    "): the central part of the spin preimage is zero, pi_Cen(S) = 0",
                norm);
  }
}

// Shared tail of every recovery path: S = M R^{-1} for each candidate root R of
// alpha M~M, keeping the candidate that reproduces P best.
RotorResult finish_recovery(const OrthoMatrix& p, const Multivector& m, int alpha,
                            const RecoveryTolerances& tol) {
  const Multivector product = reverse(m) * m * static_cast<double>(alpha);
  const std::vector<CenterElement> roots = center_sqrt(center_project(product));

  std::optional<Multivector> best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const CenterElement& root : roots) {
    const std::optional<Multivector> inv = center_inverse(root);
    if (!inv) continue;
    Multivector candidate = m * *inv;
    const double residual = verification_residual(candidate, p);
    if (residual < best_residual) {
      best_residual = residual;
      best = std::move(candidate);
    }
  }
  if (best && tol.refine_steps > 0) {
    best = refine_preimage(*best, p, tol.refine_steps);
    best_residual = verification_residual(*best, p);
  }
  if (!best || !(best_residual <= tol.residual)) {
    throw Error(ErrorKind::VerificationFailed,
                "no square-root candidate reproduces the matrix (best residual " +
                    std::to_string(best_residual) + ")",
                best_residual);
  }

  RotorResult result{canonicalize_sign(*best, tol.canonical), alpha, best_residual, {}, false};
  result.groups = classify_spin(result.S);
  const double ill_threshold = static_cast<double>(m.size()) * tol.ill_conditioned;
  result.ill_conditioned = m.norm_inf() < ill_threshold;
  return result;
}

}  // namespace

std::vector<const char*> tag_names(const SpinGroupTags& tags) {
  std::vector<const char*> names;
  if (tags.in_Pin) names.push_back("Pin");
  if (tags.in_Spin) names.push_back("Spin");
  if (tags.in_Spin_plus) names.push_back("Spin+");
  if (tags.in_Pin_plus) names.push_back("Pin+");
  if (tags.in_Pin_minus) names.push_back("Pin-");
  return names;
}

Multivector build_M(const OrthoMatrix& p, BetaBladeMethod method) {
  const Signature& sig = p.signature();
  const int det = det_sign_of(p);
  if (sig.n() % 2 == 0 && det < 0) {
    throw Error(ErrorKind::EvenCaseNeedsSO,
                "even dimension requires det P = +1; O(p,q) \\ SO(p,q) is not covered");
  }

  std::vector<Multivector> betas;
  if (method == BetaBladeMethod::Product) {
    betas = all_beta_blades(p);
  } else {
    betas.reserve(sig.blade_count());
    for (BladeMask a = 0; a < sig.blade_count(); ++a) {
      betas.push_back(beta_blade(p, a, BetaBladeMethod::MinorSum));
    }
  }

  Multivector m(sig);
  for (BladeMask a = 0; a < sig.blade_count(); ++a) {
    const double factor = (det < 0 && grade(a) % 2 == 1) ? -1.0 : 1.0;
    m += multiply_blade_right(betas[a], a, factor * blade_inverse_sign(a, sig));
  }
  return m;
}

int alpha_sign(const OrthoMatrix& p) {
  const Signature& sig = p.signature();
  const BladeMask top = (BladeMask{1} << sig.p()) - 1;
  const BladeMask bottom = sig.negative_mask();
  // On SO(p,q) both blocks agree; off it the bottom one still gives reverse(S) S.
  const BladeMask block = (sig.n() % 4 == 3) ? top : bottom;
  return minor(p.entries(), block, block) < 0 ? -1 : 1;
}

std::vector<CenterElement> center_sqrt(const CenterElement& z, double tol) {
  const Signature& sig = z.sig;
  const double z0 = z.scalar_part;
  const double zn = z.pseudo_part;

  if (sig.n() % 2 == 0) {
    if (!(z0 > 0.0)) {
      throw Error(ErrorKind::NoRealRoot,
                  "scalar " + std::to_string(z0) + " has no positive square root", z0);
    }
    return {CenterElement(sig, std::sqrt(z0))};
  }

  if (pseudoscalar_square(sig) > 0) {
    // Split-complex: idempotents (e +- I)/2 carry eigenvalues z0 +- zn.
    const double scale = std::max({1.0, std::abs(z0), std::abs(zn)});
    double plus = z0 + zn;
    double minus = z0 - zn;
    if (plus < -tol * scale || minus < -tol * scale) {
      throw Error(ErrorKind::NoRealRoot,
                  "split-complex element has a negative eigenvalue (" + std::to_string(plus) +
                      ", " + std::to_string(minus) + ")",
                  std::min(plus, minus));
    }
    const double a = std::sqrt(std::max(plus, 0.0));
    const double b = std::sqrt(std::max(minus, 0.0));
    return {CenterElement(sig, (a + b) / 2, (a - b) / 2),
            CenterElement(sig, (a - b) / 2, (a + b) / 2)};
  }

  const std::complex<double> root = std::sqrt(std::complex<double>(z0, zn));
  return {CenterElement(sig, root.real(), root.imag())};
}

SquareMatrix twisted_adjoint_matrix(const Multivector& s) {
  const Signature& sig = s.signature();
  const std::vector<Multivector> images = twisted_images(s);
  SquareMatrix out(sig.n());
  for (int a = 1; a <= sig.n(); ++a) {
    for (int b = 1; b <= sig.n(); ++b) {
      out(a - 1, b - 1) = images[static_cast<std::size_t>(a - 1)][BladeMask{1} << (b - 1)];
    }
  }
  return out;
}

double verification_residual(const Multivector& s, const OrthoMatrix& p) {
  const Signature& sig = s.signature();
  if (!(sig == p.signature())) {
    throw Error(ErrorKind::SignatureMismatch, "rotor and matrix signatures differ");
  }
  std::vector<Multivector> images;
  try {
    images = twisted_images(s);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  double residual = 0.0;
  for (int a = 1; a <= sig.n(); ++a) {
    residual = std::max(residual,
                        distance_inf(images[static_cast<std::size_t>(a - 1)], beta_vector(p, a)));
  }
  return residual;
}

Multivector refine_preimage(const Multivector& s, const OrthoMatrix& p, int steps) {
  const Signature& sig = s.signature();
  if (!(sig == p.signature())) {
    throw Error(ErrorKind::SignatureMismatch, "rotor and matrix signatures differ");
  }
  if (steps <= 0) return s;
  const int n = sig.n();
  const auto count = static_cast<BladeMask>(sig.blade_count());

  // det P = -1 exactly when S is odd.
  const int parity = det_sign_of(p) < 0 ? 1 : 0;
  std::vector<BladeMask> unknowns;
  std::vector<int> column(count, -1);
  for (BladeMask i = 0; i < count; ++i) {
    if (grade(i) % 2 == parity) {
      column[i] = static_cast<int>(unknowns.size());
      unknowns.push_back(i);
    }
  }
  const auto size = static_cast<Eigen::Index>(unknowns.size());

  // The system (Ŝ e_a - beta_a S)_C = 0, one sparse row per (a, C).
  using Matrix = Eigen::Matrix<Extended, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Extended, Eigen::Dynamic, 1>;
  using Row = std::vector<std::pair<Eigen::Index, Extended>>;
  std::vector<Row> rows;
  for (int a = 0; a < n; ++a) {
    const BladeMask ea = BladeMask{1} << a;
    for (BladeMask c = 0; c < count; ++c) {
      if (grade(c) % 2 == parity) continue;
      Row row;
      const BladeMask i = c ^ ea;
      const double hat = grade(i) % 2 == 0 ? 1.0 : -1.0;
      row.emplace_back(column[i], hat * blade_product(i, ea, sig).sign);
      for (int b = 0; b < n; ++b) {
        const double pab = p.entries()(a, b);
        if (pab == 0.0) continue;
        const BladeMask eb = BladeMask{1} << b;
        const BladeMask j = c ^ eb;
        const Extended v = -static_cast<Extended>(pab) * blade_product(eb, j, sig).sign;
        auto hit = std::find_if(row.begin(), row.end(),
                                [&](const auto& e) { return e.first == column[j]; });
        if (hit != row.end()) {
          hit->second += v;
        } else {
          row.emplace_back(column[j], v);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  Matrix normal = Matrix::Zero(size, size);
  for (const Row& row : rows) {
    for (const auto& [x, vx] : row) {
      for (const auto& [y, vy] : row) normal(x, y) += vx * vy;
    }
  }
  // The current iterate pins down the null direction; lambda matches the
  // average diagonal so the added term is neither negligible nor dominant.
  const Extended lambda = normal.trace() / static_cast<Extended>(size) + 1;

  Vector x(size);
  for (Eigen::Index k = 0; k < size; ++k) x(k) = s[unknowns[static_cast<std::size_t>(k)]];
  for (int step = 0; step < steps; ++step) {
    const Extended length = x.squaredNorm();
    if (!(length > 0)) return s;
    const Matrix system = normal + (lambda / length) * x * x.transpose();
    // A^T (A x) row by row: each row residual is small, normal * x would bury
    // it under terms of size ||P||^2 ||S||.
    Vector gradient = Vector::Zero(size);
    for (const Row& row : rows) {
      Extended r = 0;
      for (const auto& [k, v] : row) r += v * x(k);
      for (const auto& [k, v] : row) gradient(k) += v * r;
    }
    const Vector delta = system.llt().solve(-gradient);
    x += delta;
    Extended sigma = 0;
    for (Eigen::Index k = 0; k < size; ++k) {
      const BladeMask mask = unknowns[static_cast<std::size_t>(k)];
      sigma += reverse_sign(mask) * blade_inverse_sign(mask, sig) * x(k) * x(k);
    }
    if (!(std::abs(sigma) > 0) || !x.allFinite()) return s;
    x /= std::sqrt(std::abs(sigma));
  }

  Multivector out(sig);
  for (Eigen::Index k = 0; k < size; ++k) {
    out[unknowns[static_cast<std::size_t>(k)]] = static_cast<double>(x(k));
  }
  return out;
}

Multivector canonicalize_sign(const Multivector& s, double tol) {
  for (BladeMask i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) > tol) return s[i] < 0 ? -s : s;
  }
  return s;
}

RotorResult recover_spin(const OrthoMatrix& p, const RecoveryTolerances& tol) {
  const Multivector m = build_M(p);
  check_degeneracy(m, tol.degenerate, ErrorKind::CenterProjectionVanishes, "M");
  return finish_recovery(p, m, alpha_sign(p), tol);
}

RotorResult recover_hestenes(const OrthoMatrix& p, const RecoveryTolerances& tol) {
  const Signature& sig = p.signature();
  if (sig.p() != 1 || sig.q() != 3) {
    throw Error(ErrorKind::WrongSignature,
                "the four-dimensional method needs signature (1,3), got " + sig.to_string());
  }
  if (!classify_component(p, tol.ortho).in_SO_plus) {
    throw Error(ErrorKind::WrongComponent, "the four-dimensional method needs P in SO+(1,3)");
  }

  Multivector l(sig);
  for (int a = 1; a <= sig.n(); ++a) {
    l += multiply_blade_right(beta_vector(p, a), BladeMask{1} << (a - 1),
                              inverse_metric_sign(a, sig));
  }
  // Scale of L is 4 (L = 4 for the identity), the grade-1 analogue of 2^n.
  const double norm = l.norm_inf();
  if (norm < 4.0 * tol.degenerate) {
    throw Error(ErrorKind::HestenesConditionFailed,
                "L = sum_a beta_a e^a vanishes (||L||_inf = " + std::to_string(norm) + ")",
                norm);
  }

  // L~L lies in span{e, e1234}, a copy of C since (e1234)^2 = -e.
  const Multivector product = reverse(l) * l;
  const BladeMask pseudo = sig.pseudoscalar_mask();
  const std::complex<double> w = std::sqrt(std::complex<double>(product[0], product[pseudo]));
  const double denom = std::norm(w);
  if (denom == 0.0) {
    throw Error(ErrorKind::NoRealRoot, "L~L vanishes", 0.0);
  }
  Multivector w_inverse = Multivector::scalar(sig, w.real() / denom);
  w_inverse[pseudo] = -w.imag() / denom;
  const Multivector s = refine_preimage(l * w_inverse, p, tol.refine_steps);

  const double residual = verification_residual(s, p);
  if (!(residual <= tol.residual)) {
    throw Error(ErrorKind::VerificationFailed,
                "L / sqrt(L~L) does not reproduce the matrix (residual " +
                    std::to_string(residual) + ")",
                residual);
  }
  RotorResult result{canonicalize_sign(s, tol.canonical), 1, residual, {}, false};
  result.groups = classify_spin(result.S);
  result.ill_conditioned = norm < 4.0 * tol.ill_conditioned;
  return result;
}

RotorResult rotor_from_frames(std::span<const Multivector> frames, const RecoveryTolerances& tol) {
  if (frames.empty()) throw Error(ErrorKind::NotAFrame, "empty frame");
  const Signature sig = frames.front().signature();
  const int n = sig.n();
  if (static_cast<int>(frames.size()) != n) {
    throw Error(ErrorKind::NotAFrame, "a frame in Cl" + sig.to_string() + " needs " +
                                          std::to_string(n) + " vectors, got " +
                                          std::to_string(frames.size()));
  }
  for (const Multivector& v : frames) {
    if (!(v.signature() == sig)) throw Error(ErrorKind::SignatureMismatch, "frame signatures differ");
    const double stray = distance_inf(v, grade_project(v, 1));
    if (stray > tol.ortho * magnitude_scale(v)) {
      throw Error(ErrorKind::NotAFrame, "frame vector has non-vector components", stray);
    }
  }

  // beta_a beta_b + beta_b beta_a = 2 eta_ab e
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const Multivector& u = frames[static_cast<std::size_t>(a)];
      const Multivector& v = frames[static_cast<std::size_t>(b)];
      Multivector anti = u * v + v * u;
      if (a == b) anti[0] -= 2.0 * sig.metric(a + 1);
      const double gap = anti.norm_inf();
      if (gap > tol.ortho * std::max(magnitude_scale(u), magnitude_scale(v))) {
        throw Error(ErrorKind::NotAFrame,
                    "vectors " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                        " violate the generator relations (gap " + std::to_string(gap) + ")",
                    gap);
      }
    }
  }

  SquareMatrix entries(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      entries(a, b) = frames[static_cast<std::size_t>(a)][BladeMask{1} << b];
    }
  }
  std::optional<OrthoMatrix> p;
  try {
    p = validate_pseudo_orthogonal(entries, sig, tol.ortho * std::max(1.0, entries.norm_inf() * entries.norm_inf()));
  } catch (const Error& e) {
    throw Error(ErrorKind::NotAFrame, e.what(), e.value());
  }
  if (!classify_component(*p, tol.ortho).in_SO_plus) {
    throw Error(ErrorKind::WrongComponent,
                "frames are not related by a rotation: the matrix is outside SO+" + sig.to_string());
  }

  const Multivector m = build_M(*p);
  check_degeneracy(m, tol.degenerate, ErrorKind::CenterProjectionVanishes, "M");
  return finish_recovery(*p, m, 1, tol);
}

SpinGroupTags classify_spin(const Multivector& s, double tol) {
  const Signature& sig = s.signature();
  const double size = s.norm_inf();
  if (size == 0.0) throw Error(ErrorKind::NotInLipschitzGroup, "zero is not invertible");
  const double scale = magnitude_scale(s);

  const bool has_even = even_part(s).norm_inf() > tol * size;
  const bool has_odd = odd_part(s).norm_inf() > tol * size;
  if (has_even && has_odd) {
    throw Error(ErrorKind::MixedParity, "element mixes even and odd grades");
  }

  const Multivector rev_norm = reverse(s) * s;
  const double sigma_reverse = rev_norm.scalar_part();
  const double off_scalar = distance_inf(rev_norm, Multivector::scalar(sig, sigma_reverse));
  if (off_scalar > tol * scale || std::abs(sigma_reverse) <= tol * scale) {
    throw Error(ErrorKind::NotInLipschitzGroup, "reverse(S) S is not a nonzero scalar",
                off_scalar);
  }

  const Multivector inverse = reverse(s) * (1.0 / sigma_reverse);
  const Multivector hat = grade_involution(s);
  for (int a = 1; a <= sig.n(); ++a) {
    const Multivector image = multiply_blade_right(hat, BladeMask{1} << (a - 1)) * inverse;
    const double stray = distance_inf(image, grade_project(image, 1));
    if (stray > tol * scale) {
      throw Error(ErrorKind::NotInLipschitzGroup,
                  "twisted conjugation moves e_" + std::to_string(a) + " out of grade 1",
                  stray);
    }
  }

  SpinGroupTags tags;
  if (std::abs(std::abs(sigma_reverse) - 1.0) > tol * scale) return tags;

  const double sigma_conjugate = (conjugate(s) * s).scalar_part();
  const bool even = !has_odd;
  tags.in_Pin = true;
  tags.in_Pin_minus = sigma_reverse > 0;
  tags.in_Pin_plus = sigma_conjugate > 0;
  tags.in_Spin = even;
  tags.in_Spin_plus = even && sigma_reverse > 0;
  return tags;
}

OrthoMatrix forward_matrix(const Multivector& s, double ortho_tol) {
  SpinGroupTags tags;
  try {
    tags = classify_spin(s);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotInPin, std::string("not in Pin: ") + e.what(), e.value());
  }
  if (!tags.in_Pin) {
    throw Error(ErrorKind::NotInPin, "not in Pin: reverse(S) S is not +-e");
  }
  const SquareMatrix entries = twisted_adjoint_matrix(s);
  // Entries of boosts grow without bound; roundoff in P^T eta P grows with their square.
  const double scale = std::max(1.0, entries.norm_inf() * entries.norm_inf());
  return validate_pseudo_orthogonal(entries, s.signature(), ortho_tol * scale);
}

Multivector random_versor(const Signature& sig, int k, std::uint64_t seed) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "reflection count must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Multivector s = Multivector::scalar(sig, 1.0);
  for (int i = 0; i < k; ++i) {
    Multivector v(sig);
    double square = 0.0;
    do {
      square = 0.0;
      for (int a = 1; a <= sig.n(); ++a) {
        const double x = normal(rng);
        v[BladeMask{1} << (a - 1)] = x;
        square += sig.metric(a) * x * x;
      }
    } while (std::abs(square) < 0.1);
    v *= 1.0 / std::sqrt(std::abs(square));
    s = s * v;
  }
  return s;
}

}  // namespace spinrec
