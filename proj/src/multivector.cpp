#include "spinrec/multivector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spinrec/errors.hpp"

namespace spinrec {

namespace {

void require_same_signature(const Signature& a, const Signature& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::SignatureMismatch,
                "signature mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

double involution_sign(int k, Involution kind) {
  int exponent = 0;
  switch (kind) {
    case Involution::Grade: exponent = k; break;
    case Involution::Reverse: exponent = k * (k - 1) / 2; break;
    case Involution::Conjugate: exponent = k * (k + 1) / 2; break;
  }
  return exponent % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

int grade(BladeMask mask) noexcept { return std::popcount(mask); }

BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig) {
  // For each generator of a, count the generators of b with a smaller index.
  int swaps = 0;
  for (BladeMask x = a >> 1; x != 0; x >>= 1) swaps += std::popcount(x & b);
  swaps += std::popcount(a & b & sig.negative_mask());
  return {a ^ b, (swaps & 1) ? -1.0 : 1.0};
}

double blade_inverse_sign(BladeMask a, const Signature& sig) {
  // e_A e_A = s e with s = +-1, so e^A = s e_A.
  return blade_product(a, a, sig).sign;
}

BladeMask mask_from_indices(std::span<const int> indices, const Signature& sig) {
  BladeMask mask = 0;
  int previous = 0;
  for (int a : indices) {
    if (a <= previous || a > sig.n()) {
      throw Error(ErrorKind::InvalidArgument,
                  "multi-index must be strictly increasing within 1.." +
                      std::to_string(sig.n()));
    }
    mask |= BladeMask{1} << (a - 1);
    previous = a;
  }
  return mask;
}

std::vector<int> indices_from_mask(BladeMask mask) {
  std::vector<int> out;
  for (int bit = 0; mask != 0; ++bit, mask >>= 1) {
    if (mask & 1u) out.push_back(bit + 1);
  }
  return out;
}

Multivector::Multivector(Signature sig) : sig_(sig), coeffs_(sig.blade_count(), 0.0) {}

Multivector::Multivector(Signature sig, std::vector<double> coeffs)
    : sig_(sig), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != sig_.blade_count()) {
    throw Error(ErrorKind::InvalidArgument,
                "multivector needs exactly 2^n = " + std::to_string(sig_.blade_count()) +
                    " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

Multivector Multivector::scalar(Signature sig, double value) {
  Multivector m(sig);
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::blade(Signature sig, BladeMask mask, double value) {
  if (mask >= sig.blade_count()) {
    throw Error(ErrorKind::InvalidArgument, "blade mask out of range");
  }
  Multivector m(sig);
  m.coeffs_[mask] = value;
  return m;
}

Multivector Multivector::generator(Signature sig, int a) {
  if (a < 1 || a > sig.n()) {
    throw Error(ErrorKind::InvalidArgument, "generator index out of range");
  }
  return blade(sig, BladeMask{1} << (a - 1));
}

double Multivector::norm_inf() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Multivector& Multivector::operator+=(const Multivector& other) {
  require_same_signature(sig_, other.sig_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  require_same_signature(sig_, other.sig_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

double distance_inf(const Multivector& u, const Multivector& v) {
  require_same_signature(u.signature(), v.signature());
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    m = std::max(m, std::abs(u.coeffs()[i] - v.coeffs()[i]));
  }
  return m;
}

Multivector geometric_product(const Multivector& u, const Multivector& v) {
  require_same_signature(u.signature(), v.signature());
  const Signature& sig = u.signature();
  const auto count = static_cast<BladeMask>(sig.blade_count());
  std::vector<BladeMask> v_support;
  v_support.reserve(count);
  for (BladeMask j = 0; j < count; ++j) {
    if (v[j] != 0.0) v_support.push_back(j);
  }
  Multivector out(sig);
  for (BladeMask i = 0; i < count; ++i) {
    const double ui = u[i];
    if (ui == 0.0) continue;
    for (BladeMask j : v_support) {
      const auto [mask, sign] = blade_product(i, j, sig);
      out[mask] += sign * ui * v[j];
    }
  }
  return out;
}

Multivector multiply_blade_right(const Multivector& u, BladeMask b, double scale) {
  const Signature& sig = u.signature();
  const auto count = static_cast<BladeMask>(sig.blade_count());
  Multivector out(sig);
  for (BladeMask i = 0; i < count; ++i) {
    if (u[i] == 0.0) continue;
    const auto [mask, sign] = blade_product(i, b, sig);
    out[mask] += sign * scale * u[i];
  }
  return out;
}

Multivector multiply_blade_left(BladeMask b, const Multivector& u, double scale) {
  const Signature& sig = u.signature();
  const auto count = static_cast<BladeMask>(sig.blade_count());
  Multivector out(sig);
  for (BladeMask i = 0; i < count; ++i) {
    if (u[i] == 0.0) continue;
    const auto [mask, sign] = blade_product(b, i, sig);
    out[mask] += sign * scale * u[i];
  }
  return out;
}

Multivector grade_project(const Multivector& u, int k) {
  const Signature& sig = u.signature();
  if (k < 0 || k > sig.n()) {
    throw Error(ErrorKind::InvalidArgument,
                "grade " + std::to_string(k) + " out of range for n = " +
                    std::to_string(sig.n()));
  }
  Multivector out(sig);
  for (BladeMask i = 0; i < sig.blade_count(); ++i) {
    if (grade(i) == k) out[i] = u[i];
  }
  return out;
}

Multivector even_part(const Multivector& u) {
  Multivector out(u.signature());
  for (BladeMask i = 0; i < u.size(); ++i) {
    if (grade(i) % 2 == 0) out[i] = u[i];
  }
  return out;
}

Multivector odd_part(const Multivector& u) {
  Multivector out(u.signature());
  for (BladeMask i = 0; i < u.size(); ++i) {
    if (grade(i) % 2 == 1) out[i] = u[i];
  }
  return out;
}

Multivector involution(const Multivector& u, Involution kind) {
  Multivector out(u);
  for (BladeMask i = 0; i < u.size(); ++i) out[i] *= involution_sign(grade(i), kind);
  return out;
}

CenterElement::CenterElement(Signature s, double scalar, double pseudo)
    : sig(s), scalar_part(scalar), pseudo_part(s.n() % 2 == 0 ? 0.0 : pseudo) {}

Multivector CenterElement::embed() const {
  Multivector m = Multivector::scalar(sig, scalar_part);
  if (sig.n() % 2 == 1) m[sig.pseudoscalar_mask()] = pseudo_part;
  return m;
}

CenterElement center_project(const Multivector& u) {
  const Signature& sig = u.signature();
  const double pseudo = sig.n() % 2 == 1 ? u[sig.pseudoscalar_mask()] : 0.0;
  return CenterElement(sig, u.scalar_part(), pseudo);
}

Multivector average_over_basis(const Multivector& u) {
  const Signature& sig = u.signature();
  Multivector sum(sig);
  for (BladeMask a = 0; a < sig.blade_count(); ++a) {
    const Multivector left = multiply_blade_left(a, u);
    sum += multiply_blade_right(left, a, blade_inverse_sign(a, sig));
  }
  sum *= 1.0 / static_cast<double>(sig.blade_count());
  return sum;
}

Multivector generator_conjugation(const Multivector& u) {
  const Signature& sig = u.signature();
  Multivector sum(sig);
  for (int a = 1; a <= sig.n(); ++a) {
    const BladeMask ea = BladeMask{1} << (a - 1);
    // e^a = eta_aa e_a
    sum += multiply_blade_right(multiply_blade_left(ea, u), ea, sig.metric(a));
  }
  return sum;
}

Multivector versor_inverse(const Multivector& s, double tol) {
  const Multivector norm = reverse(s) * s;
  const double sigma = norm.scalar_part();
  const double scale = std::max(1.0, s.norm_inf() * s.norm_inf());
  const double off_scalar = distance_inf(norm, Multivector::scalar(s.signature(), sigma));
  if (off_scalar > tol * scale || std::abs(std::abs(sigma) - 1.0) > tol * scale) {
    throw Error(ErrorKind::NotAVersor,
                "reverse(S) S is not +-e (scalar part " + std::to_string(sigma) + ")",
                std::max(off_scalar, std::abs(std::abs(sigma) - 1.0)));
  }
  return reverse(s) * (sigma < 0 ? -1.0 : 1.0);
}

}  // namespace spinrec
