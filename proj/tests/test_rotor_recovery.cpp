#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "spinrec/errors.hpp"
#include "spinrec/ortho_matrix.hpp"
#include "spinrec/rotor_recovery.hpp"

using namespace spinrec;
using testing_support::max_abs_diff;
using testing_support::rotation2;
using testing_support::signatures;

namespace {

SquareMatrix diag(std::vector<double> d) {
  SquareMatrix m(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

OrthoMatrix ortho(const SquareMatrix& m, const Signature& sig) {
  return validate_pseudo_orthogonal(m, sig);
}

double sign_free_distance(const Multivector& u, const Multivector& v) {
  return std::min(distance_inf(u, v), distance_inf(u, -v));
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

bool degenerate(ErrorKind k) {
  return k == ErrorKind::CenterProjectionVanishes || k == ErrorKind::EvenCaseNeedsSO;
}

}  // namespace

TEST_CASE("M for small examples") {
  for (const Signature& sig : signatures(1, 5)) {
    const Multivector m = build_M(ortho(SquareMatrix::identity(sig.n()), sig));
    CHECK(distance_inf(m, Multivector::scalar(sig, std::ldexp(1.0, sig.n()))) <= 1e-12);
  }
  CHECK(build_M(ortho(diag({-1, -1}), Signature(2, 0))).norm_inf() <= 1e-12);

  const Signature s2(2, 0);
  for (double theta : {0.3, 1.2, 2.9}) {
    Multivector expected = Multivector::scalar(s2, 2.0 + 2.0 * std::cos(theta));
    expected[0b11] = -2.0 * std::sin(theta);
    CHECK(distance_inf(build_M(ortho(rotation2(theta), s2)), expected) <= 1e-12);
  }
}

TEST_CASE("M agrees with the brute-force oracle") {
  for (const Signature& sig : signatures(1, 5)) {
    for (std::uint64_t i = 0; i < 8; ++i) {
      const OrthoMatrix p = forward_matrix(random_versor(sig, static_cast<int>(i % 5), 70 + i));
      if (p.entries().norm_inf() > 10.0) continue;
      if (sig.n() % 2 == 0 && determinant(p.entries()) < 0) {
        CHECK(kind_of([&] { build_M(p); }) == ErrorKind::EvenCaseNeedsSO);
        continue;
      }
      const Multivector ref = oracle::build_M(p.entries(), sig);
      CHECK(distance_inf(build_M(p), ref) <= 1e-9);
      CHECK(distance_inf(build_M(p, BetaBladeMethod::MinorSum), ref) <= 1e-9);
    }
  }
}

TEST_CASE("n = 3 rotations: M = 2(e + beta_a e^a)") {
  const Signature sig(3, 0);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const OrthoMatrix p = forward_matrix(random_versor(sig, 2, 90 + i));
    Multivector expected = Multivector::scalar(sig, 1.0);
    for (int a = 1; a <= 3; ++a) expected += multiply_blade_right(beta_vector(p, a), BladeMask{1} << (a - 1));
    CHECK(distance_inf(build_M(p), expected * 2.0) <= 1e-12);
  }
}

TEST_CASE("alpha examples") {
  CHECK(alpha_sign(ortho(SquareMatrix::identity(4), Signature(2, 2))) == 1);
  const double c = std::cosh(0.8), s = std::sinh(0.8);
  CHECK(alpha_sign(ortho(SquareMatrix(2, {c, s, s, c}), Signature(1, 1))) == 1);
  CHECK(alpha_sign(ortho(diag({-1, -1}), Signature(1, 1))) == -1);
  // n = 5 reads the bottom block.
  CHECK(alpha_sign(ortho(diag({1, 1, 1, -1, -1}), Signature(3, 2))) == 1);
  CHECK(alpha_sign(ortho(diag({-1, -1, 1, 1, 1}), Signature(2, 3))) == 1);
  CHECK(alpha_sign(ortho(diag({1, 1, -1, 1, 1}), Signature(2, 3))) == -1);
}

TEST_CASE("alpha is the norm sign of the preimage") {
  for (const Signature& sig : signatures(1, 7)) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Multivector s = random_versor(sig, static_cast<int>(i % 5), 120 + i);
      const Multivector norm = sig.n() % 4 == 3 ? conjugate(s) * s : reverse(s) * s;
      CHECK(alpha_sign(forward_matrix(s)) == (norm.scalar_part() < 0 ? -1 : 1));
    }
  }
  // Odd S in even n: the top block would give the conjugate norm instead.
  const Signature sig(1, 1);
  const Multivector e1 = Multivector::generator(sig, 1);
  CHECK(alpha_sign(forward_matrix(e1)) == 1);
  CHECK(alpha_sign(forward_matrix(Multivector::generator(sig, 2))) == -1);
}

TEST_CASE("center square roots") {
  const Signature even(2, 0);
  auto r = center_sqrt(CenterElement(even, 4.0));
  REQUIRE(r.size() == 1);
  CHECK(r[0].scalar_part == doctest::Approx(2.0));

  for (double theta : {0.4, 2.0}) {
    const double z = 8.0 * (1.0 + std::cos(theta));
    auto root = center_sqrt(CenterElement(even, z));
    CHECK(root[0].scalar_part == doctest::Approx(2.0 * std::sqrt(2.0 + 2.0 * std::cos(theta))));
  }
  CHECK(kind_of([&] { center_sqrt(CenterElement(even, -1.0)); }) == ErrorKind::NoRealRoot);

  // (3,0): I^2 = -1, complex case. (2e + e123)^2 = 3e + 4e123.
  const Signature c3(3, 0);
  auto cr = center_sqrt(CenterElement(c3, 3.0, 4.0));
  REQUIRE(cr.size() == 1);
  CHECK(sign_free_distance(cr[0].embed(), CenterElement(c3, 2.0, 1.0).embed()) <= 1e-12);

  // (2,1): I^2 = +1, split case. Eigenvalues 7 +- 2 are both positive.
  const Signature s3(2, 1);
  auto sr = center_sqrt(CenterElement(s3, 7.0, 2.0));
  REQUIRE(sr.size() == 2);
  for (const CenterElement& x : sr) {
    const Multivector sq = x.embed() * x.embed();
    const double pseudo = sq[s3.pseudoscalar_mask()];
    CHECK((std::abs(sq[0] - 7.0) <= 1e-12 && std::abs(std::abs(pseudo) - 2.0) <= 1e-12));
  }
  CHECK(kind_of([&] { center_sqrt(CenterElement(s3, 1.0, 3.0)); }) == ErrorKind::NoRealRoot);
}

TEST_CASE("recovery examples") {
  const Signature s2(2, 0);
  const RotorResult id = recover_spin(ortho(SquareMatrix::identity(2), s2));
  CHECK(distance_inf(id.S, Multivector::scalar(s2, 1.0)) <= 1e-12);
  CHECK(id.alpha == 1);

  const RotorResult quarter = recover_spin(ortho(rotation2(M_PI / 2), s2));
  Multivector expected = Multivector::scalar(s2, std::sqrt(0.5));
  expected[0b11] = -std::sqrt(0.5);
  CHECK(distance_inf(quarter.S, expected) <= 1e-12);

  CHECK(kind_of([&] { recover_spin(ortho(diag({-1, -1}), s2)); }) ==
        ErrorKind::CenterProjectionVanishes);
  CHECK(kind_of([&] { recover_spin(ortho(diag({-1, -1, -1, -1}), Signature(4, 0))); }) ==
        ErrorKind::CenterProjectionVanishes);
  CHECK(kind_of([&] { recover_spin(ortho(diag({-1, 1}), s2)); }) == ErrorKind::EvenCaseNeedsSO);

  // In odd dimension -I is recovered as the pseudoscalar; a single reflection
  // has pi_Cen(S) = 0.
  const Signature s3(3, 0);
  const RotorResult flip = recover_spin(ortho(diag({-1, -1, -1}), s3));
  CHECK(sign_free_distance(flip.S, Multivector::blade(s3, 0b111)) <= 1e-12);
  CHECK(kind_of([&] { recover_spin(ortho(diag({-1, 1, 1}), s3)); }) ==
        ErrorKind::CenterProjectionVanishes);
}

TEST_CASE("round trip: recovered S is the preimage up to sign") {
  int recovered = 0;
  for (const Signature& sig : signatures(1, 6)) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Multivector s = random_versor(sig, static_cast<int>(i % 5), 1000 + i);
      const OrthoMatrix p = forward_matrix(s);
      try {
        const RotorResult r = recover_spin(p);
        const double scale = std::max(1.0, s.norm_inf());
        CHECK(sign_free_distance(r.S, s) <= 1e-8 * scale);
        CHECK(r.residual <= 1e-8);
        CHECK(max_abs_diff(forward_matrix(r.S).entries(),
                           oracle::twisted_adjoint(s)) <= 1e-8 * p.entries().norm_inf());
        ++recovered;
      } catch (const Error& e) {
        CHECK(degenerate(e.kind()));
      }
    }
  }
  CHECK(recovered > 200);
}

TEST_CASE("det P = +1 exactly when the preimage is even") {
  for (const Signature& sig : signatures(1, 6)) {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const OrthoMatrix p = forward_matrix(random_versor(sig, static_cast<int>(i % 4), 1500 + i));
      try {
        const RotorResult r = recover_spin(p);
        const bool even = odd_part(r.S).norm_inf() <= 1e-10 * r.S.norm_inf();
        CHECK(even == (determinant(p.entries()) > 0));
        CHECK(r.groups.in_Spin == even);
      } catch (const Error& e) {
        CHECK(degenerate(e.kind()));
      }
    }
  }
}

TEST_CASE("S and -S give the same matrix") {
  for (const Signature& sig : signatures(1, 5)) {
    const Multivector s = random_versor(sig, 3, 1700 + static_cast<std::uint64_t>(sig.n() * 10 + sig.p()));
    CHECK((forward_matrix(s).entries() - forward_matrix(-s).entries()).norm_inf() <=
          1e-12 * std::max(1.0, forward_matrix(s).entries().norm_inf()));
  }
}

TEST_CASE("SO(3) from axis and angle matches the exponential") {
  const Signature sig(3, 0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.01, 3.1);
  for (int i = 0; i < 20; ++i) {
    double n[3] = {normal(rng), normal(rng), normal(rng)};
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (double& x : n) x /= len;
    const double theta = angle(rng);
    const double c = std::cos(theta), s = std::sin(theta);
    // Rodrigues; row a of P is the image of e_a, so P is the transpose.
    SquareMatrix r(3);
    const double cross[3][3] = {{0, -n[2], n[1]}, {n[2], 0, -n[0]}, {-n[1], n[0], 0}};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        r(b, a) = (a == b ? c : 0.0) + s * cross[a][b] + (1 - c) * n[a] * n[b];
      }
    }
    Multivector bivector(sig);
    bivector[0b110] = n[0];   // e23
    bivector[0b101] = -n[1];  // e31 = -e13
    bivector[0b011] = n[2];   // e12
    const Multivector expected = oracle::exp(bivector * (-theta / 2));
    CHECK(sign_free_distance(recover_spin(ortho(r, sig)).S, expected) <= 1e-12);
  }
}

TEST_CASE("four-dimensional method") {
  const Signature sig(1, 3);
  for (double phi : {0.2, 1.5, 4.0}) {
    const double c = std::cosh(phi), s = std::sinh(phi);
    SquareMatrix boost = SquareMatrix::identity(4);
    boost(0, 0) = c;
    boost(0, 1) = -s;
    boost(1, 0) = -s;
    boost(1, 1) = c;
    Multivector expected = Multivector::scalar(sig, std::cosh(phi / 2));
    expected[0b11] = std::sinh(phi / 2);
    const RotorResult h = recover_hestenes(ortho(boost, sig));
    CHECK(distance_inf(h.S, expected) <= 1e-12 * std::max(1.0, expected.norm_inf()));
    CHECK(h.groups.in_Spin_plus);
  }

  // S = e23: L = sum beta_a e^a vanishes.
  CHECK(kind_of([&] { recover_hestenes(ortho(diag({1, -1, -1, 1}), sig)); }) ==
        ErrorKind::HestenesConditionFailed);
  CHECK(kind_of([&] { recover_hestenes(ortho(SquareMatrix::identity(4), Signature(3, 1))); }) ==
        ErrorKind::WrongSignature);
  CHECK(kind_of([&] { recover_hestenes(ortho(diag({-1, -1, 1, 1}), sig)); }) ==
        ErrorKind::WrongComponent);

  // Agrees with the general method on SO+(1,3).
  int compared = 0;
  for (std::uint64_t i = 0; compared < 20; ++i) {
    const OrthoMatrix p = forward_matrix(random_versor(sig, 2 + 2 * static_cast<int>(i % 2), 1900 + i));
    if (!classify_component(p).in_SO_plus) continue;
    try {
      const RotorResult h = recover_hestenes(p);
      const RotorResult g = recover_spin(p);
      CHECK(distance_inf(h.S, g.S) <= 1e-8 * std::max(1.0, g.S.norm_inf()));
      ++compared;
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::HestenesConditionFailed || degenerate(e.kind())));
      ++compared;
    }
  }
}

TEST_CASE("frames") {
  const Signature s3(3, 0);
  std::vector<Multivector> basis;
  for (int a = 1; a <= 3; ++a) basis.push_back(Multivector::generator(s3, a));
  CHECK(distance_inf(rotor_from_frames(basis).S, Multivector::scalar(s3, 1.0)) <= 1e-12);

  const std::vector<Multivector> turned = {Multivector::generator(s3, 2), -Multivector::generator(s3, 1),
                                           Multivector::generator(s3, 3)};
  const RotorResult r = rotor_from_frames(turned);
  Multivector expected = Multivector::scalar(s3, std::sqrt(0.5));
  expected[0b011] = -std::sqrt(0.5);
  CHECK(distance_inf(r.S, expected) <= 1e-12);
  for (int a = 0; a < 3; ++a) {
    const Multivector image = r.S * basis[static_cast<std::size_t>(a)] * reverse(r.S);
    CHECK(distance_inf(image, turned[static_cast<std::size_t>(a)]) <= 1e-12);
  }

  CHECK(kind_of([&] { rotor_from_frames(std::vector<Multivector>{}); }) == ErrorKind::NotAFrame);
  CHECK(kind_of([&] { rotor_from_frames(std::vector<Multivector>(basis.begin(), basis.begin() + 2)); }) ==
        ErrorKind::NotAFrame);
  std::vector<Multivector> skew = basis;
  skew[1] = skew[1] + basis[0] * 0.5;
  CHECK(kind_of([&] { rotor_from_frames(skew); }) == ErrorKind::NotAFrame);
  std::vector<Multivector> bivector = basis;
  bivector[0] = Multivector::blade(s3, 0b011);
  CHECK(kind_of([&] { rotor_from_frames(bivector); }) == ErrorKind::NotAFrame);
  std::vector<Multivector> mirrored = basis;
  mirrored[0] = -mirrored[0];
  CHECK(kind_of([&] { rotor_from_frames(mirrored); }) == ErrorKind::WrongComponent);

  // Random rotors in several signatures.
  for (const Signature& sig : signatures(2, 5)) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      Multivector s = random_versor(sig, 2, 2100 + i);
      if ((reverse(s) * s).scalar_part() < 0) continue;
      std::vector<Multivector> frame;
      for (int a = 1; a <= sig.n(); ++a) frame.push_back(s * Multivector::generator(sig, a) * reverse(s));
      try {
        CHECK(sign_free_distance(rotor_from_frames(frame).S, s) <= 1e-8 * std::max(1.0, s.norm_inf()));
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CenterProjectionVanishes);
      }
    }
  }
}

TEST_CASE("forward map examples") {
  for (const Signature& sig : signatures(1, 4)) {
    CHECK((forward_matrix(Multivector::scalar(sig, 1.0)).entries() - SquareMatrix::identity(sig.n()))
              .norm_inf() == 0.0);
  }
  const Signature s2(2, 0);
  CHECK((forward_matrix(Multivector::blade(s2, 0b11)).entries() - diag({-1, -1})).norm_inf() <= 1e-15);
  const Signature s3(3, 0);
  CHECK((forward_matrix(Multivector::generator(s3, 1)).entries() - diag({-1, 1, 1})).norm_inf() <= 1e-15);

  CHECK(kind_of([&] { forward_matrix(Multivector::scalar(s2, 2.0)); }) == ErrorKind::NotInPin);
  Multivector mixed = Multivector::scalar(s2, 1.0);
  mixed[0b01] = 1.0;
  CHECK(kind_of([&] { forward_matrix(mixed); }) == ErrorKind::NotInPin);

  for (const Signature& sig : signatures(1, 5)) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      const Multivector s = random_versor(sig, static_cast<int>(i), 2300 + i);
      const OrthoMatrix p = forward_matrix(s);
      // The oracle runs in plain double and cancels terms of size ||P||^2.
      const double scale = std::max(1.0, p.entries().norm_inf() * p.entries().norm_inf());
      CHECK(max_abs_diff(p.entries(), oracle::twisted_adjoint(s)) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("spin group classification") {
  const Signature s3(3, 0);
  const SpinGroupTags one = classify_spin(Multivector::scalar(s3, 1.0));
  CHECK(one.in_Pin);
  CHECK(one.in_Spin);
  CHECK(one.in_Spin_plus);
  CHECK(one.in_Pin_plus);
  CHECK(one.in_Pin_minus);

  const SpinGroupTags e1 = classify_spin(Multivector::generator(s3, 1));
  CHECK(e1.in_Pin);
  CHECK_FALSE(e1.in_Spin);
  CHECK(e1.in_Pin_minus);
  CHECK_FALSE(e1.in_Pin_plus);

  const SpinGroupTags f1 = classify_spin(Multivector::generator(Signature(0, 3), 1));
  CHECK(f1.in_Pin_plus);
  CHECK_FALSE(f1.in_Pin_minus);

  // e12 in (1,1) squares to +1: reverse(S) S = -1.
  const SpinGroupTags b = classify_spin(Multivector::blade(Signature(1, 1), 0b11));
  CHECK(b.in_Spin);
  CHECK_FALSE(b.in_Spin_plus);

  const SpinGroupTags scaled = classify_spin(Multivector::scalar(s3, 2.0));
  CHECK_FALSE(scaled.in_Pin);

  Multivector mixed = Multivector::scalar(s3, 1.0);
  mixed[0b001] = 1.0;
  CHECK(kind_of([&] { classify_spin(mixed); }) == ErrorKind::MixedParity);
  CHECK(kind_of([&] { classify_spin(Multivector(s3)); }) == ErrorKind::NotInLipschitzGroup);
  const Signature s4(4, 0);
  Multivector not_versor = Multivector::scalar(s4, 1.0);
  not_versor[0b1111] = 1.0;
  CHECK(kind_of([&] { classify_spin(not_versor); }) == ErrorKind::NotInLipschitzGroup);
  CHECK(tag_names(one).size() == 5);
  CHECK(tag_names(scaled).empty());
}

TEST_CASE("random versors") {
  for (const Signature& sig : signatures(1, 6)) {
    for (int k = 0; k < 5; ++k) {
      const Multivector s = random_versor(sig, k, 42);
      CHECK(distance_inf(s, random_versor(sig, k, 42)) == 0.0);
      const Multivector norm = reverse(s) * s;
      CHECK(std::abs(std::abs(norm.scalar_part()) - 1.0) <= 1e-9 * std::max(1.0, s.norm_inf() * s.norm_inf()));
      const Multivector wrong = k % 2 == 0 ? odd_part(s) : even_part(s);
      CHECK(wrong.norm_inf() == 0.0);
      CHECK(classify_spin(s).in_Pin);
    }
  }
  CHECK(kind_of([&] { random_versor(Signature(2, 0), -1, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("refinement") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-1e-6, 1e-6);
  for (const Signature& sig : signatures(2, 5)) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      const Multivector s = random_versor(sig, 2 + static_cast<int>(i % 2), 2500 + i);
      const OrthoMatrix p = forward_matrix(s);
      // Exact preimages stay put.
      CHECK(distance_inf(refine_preimage(s, p), s) <= 1e-12 * std::max(1.0, s.norm_inf()));
      // Perturbations within the right parity are pulled back.
      Multivector rough = s;
      for (BladeMask m = 0; m < sig.blade_count(); ++m) {
        if (s[m] != 0.0) rough[m] += noise(rng);
      }
      const Multivector polished = refine_preimage(rough, p);
      CHECK(sign_free_distance(polished, s) <= 1e-10 * std::max(1.0, s.norm_inf()));
      CHECK(verification_residual(polished, p) <= 1e-10);
      CHECK(distance_inf(refine_preimage(rough, p, 0), rough) == 0.0);
    }
  }
}

TEST_CASE("verification residual") {
  const Signature s2(2, 0);
  const OrthoMatrix p = ortho(rotation2(0.5), s2);
  Multivector good = Multivector::scalar(s2, std::cos(0.25));
  good[0b11] = -std::sin(0.25);
  CHECK(verification_residual(good, p) <= 1e-15);
  CHECK(verification_residual(-good, p) <= 1e-15);
  CHECK(verification_residual(reverse(good), p) > 0.1);
  CHECK(std::isinf(verification_residual(Multivector::scalar(s2, 3.0), p)));
}

TEST_CASE("sign canonicalization") {
  const Signature s2(2, 0);
  Multivector s = Multivector::scalar(s2, -0.6);
  s[0b11] = 0.8;
  CHECK(canonicalize_sign(s)[0] == doctest::Approx(0.6));
  Multivector tiny(s2);
  tiny[0] = -1e-12;
  tiny[0b01] = -1.0;
  CHECK(canonicalize_sign(tiny)[0b01] == 1.0);
}
