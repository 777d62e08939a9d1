#include "spinrec/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "spinrec/errors.hpp"
#include "spinrec/multivector.hpp"
#include "spinrec/ortho_matrix.hpp"
#include "spinrec/rotor_recovery.hpp"

namespace spinrec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Signature> signatures_up_to(int max_n) {
  std::vector<Signature> out;
  for (int n = 1; n <= max_n; ++n) {
    for (int p = n; p >= 0; --p) out.emplace_back(p, n - p);
  }
  return out;
}

Multivector random_multivector(const Signature& sig, std::mt19937_64& rng, int only_grade = -1) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Multivector u(sig);
  for (BladeMask i = 0; i < sig.blade_count(); ++i) {
    if (only_grade < 0 || grade(i) == only_grade) u[i] = uniform(rng);
  }
  return u;
}

class Suite {
 public:
  Suite(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double deviation) {
    ++result_.checks;
    if (!std::isfinite(deviation)) deviation = std::numeric_limits<double>::infinity();
    result_.worst = std::max(result_.worst, deviation);
    if (!(deviation <= result_.tolerance)) ++result_.failures;
  }
  void fail() { record(std::numeric_limits<double>::infinity()); }

  SuiteResult result() const { return result_; }

 private:
  SuiteResult result_;
};

SuiteResult round_trip(const SelftestOptions& o, double tol) {
  Suite suite("round-trip", tol);
  std::uint64_t counter = o.seed;
  for (const Signature& sig : signatures_up_to(o.max_n)) {
    for (int i = 0; i < o.samples; ++i) {
      const Multivector s = random_versor(sig, i % 5, splitmix64(++counter));
      try {
        const OrthoMatrix p = forward_matrix(s);
        RecoveryTolerances rt;
        rt.residual = std::max(rt.residual, tol);
        const RotorResult r = recover_spin(p, rt);
        const SquareMatrix back = forward_matrix(r.S).entries();
        const Multivector canon = canonicalize_sign(s);
        suite.record(std::max((back - p.entries()).norm_inf(), distance_inf(r.S, canon)));
      } catch (const Error& e) {
        // Both mean M = 0: pi_Cen(S) vanishes, or S is odd in even dimension.
        if (e.kind() == ErrorKind::CenterProjectionVanishes ||
            e.kind() == ErrorKind::EvenCaseNeedsSO) {
          continue;
        }
        suite.fail();
      }
    }
  }
  return suite.result();
}

SuiteResult averaging(const SelftestOptions& o, double tol) {
  Suite suite("averaging", tol);
  std::mt19937_64 rng(splitmix64(o.seed ^ 0xa5a5));
  for (const Signature& sig : signatures_up_to(o.max_n)) {
    for (int i = 0; i < o.samples; ++i) {
      const Multivector u = random_multivector(sig, rng);
      suite.record(distance_inf(average_over_basis(u), center_project(u).embed()));
    }
  }
  return suite.result();
}

SuiteResult conjugation(const SelftestOptions& o, double tol) {
  Suite suite("generator-conjugation", tol);
  std::mt19937_64 rng(splitmix64(o.seed ^ 0x5a5a));
  for (const Signature& sig : signatures_up_to(o.max_n)) {
    const int n = sig.n();
    for (int k = 0; k <= n; ++k) {
      const double factor = (k % 2 == 0 ? 1.0 : -1.0) * (n - 2 * k);
      for (int i = 0; i < o.samples; ++i) {
        const Multivector u = random_multivector(sig, rng, k);
        suite.record(distance_inf(generator_conjugation(u), u * factor));
      }
    }
  }
  return suite.result();
}

SuiteResult beta_blades(const SelftestOptions& o, double tol) {
  Suite suite("beta-blades", tol);
  std::uint64_t counter = o.seed ^ 0x1234;
  for (const Signature& sig : signatures_up_to(o.max_n)) {
    for (int i = 0; i < o.samples; ++i) {
      const OrthoMatrix p = forward_matrix(random_versor(sig, i % 5, splitmix64(++counter)));
      double worst = 0.0;
      for (BladeMask a = 0; a < sig.blade_count(); ++a) {
        worst = std::max(worst, distance_inf(beta_blade(p, a, BetaBladeMethod::Product),
                                             beta_blade(p, a, BetaBladeMethod::MinorSum)));
      }
      const Multivector top = beta_blade(p, sig.pseudoscalar_mask());
      const Multivector expected =
          Multivector::blade(sig, sig.pseudoscalar_mask(), determinant(p.entries()));
      // A stored P is pseudo-orthogonal only to about eps ||P||^2, and the exact
      // product of its rows inherits cross terms of that order.
      const double scale = std::max(1.0, p.entries().norm_inf() * p.entries().norm_inf());
      suite.record(std::max(worst, distance_inf(top, expected)) / scale);
    }
  }
  return suite.result();
}

SuiteResult block_minors(const SelftestOptions& o, double tol) {
  Suite suite("block-minors", tol);
  std::uint64_t counter = o.seed ^ 0x4321;
  for (const Signature& sig : signatures_up_to(o.max_n)) {
    const BladeMask top_mask = (BladeMask{1} << sig.p()) - 1;
    for (int i = 0; i < o.samples; ++i) {
      const OrthoMatrix p = forward_matrix(random_versor(sig, i % 5, splitmix64(++counter)));
      const double det = determinant(p.entries());
      const double top = minor(p.entries(), top_mask, top_mask);
      const double bottom = minor(p.entries(), sig.negative_mask(), sig.negative_mask());
      const double gap = std::abs(top - bottom / det) / std::max(1.0, std::abs(top));
      const double shortfall = std::max(0.0, 1.0 - std::min(std::abs(top), std::abs(bottom)));
      suite.record(std::max(gap, shortfall));
    }
  }
  return suite.result();
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  const auto tol = [&](double fallback) { return options.tolerance.value_or(fallback); };
  return {
      round_trip(options, tol(1e-8)),
      averaging(options, tol(1e-10)),
      conjugation(options, tol(1e-10)),
      beta_blades(options, tol(1e-9)),
      block_minors(options, tol(1e-9)),
  };
}

}  // namespace spinrec
