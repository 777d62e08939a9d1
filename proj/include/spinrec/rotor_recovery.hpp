#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinrec/multivector.hpp"
#include "spinrec/ortho_matrix.hpp"

namespace spinrec {

struct RecoveryTolerances {
  double residual = 1e-8;      // acceptance of the twisted-adjoint check
  double degenerate = 1e-8;    // M is treated as zero below 2^n * degenerate
  double ill_conditioned = 1e-4;  // flag results with ||M|| below 2^n * this
  double canonical = 1e-9;     // "nonzero" threshold for sign canonicalization
  double ortho = kDefaultOrthoTolerance;
  int refine_steps = 2;        // polishing steps after the closed form, 0 disables
};

struct SpinGroupTags {
  bool in_Pin = false;
  bool in_Spin = false;
  bool in_Spin_plus = false;
  bool in_Pin_plus = false;
  bool in_Pin_minus = false;
};

/// Names of the set tags, e.g. {"Pin", "Spin", "Spin+", "Pin+", "Pin-"}.
std::vector<const char*> tag_names(const SpinGroupTags& tags);

struct RotorResult {
  Multivector S;
  int alpha = 1;
  double residual = 0.0;
  SpinGroupTags groups;
  bool ill_conditioned = false;
};

/// M = sum_A (det P)^{|A|} beta_A e^A. For even n, P must lie in SO(p,q).
Multivector build_M(const OrthoMatrix& p,
                    BetaBladeMethod method = BetaBladeMethod::Product);

/// The sign invariant alpha of the spin preimage S of P, read off the block minors:
/// n = 3 mod 4 uses p^{1..p}_{1..p} (conjugate(S) S = alpha e), every other n uses
/// p^{p+1..n}_{p+1..n} (reverse(S) S = alpha e). For even n and P in SO(p,q) the
/// two minors are equal.
int alpha_sign(const OrthoMatrix& p);

/// Square roots of Z in the center algebra (R, R+R or C depending on sig), each
/// representing a +- pair. Throws NoRealRoot if Z has no real square root.
std::vector<CenterElement> center_sqrt(const CenterElement& z, double tol = 1e-12);

/// Ŝ e_a S^{-1} for every generator, as an n x n matrix. Accumulated in extended
/// precision: entries of large boosts come out of heavy cancellation.
SquareMatrix twisted_adjoint_matrix(const Multivector& s);

/// max_a ||Ŝ e_a S^{-1} - beta_a||_inf; +inf if S is not a unit versor.
double verification_residual(const Multivector& s, const OrthoMatrix& p);

/// Polishes an approximate preimage of P. Ŝ e_a = beta_a S is linear in S with a
/// one-dimensional solution space; each step is a Newton step for its null vector,
/// solved in extended precision, followed by renormalization to reverse(S) S = +-e.
/// The closed form loses roughly ||P||^2 relative digits to cancellation in the
/// minors, which this recovers.
Multivector refine_preimage(const Multivector& s, const OrthoMatrix& p, int steps = 2);

/// Flips the overall sign so that the lowest-mask coefficient with |c| > tol is positive.
Multivector canonicalize_sign(const Multivector& s, double tol = 1e-9);

/// Pin(p,q) element S with Ŝ e_a S^{-1} = p_a^b e_b, recovered as M / sqrt(alpha M~M).
RotorResult recover_spin(const OrthoMatrix& p, const RecoveryTolerances& tol = {});

/// The four-dimensional special case for Cl(1,3): S = L / sqrt(L~L) with
/// L = sum_a beta_a e^a. Requires P in SO+(1,3).
RotorResult recover_hestenes(const OrthoMatrix& p, const RecoveryTolerances& tol = {});

/// Rotor S with S e_a S~ = beta_a for a frame beta_1..beta_n related to the
/// basis by an SO+(p,q) transformation.
RotorResult rotor_from_frames(std::span<const Multivector> frames,
                              const RecoveryTolerances& tol = {});

/// Matrix of the twisted adjoint action of S in Pin(p,q). Throws NotInPin.
OrthoMatrix forward_matrix(const Multivector& s, double ortho_tol = kDefaultOrthoTolerance);

/// Tests the spin group definitions on S. Throws MixedParity or
/// NotInLipschitzGroup; returns all-false tags if S is not normalized.
SpinGroupTags classify_spin(const Multivector& s, double tol = 1e-9);

/// Product of k random grade-1 vectors normalized to v^2 = +-e. Deterministic
/// for a fixed seed.
Multivector random_versor(const Signature& sig, int k, std::uint64_t seed);

}  // namespace spinrec
