#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spinrec/multivector.hpp"
#include "spinrec/ortho_matrix.hpp"

namespace testing_support {

using spinrec::BladeMask;
using spinrec::Multivector;
using spinrec::Signature;

inline std::vector<Signature> signatures(int min_n, int max_n) {
  std::vector<Signature> out;
  for (int n = min_n; n <= max_n; ++n) {
    for (int p = n; p >= 0; --p) out.emplace_back(p, n - p);
  }
  return out;
}

inline Multivector random_multivector(const Signature& sig, std::mt19937_64& rng,
                                      int only_grade = -1) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Multivector u(sig);
  for (BladeMask i = 0; i < sig.blade_count(); ++i) {
    if (only_grade < 0 || spinrec::grade(i) == only_grade) u[i] = uniform(rng);
  }
  return u;
}

inline double max_abs_diff(const spinrec::SquareMatrix& a,
                           const std::vector<std::vector<double>>& b) {
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a(i, j) - b[i][j]));
  }
  return worst;
}

inline spinrec::SquareMatrix rotation2(double theta) {
  return spinrec::SquareMatrix(2, {std::cos(theta), std::sin(theta), -std::sin(theta),
                                   std::cos(theta)});
}

}  // namespace testing_support
