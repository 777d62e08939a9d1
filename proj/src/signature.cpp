#include "spinrec/signature.hpp"

#include "spinrec/errors.hpp"

namespace spinrec {

Signature::Signature(int p, int q) : p_(p), q_(q), negative_mask_(0) {
  if (p < 0 || q < 0) {
    throw Error(ErrorKind::InvalidArgument, "signature counts must be non-negative");
  }
  if (p + q < 1 || p + q > kMaxDimension) {
    throw Error(ErrorKind::InvalidArgument,
                "dimension n = p + q must lie in [1, " + std::to_string(kMaxDimension) +
                    "], got " + std::to_string(p + q));
  }
  for (int a = p; a < p + q; ++a) negative_mask_ |= BladeMask{1} << a;
}

int Signature::metric(int a) const {
  if (a < 1 || a > n()) {
    throw Error(ErrorKind::InvalidArgument, "generator index out of range");
  }
  return a <= p_ ? 1 : -1;
}

std::string Signature::to_string() const {
  return "(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
}

int pseudoscalar_square(const Signature& sig) {
  const int n = sig.n();
  const int exponent = n * (n - 1) / 2 + sig.q();
  return exponent % 2 == 0 ? 1 : -1;
}

}  // namespace spinrec
