#ifndef CPROB_ALGEBRA_HPP
#define CPROB_ALGEBRA_HPP

#include <complex>

#include "cprob/errors.hpp"

namespace cprob {

/// A complex-valued degree of plausibility. Unlike an ordinary probability it
/// carries no magnitude bound; only derived frequencies live in [0,1].
using Complex = std::complex<double>;

inline constexpr double kDivisorTolerance = 1e-12;

/// Product rule: combines (a -> b) with (a and b -> c) into (a -> b and c).
inline Complex chain(Complex ab, Complex abc) { return ab * abc; }

/// Sum rule: (a -> not b) = 1 - (a -> b).
inline Complex negate(Complex ab) { return Complex{1.0, 0.0} - ab; }

/// Inclusion-exclusion: (a -> b or c) = (a -> b) + (a -> c) - (a -> b and c).
inline Complex or_prob(Complex ab, Complex ac, Complex abc) {
  return ab + ac - abc;
}

/// Conditioning reversal: (a and b -> c) = (a -> c)(a and c -> b) / (a -> b),
/// defined only when the divisor (a -> b) is nonzero. A magnitude at or below
/// `divisor_tol` throws DivisorZero: the conditional does not exist.
inline Complex bayes(Complex a_to_b, Complex a_to_c, Complex ac_to_b,
                     double divisor_tol = kDivisorTolerance) {
  if (std::abs(a_to_b) <= divisor_tol) {
    throw Error(ErrorCode::DivisorZero,
                "conditional undefined: |a->b| = " +
                    std::to_string(std::abs(a_to_b)) + " <= " +
                    std::to_string(divisor_tol));
  }
  return a_to_c * ac_to_b / a_to_b;
}

}  // namespace cprob

#endif  // CPROB_ALGEBRA_HPP
