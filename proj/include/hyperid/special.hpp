#pragma once

#include <span>

#include "hyperid/scalar.hpp"

namespace hyperid {

/// Rising factorial a(a+1)...(a+n-1); (a)_0 = 1. Exact for exact input.
Scalar pochhammer(const Scalar& a, std::size_t n);
/// prod_i (v_i)_n.
Scalar pochhammer(std::span<const Scalar> v, std::size_t n);
/// prod_i (v_i)_{n_i}; throws std::invalid_argument on length mismatch.
Scalar pochhammer(std::span<const Scalar> v, std::span<const int> n);

/// Gamma function at the precision of z.
///
/// Spouge's approximation with the parameter chosen from the requested
/// digits (plus guard digits), and reflection Gamma(z) = pi / (sin(pi z)
/// Gamma(1-z)) for Re z < 1/2. The result is accurate to within 10 units
/// in the last requested digit. Throws PoleError when z is within
/// 10^(-digits/2) of a nonpositive integer.
BigComplex gamma(const BigComplex& z);

/// Exact factorial for positive integer rationals, otherwise the complex
/// gamma function at the current working precision.
Scalar gamma(const Scalar& z);

/// prod Gamma(num_i) / prod Gamma(den_j).
///
/// Every numerator/denominator pair whose difference is an integer is
/// reduced to a Pochhammer quotient before any gamma evaluation, so such
/// pairs never touch a pole and stay exact in rational mode. Remaining
/// arguments are evaluated with gamma(). Throws PoleError when an unpaired
/// argument is a pole, or a reduced quotient divides by zero.
Scalar gamma_ratio(std::span<const Scalar> num, std::span<const Scalar> den);

}  // namespace hyperid
