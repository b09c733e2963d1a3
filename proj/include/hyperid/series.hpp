#pragma once

#include <string>
#include <vector>

#include "hyperid/scalar.hpp"

namespace hyperid {

/// pFq(top; bottom; x).
struct HypParams {
  std::vector<Scalar> top;
  std::vector<Scalar> bottom;
  Scalar x = Scalar(1);
};

enum class SeriesKind { Terminating, ConvergentUnit, ConvergentDisk, Divergent };

struct Classification {
  SeriesKind kind = SeriesKind::Divergent;
  int k = 0;           // Terminating: the series stops after the x^k term
  Scalar excess = 0;   // ConvergentUnit: s = sum bottom - sum top
};

enum class SeriesMethod { ExactTerminating, TruncatedDisk, AcceleratedUnit };

std::string to_string(SeriesKind kind);
std::string to_string(SeriesMethod method);

struct SeriesResult {
  Scalar value;
  double est_error = 0.0;  // absolute; 0 exactly for rational terminating sums
  int terms_used = 0;
  SeriesMethod method = SeriesMethod::ExactTerminating;
};

/// Terminating(k) takes priority, with k the smallest -top_i in N_0. Then
/// ConvergentUnit(s) for p = q+1, x = 1, Re s > 0; ConvergentDisk for
/// p = q+1 with |x| < 1 and for p <= q at any x. Everything else is
/// Divergent. Throws InadmissibleBottom when a bottom parameter -n is not
/// dominated by a top parameter -k with k <= n.
Classification classify(const HypParams& params);

/// Evaluates the series to `prec` digits (16 <= prec <= 300).
///
/// Terminating sums are exact when every input is rational. Unit-argument
/// sums are extrapolated with the generalized rho algorithm (theta = s) at
/// 2*prec+20 working digits; est_error is the spread of the last three
/// extrapolants plus 10^-prec |value|. Throws DivergentSeries for Divergent
/// input and NoConvergence when the budget (4096 terms, 512 columns) is
/// exhausted at both working precisions.
SeriesResult eval_series(const HypParams& params, int prec);

/// Terminating sum with numerator and denominator Pochhammer symbols kept
/// as explicit products, so a bottom pole dominated by an earlier top zero
/// contributes a zero term rather than 0/0.
SeriesResult eval_regularized(const HypParams& params, int prec);

/// Unit-argument sum by the Levin u-transform (beta = 1), independent of
/// the rho extrapolation used by eval_series. Same error contract.
SeriesResult eval_unit_levin(const HypParams& params, int prec);

/// sum_{n=0}^{k} w_n (top)_n / ((bottom)_n n!) x^n, with w_n supplied per
/// index. Exact when everything is rational.
SeriesResult weighted_terminating_sum(const HypParams& params, int k, const std::vector<Scalar>& weights, int prec);

}  // namespace hyperid
