#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hyperid/family.hpp"
#include "hyperid/scalar.hpp"

namespace hyperid {

/// Stirling number of the second kind S(j, k), exact.
mpz_class stirling2(unsigned j, unsigned k);

/// Coefficients of (f_1+x)_{m_1} ... (f_r+x)_{m_r} = sum_j sigma_j x^j.
struct SigmaTable {
  ShiftedFamily family;
  std::vector<Scalar> sigma;  // sigma_0 .. sigma_m, monic
};

SigmaTable sigma_coeffs(const ShiftedFamily& family);

/// C_{k,r} = (1/(f)_m) sum_{j=k}^m sigma_j S(j,k), the coefficients of the
/// characteristic polynomial. Requires 0 <= k <= m.
Scalar c_coeff(const ShiftedFamily& family, int k);

/// Cross-check form of C_{k,r}: ((-1)^k / k!) F(-k, f+m; f), summed
/// directly as a finite product-form series.
Scalar c_coeff_by_series(const ShiftedFamily& family, int k);

/// Parameter vectors of the Norlund coefficients g_n(a; b) with q-1 top
/// and q bottom components (q >= 2), plus the derived partial sums
/// psi_l = sum_{i<=l} (b_i - a_i) and nu = sum b - sum a.
class NorlundContext {
 public:
  NorlundContext(std::vector<Scalar> a, std::vector<Scalar> b);

  int q() const { return static_cast<int>(b_.size()); }
  const std::vector<Scalar>& a() const { return a_; }
  const std::vector<Scalar>& b() const { return b_; }
  /// psi()[l-1] = psi_l for l = 1 .. q-1.
  const std::vector<Scalar>& psi() const { return psi_; }
  const Scalar& nu() const { return nu_; }

  /// g_n by the nested sum over monotone chains 0 <= j_1 <= ... <= j_{q-2}
  /// <= n; results are memoized per context (thread-safe).
  Scalar g(int n) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<int, Scalar> values;
  };

  Scalar evaluate(int n) const;

  std::vector<Scalar> a_;
  std::vector<Scalar> b_;
  std::vector<Scalar> psi_;
  Scalar nu_;
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

inline Scalar norlund_g(const NorlundContext& ctx, int n) { return ctx.g(n); }

/// Closed forms for g_1 and g_2.
Scalar norlund_g1_closed(const NorlundContext& ctx);
Scalar norlund_g2_closed(const NorlundContext& ctx);

/// The context (a; b) = (b - f; b - f - m, b + k) used by the extended
/// Minton sum.
NorlundContext minton_context(const Scalar& b, int k, const ShiftedFamily& family);

/// q_k = sum_{i=0}^{m-k-1} g_{m-k-i-1}(b - f; b - f - m, b + k) (b - i)_i,
/// for 0 <= k <= m - 1.
Scalar q_k_sum(const Scalar& b, int k, const ShiftedFamily& family);

}  // namespace hyperid
