#include "hyperid/combinatorics.hpp"

#include <stdexcept>

#include "hyperid/errors.hpp"
#include "hyperid/special.hpp"

namespace hyperid {

mpz_class stirling2(unsigned j, unsigned k) {
  if (k > j) return 0;
  // Row-wise S(n, i) = i S(n-1, i) + S(n-1, i-1).
  std::vector<mpz_class> row(k + 1, 0);
  row[0] = 1;
  for (unsigned n = 1; n <= j; ++n) {
    for (unsigned i = std::min(n, k); i >= 1; --i) row[i] = row[i] * i + row[i - 1];
    row[0] = 0;
  }
  return row[k];
}

SigmaTable sigma_coeffs(const ShiftedFamily& family) {
  std::vector<Scalar> sigma{Scalar(1)};
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (int l = 0; l < family.m()[i]; ++l) {
      const Scalar root = family.f()[i] + Scalar(l);
      std::vector<Scalar> next(sigma.size() + 1, Scalar(0));
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        next[j] += sigma[j] * root;
        next[j + 1] += sigma[j];
      }
      sigma = std::move(next);
    }
  }
  return SigmaTable{family, std::move(sigma)};
}

Scalar c_coeff(const ShiftedFamily& family, int k) {
  const int m = family.m_total();
  if (k < 0 || k > m) throw PreconditionViolation("c_coeff: k must lie in [0, m]");
  const SigmaTable table = sigma_coeffs(family);
  Scalar sum(0);
  for (int j = k; j <= m; ++j) {
    sum += table.sigma[static_cast<std::size_t>(j)] *
           Scalar(Rational(stirling2(static_cast<unsigned>(j), static_cast<unsigned>(k)), 1));
  }
  return sum / family.pochhammer();
}

Scalar c_coeff_by_series(const ShiftedFamily& family, int k) {
  const int m = family.m_total();
  if (k < 0 || k > m) throw PreconditionViolation("c_coeff: k must lie in [0, m]");
  const std::vector<Scalar> top = family.shifted();
  Scalar sum(0);
  for (int n = 0; n <= k; ++n) {
    Scalar term = pochhammer(Scalar(-k), static_cast<std::size_t>(n)) *
                  pochhammer(std::span<const Scalar>(top), static_cast<std::size_t>(n));
    term /= pochhammer(family.f(), static_cast<std::size_t>(n)) *
            Scalar(Rational(factorial(static_cast<unsigned long>(n)), 1));
    sum += term;
  }
  const Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
  return sign * sum / Scalar(Rational(factorial(static_cast<unsigned long>(k)), 1));
}

// --- Norlund coefficients --------------------------------------------------

NorlundContext::NorlundContext(std::vector<Scalar> a, std::vector<Scalar> b) : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() < 2) throw std::invalid_argument("Norlund context needs q >= 2 bottom parameters");
  if (a_.size() + 1 != b_.size()) throw std::invalid_argument("Norlund context needs q-1 top and q bottom parameters");
  Scalar acc(0);
  for (std::size_t l = 0; l < a_.size(); ++l) {
    acc += b_[l] - a_[l];
    psi_.push_back(acc);
  }
  nu_ = Scalar(0);
  for (const auto& x : b_) nu_ += x;
  for (const auto& x : a_) nu_ -= x;
}

Scalar NorlundContext::g(int n) const {
  if (n < 0) throw std::invalid_argument("Norlund coefficient index must be nonnegative");
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (auto it = memo_->values.find(n); it != memo_->values.end()) return it->second;
  }
  Scalar value = evaluate(n);
  std::lock_guard<std::mutex> lock(memo_->mutex);
  memo_->values.emplace(n, value);
  return value;
}

Scalar NorlundContext::evaluate(int n) const {
  const int links = q() - 1;  // l = 1 .. q-1
  // Factor of link l for the step j_{l-1} -> j_l.
  auto link = [&](int l, int from, int to) {
    const auto d = static_cast<std::size_t>(to - from);
    return pochhammer(psi_[static_cast<std::size_t>(l - 1)] + Scalar(from), d) *
           pochhammer(b_[static_cast<std::size_t>(l)] - a_[static_cast<std::size_t>(l - 1)], d) /
           Scalar(Rational(factorial(d), 1));
  };

  Scalar total(0);
  // Recursive enumeration of j_1 <= ... <= j_{q-2} <= n with j_0 = 0 and
  // j_{q-1} = n.
  auto recurse = [&](auto& self, int l, int prev, const Scalar& partial) -> void {
    if (l == links) {
      total += partial * link(l, prev, n);
      return;
    }
    for (int j = prev; j <= n; ++j) self(self, l + 1, j, partial * link(l, prev, j));
  };
  recurse(recurse, 1, 0, Scalar(1));
  return total;
}

Scalar norlund_g1_closed(const NorlundContext& ctx) {
  Scalar sum(0);
  for (int l = 1; l <= ctx.q() - 1; ++l) {
    const auto i = static_cast<std::size_t>(l);
    sum += (ctx.b()[i] - ctx.a()[i - 1]) * ctx.psi()[i - 1];
  }
  return sum;
}

Scalar norlund_g2_closed(const NorlundContext& ctx) {
  auto diff = [&](int l) { return ctx.b()[static_cast<std::size_t>(l)] - ctx.a()[static_cast<std::size_t>(l - 1)]; };
  auto psi = [&](int l) { return ctx.psi()[static_cast<std::size_t>(l - 1)]; };
  Scalar first(0);
  for (int l = 1; l <= ctx.q() - 1; ++l) first += pochhammer(diff(l), 2) * pochhammer(psi(l), 2);
  Scalar second(0);
  for (int k = 2; k <= ctx.q() - 1; ++k) {
    Scalar inner(0);
    for (int l = 1; l <= k - 1; ++l) inner += diff(l) * psi(l);
    second += diff(k) * (psi(k) + Scalar(1)) * inner;
  }
  return first / Scalar(2) + second;
}

NorlundContext minton_context(const Scalar& b, int k, const ShiftedFamily& family) {
  std::vector<Scalar> alpha;
  std::vector<Scalar> beta;
  for (std::size_t i = 0; i < family.size(); ++i) {
    alpha.push_back(b - family.f()[i]);
    beta.push_back(b - family.f()[i] - Scalar(family.m()[i]));
  }
  beta.push_back(b + Scalar(k));
  return NorlundContext(std::move(alpha), std::move(beta));
}

Scalar q_k_sum(const Scalar& b, int k, const ShiftedFamily& family) {
  const int m = family.m_total();
  if (k < 0 || k > m - 1) throw PreconditionViolation("q_k_sum: k must lie in [0, m-1]");
  const NorlundContext ctx = minton_context(b, k, family);
  Scalar sum(0);
  for (int i = 0; i <= m - k - 1; ++i) {
    sum += ctx.g(m - k - i - 1) * pochhammer(b - Scalar(i), static_cast<std::size_t>(i));
  }
  return sum;
}

}  // namespace hyperid
