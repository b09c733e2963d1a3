#pragma once

#include <span>
#include <vector>

#include "hyperid/scalar.hpp"

namespace hyperid {

/// Parameter vector f with positive integer shifts m: the (f+m, f) pairs
/// appearing as top/bottom parameters of every identity in the catalog.
class ShiftedFamily {
 public:
  /// Throws PreconditionViolation unless sizes match, r >= 1, every m_i >= 1
  /// and no f_i is zero or a negative integer.
  ShiftedFamily(std::vector<Scalar> f, std::vector<int> m);

  std::size_t size() const { return f_.size(); }
  std::span<const Scalar> f() const { return f_; }
  std::span<const int> m() const { return m_; }
  int m_total() const { return m_total_; }

  /// f + m, component-wise.
  std::vector<Scalar> shifted() const;
  /// The family (f + delta, m); validated like the constructor.
  ShiftedFamily shift(const Scalar& delta) const;
  /// (f + offset)_m = prod_i (f_i + offset)_{m_i}; no validation.
  Scalar pochhammer_at(const Scalar& offset) const;
  /// (f)_m.
  Scalar pochhammer() const { return pochhammer_at(Scalar(0)); }

  bool is_exact() const;

 private:
  std::vector<Scalar> f_;
  std::vector<int> m_;
  int m_total_ = 0;
};

}  // namespace hyperid
