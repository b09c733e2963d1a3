#include "hyperid/family.hpp"

#include <numeric>

#include "hyperid/errors.hpp"
#include "hyperid/special.hpp"

namespace hyperid {

ShiftedFamily::ShiftedFamily(std::vector<Scalar> f, std::vector<int> m) : f_(std::move(f)), m_(std::move(m)) {
  if (f_.empty()) throw PreconditionViolation("shifted family needs at least one parameter");
  if (f_.size() != m_.size()) throw PreconditionViolation("f and m must have equal length");
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (m_[i] < 1) throw PreconditionViolation("every shift m_i must be a positive integer");
    if (f_[i].is_nonpositive_integer()) {
      throw PreconditionViolation("f_" + std::to_string(i + 1) + " is zero or a negative integer");
    }
  }
  m_total_ = std::accumulate(m_.begin(), m_.end(), 0);
}

std::vector<Scalar> ShiftedFamily::shifted() const {
  std::vector<Scalar> out;
  out.reserve(f_.size());
  for (std::size_t i = 0; i < f_.size(); ++i) out.push_back(f_[i] + Scalar(m_[i]));
  return out;
}

ShiftedFamily ShiftedFamily::shift(const Scalar& delta) const {
  std::vector<Scalar> f;
  f.reserve(f_.size());
  for (const auto& fi : f_) f.push_back(fi + delta);
  return ShiftedFamily(std::move(f), m_);
}

Scalar ShiftedFamily::pochhammer_at(const Scalar& offset) const {
  Scalar out(1);
  for (std::size_t i = 0; i < f_.size(); ++i) {
    out *= hyperid::pochhammer(f_[i] + offset, static_cast<std::size_t>(m_[i]));
  }
  return out;
}

bool ShiftedFamily::is_exact() const {
  for (const auto& fi : f_) {
    if (!fi.is_exact()) return false;
  }
  return true;
}

}  // namespace hyperid
