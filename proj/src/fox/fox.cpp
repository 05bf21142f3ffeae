#include "twistlab/fox/fox.hpp"

#include <sstream>

namespace twistlab {

GroupRingElement GroupRingElement::word(const FreeWord& w, long c) {
  GroupRingElement e;
  e.add(w, Integer(c));
  return e;
}

void GroupRingElement::add(const FreeWord& w, const Integer& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(w, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add(w, Integer(-c));
  return *this;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add(wa * wb, ca * cb);
  return r;
}

std::string GroupRingElement::to_string(int ngens) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*[" << w.to_string(ngens) << "]";
  }
  return os.str();
}

GroupRingElement fox_derivative(const FreeWord& w, int j) {
  GroupRingElement d;
  FreeWord prefix;
  for (const auto& l : w.letters()) {
    if (l.gen == j && l.exp > 0) d.add(prefix, Integer(1));
    prefix *= FreeWord({l});
    if (l.gen == j && l.exp < 0) d.add(prefix, Integer(-1));
  }
  return d;
}

Matrix<GroupRingElement> fox_matrix(const Presentation& p) {
  Matrix<GroupRingElement> m(p.relators.size(), std::size_t(p.generators), GroupRingElement());
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (int j = 0; j < p.generators; ++j) m(i, j) = fox_derivative(p.relators[i], j);
  return m;
}

}  // namespace twistlab
