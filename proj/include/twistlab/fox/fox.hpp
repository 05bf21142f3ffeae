#pragma once

#include <map>
#include <string>

#include "twistlab/fox/words.hpp"
#include "twistlab/rings/matrix.hpp"
#include "twistlab/rings/scalar.hpp"

namespace twistlab {

// Element of the integral group ring Z[F] of a free group.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  static GroupRingElement word(const FreeWord& w, long c = 1);
  static GroupRingElement one() { return word(FreeWord()); }

  const std::map<FreeWord, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const FreeWord& w, const Integer& c);

  GroupRingElement& operator+=(const GroupRingElement& o);
  GroupRingElement& operator-=(const GroupRingElement& o);
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  bool operator==(const GroupRingElement&) const = default;

  std::string to_string(int ngens = 26) const;

 private:
  std::map<FreeWord, Integer> terms_;
};

GroupRingElement fox_derivative(const FreeWord& w, int j);
// rows = relators, columns = generators
Matrix<GroupRingElement> fox_matrix(const Presentation& p);

}  // namespace twistlab
