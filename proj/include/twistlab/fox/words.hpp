#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace twistlab {

struct Letter {
  int gen = 0;
  int exp = 1;  // +1 or -1
  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};

// Freely reduced word in generators x_0, x_1, ...
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);
  static FreeWord generator(int g, int exp = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  FreeWord inverse() const;
  FreeWord& operator*=(const FreeWord& o);
  friend FreeWord operator*(FreeWord a, const FreeWord& b) { return a *= b; }
  FreeWord pow(int k) const;
  // other(x_g) substituted for each letter x_g
  FreeWord substitute(const std::vector<FreeWord>& images) const;
  int exponent_sum(int g) const;
  int max_generator() const;

  bool operator==(const FreeWord&) const = default;
  auto operator<=>(const FreeWord&) const = default;

  // letters a..z for the first 26 generators, x<n> beyond; A = a^-1
  std::string to_string(int ngens = 26) const;

 private:
  void push(const Letter& l);
  std::vector<Letter> letters_;
};

// Parses "a b A", "a*b*a^-1", "x0 x1^-1" style words.
FreeWord parse_word(std::string_view text);

struct Weight {
  int t = 0;
  int s = 0;
  bool operator==(const Weight&) const = default;
};

struct GeneratorLabel {
  int component = 0;
  Weight epsilon;
};

struct Presentation {
  int generators = 0;
  std::vector<FreeWord> relators;
  std::vector<GeneratorLabel> labels;

  int deficiency() const { return generators - int(relators.size()); }
  Weight weight(const FreeWord& w) const;
  // throws PresentationError on out-of-range generators or missing labels
  void validate() const;
};

}  // namespace twistlab
