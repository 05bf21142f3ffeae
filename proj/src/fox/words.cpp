#include "twistlab/fox/words.hpp"

#include <cctype>

#include "twistlab/errors.hpp"

namespace twistlab {

FreeWord::FreeWord(std::vector<Letter> letters) {
  for (const auto& l : letters) push(l);
}

FreeWord FreeWord::generator(int g, int exp) { return FreeWord({Letter{g, exp}}); }

void FreeWord::push(const Letter& l) {
  if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp)
    letters_.pop_back();
  else
    letters_.push_back(l);
}

FreeWord FreeWord::inverse() const {
  FreeWord w;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->gen, -it->exp});
  return w;
}

FreeWord& FreeWord::operator*=(const FreeWord& o) {
  for (const auto& l : o.letters_) push(l);
  return *this;
}

FreeWord FreeWord::pow(int k) const {
  FreeWord base = k < 0 ? inverse() : *this, r;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) r *= base;
  return r;
}

FreeWord FreeWord::substitute(const std::vector<FreeWord>& images) const {
  FreeWord r;
  for (const auto& l : letters_) {
    if (l.gen < 0 || l.gen >= int(images.size())) throw PresentationError("substitution misses a generator");
    r *= l.exp > 0 ? images[l.gen] : images[l.gen].inverse();
  }
  return r;
}

int FreeWord::exponent_sum(int g) const {
  int s = 0;
  for (const auto& l : letters_)
    if (l.gen == g) s += l.exp;
  return s;
}

int FreeWord::max_generator() const {
  int m = -1;
  for (const auto& l : letters_) m = std::max(m, l.gen);
  return m;
}

std::string FreeWord::to_string(int ngens) const {
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    if (ngens <= 26 && l.gen < 26) {
      out += char((l.exp > 0 ? 'a' : 'A') + l.gen);
    } else {
      out += "x" + std::to_string(l.gen);
      if (l.exp < 0) out += "^-1";
    }
  }
  return out.empty() ? "1" : out;
}

FreeWord parse_word(std::string_view s) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '*')) ++i;
  };
  skip();
  if (s.substr(i) == "1") return FreeWord();
  while (i < s.size()) {
    std::size_t start = i;
    int gen;
    int exp = 1;
    char c = s[i];
    if (c == 'x' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      ++i;
      std::size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      gen = std::stoi(std::string(s.substr(st, i - st)));
    } else if (std::islower(static_cast<unsigned char>(c))) {
      gen = c - 'a';
      ++i;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      gen = c - 'A';
      exp = -1;
      ++i;
    } else {
      throw ParseError("unexpected character in word", start);
    }
    int power = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      bool neg = false;
      if (i < s.size() && s[i] == '-') {
        neg = true;
        ++i;
      }
      std::size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st == i) throw ParseError("expected exponent", i);
      power = std::stoi(std::string(s.substr(st, i - st)));
      if (neg) power = -power;
    }
    if (power < 0) {
      exp = -exp;
      power = -power;
    }
    for (int k = 0; k < power; ++k) letters.push_back({gen, exp});
    skip();
  }
  return FreeWord(std::move(letters));
}

Weight Presentation::weight(const FreeWord& w) const {
  Weight r;
  for (const auto& l : w.letters()) {
    r.t += l.exp * labels[l.gen].epsilon.t;
    r.s += l.exp * labels[l.gen].epsilon.s;
  }
  return r;
}

void Presentation::validate() const {
  if (generators < 0) throw PresentationError("negative generator count");
  if (int(labels.size()) != generators) throw PresentationError("every generator needs a label");
  for (std::size_t i = 0; i < relators.size(); ++i)
    for (const auto& l : relators[i].letters())
      if (l.gen < 0 || l.gen >= generators)
        throw PresentationError("relator " + std::to_string(i) + " uses an unknown generator");
}

}  // namespace twistlab
