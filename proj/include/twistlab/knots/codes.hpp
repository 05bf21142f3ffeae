#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "twistlab/knots/diagram.hpp"

namespace twistlab {

// ---- Dowker-Thistlethwaite codes: entry i pairs odd label 2i+1 with |a_i|;
// a positive entry means the odd-labelled passage is the over-strand.
std::vector<int> parse_dt(std::string_view text);
std::string dt_to_string(const std::vector<int>& dt);
// Searches the vertex rotations for a planar realization (RealizabilityError if none).
PDCode pd_from_dt(const std::vector<int>& dt);
std::vector<int> dt_from_diagram(const Diagram& d);

// ---- braid words: generator i > 0 is sigma_i, -i its inverse
struct Braid {
  int strands = 0;
  std::vector<int> word;
  bool operator==(const Braid&) const = default;
};

// "s1 s2^-1 s1", "S1" (inverse), "1 -2 1" or "[1,-2,1]"; strands = max index + 1
Braid parse_braid(std::string_view text, int strands = 0);
std::string to_string(const Braid& b);
PDCode pd_from_braid(const Braid& b);
// closure permutation cycles; strand -> component index
std::vector<int> braid_components(const Braid& b);

// Artin action on the free group of the punctured disk, applied left to right.
std::vector<FreeWord> artin_images(const Braid& b);
// <x_1..x_m | x_i = beta(x_i)>, last relation dropped
Presentation artin_presentation(const Braid& b);

// Closed braid together with its axis: <x_1..x_m, a | a x_i a^-1 = beta(x_i)>.
struct AxisLink {
  Presentation presentation;
  int axis_generator = 0;
  // the axis as an element of the closure's Artin presentation: x_1 x_2 ... x_m
  FreeWord axis_word;
  int lambda = 0;
};
AxisLink braid_axis_link(const Braid& b);

// ---- corpus files: JSON array or JSON lines of
// {"name", "pd", "dt"?, "braid"?, "components", "aliases"?}
struct KnotRecord {
  std::string name;
  std::vector<std::string> aliases;
  PDCode pd;
  std::optional<std::vector<int>> dt;
  std::optional<Braid> braid;
  int components = 1;
};

KnotRecord record_from_json(const nlohmann::json& j);
std::vector<KnotRecord> load_corpus(const std::string& path);
std::string default_corpus_path();
const KnotRecord* find_record(const std::vector<KnotRecord>& corpus, std::string_view name);

// "pd:<code>", "dt:<code>", "braid:<word>" or a corpus name
Diagram diagram_from_spec(std::string_view spec, const std::vector<KnotRecord>* corpus = nullptr);

}  // namespace twistlab
