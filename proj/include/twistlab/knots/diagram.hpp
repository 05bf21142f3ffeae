#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twistlab/fox/words.hpp"
#include "twistlab/rings/linalg.hpp"

namespace twistlab {

// Planar diagram code: one 4-tuple of edge labels per crossing, listed
// counterclockwise starting from the incoming under-strand.
struct PDCode {
  std::vector<std::array<int, 4>> crossings;
  bool operator==(const PDCode&) const = default;
};

// Accepts [[1,5,2,4],...], {{1,5,2,4},...}, X[1,5,2,4] X[...], PD[X[..],...].
PDCode parse_pd(std::string_view text);
std::string to_string(const PDCode& pd);

struct Slot {
  int crossing = -1;
  int slot = -1;
  bool operator==(const Slot&) const = default;
};

struct CrossingInfo {
  std::array<int, 4> edge{};  // dense edge ids by slot
  int sign = 0;
  int over_arc = -1;
  int under_in_arc = -1;
  int under_out_arc = -1;
};

struct Face {
  std::vector<Slot> corners;  // corner k of a crossing lies between slots k and k+1
};

class Diagram {
 public:
  static Diagram from_pd(const PDCode& pd);
  static Diagram unknot();

  const PDCode& pd() const { return pd_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  const std::vector<CrossingInfo>& crossings() const { return crossings_; }
  int edge_count() const { return int(edge_label_.size()); }
  int arc_count() const { return arc_count_; }
  int component_count() const { return component_count_; }
  int edge_label(int e) const { return edge_label_[e]; }
  int edge_arc(int e) const { return edge_arc_[e]; }
  int edge_component(int e) const { return edge_component_[e]; }
  int arc_component(int a) const { return arc_component_[a]; }
  Slot edge_head(int e) const { return head_[e]; }
  Slot edge_tail(int e) const { return tail_[e]; }
  int next_edge(int e) const { return next_[e]; }
  // edges of a component in traversal order
  std::vector<int> component_edges(int c) const;
  const std::vector<Face>& faces() const { return faces_; }

  int writhe() const;
  int linking_number(int c1, int c2) const;
  bool is_knot() const { return component_count_ == 1; }
  bool is_connected() const { return connected_; }

 private:
  PDCode pd_;
  std::vector<CrossingInfo> crossings_;
  std::vector<int> edge_label_, edge_arc_, edge_component_, arc_component_, next_;
  std::vector<Slot> head_, tail_;
  std::vector<Face> faces_;
  int arc_count_ = 0;
  int component_count_ = 0;
  bool connected_ = true;
};

// Wirtinger presentation: one generator per arc, one relator per crossing with the
// last dropped. Component 0 meridians get t-weight 1, other components s-weight 1.
Presentation wirtinger(const Diagram& d);

// Goeritz matrix of the diagram (one white region deleted) and H_1 of the double
// branched cover as invariant factors.
IntMatrix goeritz_matrix(const Diagram& d);
std::vector<Integer> h1_double_branched_cover(const Diagram& d);

}  // namespace twistlab
