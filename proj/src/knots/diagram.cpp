#include "twistlab/knots/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "twistlab/errors.hpp"

namespace twistlab {

// ---------------------------------------------------------------- PD text

PDCode parse_pd(std::string_view s) {
  struct Frame {
    std::size_t start;
    std::vector<int> nums;
    bool has_child = false;
  };
  std::vector<Frame> stack;
  PDCode pd;
  std::vector<std::size_t> tuple_pos;
  std::size_t i = 0;
  bool seen_group = false;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') {
      ++i;
    } else if (c == '[' || c == '{' || c == '(') {
      if (!stack.empty()) stack.back().has_child = true;
      stack.push_back({i, {}});
      seen_group = true;
      ++i;
    } else if (c == ']' || c == '}' || c == ')') {
      if (stack.empty()) throw ParseError("unbalanced closing bracket", i);
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (!f.nums.empty()) {
        if (f.has_child) throw ParseError("labels mixed with nested tuples", f.start);
        if (f.nums.size() != 4)
          throw ParseError("crossing tuple has " + std::to_string(f.nums.size()) + " labels, expected 4", f.start);
        pd.crossings.push_back({f.nums[0], f.nums[1], f.nums[2], f.nums[3]});
        tuple_pos.push_back(f.start);
      }
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t st = i;
      if (c == '-') ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st + (c == '-') == i) throw ParseError("dangling minus sign", st);
      if (stack.empty()) throw ParseError("label outside of a crossing tuple", st);
      stack.back().nums.push_back(std::stoi(std::string(s.substr(st, i - st))));
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t st = i;
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
      std::string_view word = s.substr(st, i - st);
      if (word != "PD" && word != "X") throw ParseError("unexpected identifier '" + std::string(word) + "'", st);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  if (!stack.empty()) throw ParseError("unclosed bracket", stack.back().start);
  if (!seen_group) throw ParseError("no crossing tuples found", 0);
  std::map<int, int> count;
  for (std::size_t k = 0; k < pd.crossings.size(); ++k)
    for (int l : pd.crossings[k]) {
      if (++count[l] > 2) throw ParseError("label " + std::to_string(l) + " occurs more than twice", tuple_pos[k]);
    }
  for (std::size_t k = 0; k < pd.crossings.size(); ++k)
    for (int l : pd.crossings[k])
      if (count[l] != 2) throw ParseError("label " + std::to_string(l) + " occurs only once", tuple_pos[k]);
  return pd;
}

std::string to_string(const PDCode& pd) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < pd.crossings.size(); ++k) {
    if (k) os << ",";
    const auto& x = pd.crossings[k];
    os << "[" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- Diagram

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Diagram Diagram::unknot() {
  Diagram d;
  d.arc_count_ = 1;
  d.component_count_ = 1;
  d.arc_component_ = {0};
  d.faces_.resize(2);
  return d;
}

Diagram Diagram::from_pd(const PDCode& pd) {
  if (pd.crossings.empty()) return unknot();
  Diagram d;
  d.pd_ = pd;
  std::size_t n = pd.crossings.size();
  std::map<int, int> label_id;
  for (const auto& x : pd.crossings)
    for (int l : x) label_id.emplace(l, 0);
  int ne = 0;
  for (auto& [l, id] : label_id) {
    id = ne++;
    d.edge_label_.push_back(l);
  }
  if (std::size_t(ne) != 2 * n) throw DiagramError("a PD code with n crossings needs 2n distinct labels");
  std::vector<std::vector<Slot>> occ(ne);
  d.crossings_.resize(n);
  for (std::size_t c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) {
      int e = label_id[pd.crossings[c][s]];
      d.crossings_[c].edge[s] = e;
      occ[e].push_back({int(c), s});
    }
  for (int e = 0; e < ne; ++e)
    if (occ[e].size() != 2) throw DiagramError("edge label " + std::to_string(d.edge_label_[e]) + " must occur twice");

  auto other = [&](int e, Slot s) { return occ[e][0] == s ? occ[e][1] : occ[e][0]; };
  d.head_.assign(ne, Slot{});
  d.tail_.assign(ne, Slot{});
  d.next_.assign(ne, -1);
  std::vector<int> comp(ne, -1);
  int ncomp = 0;
  auto orient_from = [&](int e0, Slot h0) {
    int cur = e0;
    Slot h = h0;
    int id = ncomp++;
    while (true) {
      comp[cur] = id;
      d.head_[cur] = h;
      d.tail_[cur] = other(cur, h);
      Slot out{h.crossing, (h.slot + 2) % 4};
      int nxt = d.crossings_[h.crossing].edge[out.slot];
      d.next_[cur] = nxt;
      if (comp[nxt] >= 0) {
        if (!(d.tail_[nxt] == out)) throw DiagramError("inconsistent strand orientation in PD code");
        break;
      }
      cur = nxt;
      h = other(nxt, out);
      d.tail_[nxt] = out;
    }
  };
  for (int e = 0; e < ne; ++e) {
    if (comp[e] >= 0) continue;
    for (const auto& o : occ[e])
      if (o.slot == 0) {
        orient_from(e, o);
        break;
      }
  }
  for (int e = 0; e < ne; ++e) {
    if (comp[e] >= 0) continue;
    // component passing over everything: follow increasing labels where possible
    Slot h = occ[e][0];
    int probe = d.crossings_[h.crossing].edge[(h.slot + 2) % 4];
    if (d.edge_label_[probe] != d.edge_label_[e] + 1) h = occ[e][1];
    orient_from(e, h);
  }
  // renumber components by smallest label
  std::vector<int> first(ncomp, ne);
  for (int e = 0; e < ne; ++e) first[comp[e]] = std::min(first[comp[e]], e);
  std::vector<int> order(ncomp);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
  std::vector<int> rank(ncomp);
  for (int k = 0; k < ncomp; ++k) rank[order[k]] = k;
  d.edge_component_.resize(ne);
  for (int e = 0; e < ne; ++e) d.edge_component_[e] = rank[comp[e]];
  d.component_count_ = ncomp;

  for (std::size_t c = 0; c < n; ++c) {
    auto& x = d.crossings_[c];
    Slot s3{int(c), 3}, s1{int(c), 1};
    bool in3 = d.head_[x.edge[3]] == s3 && d.tail_[x.edge[1]] == s1;
    bool in1 = d.head_[x.edge[1]] == s1 && d.tail_[x.edge[3]] == s3;
    if (in3 == in1) throw DiagramError("over-strand orientation is inconsistent at crossing " + std::to_string(c));
    x.sign = in3 ? 1 : -1;
  }

  // arcs: edges joined through over-passes, numbered along components
  UnionFind uf(ne);
  for (const auto& x : d.crossings_) uf.unite(x.edge[1], x.edge[3]);
  std::map<int, int> arc_of_root;
  d.edge_arc_.assign(ne, -1);
  for (int k = 0; k < ncomp; ++k) {
    for (int e : d.component_edges(k)) {
      int r = uf.find(e);
      auto [it, fresh] = arc_of_root.emplace(r, int(arc_of_root.size()));
      if (fresh) d.arc_component_.push_back(k);
      d.edge_arc_[e] = it->second;
    }
  }
  d.arc_count_ = int(arc_of_root.size());
  for (auto& x : d.crossings_) {
    x.over_arc = d.edge_arc_[x.edge[1]];
    x.under_in_arc = d.edge_arc_[x.edge[0]];
    x.under_out_arc = d.edge_arc_[x.edge[2]];
  }

  // faces: arrive at slot s', leave through slot s'+1
  std::vector<std::array<bool, 4>> used(n, {false, false, false, false});
  for (std::size_t c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) {
      if (used[c][s]) continue;
      Face f;
      Slot cur{int(c), s};
      while (!used[cur.crossing][cur.slot]) {
        used[cur.crossing][cur.slot] = true;
        Slot arr = other(d.crossings_[cur.crossing].edge[cur.slot], cur);
        f.corners.push_back(arr);
        cur = {arr.crossing, (arr.slot + 1) % 4};
      }
      d.faces_.push_back(std::move(f));
    }
  UnionFind cuf{int(n)};
  for (int e = 0; e < ne; ++e) cuf.unite(occ[e][0].crossing, occ[e][1].crossing);
  int pieces = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (cuf.find(int(c)) == int(c)) ++pieces;
  if (int(d.faces_.size()) != int(n) + 1 + pieces)
    throw RealizabilityError("PD code does not describe a planar diagram");
  d.connected_ = pieces == 1;
  return d;
}

std::vector<int> Diagram::component_edges(int c) const {
  std::vector<int> out;
  int start = -1;
  for (int e = 0; e < edge_count(); ++e)
    if (edge_component_[e] == c) {
      start = e;
      break;
    }
  if (start < 0) return out;
  int e = start;
  do {
    out.push_back(e);
    e = next_[e];
  } while (e != start);
  return out;
}

int Diagram::writhe() const {
  int w = 0;
  for (const auto& x : crossings_) w += x.sign;
  return w;
}

int Diagram::linking_number(int c1, int c2) const {
  int total = 0;
  for (const auto& x : crossings_) {
    int a = edge_component_[x.edge[0]], b = edge_component_[x.edge[1]];
    if ((a == c1 && b == c2) || (a == c2 && b == c1)) total += x.sign;
  }
  return total / 2;
}

// ---------------------------------------------------------------- Wirtinger

Presentation wirtinger(const Diagram& d) {
  if (!d.is_connected()) throw DiagramError("disconnected diagram");
  Presentation p;
  p.generators = d.arc_count();
  for (int a = 0; a < d.arc_count(); ++a) {
    GeneratorLabel l;
    l.component = d.arc_component(a);
    l.epsilon = l.component == 0 ? Weight{1, 0} : Weight{0, 1};
    p.labels.push_back(l);
  }
  const auto& xs = d.crossings();
  for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
    const auto& x = xs[c];
    FreeWord w = FreeWord::generator(x.over_arc, x.sign);
    FreeWord r = FreeWord::generator(x.under_out_arc) * w * FreeWord::generator(x.under_in_arc, -1) * w.inverse();
    p.relators.push_back(r);
  }
  return p;
}

// ---------------------------------------------------------------- Goeritz

IntMatrix goeritz_matrix(const Diagram& d) {
  if (!d.is_connected()) throw DiagramError("disconnected diagram");
  std::size_t n = d.crossing_count();
  if (n == 0) return IntMatrix(0, 0, Integer(0));
  const auto& faces = d.faces();
  std::vector<std::array<int, 4>> face_at(n);
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (const auto& s : faces[f].corners) face_at[s.crossing][s.slot] = int(f);
  // two-colour the faces: opposite corners share a colour, neighbours differ
  std::vector<int> colour(faces.size(), -1);
  colour[face_at[0][0]] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < n; ++c)
      for (int k = 0; k < 4; ++k) {
        int f = face_at[c][k];
        if (colour[f] < 0) continue;
        for (int j = 0; j < 4; ++j) {
          int g = face_at[c][j];
          int want = (j - k) % 2 == 0 ? colour[f] : 1 - colour[f];
          if (colour[g] < 0) {
            colour[g] = want;
            changed = true;
          } else if (colour[g] != want) {
            throw DiagramError("faces admit no checkerboard colouring");
          }
        }
      }
  }
  std::vector<int> white_index(faces.size(), -1);
  int m = 0;
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (colour[f] == 0) white_index[f] = m++;
  IntMatrix g(m, m, Integer(0));
  for (std::size_t c = 0; c < n; ++c) {
    int eta = 0, a = -1, b = -1;
    if (colour[face_at[c][0]] == 0) {
      eta = 1;
      a = white_index[face_at[c][0]];
      b = white_index[face_at[c][2]];
    } else {
      eta = -1;
      a = white_index[face_at[c][1]];
      b = white_index[face_at[c][3]];
    }
    if (a == b) continue;
    g(a, b) -= eta;
    g(b, a) -= eta;
    g(a, a) += eta;
    g(b, b) += eta;
  }
  return g.submatrix(0, 0, m - 1, m - 1);
}

std::vector<Integer> h1_double_branched_cover(const Diagram& d) {
  IntMatrix g = goeritz_matrix(d);
  if (g.rows() == 0) return {};
  return invariant_factors(g);
}

}  // namespace twistlab
