#include "twistlab/knots/codes.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

std::vector<std::pair<int, std::size_t>> scan_integers(std::string_view s) {
  std::vector<std::pair<int, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '[' || c == ']' || c == '(' ||
        c == ')' || c == '{' || c == '}') {
      ++i;
      continue;
    }
    std::size_t st = i;
    if (c == '-' || c == '+') ++i;
    std::size_t ds = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (ds == i) throw ParseError(std::string("unexpected character '") + s[st] + "'", st);
    out.push_back({std::stoi(std::string(s.substr(st, i - st))), st});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- DT

std::vector<int> parse_dt(std::string_view text) {
  auto nums = scan_integers(text);
  std::vector<int> dt;
  std::set<int> seen;
  int n = int(nums.size());
  for (auto [v, pos] : nums) {
    int a = std::abs(v);
    if (v == 0 || a % 2) throw ParseError("DT entries must be nonzero even integers", pos);
    if (a > 2 * n) throw ParseError("DT entry " + std::to_string(v) + " exceeds twice the crossing count", pos);
    if (!seen.insert(a).second) throw ParseError("DT entry " + std::to_string(a) + " repeated", pos);
    dt.push_back(v);
  }
  return dt;
}

std::string dt_to_string(const std::vector<int>& dt) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < dt.size(); ++i) os << (i ? "," : "") << dt[i];
  os << "]";
  return os.str();
}

PDCode pd_from_dt(const std::vector<int>& dt) {
  int n = int(dt.size());
  if (n == 0) return PDCode{};
  if (n > 24) throw RealizabilityError("DT realization is limited to 24 crossings");
  std::vector<int> cross_of(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    int o = 2 * i + 1, e = std::abs(dt[i]);
    if (e < 2 || e > 2 * n || e % 2) throw RealizabilityError("malformed DT entry");
    cross_of[o] = i;
    cross_of[e] = i;
  }
  auto edge_in = [&](int point) { return point == 1 ? 2 * n : point - 1; };
  // half-edge records per crossing: in_o, out_o, in_e, out_e
  std::vector<std::array<int, 4>> half(n);
  for (int i = 0; i < n; ++i) {
    int o = 2 * i + 1, e = std::abs(dt[i]);
    half[i] = {edge_in(o), o, edge_in(e), e};
  }
  // edge k runs from point k (an out slot) to point k+1 (an in slot)
  auto rotation = [&](int i, bool flip) -> std::array<int, 4> {
    const auto& h = half[i];
    // entries encode (edge << 1) | is_out
    if (!flip) return {h[0] << 1, h[2] << 1, (h[1] << 1) | 1, (h[3] << 1) | 1};
    return {h[0] << 1, (h[3] << 1) | 1, (h[1] << 1) | 1, h[2] << 1};
  };
  std::vector<std::array<int, 4>> rot(n);
  // end slot lookup: for edge k, slot of its out end and in end
  std::vector<std::array<int, 2>> out_at(2 * n + 1), in_at(2 * n + 1);
  auto faces_for = [&]() {
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < 4; ++s) {
        int code = rot[i][s], e = code >> 1;
        if (code & 1) out_at[e] = {i, s};
        else in_at[e] = {i, s};
      }
    std::vector<std::array<bool, 4>> used(n, {false, false, false, false});
    int faces = 0;
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < 4; ++s) {
        if (used[i][s]) continue;
        ++faces;
        int ci = i, cs = s;
        while (!used[ci][cs]) {
          used[ci][cs] = true;
          int code = rot[ci][cs], e = code >> 1;
          auto arr = (code & 1) ? in_at[e] : out_at[e];
          ci = arr[0];
          cs = (arr[1] + 1) % 4;
        }
      }
    return faces;
  };
  std::uint64_t total = std::uint64_t(1) << (n - 1);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) rot[i] = rotation(i, i > 0 && ((mask >> (i - 1)) & 1));
    if (faces_for() != n + 2) continue;
    PDCode pd;
    for (int i = 0; i < n; ++i) {
      bool odd_over = dt[i] > 0;
      // under strand enters at in_e if the odd passage is over, else at in_o
      int under_in = odd_over ? half[i][2] : half[i][0];
      int start = 0;
      for (int s = 0; s < 4; ++s)
        if (rot[i][s] == (under_in << 1)) start = s;
      std::array<int, 4> x{};
      for (int s = 0; s < 4; ++s) x[s] = rot[i][(start + s) % 4] >> 1;
      pd.crossings.push_back(x);
    }
    return pd;
  }
  throw RealizabilityError("DT code " + dt_to_string(dt) + " has no planar realization");
}

std::vector<int> dt_from_diagram(const Diagram& d) {
  if (!d.is_knot()) throw DiagramError("DT codes describe knots only");
  int n = int(d.crossing_count());
  if (n == 0) return {};
  int e0 = 0;
  for (int e = 1; e < d.edge_count(); ++e)
    if (d.edge_label(e) < d.edge_label(e0)) e0 = e;
  std::vector<int> odd_point(n, 0), even_point(n, 0);
  std::vector<bool> odd_over(n, false);
  int point = 1, e = e0;
  Slot s = d.edge_tail(e0);
  for (int k = 0; k < 2 * n; ++k) {
    // passage through s.crossing leaving by slot s.slot
    bool over = s.slot % 2 == 1;
    int c = s.crossing;
    if (point % 2) {
      if (odd_point[c]) throw DiagramError("diagram violates DT parity");
      odd_point[c] = point;
      odd_over[c] = over;
    } else {
      if (even_point[c]) throw DiagramError("diagram violates DT parity");
      even_point[c] = point;
    }
    ++point;
    e = d.next_edge(e);
    s = d.edge_tail(e);
  }
  std::vector<int> dt(n);
  for (int c = 0; c < n; ++c) dt[(odd_point[c] - 1) / 2] = odd_over[c] ? even_point[c] : -even_point[c];
  return dt;
}

// ---------------------------------------------------------------- braids

Braid parse_braid(std::string_view s, int strands) {
  Braid b;
  std::size_t i = 0;
  bool symbolic = s.find('s') != std::string_view::npos || s.find('S') != std::string_view::npos;
  if (!symbolic) {
    for (auto [v, pos] : scan_integers(s)) {
      if (v == 0) throw ParseError("braid generator index must be nonzero", pos);
      b.word.push_back(v);
    }
  } else {
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == ',' || c == '.') {
        ++i;
        continue;
      }
      if (c != 's' && c != 'S') throw ParseError(std::string("unexpected character '") + c + "'", i);
      std::size_t st = i++;
      std::size_t ds = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (ds == i) throw ParseError("generator needs an index", st);
      int g = std::stoi(std::string(s.substr(ds, i - ds)));
      if (g == 0) throw ParseError("braid generator index must be positive", st);
      int power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t ps = i;
        if (i < s.size() && s[i] == '-') ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (ps == i || (s[ps] == '-' && ps + 1 == i)) throw ParseError("expected exponent", ps);
        power = std::stoi(std::string(s.substr(ps, i - ps)));
      }
      if (c == 'S') power = -power;
      for (int k = 0; k < std::abs(power); ++k) b.word.push_back(power > 0 ? g : -g);
    }
  }
  int m = 1;
  for (int g : b.word) m = std::max(m, std::abs(g) + 1);
  if (strands && strands < m) throw ParseError("braid uses more strands than declared", 0);
  b.strands = strands ? strands : m;
  return b;
}

std::string to_string(const Braid& b) {
  std::string out;
  for (int g : b.word) {
    if (!out.empty()) out += ' ';
    out += "s" + std::to_string(std::abs(g));
    if (g < 0) out += "^-1";
  }
  return out;
}

std::vector<int> braid_components(const Braid& b) {
  int m = b.strands;
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  // position -> strand that currently occupies it
  for (int g : b.word) {
    int p = std::abs(g) - 1;
    std::swap(perm[p], perm[p + 1]);
  }
  // strand starting at position perm[k]... ends at position k; closure joins end k to start k
  std::vector<int> end_pos(m);
  for (int k = 0; k < m; ++k) end_pos[perm[k]] = k;
  std::vector<int> comp(m, -1);
  int nc = 0;
  for (int i = 0; i < m; ++i) {
    if (comp[i] >= 0) continue;
    int j = i;
    while (comp[j] < 0) {
      comp[j] = nc;
      j = end_pos[j];
    }
    ++nc;
  }
  return comp;
}

PDCode pd_from_braid(const Braid& b) {
  int m = b.strands;
  std::vector<int> cur(m);
  for (int k = 0; k < m; ++k) cur[k] = k + 1;
  int next = m + 1;
  PDCode pd;
  for (int g : b.word) {
    int p = std::abs(g) - 1;
    if (p + 1 >= m) throw DiagramError("braid generator exceeds strand count");
    int a = cur[p], bb = cur[p + 1];
    int tl = next++, tr = next++;
    if (g > 0)
      pd.crossings.push_back({bb, tr, tl, a});
    else
      pd.crossings.push_back({a, bb, tr, tl});
    cur[p] = tl;
    cur[p + 1] = tr;
  }
  std::map<int, int> glue;
  for (int k = 0; k < m; ++k) {
    if (cur[k] == k + 1) throw DiagramError("braid closure has a strand without crossings");
    glue[cur[k]] = k + 1;
  }
  std::set<int> labels;
  for (auto& x : pd.crossings)
    for (int& l : x) {
      auto it = glue.find(l);
      if (it != glue.end()) l = it->second;
      labels.insert(l);
    }
  std::map<int, int> relabel;
  int id = 1;
  for (int l : labels) relabel[l] = id++;
  for (auto& x : pd.crossings)
    for (int& l : x) l = relabel[l];
  return pd;
}

std::vector<FreeWord> artin_images(const Braid& b) {
  int m = b.strands;
  std::vector<FreeWord> images;
  for (int i = 0; i < m; ++i) images.push_back(FreeWord::generator(i));
  for (int g : b.word) {
    int p = std::abs(g) - 1;
    std::vector<FreeWord> step;
    for (int i = 0; i < m; ++i) step.push_back(FreeWord::generator(i));
    FreeWord xi = FreeWord::generator(p), xj = FreeWord::generator(p + 1);
    if (g > 0) {
      step[p] = xi * xj * xi.inverse();
      step[p + 1] = xi;
    } else {
      step[p] = xj;
      step[p + 1] = xj.inverse() * xi * xj;
    }
    std::vector<FreeWord> composed;
    for (int i = 0; i < m; ++i) composed.push_back(step[i].substitute(images));
    images = std::move(composed);
  }
  return images;
}

Presentation artin_presentation(const Braid& b) {
  std::vector<FreeWord> img = artin_images(b);
  std::vector<int> comp = braid_components(b);
  Presentation p;
  p.generators = b.strands;
  for (int i = 0; i < b.strands; ++i)
    p.labels.push_back({comp[i], comp[i] == 0 ? Weight{1, 0} : Weight{0, 1}});
  for (int i = 0; i + 1 < b.strands; ++i) p.relators.push_back(img[i] * FreeWord::generator(i, -1));
  return p;
}

AxisLink braid_axis_link(const Braid& b) {
  std::vector<FreeWord> img = artin_images(b);
  std::vector<int> comp = braid_components(b);
  int m = b.strands;
  AxisLink L;
  L.axis_generator = m;
  L.lambda = m;
  Presentation& p = L.presentation;
  p.generators = m + 1;
  for (int i = 0; i < m; ++i) p.labels.push_back({comp[i], comp[i] == 0 ? Weight{1, 0} : Weight{0, 0}});
  int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  p.labels.push_back({ncomp, Weight{0, 1}});
  FreeWord a = FreeWord::generator(m);
  for (int i = 0; i < m; ++i) p.relators.push_back(a * FreeWord::generator(i) * a.inverse() * img[i].inverse());
  for (int i = 0; i < m; ++i) L.axis_word *= FreeWord::generator(i);
  return L;
}

// ---------------------------------------------------------------- corpus

namespace {

PDCode pd_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_pd(j.get<std::string>());
  PDCode pd;
  for (const auto& x : j) {
    if (!x.is_array() || x.size() != 4) throw ParseError("corpus PD tuple must have 4 labels", 0);
    pd.crossings.push_back({x[0].get<int>(), x[1].get<int>(), x[2].get<int>(), x[3].get<int>()});
  }
  return pd;
}

}  // namespace

KnotRecord record_from_json(const nlohmann::json& j) {
  KnotRecord r;
  r.name = j.at("name").get<std::string>();
  r.pd = pd_from_json(j.at("pd"));
  if (j.contains("dt")) {
    const auto& d = j["dt"];
    r.dt = d.is_string() ? parse_dt(d.get<std::string>()) : d.get<std::vector<int>>();
  }
  if (j.contains("braid")) {
    const auto& b = j["braid"];
    if (b.is_string()) {
      r.braid = parse_braid(b.get<std::string>());
    } else {
      Braid br;
      br.word = b.get<std::vector<int>>();
      int m = 1;
      for (int g : br.word) m = std::max(m, std::abs(g) + 1);
      br.strands = j.value("strands", m);
      r.braid = br;
    }
  }
  r.components = j.value("components", 1);
  if (j.contains("aliases")) r.aliases = j["aliases"].get<std::vector<std::string>>();
  return r;
}


std::vector<KnotRecord> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::vector<KnotRecord> out;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    auto j = nlohmann::json::parse(text);
    for (const auto& x : j) out.push_back(record_from_json(x));
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

std::string default_corpus_path() {
  if (const char* env = std::getenv("TWISTLAB_CORPUS")) return env;
  return std::string(TWISTLAB_DATA_DIR) + "/corpus.json";
}

const KnotRecord* find_record(const std::vector<KnotRecord>& corpus, std::string_view name) {
  for (const auto& r : corpus) {
    if (r.name == name) return &r;
    for (const auto& a : r.aliases)
      if (a == name) return &r;
  }
  return nullptr;
}

Diagram diagram_from_spec(std::string_view spec, const std::vector<KnotRecord>* corpus) {
  if (spec.starts_with("pd:")) return Diagram::from_pd(parse_pd(spec.substr(3)));
  if (spec.starts_with("dt:")) return Diagram::from_pd(pd_from_dt(parse_dt(spec.substr(3))));
  if (spec.starts_with("braid:")) return Diagram::from_pd(pd_from_braid(parse_braid(spec.substr(6))));
  std::vector<KnotRecord> loaded;
  if (!corpus) {
    loaded = load_corpus(default_corpus_path());
    corpus = &loaded;
  }
  const KnotRecord* r = find_record(*corpus, spec);
  if (!r) throw std::runtime_error("unknown knot '" + std::string(spec) + "'");
  return Diagram::from_pd(r->pd);
}

}  // namespace twistlab
