#include "rqcsim/lattice.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rqcsim/data.h"
#include "rqcsim/errors.h"

namespace rqcsim {
namespace {

constexpr int kBristleconeRows = 11;
constexpr int kBristleconeCols = 12;

bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<Site> parse_sites(std::string_view text) {
  std::vector<Site> sites;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    for (char& ch : line)
      if (ch == '(' || ch == ')' || ch == ',') ch = ' ';
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    Site s;
    if (!(fields >> b) || (fields >> extra) || !parse_int(a, s.row) || !parse_int(b, s.col) || s.row < 0 || s.col < 0)
      throw ParseError(lineno, "expected a (row, col) pair");
    sites.push_back(s);
  }
  if (sites.empty()) throw std::invalid_argument("coordinate file has no sites");
  return sites;
}

}  // namespace

Lattice Lattice::rectangular(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rectangular lattice needs positive dimensions");
  Lattice l;
  l.name_ = "grid:" + std::to_string(rows) + "x" + std::to_string(cols);
  l.kind_ = Kind::rectangular;
  l.grid_rows_ = rows;
  l.grid_cols_ = cols;
  for (int i = 0; i < rows * cols; ++i) l.ids_.push_back(i);
  l.finish();
  return l;
}

Lattice Lattice::bristlecone(int qubits) {
  std::string file = "bristlecone_" + std::to_string(qubits) + ".txt";
  std::string_view text = embedded_file(file);
  if (text.empty()) throw std::invalid_argument("unknown lattice: bristlecone-" + std::to_string(qubits));
  Lattice out = from_sites(parse_sites(text), kBristleconeRows, kBristleconeCols, "bristlecone-" + std::to_string(qubits));
  out.kind_ = Kind::bristlecone;
  return out;
}

Lattice Lattice::from_sites(std::vector<Site> sites, int grid_rows, int grid_cols, std::string name) {
  if (sites.empty()) throw std::invalid_argument("lattice has no sites");
  Lattice l;
  l.name_ = std::move(name);
  l.kind_ = Kind::explicit_sites;
  l.grid_rows_ = grid_rows;
  l.grid_cols_ = grid_cols;
  for (const Site& s : sites) {
    if (s.row < 0 || s.col < 0 || s.row >= grid_rows || s.col >= grid_cols)
      throw std::invalid_argument("site outside bounding grid");
    l.ids_.push_back(s.row * grid_cols + s.col);
  }
  std::sort(l.ids_.begin(), l.ids_.end());
  if (std::adjacent_find(l.ids_.begin(), l.ids_.end()) != l.ids_.end())
    throw std::invalid_argument("duplicate site in lattice");
  l.finish();
  return l;
}

Lattice Lattice::parse_coordinates(std::string_view text, std::string name) {
  std::vector<Site> sites = parse_sites(text);
  int rows = 0, cols = 0;
  for (const Site& x : sites) {
    rows = std::max(rows, x.row + 1);
    cols = std::max(cols, x.col + 1);
  }
  return from_sites(std::move(sites), rows, cols, std::move(name));
}

Lattice Lattice::load_coordinates(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open lattice file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_coordinates(ss.str(), "file:" + path);
}

Lattice Lattice::by_name(std::string_view name) {
  auto starts = [&](std::string_view p) { return name.substr(0, p.size()) == p; };
  if (starts("grid:")) {
    std::string_view dims = name.substr(5);
    auto x = dims.find('x');
    int rows = 0, cols = 0;
    if (x == std::string_view::npos || !parse_int(dims.substr(0, x), rows) || !parse_int(dims.substr(x + 1), cols) ||
        rows < 1 || cols < 1)
      throw std::invalid_argument("bad grid lattice name: " + std::string(name));
    return rectangular(rows, cols);
  }
  for (std::string_view prefix : {"bristlecone-", "bris-"}) {
    if (starts(prefix)) {
      int q = 0;
      if (!parse_int(name.substr(prefix.size()), q)) break;
      return bristlecone(q);
    }
  }
  if (starts("file:")) return load_coordinates(std::string(name.substr(5)));
  throw std::invalid_argument("unknown lattice: " + std::string(name));
}

int Lattice::position(int id) const {
  if (id < 0 || id >= static_cast<int>(pos_of_id_.size())) return -1;
  return pos_of_id_[id];
}

bool Lattice::adjacent(int a, int b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& nb = neighbors_[position(a)];
  return std::binary_search(nb.begin(), nb.end(), b);
}

const std::vector<int>& Lattice::neighbors(int id) const {
  int p = position(id);
  if (p < 0) throw std::out_of_range("site not in lattice: " + std::to_string(id));
  return neighbors_[p];
}

void Lattice::finish() {
  pos_of_id_.assign(static_cast<std::size_t>(grid_rows_) * grid_cols_, -1);
  for (std::size_t i = 0; i < ids_.size(); ++i) pos_of_id_[ids_[i]] = static_cast<int>(i);
  neighbors_.assign(ids_.size(), {});
  bonds_.clear();
  for (int id : ids_) {
    Site s = coord(id);
    if (s.col + 1 < grid_cols_ && contains(id + 1)) bonds_.emplace_back(id, id + 1);
    if (s.row + 1 < grid_rows_ && contains(id + grid_cols_)) bonds_.emplace_back(id, id + grid_cols_);
  }
  std::sort(bonds_.begin(), bonds_.end());
  for (auto [a, b] : bonds_) {
    neighbors_[position(a)].push_back(b);
    neighbors_[position(b)].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  if (ids_.size() > 1)
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (neighbors_[i].empty())
        throw std::invalid_argument("site " + std::to_string(ids_[i]) + " has no neighbors in lattice " + name_);
}

}  // namespace rqcsim
