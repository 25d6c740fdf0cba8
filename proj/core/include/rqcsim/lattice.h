#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rqcsim {

struct Site {
  int row = 0;
  int col = 0;
  bool operator==(const Site&) const = default;
};

// A set of sites on a square bounding grid. Site ids are row-major indexes
// on the bounding grid; qubit positions are the ranks of the ids in
// ascending order.
class Lattice {
 public:
  enum class Kind { rectangular, bristlecone, explicit_sites };

  Lattice() = default;

  static Lattice rectangular(int rows, int cols);
  static Lattice bristlecone(int qubits);
  static Lattice from_sites(std::vector<Site> sites, int grid_rows, int grid_cols, std::string name);
  // Text with one "(row, col)" or "row col" pair per line, '#' comments.
  static Lattice parse_coordinates(std::string_view text, std::string name);
  static Lattice load_coordinates(const std::string& path);
  // "grid:4x5" (rows x cols), "bristlecone-70", "bris-70", or "file:<path>".
  static Lattice by_name(std::string_view name);

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  int grid_rows() const { return grid_rows_; }
  int grid_cols() const { return grid_cols_; }
  std::size_t size() const { return ids_.size(); }

  const std::vector<int>& site_ids() const { return ids_; }
  Site coord(int id) const { return {id / grid_cols_, id % grid_cols_}; }
  int id_of(int row, int col) const { return row * grid_cols_ + col; }
  bool contains(int id) const { return position(id) >= 0; }
  // Qubit position of a site id, -1 when absent.
  int position(int id) const;
  bool adjacent(int a, int b) const;
  const std::vector<int>& neighbors(int id) const;
  // Nearest-neighbor pairs (a < b), sorted.
  const std::vector<std::pair<int, int>>& bonds() const { return bonds_; }

  bool operator==(const Lattice& other) const { return name_ == other.name_ && ids_ == other.ids_; }

 private:
  void finish();

  std::string name_;
  Kind kind_ = Kind::explicit_sites;
  int grid_rows_ = 0;
  int grid_cols_ = 0;
  std::vector<int> ids_;
  std::vector<int> pos_of_id_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::pair<int, int>> bonds_;
};

}  // namespace rqcsim
