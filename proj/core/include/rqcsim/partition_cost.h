#pragma once

#include <string>
#include <vector>

#include "rqcsim/circuit.h"

namespace rqcsim {

// log2 costs of Schrodinger-Feynman style simulation over a partition.
double bipartition_complexity(int alpha_ab, int n_a, int n_b);
// A should be the largest part; qubit_complexity relabels to ensure it.
double tripartition_complexity(int alpha_ab, int alpha_ac, int alpha_bc, int n_a, int n_b, int n_c);
// Ring A-B-C-D-A.
double quadpartition_complexity(int alpha_ab, int alpha_bc, int alpha_cd, int alpha_ad, int n_a, int n_b, int n_c,
                                int n_d);

struct PartitionSpec {
  std::string scheme;  // "bi", "tri", "quad"
  std::string params;
  int d = 0;  // tri only
  std::vector<std::vector<int>> parts;  // site ids
  // alpha[i][j]: two-qubit gates between parts i and j.
  std::vector<std::vector<int>> alpha;

  std::vector<int> sizes() const;
};

// Two-qubit gates with one endpoint in each of two disjoint site sets.
int cz_count_between(const Circuit& circuit, const std::vector<int>& a, const std::vector<int>& b);

// Fills alpha from the circuit. Parts must be disjoint and cover the lattice.
PartitionSpec make_partition(const Circuit& circuit, std::vector<std::vector<int>> parts, std::string scheme = "",
                             std::string params = "");

// Throws std::invalid_argument for 1 or more than 4 parts, or a 4-part
// partition with gates between A-C or B-D.
double qubit_complexity(const PartitionSpec& spec);

struct PartitionResult {
  PartitionSpec spec;
  double cost = 0;
};

// Candidates of one geometric family, each with its cost.
//   bi:   straight splits by row, by column, and (on non-rectangular
//         lattices) along both diagonals, keeping those whose part sizes
//         differ by at most a quarter of the qubits
//   tri:  the best bisection, with the smaller side split along a diagonal
//         at one of five offsets d = 1..5
//   quad: quadrants around the center, shifted by up to one row/column
std::vector<PartitionResult> partition_family(const Circuit& circuit, const std::string& scheme);
PartitionResult best_partition(const Circuit& circuit, const std::string& scheme);

std::string partition_csv(const std::vector<PartitionResult>& results);

}  // namespace rqcsim
