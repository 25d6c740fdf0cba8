#pragma once

#include <optional>
#include <string>

#include "rqcsim/circuit.h"
#include "rqcsim/plan.h"

namespace rqcsim {

// Four-region schedule for an I x J grid (I, J >= 2) with two cuts: one on
// the right edge between the top and bottom halves, one on the bottom edge
// between the left and right halves. The top-left quadrant and the cut-free
// parts of the other regions are reused across all paths.
ContractionPlan grid_plan(const Lattice& lattice);

// 1 x J (or I x 1) chain with one cut in the middle.
ContractionPlan chain_plan(const Lattice& lattice);

// Shipped schedule for a Bristlecone sub-lattice, if there is one.
std::optional<ContractionPlan> bristlecone_plan(int qubits);

// Greedy convenience for other lattices: contracts sites in id order and
// adds cuts one at a time, each chosen to lower the peak tensor the most,
// until the peak fits the budget. Not optimal.
ContractionPlan auto_plan(const Circuit& circuit, double max_tensor_entries, int max_cuts = 8);

// Built-in schedule for the circuit's lattice. Grids and shipped
// Bristlecone sub-lattices get their fixed schedule; any other lattice
// falls back to auto_plan. Throws ResourceError when a fixed schedule's
// largest tensor exceeds the budget (bytes, 0 for none).
ContractionPlan builtin_plan(const Circuit& circuit, double memory_budget_bytes = 0, std::size_t scalar_bytes = 8);

// "auto" for builtin_plan, otherwise a plan file path.
ContractionPlan resolve_plan(const std::string& spec, const Circuit& circuit, double memory_budget_bytes = 0,
                             std::size_t scalar_bytes = 8);

}  // namespace rqcsim
