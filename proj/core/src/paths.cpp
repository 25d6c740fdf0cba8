#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rqcsim/plan.h"
#include "rqcsim/rng.h"

namespace rqcsim {

std::vector<std::size_t> cut_values(const ContractionPlan& plan, const NetworkShape& shape, int cut) {
  const CutSpec& c = plan.cuts.at(cut);
  if (!c.values.empty()) return c.values;
  std::vector<std::size_t> v(shape.bond_dim(c.a, c.b));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

std::uint64_t total_paths(const ContractionPlan& plan, const NetworkShape& shape) {
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < plan.cuts.size(); ++c) {
    std::uint64_t n = cut_values(plan, shape, static_cast<int>(c)).size();
    if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n)
      throw std::overflow_error("path count overflows 64 bits");
    total *= n;
  }
  return total;
}

Path path_at(const ContractionPlan& plan, const NetworkShape& shape, const PlanAnalysis& analysis, std::uint64_t index) {
  Path p(plan.cuts.size(), 0);
  for (auto it = analysis.loop_order.rbegin(); it != analysis.loop_order.rend(); ++it) {
    auto values = cut_values(plan, shape, *it);
    p[*it] = values[index % values.size()];
    index /= values.size();
  }
  return p;
}

std::uint64_t fraction_path_count(double fraction, std::uint64_t total) {
  if (!(fraction > 0.0) || fraction > 1.0) throw std::invalid_argument("path fraction must be in (0, 1]");
  // Guard against f * total landing a hair above an integer, e.g. 21/4096.
  double x = fraction * static_cast<double>(total);
  double r = std::round(x);
  std::uint64_t count = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? static_cast<std::uint64_t>(r)
                                                                     : static_cast<std::uint64_t>(std::ceil(x));
  return std::clamp<std::uint64_t>(count, 1, total);
}

std::vector<Path> enumerate_paths(const ContractionPlan& plan, const NetworkShape& shape, double fraction,
                                  std::uint64_t seed) {
  PlanAnalysis an = analyze_plan(plan, shape);
  std::uint64_t total = total_paths(plan, shape);
  std::uint64_t count = fraction_path_count(fraction, total);
  std::vector<std::uint64_t> indexes;
  if (count == total) {
    indexes.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) indexes[i] = i;
  } else {
    Rng rng(seed);
    indexes = rng.distinct(total, count);
    std::sort(indexes.begin(), indexes.end());
  }
  std::vector<Path> out;
  out.reserve(indexes.size());
  for (auto i : indexes) out.push_back(path_at(plan, shape, an, i));
  return out;
}

}  // namespace rqcsim
