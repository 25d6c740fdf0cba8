#include "rqcsim/permute.h"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "rqcsim/thread_pool.h"

namespace rqcsim {
namespace {

void check_bijection(const std::vector<int>& perm, std::size_t n) {
  if (perm.size() != n) throw std::invalid_argument("permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) throw std::invalid_argument("permutation is not a bijection");
    seen[p] = true;
  }
}

bool is_identity(const std::vector<int>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

// Apply a move to a position-order vector (cur[i] = original index at i).
std::vector<int> apply_to_order(const std::vector<int>& cur, const Move& m) {
  const int r = static_cast<int>(cur.size());
  std::vector<int> next = cur;
  int base = m.kind == MoveKind::right ? r - m.gamma : 0;
  for (std::size_t j = 0; j < m.sub_perm.size(); ++j) next[base + j] = cur[base + m.sub_perm[j]];
  return next;
}

// Build the move that sends the items of positions [lo, hi) of `cur` to
// the positions in `dest` (dest[item] = new absolute position).
Move make_move(MoveKind kind, int gamma, int lo, int hi, const std::vector<int>& cur, const std::vector<int>& dest) {
  Move m;
  m.kind = kind;
  m.gamma = gamma;
  m.sub_perm.assign(hi - lo, -1);
  for (int p = lo; p < hi; ++p) m.sub_perm[dest[cur[p]] - lo] = p - lo;
  return m;
}

bool move_is_identity(const Move& m) { return is_identity(m.sub_perm); }

// Assign items at positions [lo, hi) to slots in [lo, hi). `pinned` lists
// (item, slot) pairs placed first; then items whose target lies in range
// and is free; the rest fill free slots in current order.
std::vector<int> assign_group(const std::vector<int>& cur, int lo, int hi, const std::vector<std::pair<int, int>>& pinned,
                              const std::vector<int>& target) {
  std::vector<int> dest(cur.size(), -1);
  std::vector<bool> taken(cur.size(), false);
  for (auto [item, slot] : pinned) {
    dest[item] = slot;
    taken[slot] = true;
  }
  for (int p = lo; p < hi; ++p) {
    int item = cur[p];
    if (dest[item] >= 0) continue;
    int t = target[item];
    if (t >= lo && t < hi && !taken[t]) {
      dest[item] = t;
      taken[t] = true;
    }
  }
  int slot = lo;
  for (int p = lo; p < hi; ++p) {
    int item = cur[p];
    if (dest[item] >= 0) continue;
    while (taken[slot]) ++slot;
    dest[item] = slot;
    taken[slot] = true;
  }
  return dest;
}

// Right-group pass: items headed for [r - mu, r) go home, the rest of the
// group settles wherever the greedy rule puts it.
Move right_pass(const std::vector<int>& cur, int r, int mu, int nu, const std::vector<int>& target) {
  int lo = r - nu;
  std::vector<std::pair<int, int>> pinned;
  for (int p = lo; p < r; ++p)
    if (target[cur[p]] >= r - mu) pinned.emplace_back(cur[p], target[cur[p]]);
  return make_move(MoveKind::right, nu, lo, r, cur, assign_group(cur, lo, r, pinned, target));
}

Move final_left(const std::vector<int>& cur, int r, int mu, const std::vector<int>& target) {
  std::vector<int> dest(cur.size(), -1);
  for (int p = 0; p < r - mu; ++p) dest[cur[p]] = target[cur[p]];
  return make_move(MoveKind::left, mu, 0, r - mu, cur, dest);
}

std::vector<Move> greedy_lrl(const std::vector<int>& binary_perm, int mu, int nu) {
  const int r = static_cast<int>(binary_perm.size());
  std::vector<int> target(r);
  for (int i = 0; i < r; ++i) target[binary_perm[i]] = i;
  std::vector<int> cur(r);
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<Move> moves;

  // L_mu: items bound for the right group enter the lowest middle slots.
  std::vector<std::pair<int, int>> pinned;
  int slot = r - nu;
  for (int p = 0; p < r - mu; ++p)
    if (target[cur[p]] >= r - mu) pinned.emplace_back(cur[p], slot++);
  Move m1 = make_move(MoveKind::left, mu, 0, r - mu, cur, assign_group(cur, 0, r - mu, pinned, target));
  cur = apply_to_order(cur, m1);
  moves.push_back(m1);

  Move m2 = right_pass(cur, r, mu, nu, target);
  cur = apply_to_order(cur, m2);
  moves.push_back(m2);

  Move m3 = final_left(cur, r, mu, target);
  moves.push_back(m3);

  std::erase_if(moves, move_is_identity);
  return moves;
}

}  // namespace

std::vector<int> permutation_to(const std::vector<std::string>& from, const std::vector<std::string>& order) {
  if (from.size() != order.size()) throw std::invalid_argument("permutation_to: label sets differ");
  std::vector<int> perm(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = std::find(from.begin(), from.end(), order[i]);
    if (it == from.end()) throw std::invalid_argument("permutation_to: unknown label " + order[i]);
    perm[i] = static_cast<int>(it - from.begin());
  }
  check_bijection(perm, from.size());
  return perm;
}

PermutePlan plan_permutation(const std::vector<std::size_t>& dims, const std::vector<int>& perm, int mu, int nu) {
  check_bijection(perm, dims.size());
  if (mu < 1 || nu < 1) throw std::invalid_argument("mu and nu must be positive");
  PermutePlan plan;
  plan.dims = dims;
  plan.permutation = perm;
  plan.mu = mu;
  plan.nu = nu;

  std::vector<int> offset(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) offset[i + 1] = offset[i] + log2_exact(dims[i]);
  for (int p : perm)
    for (int b = offset[p]; b < offset[p + 1]; ++b) plan.binary_permutation.push_back(b);

  const auto& bp = plan.binary_permutation;
  const int r = plan.binary_rank();
  if (is_identity(bp)) return plan;

  int first = 0;
  while (bp[first] == first) ++first;
  int last = r - 1;
  while (bp[last] == last) --last;

  if (r - first <= nu) {
    Move m;
    m.kind = MoveKind::right;
    m.gamma = r - first;
    for (int j = first; j < r; ++j) m.sub_perm.push_back(bp[j] - first);
    plan.moves.push_back(m);
    return plan;
  }
  int trailing = r - 1 - last;
  if (trailing >= mu) {
    Move m;
    m.kind = MoveKind::left;
    m.gamma = trailing;
    m.sub_perm.assign(bp.begin(), bp.begin() + (r - trailing));
    plan.moves.push_back(m);
    return plan;
  }
  if (nu < 2 * mu || r < nu) {
    plan.naive = true;
    plan.diagnostic = "permutation needs the L-R-L template, which requires nu >= 2*mu and rank >= nu";
    return plan;
  }

  std::vector<Move> best = greedy_lrl(bp, mu, nu);

  // R_nu then L_mu suffices when everything bound for the right group
  // already sits inside the last nu positions.
  bool rl_ok = true;
  for (int i = r - mu; i < r; ++i) rl_ok = rl_ok && bp[i] >= r - nu;
  if (rl_ok) {
    std::vector<int> target(r);
    for (int i = 0; i < r; ++i) target[bp[i]] = i;
    std::vector<int> cur(r);
    std::iota(cur.begin(), cur.end(), 0);
    std::vector<Move> alt;
    Move m2 = right_pass(cur, r, mu, nu, target);
    alt.push_back(m2);
    alt.push_back(final_left(apply_to_order(cur, m2), r, mu, target));
    std::erase_if(alt, move_is_identity);
    if (alt.size() < best.size()) best = alt;
  }
  plan.moves = std::move(best);

  if (move_states(plan).back() != bp) {
    plan.moves.clear();
    plan.naive = true;
    plan.diagnostic = "moves template failed to realize the permutation";
  }
  return plan;
}

std::vector<std::vector<int>> move_states(const PermutePlan& plan) {
  std::vector<int> cur(plan.binary_rank());
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<std::vector<int>> states{cur};
  for (const Move& m : plan.moves) {
    cur = apply_to_order(cur, m);
    states.push_back(cur);
  }
  return states;
}

std::vector<std::string> describe_moves(const PermutePlan& plan, const std::vector<std::string>& names) {
  const int r = plan.binary_rank();
  if (static_cast<int>(names.size()) != r) throw std::invalid_argument("describe_moves: need one name per binary index");
  auto states = move_states(plan);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < plan.moves.size(); ++k) {
    const Move& m = plan.moves[k];
    int lo = m.kind == MoveKind::right ? r - m.gamma : 0;
    int hi = m.kind == MoveKind::right ? r : r - m.gamma;
    int bar = m.kind == MoveKind::right ? r - plan.mu : r - plan.nu;
    auto render = [&](const std::vector<int>& st) {
      std::string s;
      for (int p = lo; p < hi; ++p) {
        if (p == bar && p > lo) s += '|';
        s += names[st[p]];
      }
      return s;
    };
    out.push_back((m.kind == MoveKind::left ? "L" : "R") + std::to_string(m.gamma) + ": " + render(states[k]) + "->" +
                  render(states[k + 1]));
  }
  return out;
}

MoveMap build_move_map(const std::vector<int>& sub_perm) {
  const int g = static_cast<int>(sub_perm.size());
  if (g > 31) throw std::invalid_argument("move group too large for a relocation map");
  const std::uint32_t n = std::uint32_t{1} << g;
  // Weight in the old offset of the bit at each new position.
  std::vector<std::uint32_t> weight(g);
  for (int j = 0; j < g; ++j) weight[j] = std::uint32_t{1} << (g - 1 - sub_perm[j]);
  MoveMap map(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    std::uint32_t old = 0;
    for (int k = 0; k < g; ++k)
      if ((j >> (g - 1 - k)) & 1) old += weight[k];
    map[j] = old;
  }
  return map;
}

std::shared_ptr<const MoveMap> MoveMapCache::get(MoveKind kind, const std::vector<int>& sub_perm) {
  Key key{kind == MoveKind::left ? 0 : 1, sub_perm};
  {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    // Without a capacity there is no recency to update, so reads stay shared.
    if (it != entries_.end() && capacity_ == 0) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second.map;
    }
  }
  std::unique_lock lock(mu_);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    ++hits_;
    lru_.splice(lru_.begin(), lru_, it->second.lru);
    return it->second.map;
  }
  ++misses_;
  auto map = std::make_shared<const MoveMap>(build_move_map(sub_perm));
  lru_.push_front(key);
  entries_.emplace(key, Entry{map, lru_.begin()});
  if (capacity_ > 0 && entries_.size() > capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
  }
  return map;
}

std::size_t MoveMapCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}
std::size_t MoveMapCache::hits() const {
  return hits_.load();
}
std::size_t MoveMapCache::misses() const {
  return misses_.load();
}
void MoveMapCache::clear() {
  std::unique_lock lock(mu_);
  entries_.clear();
  lru_.clear();
  hits_ = misses_ = 0;
}

MoveMapCache& MoveMapCache::global() {
  static MoveMapCache cache;
  return cache;
}

template <class T>
Tensor<T> permute_naive(const Tensor<T>& t, const std::vector<int>& perm) {
  check_bijection(perm, t.rank());
  const std::size_t r = t.rank();
  std::vector<std::size_t> in_stride(r, 1);
  for (std::size_t i = r; i-- > 1;) in_stride[i - 1] = in_stride[i] * t.dims()[i];
  std::vector<std::string> labels(r);
  std::vector<std::size_t> dims(r), stride(r);
  for (std::size_t i = 0; i < r; ++i) {
    labels[i] = t.labels()[perm[i]];
    dims[i] = t.dims()[perm[i]];
    stride[i] = in_stride[perm[i]];
  }
  Tensor<T> out(std::move(labels), dims);
  const T* src = t.data().data();
  T* dst = out.data().data();
  if (r == 0) {
    dst[0] = src[0];
    return out;
  }
  const std::size_t inner = dims[r - 1];
  const std::size_t inner_stride = stride[r - 1];
  const std::size_t outer = out.size() / inner;
  std::vector<std::size_t> ctr(r - 1, 0);
  std::size_t off = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    T* d = dst + o * inner;
    for (std::size_t k = 0; k < inner; ++k) d[k] = src[off + k * inner_stride];
    for (std::size_t j = r - 1; j-- > 0;) {
      off += stride[j];
      if (++ctr[j] < dims[j]) break;
      off -= stride[j] * dims[j];
      ctr[j] = 0;
    }
  }
  return out;
}

template <class T>
void apply_move(const T* in, T* out, int binary_rank, const Move& move, const PermuteOptions& options) {
  const int moved = move.kind == MoveKind::right ? move.gamma : binary_rank - move.gamma;
  if (move.gamma < 0 || move.gamma > binary_rank || static_cast<int>(move.sub_perm.size()) != moved)
    throw std::invalid_argument("apply_move: sub-permutation size does not match the move");
  std::shared_ptr<const MoveMap> cached;
  MoveMap fresh;
  const MoveMap* map;
  if (options.cache) {
    cached = options.cache->get(move.kind, move.sub_perm);
    map = cached.get();
  } else {
    fresh = build_move_map(move.sub_perm);
    map = &fresh;
  }
  const std::size_t block = move.block_size();
  const std::size_t total = std::size_t{1} << binary_rank;
  const std::size_t blocks = total / block;
  const std::uint32_t* m = map->data();

  auto run = [&](std::size_t begin, std::size_t end) {
    if (move.kind == MoveKind::right) {
      for (std::size_t b = begin; b < end; ++b) {
        const T* s = in + b * block;
        T* d = out + b * block;
        for (std::size_t j = 0; j < block; ++j) d[j] = s[m[j]];
      }
    } else {
      for (std::size_t b = begin; b < end; ++b) std::memcpy(out + b * block, in + m[b] * block, block * sizeof(T));
    }
  };
  // Chunks of at least 16K entries keep per-task overhead negligible.
  std::size_t min_chunk = std::max<std::size_t>(1, (std::size_t{1} << 14) / block);
  if (options.pool)
    options.pool->parallel_for(blocks, run, min_chunk);
  else
    run(0, blocks);
}

namespace {
template <class T>
std::vector<T>& scratch_buffer() {
  thread_local std::vector<T> buffer;
  return buffer;
}
}  // namespace

template <class T>
Tensor<T> permute_fast(const Tensor<T>& t, const PermutePlan& plan, const PermuteOptions& options) {
  if (plan.dims != t.dims()) throw std::invalid_argument("permute_fast: plan was built for different dims");
  if (plan.naive) return permute_naive(t, plan.permutation);
  const std::size_t r = t.rank();
  std::vector<std::string> labels(r);
  std::vector<std::size_t> dims(r);
  for (std::size_t i = 0; i < r; ++i) {
    labels[i] = t.labels()[plan.permutation[i]];
    dims[i] = t.dims()[plan.permutation[i]];
  }
  if (plan.moves.empty()) {
    std::vector<T> copy(t.data().begin(), t.data().end());
    return Tensor<T>(std::move(labels), std::move(dims), std::move(copy));
  }
  std::vector<T> out_data(t.size());
  std::vector<T>& scratch = scratch_buffer<T>();
  if (plan.moves.size() > 1 && scratch.size() < t.size()) scratch.resize(t.size());

  // Ping-pong so the last move lands in the output buffer.
  const T* src = t.data().data();
  bool to_out = plan.moves.size() % 2 == 1;
  for (const Move& m : plan.moves) {
    T* dst = to_out ? out_data.data() : scratch.data();
    apply_move(src, dst, plan.binary_rank(), m, options);
    src = dst;
    to_out = !to_out;
  }
  return Tensor<T>(std::move(labels), std::move(dims), std::move(out_data));
}

template Tensor<cfloat> permute_naive(const Tensor<cfloat>&, const std::vector<int>&);
template Tensor<cdouble> permute_naive(const Tensor<cdouble>&, const std::vector<int>&);
template Tensor<cfloat> permute_fast(const Tensor<cfloat>&, const PermutePlan&, const PermuteOptions&);
template Tensor<cdouble> permute_fast(const Tensor<cdouble>&, const PermutePlan&, const PermuteOptions&);
template void apply_move(const cfloat*, cfloat*, int, const Move&, const PermuteOptions&);
template void apply_move(const cdouble*, cdouble*, int, const Move&, const PermuteOptions&);

}  // namespace rqcsim
