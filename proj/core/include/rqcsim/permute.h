#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rqcsim/tensor.h"

namespace rqcsim {

class ThreadPool;

enum class MoveKind { left, right };

// One cache-efficient move on the binary decomposition of a tensor with r
// binary indexes. A right move R_gamma reorders the last gamma indexes, so
// it shuffles entries inside contiguous blocks of 2^gamma. A left move
// L_gamma reorders the first r - gamma indexes, so it relocates whole
// blocks of 2^gamma entries.
struct Move {
  MoveKind kind = MoveKind::right;
  int gamma = 0;
  // New position j of the affected group takes old position sub_perm[j].
  std::vector<int> sub_perm;

  std::size_t block_size() const { return std::size_t{1} << gamma; }
  bool operator==(const Move&) const = default;
};

struct PermutePlan {
  std::vector<std::size_t> dims;
  // New index i takes old index permutation[i].
  std::vector<int> permutation;
  std::vector<int> binary_permutation;
  int mu = 5;
  int nu = 10;
  std::vector<Move> moves;
  // Set when the moves template cannot realize the permutation; execution
  // then falls back to the naive kernel.
  bool naive = false;
  std::string diagnostic;

  int binary_rank() const { return static_cast<int>(binary_permutation.size()); }
};

PermutePlan plan_permutation(const std::vector<std::size_t>& dims, const std::vector<int>& perm, int mu = 5,
                             int nu = 10);

// Binary position order after each move, starting from the identity. The
// last entry equals plan.binary_permutation for a valid plan.
std::vector<std::vector<int>> move_states(const PermutePlan& plan);

// "L2: abc|de->cae|bd" style rendering with one name per binary index. The
// bar marks the group boundary of the L-R-L template.
std::vector<std::string> describe_moves(const PermutePlan& plan, const std::vector<std::string>& names);

// Entry relocation map of a move: destination offset -> source offset.
using MoveMap = std::vector<std::uint32_t>;
MoveMap build_move_map(const std::vector<int>& sub_perm);

// Memoized move maps. Concurrent lookups share a lock; inserts are
// serialized. With a nonzero capacity the least recently used map is
// evicted.
class MoveMapCache {
 public:
  explicit MoveMapCache(std::size_t capacity = 0) : capacity_(capacity) {}

  std::shared_ptr<const MoveMap> get(MoveKind kind, const std::vector<int>& sub_perm);
  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;
  void clear();

  static MoveMapCache& global();

 private:
  using Key = std::pair<int, std::vector<int>>;
  struct Entry {
    std::shared_ptr<const MoveMap> map;
    std::list<Key>::iterator lru;
  };
  mutable std::shared_mutex mu_;
  std::map<Key, Entry> entries_;
  std::list<Key> lru_;
  std::size_t capacity_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct PermuteOptions {
  ThreadPool* pool = nullptr;
  // nullptr disables memoization.
  MoveMapCache* cache = &MoveMapCache::global();
};

// Reference kernel: output-ordered traversal with strided reads.
template <class T>
Tensor<T> permute_naive(const Tensor<T>& t, const std::vector<int>& perm);

template <class T>
Tensor<T> permute_fast(const Tensor<T>& t, const PermutePlan& plan, const PermuteOptions& options = {});

// Apply a single move to raw data of 2^r entries.
template <class T>
void apply_move(const T* in, T* out, int binary_rank, const Move& move, const PermuteOptions& options = {});

// Permutation that reorders t's labels into `order`.
std::vector<int> permutation_to(const std::vector<std::string>& from, const std::vector<std::string>& order);

}  // namespace rqcsim
