#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rqcsim {

// One entry per qubit position, each 0 or 1. Position 0 is the leftmost
// character of the text form and the most significant bit of the index.
using Bits = std::vector<std::uint8_t>;

Bits bits_from_string(std::string_view s);
std::string bits_to_string(const Bits& b);
Bits bits_from_index(std::uint64_t index, std::size_t n);
std::uint64_t bits_to_index(const Bits& b);
int hamming_distance(const Bits& a, const Bits& b);

}  // namespace rqcsim
