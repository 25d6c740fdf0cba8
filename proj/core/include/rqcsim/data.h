#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rqcsim {

// Lattice coordinate and plan files compiled into the library from
// core/data. Returns an empty view when the name is unknown.
std::string_view embedded_file(std::string_view name);
std::vector<std::string> embedded_file_names();

}  // namespace rqcsim
