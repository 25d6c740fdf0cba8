#include "rqcsim/data.h"

#include <utility>

namespace rqcsim {
namespace detail {
extern const std::pair<std::string_view, std::string_view> kEmbeddedFiles[];
extern const std::size_t kEmbeddedFileCount;
}  // namespace detail

std::string_view embedded_file(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i)
    if (detail::kEmbeddedFiles[i].first == name) return detail::kEmbeddedFiles[i].second;
  return {};
}

std::vector<std::string> embedded_file_names() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::kEmbeddedFileCount; ++i) out.emplace_back(detail::kEmbeddedFiles[i].first);
  return out;
}

}  // namespace rqcsim
