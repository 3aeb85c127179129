#include "pmd/limits.hpp"

#include <cstdlib>
#include <stdexcept>

namespace pmd {

std::size_t dense_dim_limit() {
  static const std::size_t value = [] {
    const char* env = std::getenv("PMD_MAX_DIM");
    if (env == nullptr || *env == '\0') return std::size_t{1024};
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::runtime_error("PMD_MAX_DIM must be a positive integer");
    return static_cast<std::size_t>(v);
  }();
  return value;
}

}
