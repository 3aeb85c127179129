#pragma once

#include <cstddef>
#include <cstdint>

namespace pmd {

// Hard ceiling on the number of Pauli labels q^{2n} a single scan may visit.
inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

// Largest dimension q^n for which dense q^n x q^n operators are materialized.
// Default 1024; the environment variable PMD_MAX_DIM overrides it.
std::size_t dense_dim_limit();

// Largest admissible field size p^m.
inline constexpr std::uint64_t kFieldSizeLimit = std::uint64_t(1) << 16;

}
