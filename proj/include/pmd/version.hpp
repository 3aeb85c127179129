#pragma once

namespace pmd {

inline constexpr const char* kVersion = "0.1.0";

}
