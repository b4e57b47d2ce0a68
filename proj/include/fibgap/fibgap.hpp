#pragma once

// Umbrella header. config.hpp and validate.hpp pull in nlohmann/json and are
// included separately.

#include "fibgap/chebyshev.hpp"
#include "fibgap/dispersion.hpp"
#include "fibgap/errors.hpp"
#include "fibgap/grid.hpp"
#include "fibgap/mat2.hpp"
#include "fibgap/superbandgap.hpp"
#include "fibgap/systems.hpp"
#include "fibgap/tiling.hpp"
#include "fibgap/tracemap.hpp"
#include "fibgap/transmission.hpp"

namespace fibgap {
inline constexpr const char* kVersion = "0.1.0";
}
