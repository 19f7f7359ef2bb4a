#pragma once

#include <cstdint>
#include <string>

#include "twist/drawing.hpp"
#include "twist/generators.hpp"

namespace twist {

// SVG 1.1 documents. Coordinates are exact until rendering.
std::string svg_strip(const StripScene& s);
std::string svg_points(const PointScene& p);
// Spring layout of the planarization, for drawings without coordinates.
std::string svg_drawing(const Drawing& d, std::uint64_t seed = 1);

}  // namespace twist
