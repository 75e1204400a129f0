#pragma once

#include <string_view>
#include <vector>

#include "rvlab/matrix.hpp"

namespace rvlab::detail {

/// line:<lo>:<hi>:<points> puts Re z on an equispaced grid at Im z = im;
/// list:<c1,...> takes complex entries verbatim.
std::vector<Complex> parse_z_grid(std::string_view spec, double im);

}  // namespace rvlab::detail
