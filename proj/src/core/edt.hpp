#ifndef CINETRACK_EDT_HPP
#define CINETRACK_EDT_HPP

#include "core/grid.hpp"

namespace cinetrack::edt {

// Exact squared Euclidean distance transform of a seed set on an integer
// grid (two-pass lower-envelope method). Seeds are marked non-zero in the
// input; the result holds, per pixel, the exact integer squared distance to
// the nearest seed. All intermediate values are integers representable in
// double, so the output is exact. Pixels in a grid with no seeds get kFar.
inline constexpr double kFar = 1e15;

GridF squared_distance_transform(const GridU8& seeds);

}  // namespace cinetrack::edt

#endif
