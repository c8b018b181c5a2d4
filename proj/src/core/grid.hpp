#ifndef CINETRACK_GRID_HPP
#define CINETRACK_GRID_HPP

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cinetrack {

// Row-major 2-D grid. The workhorse container for pixels, probabilities
// and labels throughout the pipeline.
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw std::invalid_argument("grid dimensions must be non-negative");
  }

  T& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  const T& at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

  size_t size() const { return data.size(); }
  bool same_shape(int w, int h) const { return width == w && height == h; }

  bool operator==(const Grid&) const = default;
};

using GridU8 = Grid<uint8_t>;
using GridU16 = Grid<uint16_t>;
using GridF = Grid<double>;

}  // namespace cinetrack

#endif
