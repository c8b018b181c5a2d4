#ifndef CINETRACK_POSTPROCESS_HPP
#define CINETRACK_POSTPROCESS_HPP

#include <optional>

#include "core/segmenter.hpp"

namespace cinetrack::postprocess {

// Exponential moving average over probability maps. The first update passes
// its input through unchanged.
class Smoother {
 public:
  explicit Smoother(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw ValidationError("EMA alpha must be in (0, 1]");
  }

  segmenter::ProbMap update(const segmenter::ProbMap& p);

  double alpha() const { return alpha_; }
  const std::optional<GridF>& state() const { return ema_; }

 private:
  double alpha_;
  std::optional<GridF> ema_;
};

// label = 1 iff p >= tau.
Mask threshold(const segmenter::ProbMap& p, double tau);

// Keeps only the largest foreground component (ties: the component holding
// the lexicographically smallest (row, col) pixel). connectivity is 4 or 8.
Mask largest_component(const Mask& mask, int connectivity);

}  // namespace cinetrack::postprocess

#endif
