#include <doctest.h>

#include "core/segmenter.hpp"

using namespace cinetrack;
using namespace cinetrack::segmenter;

namespace {

memory::Readout make_readout(int w, int h, double c0, double c1) {
  memory::Readout r;
  r.width = w;
  r.height = h;
  r.value_dim = encoder::kValueDim;
  r.values.assign(static_cast<size_t>(w) * h * r.value_dim, 0.0);
  for (int s = 0; s < w * h; ++s) {
    r.values[static_cast<size_t>(s) * r.value_dim] = c0;
    r.values[static_cast<size_t>(s) * r.value_dim + 1] = c1;
  }
  return r;
}

encoder::EncoderSpec spec4() {
  encoder::EncoderSpec s;
  s.stride = 4;
  return s;
}

}  // namespace

TEST_CASE("pure-foreground readout decodes close to 1 everywhere") {
  ProbMap p = decode(make_readout(4, 4, 1.0, 0.0), spec4(), 3);
  CHECK(p.frame_index == 3);
  CHECK(p.values.width == 16);
  CHECK(p.values.height == 16);
  for (double v : p.values.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pure-background readout decodes to 0 everywhere") {
  ProbMap p = decode(make_readout(4, 4, 0.0, 1.0), spec4(), 0);
  for (double v : p.values.data) CHECK(v == 0.0);
}

TEST_CASE("balanced channels decode to 0.5") {
  ProbMap p = decode(make_readout(4, 4, 0.5, 0.5), spec4(), 0);
  for (double v : p.values.data) CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("decoded probabilities stay within [0, 1] and peak at the hot site") {
  memory::Readout r = make_readout(4, 4, 0.0, 1.0);
  // One confident foreground site in the middle of the grid.
  int hot = 2 * 4 + 2;
  r.values[static_cast<size_t>(hot) * r.value_dim] = 1.0;
  r.values[static_cast<size_t>(hot) * r.value_dim + 1] = 0.0;
  ProbMap p = decode(r, spec4(), 0);
  for (double v : p.values.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // The pixel at the hot site's center carries the full probability.
  CHECK(p.values.at(2 * 4 + 2, 2 * 4 + 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.values.at(0, 0) < 0.25);
}

TEST_CASE("probability is monotone in the foreground channel") {
  double prev = -1.0;
  for (double c0 : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    ProbMap p = decode(make_readout(2, 2, c0, 1.0 - c0), spec4(), 0);
    double v = p.values.at(2, 2);  // a site center
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("bilinear upsample interpolates between adjacent site centers") {
  memory::Readout r = make_readout(2, 1, 0.0, 1.0);
  r.values[0] = 1.0;  // left site fg, right site bg
  r.values[1] = 0.0;
  ProbMap p = decode(r, spec4(), 0);
  // Site centers at x=2 (p=1) and x=6 (p=0); x=4 is halfway.
  CHECK(p.values.at(0, 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.values.at(0, 6) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p.values.at(0, 4) == doctest::Approx(0.5).epsilon(1e-6));
}
