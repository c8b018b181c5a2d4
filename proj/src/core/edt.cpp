#include "core/edt.hpp"

#include <cstdint>
#include <vector>

namespace cinetrack::edt {

namespace {

constexpr int64_t kFarInt = 1000000000000000LL;  // matches kFar

// 1-D squared distance transform with integer inputs. Intersections are
// kept as exact rationals (num/den, den > 0) and compared via __int128
// cross-multiplication, so the envelope selection is exact and the output
// squared distances are exact integers.
void dt1d(const int64_t* f, int64_t* out, int n, std::vector<int>& v, std::vector<int64_t>& num,
          std::vector<int64_t>& den) {
  v.resize(n + 1);
  num.resize(n + 1);
  den.resize(n + 1);
  int k = 0;
  v[0] = 0;

  auto isect = [&](int p, int q, int64_t& nu, int64_t& de) {
    nu = (f[q] + static_cast<int64_t>(q) * q) - (f[p] + static_cast<int64_t>(p) * p);
    de = 2LL * (q - p);
  };

  // num[k]/den[k] is the left boundary of parabola v[k]'s interval; the
  // interval for v[0] starts at -infinity (k == 0 has no left boundary).
  for (int q = 1; q < n; ++q) {
    int64_t nu, de;
    for (;;) {
      isect(v[k], q, nu, de);
      if (k > 0 && static_cast<__int128>(nu) * den[k] <= static_cast<__int128>(num[k]) * de) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    num[k] = nu;
    den[k] = de;
  }

  int kmax = k;
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (k < kmax && num[k + 1] < static_cast<int64_t>(q) * den[k + 1]) ++k;
    int64_t d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

}  // namespace

GridF squared_distance_transform(const GridU8& seeds) {
  const int w = seeds.width, h = seeds.height;
  std::vector<int64_t> d(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) d[i] = seeds.data[i] ? 0 : kFarInt;

  std::vector<int64_t> col(h), colo(h), rowo(w);
  std::vector<int> v;
  std::vector<int64_t> num, den;

  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[y] = d[static_cast<size_t>(y) * w + x];
    dt1d(col.data(), colo.data(), h, v, num, den);
    for (int y = 0; y < h; ++y) d[static_cast<size_t>(y) * w + x] = colo[y];
  }
  for (int y = 0; y < h; ++y) {
    dt1d(&d[static_cast<size_t>(y) * w], rowo.data(), w, v, num, den);
    for (int x = 0; x < w; ++x) d[static_cast<size_t>(y) * w + x] = rowo[x];
  }

  GridF out(w, h);
  for (size_t i = 0; i < out.size(); ++i)
    out.data[i] = d[i] >= kFarInt ? kFar : static_cast<double>(d[i]);
  return out;
}

}  // namespace cinetrack::edt
