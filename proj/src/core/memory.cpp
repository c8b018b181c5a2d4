#include "core/memory.hpp"

#include <algorithm>
#include <cmath>

namespace cinetrack::memory {

namespace {

constexpr int kTile = 2048;
constexpr uint32_t kNoCand = 0xffffffffu;

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void MemoryStore::write(const encoder::FeatureGrid& features, int frame_index) {
  if (!all_finite(features.keys) || !all_finite(features.values))
    throw ValidationError("memory_write: non-finite features");
  if (entries_.empty()) {
    grid_w_ = features.width;
    grid_h_ = features.height;
    key_dim_ = features.key_dim;
    value_dim_ = features.value_dim;
  } else if (features.width != grid_w_ || features.height != grid_h_ ||
             features.key_dim != key_dim_ || features.value_dim != value_dim_) {
    throw ValidationError("memory_write: feature grid shape differs from stored entries");
  }

  const int sites = features.sites();
  MemoryEntry e;
  e.keys.resize(static_cast<size_t>(sites) * key_dim_);
  e.key_norms.resize(sites);
  for (int m = 0; m < sites; ++m) {
    float norm = 0.0f;
    for (int c = 0; c < key_dim_; ++c) {
      float k = static_cast<float>(features.keys[static_cast<size_t>(m) * key_dim_ + c]);
      e.keys[static_cast<size_t>(c) * sites + m] = k;
      norm += k * k;
    }
    e.key_norms[m] = norm;
  }
  e.values = features.values;
  e.permanent = entries_.empty();
  e.usage = e.permanent ? std::numeric_limits<double>::infinity() : 0.0;
  e.frame_index = frame_index;
  e.write_order = next_write_order_++;

  // The incoming entry always survives the write: when the store is full,
  // the lowest-usage existing entry makes room first (otherwise a fresh
  // usage-0 entry would evict itself).
  if (entries_.size() >= capacity_ && !e.permanent) evict_lowest();
  entries_.push_back(std::move(e));
}

void MemoryStore::evict_lowest() {
  size_t best = entries_.size();
  for (size_t i = 0; i < entries_.size(); ++i) {
    const MemoryEntry& e = entries_[i];
    if (e.permanent) continue;
    if (best == entries_.size() || e.usage < entries_[best].usage ||
        (e.usage == entries_[best].usage && e.write_order < entries_[best].write_order))
      best = i;
  }
  if (best == entries_.size()) throw ValidationError("cannot evict: only permanent entries present");
  entries_.erase(entries_.begin() + best);
}

Readout MemoryStore::read(const encoder::FeatureGrid& query, int top_k, double temperature) {
  if (entries_.empty()) throw ValidationError("read before first write");
  if (top_k < 1) throw ValidationError("top_k must be >= 1");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");
  if (query.width != grid_w_ || query.height != grid_h_ || query.key_dim != key_dim_)
    throw ValidationError("memory_read: query grid shape differs from stored entries");

  const int sites = grid_w_ * grid_h_;
  const int q_sites = sites;
  const int ck = key_dim_;
  const int k = std::min<int>(top_k, static_cast<int>(entries_.size()) * sites);

  // Query keys quantized to float, matching the stored-key precision.
  std::vector<float> qkeys(static_cast<size_t>(q_sites) * ck);
  for (size_t i = 0; i < qkeys.size(); ++i) qkeys[i] = static_cast<float>(query.keys[i]);

  // Per-query candidate heaps: worst (largest squared distance proxy) at
  // slot 0. Score is ||m||^2 - 2 q.m; the constant ||q||^2 does not affect
  // ranking. Candidates scan in ascending global site index and only beat
  // the worst strictly, so ties keep the earlier site.
  std::vector<float> heap_score(static_cast<size_t>(q_sites) * k,
                                std::numeric_limits<float>::infinity());
  std::vector<uint32_t> heap_idx(static_cast<size_t>(q_sites) * k, kNoCand);

  auto heap_replace_root = [&](float* hs, uint32_t* hi, float score, uint32_t idx) {
    hs[0] = score;
    hi[0] = idx;
    int pos = 0;
    for (;;) {
      int l = 2 * pos + 1, r = l + 1, big = pos;
      if (l < k && hs[l] > hs[big]) big = l;
      if (r < k && hs[r] > hs[big]) big = r;
      if (big == pos) break;
      std::swap(hs[pos], hs[big]);
      std::swap(hi[pos], hi[big]);
      pos = big;
    }
  };

  std::vector<float> dot(kTile);
  for (size_t ei = 0; ei < entries_.size(); ++ei) {
    const MemoryEntry& e = entries_[ei];
    uint64_t base = static_cast<uint64_t>(ei) * sites;
    for (int m0 = 0; m0 < sites; m0 += kTile) {
      int tile = std::min(kTile, sites - m0);
      for (int q = 0; q < q_sites; ++q) {
        const float* qk = &qkeys[static_cast<size_t>(q) * ck];
        const float* kc = &e.keys[m0];
        float q0 = qk[0];
        for (int m = 0; m < tile; ++m) dot[m] = q0 * kc[m];
        for (int c = 1; c < ck; ++c) {
          const float* row = &e.keys[static_cast<size_t>(c) * sites + m0];
          float qc = qk[c];
          for (int m = 0; m < tile; ++m) dot[m] += qc * row[m];
        }
        float* hs = &heap_score[static_cast<size_t>(q) * k];
        uint32_t* hi = &heap_idx[static_cast<size_t>(q) * k];
        const float* norms = &e.key_norms[m0];
        float worst = hs[0];
        for (int m = 0; m < tile; ++m) {
          float score = norms[m] - 2.0f * dot[m];
          if (score < worst) {
            heap_replace_root(hs, hi, score, static_cast<uint32_t>(base + m0 + m));
            worst = hs[0];
          }
        }
      }
    }
  }

  Readout out;
  out.width = grid_w_;
  out.height = grid_h_;
  out.value_dim = value_dim_;
  out.values.assign(static_cast<size_t>(q_sites) * value_dim_, 0.0);
  out.entry_mass.assign(entries_.size(), 0.0);

  std::vector<uint32_t> cand;
  std::vector<double> d2(k), w(k);
  for (int q = 0; q < q_sites; ++q) {
    cand.clear();
    const uint32_t* hi = &heap_idx[static_cast<size_t>(q) * k];
    for (int i = 0; i < k; ++i)
      if (hi[i] != kNoCand) cand.push_back(hi[i]);
    std::sort(cand.begin(), cand.end());

    // Exact distances in double from the float-stored keys.
    const float* qk = &qkeys[static_cast<size_t>(q) * ck];
    double smax = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < cand.size(); ++i) {
      uint32_t idx = cand[i];
      const MemoryEntry& e = entries_[idx / sites];
      int m = static_cast<int>(idx % sites);
      double acc = 0.0;
      for (int c = 0; c < ck; ++c) {
        double d = static_cast<double>(qk[c]) -
                   static_cast<double>(e.keys[static_cast<size_t>(c) * sites + m]);
        acc += d * d;
      }
      d2[i] = -acc / temperature;
      smax = std::max(smax, d2[i]);
    }
    double wsum = 0.0;
    for (size_t i = 0; i < cand.size(); ++i) {
      w[i] = std::exp(d2[i] - smax);
      wsum += w[i];
    }
    double* ov = &out.values[static_cast<size_t>(q) * value_dim_];
    for (size_t i = 0; i < cand.size(); ++i) {
      double wi = w[i] / wsum;
      uint32_t idx = cand[i];
      size_t ei = idx / sites;
      int m = static_cast<int>(idx % sites);
      const double* vals = &entries_[ei].values[static_cast<size_t>(m) * value_dim_];
      for (int c = 0; c < value_dim_; ++c) ov[c] += wi * vals[c];
      out.entry_mass[ei] += wi;
    }
  }

  for (size_t ei = 0; ei < entries_.size(); ++ei)
    entries_[ei].usage += out.entry_mass[ei] / q_sites;
  ++read_count_;
  return out;
}

}  // namespace cinetrack::memory
