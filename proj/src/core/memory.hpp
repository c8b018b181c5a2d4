#ifndef CINETRACK_MEMORY_HPP
#define CINETRACK_MEMORY_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "core/encoder.hpp"

namespace cinetrack::memory {

// One stored frame's feature grid. Keys are quantized to float32 at write
// time and kept channel-major for the readout scan; all similarity and
// softmax arithmetic runs in double on those float values. usage is the
// accumulated per-read attention mass, normalized by query-grid size; the
// first-frame entry carries +inf and is never evictable.
struct MemoryEntry {
  std::vector<float> keys;      // channel-major: [c * sites + m]
  std::vector<float> key_norms; // per-site squared key norm
  std::vector<double> values;   // site-major: [m * value_dim + c]
  double usage = 0.0;
  bool permanent = false;
  int frame_index = -1;
  uint64_t write_order = 0;

  bool has_infinite_usage() const { return usage == std::numeric_limits<double>::infinity(); }
};

struct Readout {
  int width = 0, height = 0, value_dim = 0;
  std::vector<double> values;      // site-major, convex combinations of stored values
  std::vector<double> entry_mass;  // attention mass per entry, sums to sites()
};

class MemoryStore {
 public:
  MemoryStore(size_t capacity, int write_cadence)
      : capacity_(capacity), write_cadence_(write_cadence) {
    if (capacity < 1) throw ValidationError("memory capacity must be >= 1");
    if (write_cadence < 1) throw ValidationError("write cadence must be >= 1");
  }

  // Appends an entry (the first write is permanent); evicts the lowest-usage
  // non-permanent entry if the capacity is exceeded.
  void write(const encoder::FeatureGrid& features, int frame_index);

  // Softmax top-k label-transfer readout; accumulates attention mass into
  // entry usages and bumps read_count.
  Readout read(const encoder::FeatureGrid& query, int top_k, double temperature);

  // Removes the argmin-usage non-permanent entry; ties go to the oldest.
  void evict_lowest();

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }
  int write_cadence() const { return write_cadence_; }
  uint64_t read_count() const { return read_count_; }

 private:
  std::vector<MemoryEntry> entries_;
  size_t capacity_;
  int write_cadence_;
  uint64_t read_count_ = 0;
  uint64_t next_write_order_ = 0;
  int grid_w_ = 0, grid_h_ = 0, key_dim_ = 0, value_dim_ = 0;
};

}  // namespace cinetrack::memory

#endif
