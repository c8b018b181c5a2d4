#ifndef CINETRACK_SEQIO_HPP
#define CINETRACK_SEQIO_HPP

#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace cinetrack::seqio {

// On-disk sequence layout: <dir>/meta.json plus frame_00000.pgm ... (P5,
// 16-bit samples stored big-endian per the PGM spec). Masks use the same
// numbering as mask_00000.pgm, 8-bit, 0/255.

std::string frame_filename(int index);
std::string mask_filename(int index);

SequenceMeta read_meta(const std::string& dir);
void write_meta(const std::string& dir, const SequenceMeta& meta);

std::pair<SequenceMeta, std::vector<Frame>> read_sequence(const std::string& dir);
void write_frame(const Frame& frame, const std::string& path);

Mask read_mask(const std::string& path);          // >127 maps to 1
void write_mask(const Mask& mask, const std::string& path);

// Raw PGM helpers; maxval <= 255 reads one byte per sample, else two.
GridU16 read_pgm(const std::string& path, uint32_t* maxval_out = nullptr);
void write_pgm(const GridU16& pixels, uint32_t maxval, const std::string& path);

// RGB PPM (P6) with the mask boundary drawn over the intensity-scaled frame.
void render_overlay(const Frame& frame, const Mask& mask, const std::string& path);

}  // namespace cinetrack::seqio

#endif
