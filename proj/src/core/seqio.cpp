#include "core/seqio.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace cinetrack::seqio {

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.pgm", index);
  return buf;
}

std::string mask_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "mask_%05d.pgm", index);
  return buf;
}

SequenceMeta read_meta(const std::string& dir) {
  fs::path p = fs::path(dir) / "meta.json";
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed meta.json: " + std::string(e.what()));
  }
  SequenceMeta m;
  try {
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.frame_count = j.at("frame_count").get<int>();
    m.bit_depth = j.at("bit_depth").get<int>();
    if (j.contains("pixel_spacing_mm")) {
      m.pixel_spacing_mm = j.at("pixel_spacing_mm").get<double>();
      m.spacing_known = true;
    }
  } catch (const json::exception& e) {
    throw IoError("meta.json missing required key: " + std::string(e.what()));
  }
  m.validate();
  return m;
}

void write_meta(const std::string& dir, const SequenceMeta& meta) {
  meta.validate();
  json j{{"width", meta.width},
         {"height", meta.height},
         {"frame_count", meta.frame_count},
         {"bit_depth", meta.bit_depth}};
  if (meta.spacing_known) j["pixel_spacing_mm"] = meta.pixel_spacing_mm;
  fs::path p = fs::path(dir) / "meta.json";
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

namespace {

int next_token(std::istream& in) {
  // Skips whitespace and '#' comments, returns the next non-negative integer.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw IoError("malformed PGM header");
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = in.get();
  }
  return v;
}

}  // namespace

GridU16 read_pgm(const std::string& path, uint32_t* maxval_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5')
    throw IoError("not a binary PGM (P5): " + path);
  int w = next_token(in);
  int h = next_token(in);
  int maxval = next_token(in);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw IoError("bad PGM dimensions in " + path);
  // next_token consumed exactly one whitespace byte after maxval (the get()
  // that terminated the digits), so the raster starts here.
  GridU16 g(w, h);
  size_t n = g.size();
  if (maxval <= 255) {
    std::vector<uint8_t> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), n);
    if (static_cast<size_t>(in.gcount()) != n) throw IoError("short PGM raster in " + path);
    for (size_t i = 0; i < n; ++i) g.data[i] = buf[i];
  } else {
    std::vector<uint8_t> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), 2 * n);
    if (static_cast<size_t>(in.gcount()) != 2 * n) throw IoError("short PGM raster in " + path);
    for (size_t i = 0; i < n; ++i)
      g.data[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  }
  if (maxval_out) *maxval_out = static_cast<uint32_t>(maxval);
  return g;
}

void write_pgm(const GridU16& pixels, uint32_t maxval, const std::string& path) {
  if (maxval == 0 || maxval > 65535) throw ValidationError("PGM maxval out of range");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << pixels.width << " " << pixels.height << "\n" << maxval << "\n";
  size_t n = pixels.size();
  if (maxval <= 255) {
    std::vector<uint8_t> buf(n);
    for (size_t i = 0; i < n; ++i) buf[i] = static_cast<uint8_t>(pixels.data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), n);
  } else {
    std::vector<uint8_t> buf(2 * n);
    for (size_t i = 0; i < n; ++i) {
      buf[2 * i] = static_cast<uint8_t>(pixels.data[i] >> 8);
      buf[2 * i + 1] = static_cast<uint8_t>(pixels.data[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), 2 * n);
  }
  if (!out) throw IoError("write failed for " + path);
}

std::pair<SequenceMeta, std::vector<Frame>> read_sequence(const std::string& dir) {
  SequenceMeta meta = read_meta(dir);
  auto shared = std::make_shared<SequenceMeta>(meta);
  std::vector<Frame> frames;
  frames.reserve(meta.frame_count);
  for (int t = 0; t < meta.frame_count; ++t) {
    fs::path p = fs::path(dir) / frame_filename(t);
    if (!fs::exists(p))
      throw IoError("missing frame file at index " + std::to_string(t) + ": " + p.string());
    uint32_t maxval = 0;
    GridU16 px = read_pgm(p.string(), &maxval);
    if (!px.same_shape(meta.width, meta.height))
      throw ValidationError("frame " + std::to_string(t) + " dimensions disagree with meta.json");
    if (maxval > meta.max_value())
      throw ValidationError("frame " + std::to_string(t) + " maxval exceeds meta bit_depth");
    frames.push_back(Frame{t, std::move(px), shared});
  }
  fs::path extra = fs::path(dir) / frame_filename(meta.frame_count);
  if (fs::exists(extra))
    throw IoError("extra frame file at index " + std::to_string(meta.frame_count) + ": " +
                  extra.string());
  return {meta, std::move(frames)};
}

void write_frame(const Frame& frame, const std::string& path) {
  uint32_t maxval = frame.meta ? frame.meta->max_value() : 65535;
  write_pgm(frame.pixels, maxval, path);
}

Mask read_mask(const std::string& path) {
  GridU16 g = read_pgm(path);
  Mask m;
  m.labels = GridU8(g.width, g.height);
  for (size_t i = 0; i < g.size(); ++i) m.labels.data[i] = g.data[i] > 127 ? 1 : 0;
  return m;
}

void write_mask(const Mask& mask, const std::string& path) {
  GridU16 g(mask.labels.width, mask.labels.height);
  for (size_t i = 0; i < g.size(); ++i) {
    uint8_t v = mask.labels.data[i];
    if (v > 1) throw ValidationError("mask labels must be 0 or 1");
    g.data[i] = v ? 255 : 0;
  }
  write_pgm(g, 255, path);
}

void render_overlay(const Frame& frame, const Mask& mask, const std::string& path) {
  const GridU16& px = frame.pixels;
  if (!mask.labels.same_shape(px.width, px.height))
    throw ValidationError("render_overlay: frame/mask dimension mismatch");
  uint32_t maxval = frame.meta ? frame.meta->max_value() : 65535;

  auto is_fg = [&](int y, int x) {
    return y >= 0 && y < px.height && x >= 0 && x < px.width && mask.labels.at(y, x) != 0;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P6\n" << px.width << " " << px.height << "\n255\n";
  std::vector<uint8_t> row(static_cast<size_t>(px.width) * 3);
  for (int y = 0; y < px.height; ++y) {
    for (int x = 0; x < px.width; ++x) {
      uint8_t g = static_cast<uint8_t>(px.at(y, x) * 255u / maxval);
      uint8_t r = g, gg = g, b = g;
      if (is_fg(y, x)) {
        bool boundary = !is_fg(y - 1, x) || !is_fg(y + 1, x) || !is_fg(y, x - 1) ||
                        !is_fg(y, x + 1);
        if (boundary) {
          r = 255;
          gg = 32;
          b = 32;
        }
      }
      row[3 * x] = r;
      row[3 * x + 1] = gg;
      row[3 * x + 2] = b;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace cinetrack::seqio
