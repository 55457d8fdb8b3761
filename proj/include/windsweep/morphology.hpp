#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "windsweep/ransac.hpp"

namespace windsweep {

/// Dense binary image addressed by 0-based (col, row). Foreground (1) is a
/// black pixel, background (0) white.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int cols, int rows) : cols_(cols), rows_(rows), cells_(static_cast<std::size_t>(cols * rows), 0) {}

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  bool in_bounds(int col, int row) const { return col >= 0 && row >= 0 && col < cols_ && row < rows_; }
  bool at(int col, int row) const { return cells_[offset(col, row)] != 0; }
  void set(int col, int row, bool on = true) { cells_[offset(col, row)] = on ? 1 : 0; }

  std::size_t count() const;
  BinaryImage complement() const;
  /// Every foreground pixel of *this is foreground in `other`.
  bool subset_of(const BinaryImage& other) const;

  bool operator==(const BinaryImage&) const = default;

 private:
  std::size_t offset(int col, int row) const { return static_cast<std::size_t>(row * cols_ + col); }

  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct Offset {
  int dx = 0;
  int dy = 0;
  bool operator==(const Offset&) const = default;
};

/// Discrete disc: integer offsets with dx^2 + dy^2 <= (d/2)^2 around (0, 0).
/// The set is symmetric under negation, so it equals its reflection.
struct StructuringElement {
  int diameter = 1;
  std::vector<Offset> offsets;

  static StructuringElement disc(int diameter);
};

/// A -> A (-) B: z is kept iff every z + b is an in-bounds foreground pixel.
BinaryImage erode(const BinaryImage& image, const StructuringElement& se);
/// A (+) B: z is set iff some z - b is an in-bounds foreground pixel.
BinaryImage dilate(const BinaryImage& image, const StructuringElement& se);
/// Erosion followed by dilation.
BinaryImage open(const BinaryImage& image, const StructuringElement& se);

struct RasterBounds {
  double v_min = 0.0;
  double v_max = 1.0;
  double p_min = 0.0;
  double p_max = 1.0;
};

/// (x - lo) / (hi - lo); throws DegenerateRange when hi <= lo.
double normalize(double x, double lo, double hi);
std::pair<double, double> normalize(double v, double p, const RasterBounds& bounds);

/// floor(x * q) + 1 for x in [0, 1], giving an integer in [1, q + 1].
int quantize(double x, int q);

/// 1-based pixel coordinates: col is the speed axis, row the power axis.
struct Cell {
  int col = 1;
  int row = 1;
  bool operator==(const Cell&) const = default;
};

struct Raster {
  BinaryImage image;  // (q+1) x (q+1)
  int q = 100;
  RasterBounds bounds;
  /// One entry per rasterized observation, parallel to `indices`.
  std::vector<Cell> cells;
  std::vector<std::size_t> indices;

  bool at(Cell c) const { return image.at(c.col - 1, c.row - 1); }
};

/// Normalizes with bounds taken from `points` and marks every occupied cell.
/// An axis with zero spread maps every point to cell 1. Throws DegenerateRange
/// when `points` is empty.
Raster rasterize(std::span<const Observation> points, int q);

/// Per-column [lower, upper] pixel rows of the normal band, 1-based.
struct Envelope {
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;

  int columns() const { return static_cast<int>(lower_bounds.size()); }
  double lower(int col) const { return lower_bounds[static_cast<std::size_t>(col - 1)]; }
  double upper(int col) const { return upper_bounds[static_cast<std::size_t>(col - 1)]; }
  /// Inclusive at both bounds.
  bool contains(Cell c) const { return c.row >= lower(c.col) && c.row <= upper(c.col); }
};

/// Min/max foreground row per column; empty interior columns are linearly
/// interpolated, columns beyond the occupied span copy the nearest one.
/// Throws EmptyOpening for an all-background image.
Envelope extract_envelope(const BinaryImage& opened);

/// Flags (parallel to raster.cells) for points whose cell lies outside the envelope.
std::vector<bool> refine(const Raster& raster, const Envelope& envelope);

struct MorphologyResult {
  Raster raster;
  BinaryImage eroded;
  BinaryImage opened;
  Envelope envelope;
  /// Dataset-sized; true for morphology outliers.
  std::vector<bool> flags;
  std::size_t flagged = 0;
};

MorphologyResult morphology_refine(std::span<const Observation> remaining, std::size_t dataset_size,
                                   int q, int diameter);

/// Plain-text PGM (P2); foreground is written black, row q+1 at the top.
void write_pgm(const BinaryImage& image, const std::filesystem::path& path);
/// CSV with columns column,lower,upper.
void write_envelope_csv(const Envelope& envelope, const std::filesystem::path& path);

}  // namespace windsweep
