#include "windsweep/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "windsweep/csv.hpp"
#include "windsweep/error.hpp"

namespace windsweep {

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

BinaryImage BinaryImage::complement() const {
  BinaryImage out = *this;
  for (auto& c : out.cells_) c = c ? 0 : 1;
  return out;
}

bool BinaryImage::subset_of(const BinaryImage& other) const {
  if (cols_ != other.cols_ || rows_ != other.rows_) return false;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] && !other.cells_[i]) return false;
  return true;
}

StructuringElement StructuringElement::disc(int diameter) {
  if (diameter < 1) throw InvalidConfig("structuring element diameter must be >= 1");
  StructuringElement se;
  se.diameter = diameter;
  // Compare in quarter units to stay in integers: dx^2 + dy^2 <= d^2 / 4.
  const int reach = diameter / 2;
  for (int dy = -reach; dy <= reach; ++dy)
    for (int dx = -reach; dx <= reach; ++dx)
      if (4 * (dx * dx + dy * dy) <= diameter * diameter) se.offsets.push_back({dx, dy});
  return se;
}

BinaryImage erode(const BinaryImage& image, const StructuringElement& se) {
  BinaryImage out(image.cols(), image.rows());
  for (int row = 0; row < image.rows(); ++row) {
    for (int col = 0; col < image.cols(); ++col) {
      if (!image.at(col, row)) continue;  // the centre offset is always in B
      bool inside = true;
      for (const auto& b : se.offsets) {
        const int c = col + b.dx, r = row + b.dy;
        if (!image.in_bounds(c, r) || !image.at(c, r)) {
          inside = false;
          break;
        }
      }
      if (inside) out.set(col, row);
    }
  }
  return out;
}

BinaryImage dilate(const BinaryImage& image, const StructuringElement& se) {
  BinaryImage out(image.cols(), image.rows());
  for (int row = 0; row < image.rows(); ++row) {
    for (int col = 0; col < image.cols(); ++col) {
      if (!image.at(col, row)) continue;
      // Scatter form of (B^R)_z intersecting A.
      for (const auto& b : se.offsets) {
        const int c = col + b.dx, r = row + b.dy;
        if (image.in_bounds(c, r)) out.set(c, r);
      }
    }
  }
  return out;
}

BinaryImage open(const BinaryImage& image, const StructuringElement& se) {
  return dilate(erode(image, se), se);
}

double normalize(double x, double lo, double hi) {
  if (!(hi > lo)) throw DegenerateRange("normalization range collapses (max <= min)");
  return (x - lo) / (hi - lo);
}

std::pair<double, double> normalize(double v, double p, const RasterBounds& b) {
  return {normalize(v, b.v_min, b.v_max), normalize(p, b.p_min, b.p_max)};
}

int quantize(double x, int q) {
  const double scaled = x * q;
  const double f = scaled >= 0.0 ? std::floor(scaled) : std::floor(scaled) + 1.0;
  return std::clamp(static_cast<int>(f) + 1, 1, q + 1);
}

Raster rasterize(std::span<const Observation> points, int q) {
  if (q < 1) throw InvalidConfig("raster resolution q must be >= 1");
  if (points.empty()) throw DegenerateRange("no points to rasterize");

  Raster r;
  r.q = q;
  r.bounds = {points[0].v, points[0].v, points[0].p, points[0].p};
  for (const auto& o : points) {
    r.bounds.v_min = std::min(r.bounds.v_min, o.v);
    r.bounds.v_max = std::max(r.bounds.v_max, o.v);
    r.bounds.p_min = std::min(r.bounds.p_min, o.p);
    r.bounds.p_max = std::max(r.bounds.p_max, o.p);
  }
  r.image = BinaryImage(q + 1, q + 1);
  r.cells.reserve(points.size());
  r.indices.reserve(points.size());
  // An axis without spread collapses onto its first cell.
  const auto axis = [q](double x, double lo, double hi) {
    return hi > lo ? quantize(normalize(x, lo, hi), q) : 1;
  };
  for (const auto& o : points) {
    const Cell cell{axis(o.v, r.bounds.v_min, r.bounds.v_max), axis(o.p, r.bounds.p_min, r.bounds.p_max)};
    r.image.set(cell.col - 1, cell.row - 1);
    r.cells.push_back(cell);
    r.indices.push_back(o.index);
  }
  return r;
}

Envelope extract_envelope(const BinaryImage& opened) {
  const int cols = opened.cols();
  std::vector<std::optional<std::pair<int, int>>> spans(static_cast<std::size_t>(cols));
  for (int col = 0; col < cols; ++col) {
    for (int row = 0; row < opened.rows(); ++row) {
      if (!opened.at(col, row)) continue;
      auto& s = spans[static_cast<std::size_t>(col)];
      if (!s) s = {{row + 1, row + 1}};
      else s->second = row + 1;
    }
  }

  std::vector<int> filled;
  for (int col = 0; col < cols; ++col)
    if (spans[static_cast<std::size_t>(col)]) filled.push_back(col);
  if (filled.empty()) throw EmptyOpening("opened image has no foreground pixels");

  Envelope env;
  env.lower_bounds.resize(static_cast<std::size_t>(cols));
  env.upper_bounds.resize(static_cast<std::size_t>(cols));
  auto assign = [&](int col, double lo, double hi) {
    env.lower_bounds[static_cast<std::size_t>(col)] = lo;
    env.upper_bounds[static_cast<std::size_t>(col)] = hi;
  };
  auto span_of = [&](int col) { return *spans[static_cast<std::size_t>(col)]; };

  for (int col = 0; col < filled.front(); ++col)
    assign(col, span_of(filled.front()).first, span_of(filled.front()).second);
  for (int col = filled.back() + 1; col < cols; ++col)
    assign(col, span_of(filled.back()).first, span_of(filled.back()).second);
  for (std::size_t k = 0; k < filled.size(); ++k) {
    const int a = filled[k];
    assign(a, span_of(a).first, span_of(a).second);
    if (k + 1 == filled.size()) break;
    const int b = filled[k + 1];
    for (int col = a + 1; col < b; ++col) {
      const double t = static_cast<double>(col - a) / (b - a);
      assign(col, span_of(a).first + t * (span_of(b).first - span_of(a).first),
             span_of(a).second + t * (span_of(b).second - span_of(a).second));
    }
  }
  return env;
}

std::vector<bool> refine(const Raster& raster, const Envelope& envelope) {
  std::vector<bool> out(raster.cells.size());
  for (std::size_t i = 0; i < raster.cells.size(); ++i) out[i] = !envelope.contains(raster.cells[i]);
  return out;
}

MorphologyResult morphology_refine(std::span<const Observation> remaining, std::size_t dataset_size,
                                   int q, int diameter) {
  MorphologyResult res;
  res.raster = rasterize(remaining, q);
  const auto se = StructuringElement::disc(diameter);
  res.eroded = erode(res.raster.image, se);
  res.opened = dilate(res.eroded, se);
  res.envelope = extract_envelope(res.opened);

  res.flags.assign(dataset_size, false);
  const auto local = refine(res.raster, res.envelope);
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i]) {
      res.flags[res.raster.indices[i]] = true;
      ++res.flagged;
    }
  }
  return res;
}

void write_pgm(const BinaryImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "P2\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (int row = image.rows() - 1; row >= 0; --row) {
    for (int col = 0; col < image.cols(); ++col) {
      if (col) out << ' ';
      out << (image.at(col, row) ? 0 : 255);
    }
    out << '\n';
  }
}

void write_envelope_csv(const Envelope& envelope, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "column,lower,upper\n";
  for (int col = 1; col <= envelope.columns(); ++col)
    out << col << ',' << csv::format_double(envelope.lower(col)) << ','
        << csv::format_double(envelope.upper(col)) << '\n';
}

}  // namespace windsweep
