#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "densify/errors.hpp"

namespace densify {

/// Dense row-major 2D field; rows run top to bottom on screen.
template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Screen raster split into square sample areas of side `sa_side` pixels.
struct GridConfig {
    std::int64_t screen_width = 1280;
    std::int64_t screen_height = 1024;
    std::int64_t sa_side = 8;

    /// Throws DomainError unless the screen is a positive exact multiple of sa_side.
    void validate() const;

    std::int64_t cols() const { return screen_width / sa_side; }
    std::int64_t rows() const { return screen_height / sa_side; }
    std::int64_t pixels_per_area() const { return sa_side * sa_side; }
    std::int64_t area_count() const { return rows() * cols(); }

    bool operator==(const GridConfig&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Ordered points, each carrying the index of the row it came from.
struct PointSet {
    std::vector<Point> points;
    std::vector<std::size_t> ids;

    static PointSet from_points(std::vector<Point> pts);

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void push_back(Point p, std::size_t id) {
        points.push_back(p);
        ids.push_back(id);
    }

    bool operator==(const PointSet&) const = default;
};

/// Data-space window mapped onto the screen.
struct Viewport {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    void validate() const;

    /// Bounding box of the finite points; a degenerate extent is widened by 0.5
    /// on each side. Throws DomainError for an empty set.
    static Viewport bounding(const PointSet& points);

    bool contains(Point p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }

    bool operator==(const Viewport&) const = default;
};

/// Pixel column x (left to right) and row y (top to bottom).
struct PixelCoord {
    std::int64_t x = 0;
    std::int64_t y = 0;

    bool operator==(const PixelCoord&) const = default;
};

struct Projection {
    std::vector<PixelCoord> pixels;
    std::vector<std::size_t> source;  // position in the projected PointSet
    std::size_t dropped = 0;          // outside the viewport or non-finite
};

/// Linear data-to-pixel map. y grows upward in data space, so y_max lands on row 0.
/// Bins are half-open with the maximum edge clamped into the last pixel.
Projection project(const PointSet& points, const Viewport& viewport, const GridConfig& config);

struct Raster {
    std::int64_t width = 0;
    std::int64_t height = 0;
    Field<std::uint8_t> bitmap;  // 1 = active

    std::int64_t active_count() const { return bitmap.cast<std::int64_t>().sum(); }

    bool operator==(const Raster& other) const {
        return width == other.width && height == other.height && bitmap == other.bitmap;
    }
};

/// A pixel is active iff at least one coordinate hits it.
Raster rasterize(std::span<const PixelCoord> pixels, const GridConfig& config);

enum class DensityKind { data, represented };

const char* to_string(DensityKind kind);
DensityKind density_kind_from_string(const std::string& name);

/// Per-sample-area counts: points (data) or active pixels (represented).
struct DensityGrid {
    GridConfig config;
    DensityKind kind = DensityKind::data;
    Field<std::int64_t> values;

    std::int64_t total() const { return values.sum(); }
    std::int64_t max() const { return values.size() == 0 ? 0 : values.maxCoeff(); }

    bool operator==(const DensityGrid& other) const {
        return config == other.config && kind == other.kind && values == other.values;
    }
};

struct SampleArea {
    std::int64_t row = 0;
    std::int64_t col = 0;

    bool operator==(const SampleArea&) const = default;
};

inline SampleArea area_of(PixelCoord pixel, const GridConfig& config) {
    return {pixel.y / config.sa_side, pixel.x / config.sa_side};
}

DensityGrid data_density_grid(const Projection& projection, const GridConfig& config);
DensityGrid data_density_grid(const PointSet& points, const Viewport& viewport, const GridConfig& config);
DensityGrid represented_density_grid(const Raster& raster, const GridConfig& config);

struct HistogramEntry {
    std::int64_t density = 0;
    std::int64_t sa_count = 0;

    bool operator==(const HistogramEntry&) const = default;
};

/// Distinct density values in increasing order with the number of areas holding each.
struct DensityHistogram {
    std::vector<HistogramEntry> entries;

    std::int64_t area_count() const;
    /// Copy without the zero-density bucket.
    DensityHistogram nonzero() const;

    bool operator==(const DensityHistogram&) const = default;
};

DensityHistogram histogram(const DensityGrid& grid);

inline constexpr std::int64_t kUnboundedDensity = std::numeric_limits<std::int64_t>::max();

/// Points whose sample area holds a grid value within [min_density, max_density].
/// `grid` must be computed over the same viewport and config.
PointSet filter_by_density(const PointSet& points, const Viewport& viewport, const DensityGrid& grid,
                           std::int64_t min_density, std::int64_t max_density = kUnboundedDensity);

}  // namespace densify
