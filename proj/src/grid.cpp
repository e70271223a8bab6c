#include "densify/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace densify {

void GridConfig::validate() const {
    if (sa_side < 1) throw DomainError("sample-area side must be at least 1 pixel");
    if (screen_width < 1 || screen_height < 1) throw DomainError("screen dimensions must be positive");
    if (screen_width % sa_side != 0 || screen_height % sa_side != 0) {
        throw DomainError("screen " + std::to_string(screen_width) + "x" + std::to_string(screen_height) +
                          " is not a multiple of sample-area side " + std::to_string(sa_side));
    }
}

PointSet PointSet::from_points(std::vector<Point> pts) {
    PointSet set;
    set.ids.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) set.ids[i] = i;
    set.points = std::move(pts);
    return set;
}

void Viewport::validate() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max))) {
        throw DomainError("viewport bounds must be finite");
    }
    if (!(x_min < x_max && y_min < y_max)) throw DomainError("viewport requires x_min < x_max and y_min < y_max");
}

Viewport Viewport::bounding(const PointSet& points) {
    bool any = false;
    Viewport box;
    for (const Point& p : points.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        if (!any) {
            box = {p.x, p.x, p.y, p.y};
            any = true;
            continue;
        }
        box.x_min = std::min(box.x_min, p.x);
        box.x_max = std::max(box.x_max, p.x);
        box.y_min = std::min(box.y_min, p.y);
        box.y_max = std::max(box.y_max, p.y);
    }
    if (!any) throw DomainError("cannot bound an empty point set");
    if (box.x_min == box.x_max) {
        box.x_min -= 0.5;
        box.x_max += 0.5;
    }
    if (box.y_min == box.y_max) {
        box.y_min -= 0.5;
        box.y_max += 0.5;
    }
    return box;
}

namespace {

std::int64_t bin(double offset, double extent, std::int64_t cells) {
    const auto c = static_cast<std::int64_t>(std::floor(offset / extent * static_cast<double>(cells)));
    return std::clamp<std::int64_t>(c, 0, cells - 1);
}

}  // namespace

Projection project(const PointSet& points, const Viewport& viewport, const GridConfig& config) {
    viewport.validate();
    config.validate();
    Projection out;
    out.pixels.reserve(points.size());
    out.source.reserve(points.size());
    const double width = viewport.x_max - viewport.x_min;
    const double height = viewport.y_max - viewport.y_min;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point p = points.points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !viewport.contains(p)) {
            ++out.dropped;
            continue;
        }
        out.pixels.push_back({bin(p.x - viewport.x_min, width, config.screen_width),
                              bin(viewport.y_max - p.y, height, config.screen_height)});
        out.source.push_back(i);
    }
    return out;
}

Raster rasterize(std::span<const PixelCoord> pixels, const GridConfig& config) {
    config.validate();
    Raster raster;
    raster.width = config.screen_width;
    raster.height = config.screen_height;
    raster.bitmap = Field<std::uint8_t>::Zero(raster.height, raster.width);
    for (const PixelCoord& px : pixels) {
        if (px.x < 0 || px.x >= raster.width || px.y < 0 || px.y >= raster.height) {
            throw DomainError("pixel (" + std::to_string(px.x) + ", " + std::to_string(px.y) + ") outside raster");
        }
        raster.bitmap(px.y, px.x) = 1;
    }
    return raster;
}

const char* to_string(DensityKind kind) { return kind == DensityKind::data ? "data" : "represented"; }

DensityKind density_kind_from_string(const std::string& name) {
    if (name == "data") return DensityKind::data;
    if (name == "represented") return DensityKind::represented;
    throw DomainError("unknown density kind '" + name + "' (expected data or represented)");
}

DensityGrid data_density_grid(const Projection& projection, const GridConfig& config) {
    config.validate();
    DensityGrid grid{config, DensityKind::data, Field<std::int64_t>::Zero(config.rows(), config.cols())};
    for (const PixelCoord& px : projection.pixels) {
        const SampleArea a = area_of(px, config);
        ++grid.values(a.row, a.col);
    }
    return grid;
}

DensityGrid data_density_grid(const PointSet& points, const Viewport& viewport, const GridConfig& config) {
    return data_density_grid(project(points, viewport, config), config);
}

DensityGrid represented_density_grid(const Raster& raster, const GridConfig& config) {
    config.validate();
    if (raster.width != config.screen_width || raster.height != config.screen_height) {
        throw ConsistencyError("raster size does not match grid config");
    }
    const auto side = config.sa_side;
    DensityGrid grid{config, DensityKind::represented, Field<std::int64_t>(config.rows(), config.cols())};
    const Field<std::int64_t> active = raster.bitmap.cast<std::int64_t>();
    for (std::int64_t r = 0; r < config.rows(); ++r) {
        for (std::int64_t c = 0; c < config.cols(); ++c) {
            grid.values(r, c) = active.block(r * side, c * side, side, side).sum();
        }
    }
    return grid;
}

std::int64_t DensityHistogram::area_count() const {
    std::int64_t total = 0;
    for (const auto& e : entries) total += e.sa_count;
    return total;
}

DensityHistogram DensityHistogram::nonzero() const {
    DensityHistogram out;
    for (const auto& e : entries) {
        if (e.density != 0) out.entries.push_back(e);
    }
    return out;
}

DensityHistogram histogram(const DensityGrid& grid) {
    std::map<std::int64_t, std::int64_t> buckets;
    for (Eigen::Index i = 0; i < grid.values.size(); ++i) ++buckets[grid.values.data()[i]];
    DensityHistogram hist;
    hist.entries.reserve(buckets.size());
    for (const auto& [density, count] : buckets) hist.entries.push_back({density, count});
    return hist;
}

PointSet filter_by_density(const PointSet& points, const Viewport& viewport, const DensityGrid& grid,
                           std::int64_t min_density, std::int64_t max_density) {
    if (min_density > max_density) throw DomainError("filter range requires min <= max");
    const Projection proj = project(points, viewport, grid.config);
    PointSet out;
    for (std::size_t i = 0; i < proj.pixels.size(); ++i) {
        const SampleArea a = area_of(proj.pixels[i], grid.config);
        const std::int64_t v = grid.values(a.row, a.col);
        if (v >= min_density && v <= max_density) {
            const std::size_t src = proj.source[i];
            out.push_back(points.points[src], points.ids[src]);
        }
    }
    return out;
}

}  // namespace densify
