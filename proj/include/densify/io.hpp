#pragma once

// Dataset ingestion, synthetic generation and artifact serialization.
//
// Text artifacts are JSON documents; rasters are binary portable graymaps.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "densify/grid.hpp"
#include "densify/sampling.hpp"

namespace densify {

struct DatasetMeta {
    std::size_t point_count = 0;
    Viewport bounds;
    std::string source;
    std::vector<std::string> columns;
    std::string x_column;
    std::string y_column;
    std::size_t skipped_rows = 0;
};

struct Dataset {
    PointSet points;
    DatasetMeta meta;
};

/// Delimited text with a header row. Rows whose selected columns are missing or
/// not finite decimals are skipped and counted. Ids follow data-row order.
Dataset parse_points(std::istream& in, const std::string& x_column, const std::string& y_column,
                     char delimiter = ',', std::string source = "<stream>");
Dataset load_points(const std::filesystem::path& path, const std::string& x_column, const std::string& y_column,
                    char delimiter = ',');

/// Writes "id,x,y" rows with round-trippable decimals.
void write_points(const PointSet& points, const std::filesystem::path& path);
std::string encode_points_csv(const PointSet& points);

enum class ComponentKind { uniform_box, gaussian_blob };

/// Box: uniform over [center - scale, center + scale]. Blob: normal with
/// standard deviation `scale` per axis.
struct GeneratorComponent {
    ComponentKind kind = ComponentKind::uniform_box;
    double weight = 1.0;
    double center_x = 0.0;
    double center_y = 0.0;
    double scale_x = 1.0;
    double scale_y = 1.0;
};

struct GeneratorSpec {
    std::size_t total = 0;
    std::vector<GeneratorComponent> components;
    std::uint64_t seed = 0;

    /// Throws DomainError unless weights are non-negative and sum to 1 (within 1e-9)
    /// and scales are positive.
    void validate() const;

    /// Heavy mass packed near the origin plus a sparse background and a small
    /// remote cluster, after the shape of a parcel weight/volume scatter.
    static GeneratorSpec parcel_like(std::size_t total, std::uint64_t seed);
};

PointSet generate(const GeneratorSpec& spec);

// Structured text documents.
nlohmann::ordered_json to_json(const GridConfig& config);
nlohmann::ordered_json to_json(const DensityGrid& grid);
nlohmann::ordered_json to_json(const DensityHistogram& hist);
nlohmann::ordered_json to_json(const LevelPartition& partition);
nlohmann::ordered_json to_json(const SamplingPlan& plan);
nlohmann::ordered_json to_json(const GeneratorSpec& spec);

GridConfig grid_config_from_json(const nlohmann::json& doc);
DensityGrid grid_from_json(const nlohmann::json& doc);
DensityHistogram histogram_from_json(const nlohmann::json& doc);
SamplingPlan plan_from_json(const nlohmann::json& doc);
GeneratorSpec generator_spec_from_json(const nlohmann::json& doc);

/// Canonical byte form of a document (2-space indent, trailing newline).
std::string dump_document(const nlohmann::ordered_json& doc);

/// Binary PGM: "P5\n<w> <h>\n255\n" then one byte per pixel, 255 = active.
std::string encode_pgm(const Raster& raster);
Raster decode_pgm(const std::string& bytes);

void write_raster(const Raster& raster, const std::filesystem::path& path);
void write_grid(const DensityGrid& grid, const std::filesystem::path& path);
void write_histogram(const DensityHistogram& hist, const std::filesystem::path& path);
void write_plan(const SamplingPlan& plan, const std::filesystem::path& path);

Raster read_raster(const std::filesystem::path& path);
DensityGrid read_grid(const std::filesystem::path& path);
DensityHistogram read_histogram(const std::filesystem::path& path);
SamplingPlan read_plan(const std::filesystem::path& path);

/// Whole-file helpers; failures throw IoError naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace densify
