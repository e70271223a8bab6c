#pragma once

// Scene pipeline shared by the command line and the local service, plus the
// single-dataset service session itself.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "densify/grid.hpp"
#include "densify/io.hpp"
#include "densify/sampling.hpp"

namespace densify {

enum class Method { none, uniform, nonuniform };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct SampleParams {
    Method method = Method::none;
    double ratio = 1.0;                  // uniform only
    std::optional<std::int64_t> levels;  // non-uniform only; nullopt = auto
    std::uint64_t seed = 0;

    bool operator==(const SampleParams&) const = default;
};

struct FilterParams {
    DensityKind kind = DensityKind::data;
    std::int64_t min = 0;
    std::int64_t max = kUnboundedDensity;

    bool operator==(const FilterParams&) const = default;
};

struct Rendering {
    Raster raster;
    DensityGrid data;
    DensityGrid represented;
    DensityHistogram data_histogram;
    DensityHistogram represented_histogram;
};

Rendering render(const PointSet& points, const Viewport& viewport, const GridConfig& config);

struct SceneResult {
    PointSet points;
    std::optional<SamplingPlan> plan;
    Rendering rendering;
};

SceneResult run_sampling(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                         const SampleParams& params);

/// Keeps the points lying in areas whose `kind` density is within [min, max].
PointSet run_filter(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                    const FilterParams& params);

/// File name -> bytes for every artifact of a scene, in a fixed order:
/// raster.pgm, data_grid.json, represented_grid.json, data_histogram.json,
/// represented_histogram.json, plan.json (when a plan exists), points.csv.
std::vector<std::pair<std::string, std::string>> scene_artifacts(const SceneResult& scene);

/// Level table and totals of a plan, without the per-area entries.
nlohmann::ordered_json plan_summary(const SamplingPlan& plan);

struct Request {
    std::string method;  // "GET" / "POST"
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// One analyst, one dataset. Every mutation recomputes the derived scene from
/// (dataset, config, sample params, filter), so replaying requests after
/// /reset reproduces the state exactly. Requests are handled one at a time.
class Session {
public:
    explicit Session(GridConfig config = {}, std::uint64_t default_seed = 0);

    void load(Dataset dataset);
    Response handle(const Request& request);

private:
    Response meta() const;
    Response grid(const Request& request) const;
    Response histogram(const Request& request) const;
    Response raster() const;
    Response plan() const;
    Response sample(const nlohmann::json& body);
    Response filter(const nlohmann::json& body);
    Response load_from(const nlohmann::json& body);
    Response reset();

    Response scene_response() const;
    void recompute();

    mutable std::mutex mutex_;
    GridConfig config_;
    std::uint64_t default_seed_;
    std::optional<Dataset> dataset_;
    Viewport viewport_;
    SampleParams sample_;
    std::optional<FilterParams> filter_;
    SceneResult scene_;
};

}  // namespace densify
