#include "densify/session.hpp"

#include <stdexcept>

namespace densify {

const char* to_string(Method method) {
    switch (method) {
        case Method::none: return "none";
        case Method::uniform: return "uniform";
        case Method::nonuniform: return "nonuniform";
    }
    return "none";
}

Method method_from_string(const std::string& name) {
    if (name == "none") return Method::none;
    if (name == "uniform") return Method::uniform;
    if (name == "nonuniform") return Method::nonuniform;
    throw DomainError("unknown sampling method '" + name + "' (expected none, uniform or nonuniform)");
}

Rendering render(const PointSet& points, const Viewport& viewport, const GridConfig& config) {
    const Projection proj = project(points, viewport, config);
    Rendering r;
    r.raster = rasterize(proj.pixels, config);
    r.data = data_density_grid(proj, config);
    r.represented = represented_density_grid(r.raster, config);
    r.data_histogram = histogram(r.data);
    r.represented_histogram = histogram(r.represented);
    return r;
}

SceneResult run_sampling(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                         const SampleParams& params) {
    SceneResult scene;
    switch (params.method) {
        case Method::none:
            scene.points = points;
            break;
        case Method::uniform:
            scene.points = uniform_sample(points, params.ratio, params.seed);
            break;
        case Method::nonuniform: {
            auto result = nonuniform_sample(points, viewport, config, params.levels, params.seed);
            scene.points = std::move(result.points);
            scene.plan = std::move(result.plan);
            break;
        }
    }
    scene.rendering = render(scene.points, viewport, config);
    return scene;
}

PointSet run_filter(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                    const FilterParams& params) {
    if (params.min > params.max) throw DomainError("filter range requires min <= max");
    const Rendering r = render(points, viewport, config);
    const DensityGrid& grid = params.kind == DensityKind::data ? r.data : r.represented;
    return filter_by_density(points, viewport, grid, params.min, params.max);
}

std::vector<std::pair<std::string, std::string>> scene_artifacts(const SceneResult& scene) {
    std::vector<std::pair<std::string, std::string>> files;
    const Rendering& r = scene.rendering;
    files.emplace_back("raster.pgm", encode_pgm(r.raster));
    files.emplace_back("data_grid.json", dump_document(to_json(r.data)));
    files.emplace_back("represented_grid.json", dump_document(to_json(r.represented)));
    files.emplace_back("data_histogram.json", dump_document(to_json(r.data_histogram)));
    files.emplace_back("represented_histogram.json", dump_document(to_json(r.represented_histogram)));
    if (scene.plan) files.emplace_back("plan.json", dump_document(to_json(*scene.plan)));
    files.emplace_back("points.csv", encode_points_csv(scene.points));
    return files;
}

nlohmann::ordered_json plan_summary(const SamplingPlan& plan) {
    nlohmann::ordered_json doc;
    doc["seed"] = plan.seed;
    doc["requested_levels"] = plan.partition.requested_levels;
    doc["level_count"] = plan.partition.levels.size();
    doc["levels"] = to_json(plan.partition);
    doc["areas"] = plan.entries.size();
    doc["retained"] = plan.retained_total();
    return doc;
}

namespace {

/// A request body field failed validation.
struct FieldError : std::runtime_error {
    FieldError(std::string f, const std::string& message) : std::runtime_error(message), field(std::move(f)) {}
    std::string field;
};

Response json_response(int status, const nlohmann::ordered_json& doc) { return {status, "application/json", doc.dump()}; }

Response error_response(int status, const std::string& message, const std::string& field = {}) {
    nlohmann::ordered_json doc;
    doc["error"] = message;
    if (!field.empty()) doc["field"] = field;
    return json_response(status, doc);
}

Response no_dataset() { return error_response(409, "no dataset loaded"); }

DensityKind kind_param(const std::string& value, const std::string& field) {
    try {
        return density_kind_from_string(value);
    } catch (const DomainError& e) {
        throw FieldError(field, e.what());
    }
}

std::int64_t integer_field(const nlohmann::json& body, const std::string& field) {
    const auto& v = body.at(field);
    if (!v.is_number_integer()) throw FieldError(field, field + " must be an integer");
    return v.get<std::int64_t>();
}

nlohmann::ordered_json sample_json(const SampleParams& s) {
    nlohmann::ordered_json doc;
    doc["method"] = to_string(s.method);
    if (s.method == Method::uniform) doc["ratio"] = s.ratio;
    if (s.method == Method::nonuniform) {
        if (s.levels)
            doc["levels"] = *s.levels;
        else
            doc["levels"] = "auto";
    }
    doc["seed"] = s.seed;
    return doc;
}

}  // namespace

Session::Session(GridConfig config, std::uint64_t default_seed) : config_(config), default_seed_(default_seed) {
    config_.validate();
}

void Session::load(Dataset dataset) {
    std::lock_guard lock(mutex_);
    viewport_ = dataset.meta.bounds;
    dataset_ = std::move(dataset);
    sample_ = SampleParams{Method::none, 1.0, std::nullopt, default_seed_};
    filter_.reset();
    recompute();
}

void Session::recompute() {
    scene_ = run_sampling(dataset_->points, viewport_, config_, sample_);
    if (filter_) {
        scene_.points = run_filter(scene_.points, viewport_, config_, *filter_);
        scene_.rendering = render(scene_.points, viewport_, config_);
    }
}

Response Session::handle(const Request& request) {
    try {
        if (request.method == "POST" && request.path == "/load") {
            nlohmann::json body = nlohmann::json::parse(request.body.empty() ? "{}" : request.body);
            return load_from(body);
        }
        std::lock_guard lock(mutex_);
        if (request.method == "GET") {
            if (request.path == "/meta") return meta();
            if (request.path == "/grid") return grid(request);
            if (request.path == "/histogram") return histogram(request);
            if (request.path == "/raster") return raster();
            if (request.path == "/plan") return plan();
        } else if (request.method == "POST") {
            if (request.path == "/reset") return reset();
            if (request.path == "/sample" || request.path == "/filter") {
                nlohmann::json body = nlohmann::json::parse(request.body.empty() ? "{}" : request.body);
                if (!body.is_object()) return error_response(400, "request body must be a JSON object");
                return request.path == "/sample" ? sample(body) : filter(body);
            }
        }
        return error_response(404, "no route for " + request.method + " " + request.path);
    } catch (const nlohmann::json::parse_error& e) {
        return error_response(400, std::string("request body is not valid JSON: ") + e.what());
    } catch (const FieldError& e) {
        return error_response(400, e.what(), e.field);
    } catch (const DomainError& e) {
        return error_response(400, e.what());
    } catch (const IoError& e) {
        return error_response(400, e.what());
    } catch (const SchemaError& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

Response Session::meta() const {
    nlohmann::ordered_json doc;
    doc["loaded"] = dataset_.has_value();
    doc["config"] = to_json(config_);
    if (dataset_) {
        const DatasetMeta& m = dataset_->meta;
        doc["source"] = m.source;
        doc["point_count"] = m.point_count;
        doc["skipped_rows"] = m.skipped_rows;
        doc["columns"] = m.columns;
        doc["x_column"] = m.x_column;
        doc["y_column"] = m.y_column;
        doc["viewport"] = {{"x_min", viewport_.x_min},
                           {"x_max", viewport_.x_max},
                           {"y_min", viewport_.y_min},
                           {"y_max", viewport_.y_max}};
        doc["current_point_count"] = scene_.points.size();
        doc["sample"] = sample_json(sample_);
        if (filter_) {
            doc["filter"] = {{"kind", to_string(filter_->kind)}, {"min", filter_->min}, {"max", filter_->max}};
        } else {
            doc["filter"] = nullptr;
        }
    }
    return json_response(200, doc);
}

Response Session::grid(const Request& request) const {
    if (!dataset_) return no_dataset();
    auto it = request.query.find("kind");
    const DensityKind kind = it == request.query.end() ? DensityKind::data : kind_param(it->second, "kind");
    const DensityGrid& g = kind == DensityKind::data ? scene_.rendering.data : scene_.rendering.represented;
    return {200, "application/json", dump_document(to_json(g))};
}

Response Session::histogram(const Request& request) const {
    if (!dataset_) return no_dataset();
    auto it = request.query.find("kind");
    const DensityKind kind = it == request.query.end() ? DensityKind::data : kind_param(it->second, "kind");
    const DensityHistogram& h =
        kind == DensityKind::data ? scene_.rendering.data_histogram : scene_.rendering.represented_histogram;
    return {200, "application/json", dump_document(to_json(h))};
}

Response Session::raster() const {
    if (!dataset_) return no_dataset();
    return {200, "image/x-portable-graymap", encode_pgm(scene_.rendering.raster)};
}

Response Session::plan() const {
    if (!dataset_) return no_dataset();
    if (!scene_.plan) return error_response(404, "current scene has no sampling plan");
    return {200, "application/json", dump_document(to_json(*scene_.plan))};
}

Response Session::sample(const nlohmann::json& body) {
    if (!dataset_) return no_dataset();
    SampleParams params;
    if (!body.contains("method") || !body["method"].is_string()) throw FieldError("method", "method is required");
    try {
        params.method = method_from_string(body["method"].get<std::string>());
    } catch (const DomainError& e) {
        throw FieldError("method", e.what());
    }
    params.seed = default_seed_;
    if (body.contains("seed")) {
        if (!body["seed"].is_number_unsigned()) throw FieldError("seed", "seed must be a non-negative integer");
        params.seed = body["seed"].get<std::uint64_t>();
    }
    if (params.method == Method::uniform) {
        if (!body.contains("ratio") || !body["ratio"].is_number()) {
            throw FieldError("ratio", "uniform sampling needs a numeric ratio");
        }
        params.ratio = body["ratio"].get<double>();
        if (!(params.ratio >= 0.0 && params.ratio <= 1.0)) throw FieldError("ratio", "ratio must lie in [0, 1]");
    }
    if (params.method == Method::nonuniform && body.contains("levels")) {
        const auto& levels = body["levels"];
        if (levels.is_string() && levels.get<std::string>() == "auto") {
            params.levels.reset();
        } else if (levels.is_number_integer() && levels.get<std::int64_t>() >= 1) {
            params.levels = levels.get<std::int64_t>();
        } else {
            throw FieldError("levels", "levels must be \"auto\" or a positive integer");
        }
    }
    sample_ = params;
    recompute();
    return scene_response();
}

Response Session::filter(const nlohmann::json& body) {
    if (!dataset_) return no_dataset();
    FilterParams params;
    if (body.contains("kind")) {
        if (!body["kind"].is_string()) throw FieldError("kind", "kind must be a string");
        params.kind = kind_param(body["kind"].get<std::string>(), "kind");
    }
    if (body.contains("min")) params.min = integer_field(body, "min");
    if (body.contains("max") && !body["max"].is_null()) params.max = integer_field(body, "max");
    if (params.min > params.max) throw FieldError("min", "min must not exceed max");
    filter_ = params;
    recompute();
    return scene_response();
}

Response Session::load_from(const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("path") || !body["path"].is_string()) {
        return error_response(400, "path is required", "path");
    }
    const std::string x = body.value("x_col", std::string("x"));
    const std::string y = body.value("y_col", std::string("y"));
    const std::string delim = body.value("delimiter", std::string(","));
    if (delim.size() != 1) return error_response(400, "delimiter must be a single character", "delimiter");
    Dataset ds = load_points(body["path"].get<std::string>(), x, y, delim[0]);
    load(std::move(ds));
    std::lock_guard lock(mutex_);
    return scene_response();
}

Response Session::reset() {
    if (!dataset_) return no_dataset();
    sample_ = SampleParams{Method::none, 1.0, std::nullopt, default_seed_};
    filter_.reset();
    recompute();
    return scene_response();
}

Response Session::scene_response() const {
    const Rendering& r = scene_.rendering;
    nlohmann::ordered_json doc;
    doc["point_count"] = scene_.points.size();
    doc["sample"] = sample_json(sample_);
    if (filter_) {
        doc["filter"] = {{"kind", to_string(filter_->kind)}, {"min", filter_->min}, {"max", filter_->max}};
    } else {
        doc["filter"] = nullptr;
    }
    doc["plan"] = scene_.plan ? plan_summary(*scene_.plan) : nlohmann::ordered_json(nullptr);
    doc["grids"] = {{"data", to_json(r.data)}, {"represented", to_json(r.represented)}};
    doc["histograms"] = {{"data", to_json(r.data_histogram)}, {"represented", to_json(r.represented_histogram)}};
    return json_response(200, doc);
}

}  // namespace densify
