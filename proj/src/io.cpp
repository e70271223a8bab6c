#include "densify/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "densify/random.hpp"

namespace densify {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string format_real(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

template <typename F>
auto with_schema(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed ") + what + " document: " + e.what());
    }
}

}  // namespace

Dataset parse_points(std::istream& in, const std::string& x_column, const std::string& y_column, char delimiter,
                     std::string source) {
    Dataset ds;
    ds.meta.source = std::move(source);
    ds.meta.x_column = x_column;
    ds.meta.y_column = y_column;

    std::string line;
    if (!std::getline(in, line)) throw SchemaError(ds.meta.source + ": missing header row");
    for (auto name : split(line, delimiter)) ds.meta.columns.emplace_back(name);

    auto column_index = [&](const std::string& name) {
        auto it = std::find(ds.meta.columns.begin(), ds.meta.columns.end(), name);
        if (it == ds.meta.columns.end()) throw SchemaError(ds.meta.source + ": no column named '" + name + "'");
        return static_cast<std::size_t>(it - ds.meta.columns.begin());
    };
    const std::size_t xi = column_index(x_column);
    const std::size_t yi = column_index(y_column);

    std::vector<Point> pts;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split(line, delimiter);
        std::optional<double> x, y;
        if (xi < fields.size()) x = parse_real(fields[xi]);
        if (yi < fields.size()) y = parse_real(fields[yi]);
        if (!x || !y) {
            ++ds.meta.skipped_rows;
            continue;
        }
        pts.push_back({*x, *y});
    }
    if (pts.empty()) throw SchemaError(ds.meta.source + ": no valid data rows");

    ds.points = PointSet::from_points(std::move(pts));
    ds.meta.point_count = ds.points.size();
    ds.meta.bounds = Viewport::bounding(ds.points);
    return ds;
}

Dataset load_points(const std::filesystem::path& path, const std::string& x_column, const std::string& y_column,
                    char delimiter) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_points(in, x_column, y_column, delimiter, path.string());
}

std::string encode_points_csv(const PointSet& points) {
    std::string out = "id,x,y\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += std::to_string(points.ids[i]);
        out += ',';
        out += format_real(points.points[i].x);
        out += ',';
        out += format_real(points.points[i].y);
        out += '\n';
    }
    return out;
}

void write_points(const PointSet& points, const std::filesystem::path& path) {
    write_file(path, encode_points_csv(points));
}

void GeneratorSpec::validate() const {
    if (components.empty()) {
        if (total == 0) return;
        throw DomainError("generator needs at least one component");
    }
    double sum = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) throw DomainError("component weights must be non-negative");
        if (!(c.scale_x > 0.0 && c.scale_y > 0.0)) throw DomainError("component scales must be positive");
        sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("component weights must sum to 1");
}

GeneratorSpec GeneratorSpec::parcel_like(std::size_t total, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.total = total;
    spec.seed = seed;
    spec.components = {
        {ComponentKind::gaussian_blob, 0.40, 0.03, 0.03, 0.012, 0.012},  // light, small parcels
        {ComponentKind::gaussian_blob, 0.25, 0.15, 0.10, 0.06, 0.05},
        {ComponentKind::uniform_box, 0.27, 0.5, 0.5, 0.5, 0.5},
        {ComponentKind::gaussian_blob, 0.08, 0.80, 0.75, 0.03, 0.03},  // remote cluster
    };
    return spec;
}

PointSet generate(const GeneratorSpec& spec) {
    spec.validate();
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& c : spec.components) cumulative.push_back(acc += c.weight);

    Rng rng(substream_seed(spec.seed, {}));
    std::vector<Point> pts;
    pts.reserve(spec.total);
    for (std::size_t i = 0; i < spec.total; ++i) {
        const double u = rng.uniform() * acc;
        std::size_t k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                 cumulative.begin());
        k = std::min(k, spec.components.size() - 1);
        const auto& c = spec.components[k];
        if (c.kind == ComponentKind::uniform_box) {
            const double x = c.center_x + c.scale_x * (2.0 * rng.uniform() - 1.0);
            const double y = c.center_y + c.scale_y * (2.0 * rng.uniform() - 1.0);
            pts.push_back({x, y});
        } else {
            const double x = c.center_x + c.scale_x * rng.normal();
            const double y = c.center_y + c.scale_y * rng.normal();
            pts.push_back({x, y});
        }
    }
    return PointSet::from_points(std::move(pts));
}

nlohmann::ordered_json to_json(const GridConfig& config) {
    return {{"screen_width", config.screen_width}, {"screen_height", config.screen_height}, {"sa_side", config.sa_side}};
}

nlohmann::ordered_json to_json(const DensityGrid& grid) {
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < grid.values.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < grid.values.cols(); ++c) row.push_back(grid.values(r, c));
        values.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["config"] = to_json(grid.config);
    doc["kind"] = to_string(grid.kind);
    doc["values"] = std::move(values);
    return doc;
}

nlohmann::ordered_json to_json(const DensityHistogram& hist) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : hist.entries) entries.push_back({{"density", e.density}, {"sa_count", e.sa_count}});
    nlohmann::ordered_json doc;
    doc["entries"] = std::move(entries);
    return doc;
}

nlohmann::ordered_json to_json(const LevelPartition& partition) {
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& l : partition.levels) {
        levels.push_back({{"density_lo", l.density_lo},
                          {"density_hi", l.density_hi},
                          {"sa_count", l.sa_count},
                          {"target", l.target}});
    }
    return levels;
}

nlohmann::ordered_json to_json(const SamplingPlan& plan) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : plan.entries) {
        entries.push_back(
            {{"row", e.row}, {"col", e.col}, {"count", e.count}, {"retain", e.retain}, {"target", e.target}});
    }
    nlohmann::ordered_json doc;
    doc["config"] = to_json(plan.config);
    doc["seed"] = plan.seed;
    doc["requested_levels"] = plan.partition.requested_levels;
    doc["levels"] = to_json(plan.partition);
    doc["entries"] = std::move(entries);
    return doc;
}

nlohmann::ordered_json to_json(const GeneratorSpec& spec) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : spec.components) {
        comps.push_back({{"kind", c.kind == ComponentKind::uniform_box ? "uniform_box" : "gaussian_blob"},
                         {"weight", c.weight},
                         {"center_x", c.center_x},
                         {"center_y", c.center_y},
                         {"scale_x", c.scale_x},
                         {"scale_y", c.scale_y}});
    }
    nlohmann::ordered_json doc;
    doc["total"] = spec.total;
    doc["seed"] = spec.seed;
    doc["components"] = std::move(comps);
    return doc;
}

GridConfig grid_config_from_json(const nlohmann::json& doc) {
    return with_schema("grid config", [&] {
        GridConfig config{doc.at("screen_width").get<std::int64_t>(), doc.at("screen_height").get<std::int64_t>(),
                          doc.at("sa_side").get<std::int64_t>()};
        config.validate();
        return config;
    });
}

DensityGrid grid_from_json(const nlohmann::json& doc) {
    return with_schema("grid", [&] {
        DensityGrid grid;
        grid.config = grid_config_from_json(doc.at("config"));
        grid.kind = density_kind_from_string(doc.at("kind").get<std::string>());
        const auto& rows = doc.at("values");
        if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != grid.config.rows()) {
            throw SchemaError("grid values do not match the configured row count");
        }
        grid.values.resize(grid.config.rows(), grid.config.cols());
        for (std::int64_t r = 0; r < grid.config.rows(); ++r) {
            const auto& row = rows.at(r);
            if (!row.is_array() || static_cast<std::int64_t>(row.size()) != grid.config.cols()) {
                throw SchemaError("grid row " + std::to_string(r) + " does not match the configured column count");
            }
            for (std::int64_t c = 0; c < grid.config.cols(); ++c) grid.values(r, c) = row.at(c).get<std::int64_t>();
        }
        return grid;
    });
}

DensityHistogram histogram_from_json(const nlohmann::json& doc) {
    return with_schema("histogram", [&] {
        DensityHistogram hist;
        for (const auto& e : doc.at("entries")) {
            hist.entries.push_back({e.at("density").get<std::int64_t>(), e.at("sa_count").get<std::int64_t>()});
        }
        return hist;
    });
}

SamplingPlan plan_from_json(const nlohmann::json& doc) {
    return with_schema("plan", [&] {
        SamplingPlan plan;
        plan.config = grid_config_from_json(doc.at("config"));
        plan.seed = doc.at("seed").get<std::uint64_t>();
        plan.partition.requested_levels = doc.at("requested_levels").get<std::int64_t>();
        for (const auto& l : doc.at("levels")) {
            plan.partition.levels.push_back({l.at("density_lo").get<std::int64_t>(), l.at("density_hi").get<std::int64_t>(),
                                             l.at("sa_count").get<std::int64_t>(), l.at("target").get<std::int64_t>()});
        }
        for (const auto& e : doc.at("entries")) {
            plan.entries.push_back({e.at("row").get<std::int64_t>(), e.at("col").get<std::int64_t>(),
                                    e.at("count").get<std::int64_t>(), e.at("retain").get<std::int64_t>(),
                                    e.at("target").get<std::int64_t>()});
        }
        return plan;
    });
}

GeneratorSpec generator_spec_from_json(const nlohmann::json& doc) {
    return with_schema("generator spec", [&] {
        GeneratorSpec spec;
        spec.total = doc.at("total").get<std::size_t>();
        spec.seed = doc.value("seed", std::uint64_t{0});
        for (const auto& c : doc.at("components")) {
            GeneratorComponent comp;
            const auto kind = c.at("kind").get<std::string>();
            if (kind == "uniform_box")
                comp.kind = ComponentKind::uniform_box;
            else if (kind == "gaussian_blob")
                comp.kind = ComponentKind::gaussian_blob;
            else
                throw SchemaError("unknown component kind '" + kind + "'");
            comp.weight = c.at("weight").get<double>();
            comp.center_x = c.at("center_x").get<double>();
            comp.center_y = c.at("center_y").get<double>();
            comp.scale_x = c.at("scale_x").get<double>();
            comp.scale_y = c.at("scale_y").get<double>();
            spec.components.push_back(comp);
        }
        spec.validate();
        return spec;
    });
}

std::string dump_document(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string encode_pgm(const Raster& raster) {
    std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(raster.width * raster.height));
    for (std::int64_t y = 0; y < raster.height; ++y) {
        for (std::int64_t x = 0; x < raster.width; ++x) out.push_back(raster.bitmap(y, x) ? '\xff' : '\0');
    }
    return out;
}

Raster decode_pgm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    std::int64_t width = 0, height = 0, maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (!in || magic != "P5" || width < 1 || height < 1 || maxval != 255) throw SchemaError("not an 8-bit P5 graymap");
    in.get();  // single whitespace before the payload
    const auto offset = static_cast<std::size_t>(in.tellg());
    if (bytes.size() - offset != static_cast<std::size_t>(width * height)) {
        throw SchemaError("graymap payload size does not match its header");
    }
    Raster raster;
    raster.width = width;
    raster.height = height;
    raster.bitmap.resize(height, width);
    for (std::int64_t i = 0; i < width * height; ++i) {
        raster.bitmap.data()[i] = bytes[offset + static_cast<std::size_t>(i)] != '\0' ? 1 : 0;
    }
    return raster;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in && !in.eof()) throw IoError("failed reading " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

void write_raster(const Raster& raster, const std::filesystem::path& path) { write_file(path, encode_pgm(raster)); }
void write_grid(const DensityGrid& grid, const std::filesystem::path& path) {
    write_file(path, dump_document(to_json(grid)));
}
void write_histogram(const DensityHistogram& hist, const std::filesystem::path& path) {
    write_file(path, dump_document(to_json(hist)));
}
void write_plan(const SamplingPlan& plan, const std::filesystem::path& path) {
    write_file(path, dump_document(to_json(plan)));
}

namespace {

nlohmann::json parse_document(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace

Raster read_raster(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }
DensityGrid read_grid(const std::filesystem::path& path) { return grid_from_json(parse_document(path)); }
DensityHistogram read_histogram(const std::filesystem::path& path) {
    return histogram_from_json(parse_document(path));
}
SamplingPlan read_plan(const std::filesystem::path& path) { return plan_from_json(parse_document(path)); }

}  // namespace densify
