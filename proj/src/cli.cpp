#include "densify/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "densify/io.hpp"
#include "densify/server.hpp"

namespace densify {

namespace {

/// Invalid flag combination detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::int64_t parse_integer(const std::string& text, const std::string& flag) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw UsageError(flag + " expects an integer, got '" + text + "'");
    return value;
}

struct ScreenFlags {
    std::int64_t width = 1280;
    std::int64_t height = 1024;
    std::int64_t sa_side = 8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--width", width, "Screen width in pixels")->capture_default_str();
        cmd->add_option("--height", height, "Screen height in pixels")->capture_default_str();
        cmd->add_option("--sa-side", sa_side, "Sample-area side in pixels")->capture_default_str();
    }

    GridConfig config() const {
        GridConfig c{width, height, sa_side};
        c.validate();
        return c;
    }
};

struct InputFlags {
    std::string input;
    std::string x_col = "x";
    std::string y_col = "y";
    char delimiter = ',';

    void attach(CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--input", input, "Delimited text file with a header row");
        if (required) opt->required();
        cmd->add_option("--x-col", x_col, "Column mapped to the x axis")->capture_default_str();
        cmd->add_option("--y-col", y_col, "Column mapped to the y axis")->capture_default_str();
        cmd->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
    }

    Dataset load() const { return load_points(input, x_col, y_col, delimiter); }
};

void report_scene(std::ostream& out, const Dataset& ds, const SceneResult& scene) {
    out << "input " << ds.meta.point_count << " points";
    if (ds.meta.skipped_rows != 0) out << " (" << ds.meta.skipped_rows << " rows skipped)";
    out << "\noutput " << scene.points.size() << " points\n";
    if (scene.plan) {
        out << "levels " << scene.plan->partition.levels.size() << "\n";
        for (const Level& l : scene.plan->partition.levels) {
            out << "  level " << l.target << ": densities " << l.density_lo << ".." << l.density_hi << ", "
                << l.sa_count << " areas\n";
        }
    }
}

}  // namespace

std::string format_stats(TossParams params) {
    const auto s = occupancy_summary(params);
    std::string text;
    text += "points " + std::to_string(params.points) + ", pixels " + std::to_string(params.pixels) + "\n";
    text += "occupied " + fixed1(s.expected_occupied) + " px (" + fixed1(100.0 * s.occupied_fraction) + "%)\n";
    text += "collisions " + fixed1(s.expected_collisions) + " (" + fixed1(100.0 * s.collision_fraction) +
            "%), free " + fixed1(s.expected_free) + " px (" + fixed1(100.0 * s.free_fraction) + "%)\n";
    return text;
}

void write_artifacts(const SceneResult& scene, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    for (const auto& [name, bytes] : scene_artifacts(scene)) write_file(out_dir / name, bytes);
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
    const char* env = std::getenv("DENSIFY_SEED");
    if (env == nullptr || *env == '\0') return fallback;
    std::uint64_t value = 0;
    const std::string text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DomainError("DENSIFY_SEED must be a non-negative integer, got '" + text + "'");
    }
    return value;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scatter-plot density analysis and density-preserving sampling"};
    app.require_subcommand(1);

    // stats
    auto* stats = app.add_subcommand("stats", "Expected occupancy, collisions and free space for n points on p pixels");
    std::int64_t stat_points = 0;
    std::int64_t stat_pixels = 64;
    stats->add_option("--points", stat_points, "Points tossed")->required();
    stats->add_option("--pixels", stat_pixels, "Pixels available")->required();

    // pmf
    auto* pmf = app.add_subcommand("pmf", "Exact collision-count distribution (n <= 512, p <= 4096)");
    std::int64_t pmf_points = 0;
    std::int64_t pmf_pixels = 64;
    pmf->add_option("--points", pmf_points, "Points tossed")->required();
    pmf->add_option("--pixels", pmf_pixels, "Pixels available")->required();

    // render
    auto* render_cmd = app.add_subcommand("render", "Sample a dataset and write raster, grids, histograms and plan");
    InputFlags render_in;
    ScreenFlags render_screen;
    std::string method = "none";
    double ratio = 1.0;
    std::string levels = "auto";
    std::optional<std::uint64_t> render_seed;
    std::string render_out;
    render_in.attach(render_cmd, true);
    render_screen.attach(render_cmd);
    render_cmd->add_option("--method", method, "none | uniform | nonuniform")
        ->check(CLI::IsMember({"none", "uniform", "nonuniform"}))
        ->capture_default_str();
    render_cmd->add_option("--ratio", ratio, "Fraction kept by uniform sampling")->capture_default_str();
    render_cmd->add_option("--levels", levels, "Non-uniform level count, or auto")->capture_default_str();
    render_cmd->add_option("--seed", render_seed, "Random seed (falls back to $DENSIFY_SEED, then 0)");
    render_cmd->add_option("--out-dir", render_out, "Directory for the artifacts")->required();

    // filter
    auto* filter_cmd = app.add_subcommand("filter", "Keep only areas whose density lies in [min, max]");
    InputFlags filter_in;
    ScreenFlags filter_screen;
    std::int64_t filter_min = 0;
    std::string filter_max;
    std::string filter_kind = "data";
    std::string filter_out;
    filter_in.attach(filter_cmd, true);
    filter_screen.attach(filter_cmd);
    filter_cmd->add_option("--min", filter_min, "Lowest density kept")->capture_default_str();
    filter_cmd->add_option("--max", filter_max, "Highest density kept (default unbounded)");
    filter_cmd->add_option("--kind", filter_kind, "data | represented")
        ->check(CLI::IsMember({"data", "represented"}))
        ->capture_default_str();
    filter_cmd->add_option("--out-dir", filter_out, "Directory for the artifacts")->required();

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
    std::string preset = "parcel";
    std::string spec_path;
    std::size_t gen_points = 160000;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_output;
    gen->add_option("--preset", preset, "parcel | uniform")
        ->check(CLI::IsMember({"parcel", "uniform"}))
        ->capture_default_str();
    gen->add_option("--spec", spec_path, "Generator spec document (overrides --preset)");
    gen->add_option("--points", gen_points, "Point count")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Random seed (falls back to $DENSIFY_SEED, then 0)");
    gen->add_option("--output", gen_output, "CSV file to write")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the local density-analysis service");
    InputFlags serve_in;
    ScreenFlags serve_screen;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::optional<std::uint64_t> serve_seed;
    serve_in.attach(serve, false);
    serve_screen.attach(serve);
    serve->add_option("--port", port, "TCP port")->capture_default_str();
    serve->add_option("--host", host, "Interface to bind")->capture_default_str();
    serve->add_option("--seed", serve_seed, "Default seed for sampling requests");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (stats->parsed()) {
            out << format_stats({stat_points, stat_pixels});
        } else if (pmf->parsed()) {
            const auto dist = collision_pmf({pmf_points, pmf_pixels});
            out << "collisions,probability\n";
            char buf[64];
            for (const auto& [k, pr] : dist.mass) {
                std::snprintf(buf, sizeof buf, "%.17g", pr);
                out << k << ',' << buf << '\n';
            }
        } else if (render_cmd->parsed()) {
            const GridConfig config = render_screen.config();
            SampleParams params;
            params.method = method_from_string(method);
            params.ratio = ratio;
            params.seed = render_seed ? *render_seed : seed_from_environment();
            if (levels != "auto") params.levels = parse_integer(levels, "--levels");
            const Dataset ds = render_in.load();
            const SceneResult scene = run_sampling(ds.points, ds.meta.bounds, config, params);
            write_artifacts(scene, render_out);
            report_scene(out, ds, scene);
        } else if (filter_cmd->parsed()) {
            const GridConfig config = filter_screen.config();
            FilterParams params;
            params.kind = density_kind_from_string(filter_kind);
            params.min = filter_min;
            if (!filter_max.empty() && filter_max != "inf") params.max = parse_integer(filter_max, "--max");
            if (params.min > params.max) throw UsageError("--min must not exceed --max");
            const Dataset ds = filter_in.load();
            SceneResult scene;
            scene.points = run_filter(ds.points, ds.meta.bounds, config, params);
            scene.rendering = render(scene.points, ds.meta.bounds, config);
            write_artifacts(scene, filter_out);
            report_scene(out, ds, scene);
        } else if (gen->parsed()) {
            const std::uint64_t seed = gen_seed ? *gen_seed : seed_from_environment();
            GeneratorSpec spec;
            if (!spec_path.empty()) {
                spec = generator_spec_from_json(nlohmann::json::parse(read_file(spec_path)));
            } else if (preset == "parcel") {
                spec = GeneratorSpec::parcel_like(gen_points, seed);
            } else {
                spec.total = gen_points;
                spec.seed = seed;
                spec.components = {{ComponentKind::uniform_box, 1.0, 0.5, 0.5, 0.5, 0.5}};
            }
            write_points(generate(spec), gen_output);
            out << "wrote " << spec.total << " points to " << gen_output << "\n";
        } else if (serve->parsed()) {
            const std::uint64_t seed = serve_seed ? *serve_seed : seed_from_environment();
            Session session(serve_screen.config(), seed);
            if (!serve_in.input.empty()) session.load(serve_in.load());
            HttpService service(session);
            out << "serving on http://" << host << ":" << port << std::endl;
            service.run(host, port);
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const IoError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const SchemaError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const SizeError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace densify
