#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "densify/occupancy.hpp"
#include "densify/session.hpp"

namespace densify {

/// Process exit codes of the command line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitData = 3,
    kExitInternal = 4,
};

/// Occupancy report for n points on p pixels, percentages on the collision-curve axes.
std::string format_stats(TossParams params);

/// Writes every scene artifact into `out_dir`, creating it if needed.
void write_artifacts(const SceneResult& scene, const std::filesystem::path& out_dir);

/// Entry point of the `densify` tool. args[0] is the program name. When the
/// `serve` subcommand runs, this blocks until the service stops.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seed from $DENSIFY_SEED, or `fallback` when unset. Throws DomainError if malformed.
std::uint64_t seed_from_environment(std::uint64_t fallback = 0);

}  // namespace densify
