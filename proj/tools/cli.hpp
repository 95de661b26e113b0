#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace critlab::cli {

enum ExitCode { ok = 0, usage = 1, numeric = 2, io = 3 };

// Everything that determines an output file's bytes.  Output paths are not part
// of it, so a rerun may write elsewhere and still match byte for byte.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 42;
    int workers = 1;
    int order = 25;

    std::vector<int> perturb_y;  // verify-series: 1-based i, j and power

    std::string emit = "json";  // eigen

    double r = 1;                  // dump-blocks
    int series_precision = 0;

    std::vector<double> t_grid;    // kacrice
    std::int64_t samples = 1000000;
    std::string source = "closed";

    std::string model = "bf";      // simulate
    int degree = 60;
    int sections = 500;
    std::string bins = "0:0.1:3";
    double window = 0;             // 0 picks the model default
    std::vector<double> center = {0, 0};
    std::string edge = "border";
    double grid_density = 1;
    double tol = 1e-10;

    std::string j_curve, pairs;    // report inputs

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Pulls the embedded config out of a previous output: a "# config " line in
// CSV/text files, a "config" member in JSON, or a bare JSON object.
RunConfig load_config(const std::string& path);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace critlab::cli
