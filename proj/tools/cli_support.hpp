#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkdv/mkdv_sim.hpp"
#include "mkdv/potential.hpp"
#include "mkdv/soliton_engine.hpp"

namespace mkdv::cli {

using nlohmann::json;

struct RunContext {
    json config;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::string> outputs;
    json results = json::object();
};

/// Raised when an acceptance comparison or the self-test fails.
class AcceptanceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json load_config(const std::filesystem::path& path);

double get_number(const json& j, const std::string& key, double fallback);
double require_number(const json& j, const std::string& key);
int get_int(const json& j, const std::string& key, int fallback);
std::vector<double> get_numbers(const json& j, const std::string& key);
void check_keys(const json& j, const std::string& where, const std::vector<std::string>& allowed);

/// Builds the initial field from a "potential" block.
PotentialSample build_potential(const json& spec, std::uint64_t seed);
SolitonConfig build_solitons(const json& list);
SimConfig build_sim_config(const json& spec);
std::vector<double> build_x_grid(const json& spec);

std::string fmt(double v);

class TableWriter {
public:
    TableWriter(RunContext& ctx, const std::string& name, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);
    ~TableWriter();

private:
    std::string path_;
    std::string buffer_;
};

void write_manifest(const RunContext& ctx, const std::string& command);

}  // namespace mkdv::cli
