#pragma once

#include "nemo/experiment.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nemo {

// Variables a sweep block may name.
enum class SweepVariable { Lexicon, Beta, TutoringInterval };

std::string_view to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(std::string_view s);

struct SweepSpec {
    SweepVariable variable = SweepVariable::Lexicon;
    std::vector<double> values;
};

struct RunConfig {
    ExperimentConfig experiment;
    std::optional<SweepSpec> sweep;
    std::string preset; // empty when built from a file alone
};

// Command-line values that take precedence over the config file.
struct ConfigOverrides {
    std::optional<double> beta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> l;
    std::optional<std::size_t> contexts;
    std::optional<std::size_t> tau;
    std::optional<std::string> order;
    std::optional<std::string> backend;
    std::optional<std::size_t> max_sentences;
    std::optional<std::size_t> tutoring_interval; // 0: none
    std::optional<std::size_t> repeats;
    std::optional<std::size_t> eval_every;
};

// "fig2a": n=1e5, p=0.05, beta=0.06, k_LEX=50, k_CONTEXT=20, other k=100,
// C=20, tau=2, l=4. "desk": n=1e4, p=0.05, beta=0.1, k_LEX=50,
// k_CONTEXT=20, other k=100, C=5, tau=2, l=3, 500 sentences.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

// Applies a config document on top of `base`. Every key is checked; errors
// name the offending key. Without a preset every area needs n, k, p and beta.
RunConfig apply_config(const nlohmann::json& doc, RunConfig base, bool from_preset);

// Seed precedence: overrides.seed, then the file, then `env_seed`
// (NEMO_SEED), then the preset. `file` may also be a run manifest, whose
// embedded config is used.
RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::optional<std::string>& preset_name,
                         const ConfigOverrides& overrides,
                         const std::optional<std::string>& env_seed = std::nullopt);

// Reads and parses a JSON file, reporting syntax errors by line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Resolved config in the file schema; apply_config(to_json(c)) == c.
nlohmann::ordered_json to_json(const RunConfig& c);

struct RunManifest {
    std::string command;
    nlohmann::ordered_json config;
    std::string version;
    std::string build_id;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string started_at;
    std::string finished_at; // empty until the run ends

    nlohmann::ordered_json to_json() const;
};

RunManifest make_manifest(std::string command, const RunConfig& config, int threads);
// UTC, ISO 8601 to the second.
std::string utc_timestamp();

std::string_view tool_version();
std::string_view build_id();

} // namespace nemo
