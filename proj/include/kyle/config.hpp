#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kyle/equilibrium.hpp"
#include "kyle/volatility.hpp"

namespace kyle {

// Raised for any malformed, incomplete, or semantically invalid config.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A fully parsed experiment description. `market.frac` carries hurst/epsilon;
// `vol` is absent only for experiments that do not consume a volatility model
// (tracked by `has_vol`).
struct ExperimentConfig {
    std::string experiment;
    MarketParams market;
    VolModel vol = ConstantVol{1.0};
    bool has_vol = false;
    std::uint64_t paths = 0;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::uint64_t ode_steps = 4096;
    std::string out_dir;
    // Deterministic impact figures support two sigma-path conventions:
    // "evolving" (sigma_t = sigma0 * e^{m t}) or "frozen" (sigma_t = sigma0).
    std::string sigma_convention = "evolving";
};

// Names of all supported experiments, in canonical listing order.
const std::vector<std::string>& experiment_names();

// Parses the INI-style config text. Reports unknown sections/keys and
// duplicate keys with their line number, and lists every missing required
// key at once. Does not apply range validation (see validate_config) so the
// CLI can layer flag overrides on top before validating.
ExperimentConfig parse_config(const std::string& text);

// Reads the file and parses it. Unreadable file -> ConfigError.
ExperimentConfig load_config(const std::string& path);

// Range/semantic validation: positive sizes, model parameter checks,
// experiment/model compatibility. Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

// Canonical serialization: fixed section and key order, shortest
// round-trip number formatting, one blank line between sections, trailing
// newline. parse_config(dump_config(c)) reproduces c, and dumping a file
// that is already canonical reproduces it byte for byte.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace kyle
