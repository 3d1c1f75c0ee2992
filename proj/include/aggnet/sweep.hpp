#pragma once

#include "aggnet/stochastic.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aggnet {

enum class Mode { Consensus, Gap, Regime, RobustSet, RhoStar, LocalCompare, Simulate };

const char* to_string(Mode m) noexcept;
/// Throws ConfigError for an unknown name.
Mode mode_from_string(const std::string& name);

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;
    bool log = false;

    /// Grid points; `steps` of them, ends included.
    std::vector<double> points() const;
};

/// Symbols accepted as fixed values or ranges.
const std::vector<std::string>& sweep_symbols();

struct SweepConfig {
    Mode mode = Mode::Gap;
    std::map<std::string, double> fixed;
    std::map<std::string, ParamRange> ranges;
    std::uint64_t seed = 0;

    /// Explicit network for consensus mode; the expected two-island matrix
    /// is used when absent.
    std::optional<Matrix> t;
    std::optional<RowVector> alpha_vector;
    std::optional<Vector> beta_vector;
    std::optional<Vector> p0;

    /// Reads a flat JSON object. Scalars are fixed values; strings of the
    /// form "lo:hi:steps[:log]" or objects {lo, hi, steps, scale} are ranges.
    /// Throws ConfigError.
    static SweepConfig from_json(const nlohmann::json& j, Mode mode);
    static SweepConfig from_file(const std::string& path, Mode mode);

    /// Applies "key=value" or "key=lo:hi:steps[:log]", replacing any
    /// earlier value of the key. Throws ConfigError.
    void set(const std::string& assignment);

    /// Domain checks per symbol. Throws ConfigError naming the symbol.
    void validate() const;

    nlohmann::json to_json() const;
};

/// A missing cell (quantity undefined for that row) is std::nullopt.
using Cell = std::optional<double>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json metadata;

    bool operator==(const ResultTable& o) const {
        return columns == o.columns && rows == o.rows;
    }
};

struct RunOptions {
    int threads = 1;
    /// Simulate mode only: where to write the trajectory of a one-point run.
    std::string trajectory_path;
};

inline constexpr const char* kToolVersion = "aggnet 0.1.0";

/// One row per grid point, sorted by the swept values.
/// Throws ConfigError, IoError, or any module error.
ResultTable run(const SweepConfig& config, const RunOptions& opts = {});

enum class Format { Csv, Json };

/// Throws ConfigError.
Format format_from_string(const std::string& name);

/// CSV: header row then values at 17 significant digits, empty for
/// missing. JSON: {metadata, columns, rows} with null for missing.
void emit(const ResultTable& table, Format format, std::ostream& out);
/// Throws IoError.
void emit_file(const ResultTable& table, Format format, const std::string& path);

/// Inverse of the CSV form of emit (metadata is not carried by CSV).
/// Throws IoError on malformed input.
ResultTable parse_csv(std::istream& in);

}  // namespace aggnet
