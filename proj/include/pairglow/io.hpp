#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pairglow/concurrence.hpp"
#include "pairglow/dipole_pattern.hpp"
#include "pairglow/physcore.hpp"

namespace pairglow::io {

/// An output file or directory could not be created or written.
class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Locale-independent shortest form with 17 significant digits.
std::string format_double(double v);

/// Comma-separated table with a header row. Missing values are empty cells.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<std::optional<double>>& values);
    void row(const std::vector<double>& values);
    void close();

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

void ensure_directory(const std::filesystem::path& dir);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Parses a JSON document, turning syntax errors into ConfigError with a
/// 1-based line number.
nlohmann::json parse_document(const std::string& text, const std::string& source);

/// Best-effort line of the value addressed by a JSON pointer, found by
/// walking the raw text key by key. 0 when not found.
int locate_line(const std::string& text, const nlohmann::json::json_pointer& ptr);

/// {omega0_rad_s | lambda0_m, gamma0_rad_s, mass_kg, xi}
AtomPairConfig atom_pair_from_json(const nlohmann::json& j);

/// {kind: "delta" | "radial_gaussian", rbar_over_lambda0, dr_over_lambda0},
/// converted to x = k0 r units.
MotionDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CriticalTimes& ct);
nlohmann::json to_json(const RegimeReport& report);
nlohmann::json to_json(const PatternAverage& avg);

/// Fixed-width human-readable table of a regime report.
std::string format_table(const RegimeReport& report);

} // namespace pairglow::io
