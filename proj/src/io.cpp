#include "pairglow/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "pairglow/errors.hpp"

namespace pairglow::io {

using nlohmann::json;

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void ensure_directory(const std::filesystem::path& dir)
{
    if (dir.empty()) {
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory " + dir.string() +
                          (ec ? ": " + ec.message() : ""));
    }
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
  : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size())
{
    if (!out_) {
        throw OutputError("cannot open " + path.string() + " for writing");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? "," : "") << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::optional<double>>& values)
{
    if (values.size() != columns_) {
        throw std::logic_error("csv row width does not match header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out_ << ',';
        }
        if (values[i]) {
            out_ << format_double(*values[i]);
        }
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::optional<double>> wrapped(values.begin(), values.end());
    row(wrapped);
}

void CsvWriter::close()
{
    out_.flush();
    if (!out_) {
        throw OutputError("write to " + path_.string() + " failed");
    }
    out_.close();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw OutputError("write to " + path.string() + " failed");
    }
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

int line_of_offset(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

double number_at(const json& j, const char* key)
{
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing key \"") + key + "\"");
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("key \"") + key + "\" must be a number");
    }
    return j.at(key).get<double>();
}

std::optional<double> optional_number(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return number_at(j, key);
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

json parse_document(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    }
    catch (const json::parse_error& e) {
        const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what(),
                          line);
    }
}

int locate_line(const std::string& text, const json::json_pointer& ptr)
{
    std::vector<std::string> keys;
    for (auto p = ptr; !p.empty(); p = p.parent_pointer()) {
        keys.insert(keys.begin(), p.back());
    }
    std::size_t pos = 0;
    bool found = false;
    for (const auto& key : keys) {
        const auto hit = text.find('"' + key + '"', pos);
        if (hit == std::string::npos) {
            break;
        }
        pos = hit + key.size() + 2;
        found = true;
    }
    return found ? line_of_offset(text, pos) : 0;
}

AtomPairConfig atom_pair_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ConfigError("physical configuration must be a JSON object");
    }
    const double xi = j.contains("xi") ? number_at(j, "xi") : 1.0;
    return AtomPairConfig::make(optional_number(j, "omega0_rad_s"), optional_number(j, "lambda0_m"),
                                number_at(j, "gamma0_rad_s"), number_at(j, "mass_kg"), xi);
}

MotionDistribution distribution_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ConfigError("distribution must be a JSON object");
    }
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw ConfigError("distribution needs a string \"kind\"");
    }
    const auto kind = j.at("kind").get<std::string>();
    const double to_x = 2.0 * constants::pi;
    const double rbar = number_at(j, "rbar_over_lambda0") * to_x;
    if (kind == "delta") {
        if (auto dr = optional_number(j, "dr_over_lambda0"); dr && *dr != 0.0) {
            throw ConfigError("delta distribution requires dr_over_lambda0 = 0");
        }
        return MotionDistribution::delta(rbar);
    }
    if (kind == "radial_gaussian") {
        return MotionDistribution::radial_gaussian(rbar, number_at(j, "dr_over_lambda0") * to_x);
    }
    throw ConfigError("unknown distribution kind \"" + kind + "\"");
}

json to_json(const CriticalTimes& ct)
{
    return json{{"eps1", optional_to_json(ct.eps1)},
                {"eps2", optional_to_json(ct.eps2)},
                {"t1", optional_to_json(ct.t1)},
                {"t2", optional_to_json(ct.t2)},
                {"esd_occurs", ct.esd_occurs},
                {"esb_occurs", ct.esb_occurs},
                {"c_stationary", ct.c_stationary},
                {"disentanglement_window", optional_to_json(ct.disentanglement_window())},
                {"extrapolated", ct.extrapolated}};
}

json to_json(const RegimeReport& report)
{
    json margins = json::array();
    for (const auto& m : report.margins) {
        margins.push_back({{"condition", m.name},
                           {"ratio", m.ratio},
                           {"required", m.required},
                           {"pass", m.pass}});
    }
    return json{{"schema", 1},
                {"recoil_energy_J", report.recoil_energy},
                {"dispersion_length_m", report.dispersion_length},
                {"dr_lower_bound_m", report.dr_lower_bound},
                {"dr_final_m", report.dr_final},
                {"excited_lifetime_s", report.excited_lifetime},
                {"strict_factor", report.strict_factor},
                {"margins", margins},
                {"all_pass", report.all_pass()},
                {"warnings", report.warnings}};
}

json to_json(const PatternAverage& avg)
{
    return json{{"mu_bar", avg.mu_bar},
                {"method", avg.method == AveragingMethod::FullSpectral ? "full_spectral"
                                                                        : "near_field_approx"},
                {"est_error", avg.est_error}};
}

std::string format_table(const RegimeReport& report)
{
    std::ostringstream out;
    out << std::setprecision(6);
    out << "recoil energy E_r        " << report.recoil_energy << " J\n";
    out << "dispersion length l_d    " << report.dispersion_length << " m\n";
    out << "spread lower bound       " << report.dr_lower_bound << " m\n";
    out << "spread after lifetime    " << report.dr_final << " m\n";
    out << "strict factor            " << report.strict_factor << "\n\n";
    out << std::left << std::setw(58) << "condition" << std::setw(14) << "ratio"
        << "result\n";
    for (const auto& m : report.margins) {
        out << std::left << std::setw(58) << m.name << std::setw(14) << m.ratio
            << (m.pass ? "PASS" : "FAIL") << '\n';
    }
    for (const auto& w : report.warnings) {
        out << "warning: " << w << '\n';
    }
    return out.str();
}

} // namespace pairglow::io
