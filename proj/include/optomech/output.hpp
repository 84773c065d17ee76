#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "optomech/gaussian.hpp"
#include "optomech/model.hpp"
#include "optomech/nonclassicality.hpp"

namespace optomech {

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" otherwise.
std::string format_double(double x);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);

/// 2-space indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Writes <prefix>.meta.json with the wall-clock timestamp and tool name, so
/// the CSV and JSON bodies stay reproducible.
void write_metadata(const std::string& prefix, const std::string& verb);

/// {"modes": ["mirror", ...], "quadratures": ["q_mirror", "p_mirror", ...],
///  "sigma": [[...], ...]}
nlohmann::json state_to_json(const GaussianStated& state);
nlohmann::json operating_point_to_json(const OperatingPoint& op);

/// CSV with header "x,y,value", x = q(i) outer, y = p(j) inner.
std::string field_csv(const WignerField& field);
/// Grid metadata plus "values": flat row-major array, values[i*points_p + j]
/// at (q(i), p(j)).
nlohmann::json field_to_json(const WignerField& field);

}  // namespace optomech
