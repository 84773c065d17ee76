#include "optomech/output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "optomech/error.hpp"

namespace optomech {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericalError("cannot format double");
  return std::string(buf, end);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_metadata(const std::string& prefix, const std::string& verb) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  write_json(prefix + ".meta.json", {{"tool", "optomech"}, {"verb", verb}, {"created_utc", stamp}});
}

json state_to_json(const GaussianStated& state) {
  json j;
  j["modes"] = json::array();
  j["quadratures"] = json::array();
  for (Index k = 0; k < state.mode_count(); ++k) {
    const auto name = static_cast<std::size_t>(k) < state.modes.size()
                          ? std::string(to_string(state.modes[static_cast<std::size_t>(k)]))
                          : "mode" + std::to_string(k);
    j["modes"].push_back(name);
    j["quadratures"].push_back("q_" + name);
    j["quadratures"].push_back("p_" + name);
  }
  j["sigma"] = json::array();
  for (Index r = 0; r < state.sigma.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < state.sigma.cols(); ++c) row.push_back(state.sigma(r, c));
    j["sigma"].push_back(row);
  }
  return j;
}

json operating_point_to_json(const OperatingPoint& op) {
  return {{"alpha_re", op.alpha.real()},
          {"alpha_im", op.alpha.imag()},
          {"alpha_s", op.alpha_s},
          {"chi_si", op.chi},
          {"chi_eff_si", op.chi_eff},
          {"g_N_si", op.g_N},
          {"Delta_c_si", op.Delta_c},
          {"Delta_c_eff_si", op.Delta_c_eff},
          {"epsilon_si", op.epsilon},
          {"nbar", op.nbar},
          {"kappa_si", op.params.kappa},
          {"gamma_a_si", op.params.gamma_a},
          {"Delta_a_si", op.params.Delta_a},
          {"multistable", op.multistable},
          {"iterations", op.iterations},
          {"residual", op.residual}};
}

std::string field_csv(const WignerField& field) {
  std::string out = "x,y,value\n";
  const auto& g = field.grid;
  for (int i = 0; i < g.points_q; ++i) {
    const std::string x = format_double(g.q(i));
    for (int j = 0; j < g.points_p; ++j) {
      out += x;
      out += ',';
      out += format_double(g.p(j));
      out += ',';
      out += format_double(field.values(i, j));
      out += '\n';
    }
  }
  return out;
}

json field_to_json(const WignerField& field) {
  const auto& g = field.grid;
  json values = json::array();
  for (int i = 0; i < g.points_q; ++i)
    for (int j = 0; j < g.points_p; ++j) values.push_back(field.values(i, j));
  return {{"grid",
           {{"center_q", g.center_q},
            {"center_p", g.center_p},
            {"half_width_q", g.half_width_q},
            {"half_width_p", g.half_width_p},
            {"points_q", g.points_q},
            {"points_p", g.points_p},
            {"layout", "row-major: values[i*points_p + j] at (q_i, p_j)"}}},
          {"integral", field.integral()},
          {"negativity_volume", field.negativity_volume()},
          {"min_value", field.min_value()},
          {"values", std::move(values)}};
}

}  // namespace optomech
