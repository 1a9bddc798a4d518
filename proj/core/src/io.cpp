#include "diskfem/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "diskfem/errors.hpp"

namespace diskfem {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  os << std::setprecision(17);
  return os;
}

}  // namespace

EmitFormat parse_format(const std::string& s) {
  if (s == "csv") return EmitFormat::Csv;
  if (s == "json") return EmitFormat::Json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

void emit_convergence(const std::vector<ConvergenceRecord>& records, EmitFormat format,
                      const std::string& path) {
  if (format == EmitFormat::Csv) {
    auto os = open_out(path);
    os << "np,dofs,linf_error,wall_ms\n";
    for (const auto& r : records) {
      os << r.np << "," << r.dofs << "," << r.linf_error << "," << r.wall_ms << "\n";
    }
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) {
    j.push_back({{"np", r.np},
                 {"dofs", r.dofs},
                 {"linf_error", r.linf_error},
                 {"wall_ms", r.wall_ms}});
  }
  open_out(path) << j.dump(2) << "\n";
}

void emit_slice(const std::vector<SlicePoint2D>& points, EmitFormat format,
                const std::string& path) {
  if (format == EmitFormat::Csv) {
    auto os = open_out(path);
    os << "r,theta,value\n";
    for (const auto& p : points) os << p.r << "," << p.theta << "," << p.value << "\n";
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : points) j.push_back({{"r", p.r}, {"theta", p.theta}, {"value", p.value}});
  open_out(path) << j.dump(2) << "\n";
}

void emit_slice(const std::vector<SlicePoint3D>& points, EmitFormat format,
                const std::string& path) {
  if (format == EmitFormat::Csv) {
    auto os = open_out(path);
    os << "x,y,z,value\n";
    for (const auto& p : points) {
      os << p.x << "," << p.y << "," << p.z << "," << p.value << "\n";
    }
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : points) {
    j.push_back({{"x", p.x}, {"y", p.y}, {"z", p.z}, {"value", p.value}});
  }
  open_out(path) << j.dump(2) << "\n";
}

void emit_energy(const std::vector<EnergyRecord>& records, EmitFormat format,
                 const std::string& path) {
  if (format == EmitFormat::Csv) {
    auto os = open_out(path);
    os << "step,time,l2_drift\n";
    for (const auto& r : records) os << r.step << "," << r.time << "," << r.l2_drift << "\n";
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) {
    j.push_back({{"step", r.step}, {"time", r.time}, {"l2_drift", r.l2_drift}});
  }
  open_out(path) << j.dump(2) << "\n";
}

std::vector<ConvergenceRecord> read_convergence_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open input file: " + path);
  std::string line;
  std::getline(is, line);
  if (line != "np,dofs,linf_error,wall_ms") {
    throw ConfigError("unexpected convergence CSV header: " + line);
  }
  std::vector<ConvergenceRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    ConvergenceRecord r;
    std::getline(ss, tok, ',');
    r.np = std::stoi(tok);
    std::getline(ss, tok, ',');
    r.dofs = std::stoll(tok);
    std::getline(ss, tok, ',');
    r.linf_error = std::stod(tok);
    std::getline(ss, tok, ',');
    r.wall_ms = std::stod(tok);
    out.push_back(r);
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = value;
  }
  return out;
}

}  // namespace diskfem
