#pragma once

#include <map>
#include <string>
#include <vector>

namespace diskfem {

struct ConvergenceRecord {
  int np = 0;
  long long dofs = 0;
  double linf_error = 0.0;
  double wall_ms = 0.0;
};

struct SlicePoint2D {
  double r, theta, value;
};
struct SlicePoint3D {
  double x, y, z, value;
};
struct EnergyRecord {
  int step;
  double time;
  double l2_drift;
};

enum class EmitFormat { Csv, Json };
EmitFormat parse_format(const std::string& s);

void emit_convergence(const std::vector<ConvergenceRecord>& records, EmitFormat format,
                      const std::string& path);
void emit_slice(const std::vector<SlicePoint2D>& points, EmitFormat format,
                const std::string& path);
void emit_slice(const std::vector<SlicePoint3D>& points, EmitFormat format,
                const std::string& path);
void emit_energy(const std::vector<EnergyRecord>& records, EmitFormat format,
                 const std::string& path);

std::vector<ConvergenceRecord> read_convergence_csv(const std::string& path);

/// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace diskfem
