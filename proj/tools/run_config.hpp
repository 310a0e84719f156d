#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "krein/boundary_conditions.hpp"
#include "krein/geometry.hpp"
#include "krein/krein_solver.hpp"

namespace krein::app {

// Invalid or incomplete configuration; `pointer` is the JSON pointer of the
// offending key.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer(pointer) {}
  std::string pointer;
};

enum class TaskKind { Verify, Eig, Green, Scatter, Svd };

const char* task_name(TaskKind kind);
TaskKind parse_task_name(const std::string& name);

struct VerifyTask {
  int n_models = 50;
};

struct EigTask {
  ScanBranch branch = ScanBranch::Oscillatory;
  double s_min = 1e-3;
  double s_max = 40.0;
  int n_scan = 100;
  Box eigenfunction_box{-1.0, 1.0, -1.0, 1.0};
  int eigenfunction_n = 0;
};

struct GreenTask {
  cplx z{1.0, 0.0};
  Point source{0.3, 0.1};
  Box box{-2.0, 2.0, -2.0, 2.0};
  int n = 21;
};

struct ScatterTask {
  double k = 2.0;
  Point direction{1.0, 0.0};
  int n_angles = 64;
  std::vector<double> epsilon_path{1e-2, 1e-3, 1e-4};
  std::vector<Point> near_points;
};

struct SvdTask {
  cplx z{1.0, 0.0};
  Box box{-2.0, 2.0, -2.0, 2.0};
  int n_samples = 400;
};

struct RunConfig {
  std::string curve_kind = "circle";
  CurveParam curve = CurveParam::circle(1.0);
  int n_gamma = 256;
  int m_arc = 128;
  ExtensionSpec extension;
  TaskKind task = TaskKind::Verify;
  VerifyTask verify;
  EigTask eig;
  GreenTask green;
  ScatterTask scatter;
  SvdTask svd;
  std::string out_dir = "out";
  std::uint64_t seed = 20240611;

  // The grid the extension lives on: the closed curve, or the graded arc.
  BoundaryGrid grid() const;

  // Fully resolved configuration, defaults included.
  nlohmann::json to_json() const;
};

// Throws ConfigError on unknown keys, missing required keys, wrong types or
// values violating the documented ranges.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace krein::app
