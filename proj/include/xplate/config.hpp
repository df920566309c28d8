#ifndef XPLATE_CONFIG_HPP
#define XPLATE_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xplate/analysis.hpp"

namespace xplate {

/// Parsed run configuration. Numeric keys and the layup may carry value
/// lists (comma-separated or lo:step:hi ranges); the cartesian product of
/// all multi-valued keys forms the sweep plan in a fixed key order.
///
/// Grammar: one `key = value` per line, `#` starts a comment. Keys:
///   a, b, b_over_a, h, a_over_h            plate geometry [m, -]
///   mesh = NX NY                            element counts
///   layup = 0/90/90/0                       ply angles, equal thickness
///   cutout = none | circle | ellipse
///   center = X Y                            cutout centre [m]
///   r, r_over_a                             circle radius
///   d, e, d_over_a, e_over_a, psi           ellipse semi-axes, orientation
///   T, C                                    environment [K, %]
///   bc = SSSS | CCCC
///   mode = static | vibration | buckling
///   eigencount = N
///   out = PATH                              CSV output path
///   dump_fields = true | false              VTK dumps per case
struct RunConfig {
  std::map<std::string, std::vector<double>> axes;  // numeric sweepable keys
  std::vector<std::vector<double>> layups;          // parsed layup alternatives
  std::vector<std::string> layup_labels;
  int nx = 30, ny = 30;
  BoundaryCondition bc = BoundaryCondition::SSSS;
  AnalysisMode mode = AnalysisMode::Vibration;
  int eigencount = 4;
  std::optional<CutoutKind> cutout_kind;  // deduced from keys when absent
  std::optional<Eigen::Vector2d> center;
  std::string out_path;
  bool dump_fields = false;

  /// Number of cases in the sweep plan.
  std::size_t case_count() const;
  bool is_single() const { return case_count() == 1; }
};

/// Parse and validate; throws ConfigError with the offending line number.
RunConfig parse_config(std::istream& in, const MaterialTable& table);
RunConfig parse_config(const std::string& text, const MaterialTable& table);
RunConfig parse_config_file(const std::string& path, const MaterialTable& table);

/// Deterministic cartesian expansion of the sweep axes into concrete cases,
/// resolving derived geometry (b_over_a, a_over_h, r_over_a, ...).
struct SweepCase {
  CaseSetup setup;
  std::string layup_label;
};
std::vector<SweepCase> expand_sweep(const RunConfig& cfg,
                                    const MaterialTable& table);

}  // namespace xplate

#endif
