#ifndef XPLATE_ANALYSIS_HPP
#define XPLATE_ANALYSIS_HPP

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "xplate/assembly.hpp"
#include "xplate/eigensolver.hpp"
#include "xplate/errors.hpp"

namespace xplate {

enum class AnalysisMode { Static, Vibration, Buckling };

struct AnalysisCase {
  AnalysisMode mode = AnalysisMode::Vibration;
  Environment env;  // T [K], C [%]
  BoundaryCondition bc = BoundaryCondition::SSSS;
  int eigencount = 4;
};

/// One complete analysis configuration: plate, mesh, layup, cutout, case.
struct CaseSetup {
  double a = 1.0, b = 1.0, h = 0.01;
  int nx = 30, ny = 30;
  std::vector<double> layup{0.0, 90.0, 90.0, 0.0};
  CutoutSpec cutout;
  AnalysisCase analysis;
};

struct AnalysisResult {
  // vibration
  std::vector<double> omega;  // rad/s, ascending
  std::vector<double> Omega;  // omega * a^2/h * sqrt(rho / E2_ref)
  // buckling
  std::vector<double> lambda;             // load multipliers, ascending positive
  std::vector<double> lambda_normalized;  // lambda / reference (no cutout, baseline env)
  double reference_lambda = 0.0;
  // static
  double max_deflection = 0.0;
  Eigen::VectorXd delta;  // full standard-dof vector
  // mode shapes (full standard-dof vectors), when requested
  std::vector<Eigen::VectorXd> mode_shapes;
};

/// Memoises the no-cutout baseline buckling load across sweep cases.
class ReferenceCache {
 public:
  double get_or_compute(const std::string& key, const std::function<double()>& fn);

 private:
  std::mutex mutex_;
  std::map<std::string, double> values_;
};

struct RunContext {
  const MaterialTable* table = nullptr;  // defaults to the built-in lamina data
  ReferenceCache* reference_cache = nullptr;
  bool want_modes = false;
  EigOptions eig;
};

/// Reference state at which the elastic stiffness, mass, and the
/// nondimensionalisation inputs are evaluated. The case environment acts
/// through the hygrothermal prestress.
inline constexpr Environment kReferenceEnv{300.0, 0.0};

AnalysisResult run_case(const CaseSetup& setup, const RunContext& ctx = {});

/// Resultant field of the unit uniaxial compressive edge load (N_xx = -1 on
/// x = 0, a). Uniform without a cutout; otherwise redistributed by a
/// membrane solve under self-equilibrated edge tractions with rigid-body
/// pinning.
ResultantField applied_load_resultants(const EnrichedModel& model,
                                       const GlobalDofMap& dofs,
                                       const LaminateIntegrals& lam,
                                       const SpMat& K);

}  // namespace xplate

#endif
