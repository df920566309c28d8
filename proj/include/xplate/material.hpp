#ifndef XPLATE_MATERIAL_HPP
#define XPLATE_MATERIAL_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace xplate {

/// Elastic and expansion properties of a single orthotropic ply at one
/// environmental state. Moduli in Pa, expansion coefficients per K and per
/// unit moisture fraction, density in kg/m^3.
struct LaminaProperties {
  double E1 = 0.0;
  double E2 = 0.0;
  double G12 = 0.0;
  double G13 = 0.0;
  double G23 = 0.0;
  double nu12 = 0.0;
  double alpha1 = 0.0;  // thermal expansion, fibre direction [1/K]
  double alpha2 = 0.0;  // thermal expansion, transverse [1/K]
  double beta1m = 0.0;  // moisture expansion, fibre direction [-]
  double beta2m = 0.0;  // moisture expansion, transverse [-]
  double rho = 1.0;

  double nu21() const { return nu12 * E2 / E1; }
  void validate() const;  // throws std::invalid_argument
};

/// Environment-dependent moduli of a ply material, tabulated against
/// moisture concentration C (in %) and temperature T (in K). The combined
/// (T, C) state is evaluated by adding the two moduli deltas relative to
/// the (300 K, 0 %) baseline; rows are interpolated piecewise linearly and
/// never extrapolated.
class MaterialTable {
 public:
  struct Row {
    double x;  // C in % or T in K
    double E1, E2, G12;  // Pa
  };

  MaterialTable(std::vector<Row> moisture, std::vector<Row> temperature,
                LaminaProperties fixed);

  /// Graphite/epoxy lamina data used throughout the studies.
  static MaterialTable graphite_epoxy();

  /// Parse the text format written by `save`: `moisture` / `temperature`
  /// section headers followed by `x E1 E2 G12` rows (GPa), plus
  /// `fixed <name> <value>` lines.
  static MaterialTable from_stream(std::istream& in);
  static MaterialTable from_file(const std::string& path);

  /// Properties at temperature T [K] and moisture concentration C [%].
  /// Throws std::out_of_range outside the tabulated ranges.
  LaminaProperties properties_at(double T, double C) const;

  double baseline_E2() const { return properties_at(300.0, 0.0).E2; }
  double rho() const { return fixed_.rho; }
  void set_rho(double rho) { fixed_.rho = rho; }

  /// Transverse shear moduli are derived from G12; the defaults carry the
  /// lamina rules G13 = G12 and G23 = 0.5 G12.
  void set_shear_rules(double g13_over_g12, double g23_over_g12) {
    g13_ratio_ = g13_over_g12;
    g23_ratio_ = g23_over_g12;
  }

  double min_T() const { return temperature_.front().x; }
  double max_T() const { return temperature_.back().x; }
  double min_C() const { return moisture_.front().x; }
  double max_C() const { return moisture_.back().x; }

 private:
  std::vector<Row> moisture_;     // x = C in %
  std::vector<Row> temperature_;  // x = T in K
  LaminaProperties fixed_;        // nu12, alphas, betas, rho
  double g13_ratio_ = 1.0;
  double g23_ratio_ = 0.5;
};

/// In-plane (3x3) and transverse-shear (2x2) reduced stiffness of a ply in
/// its material frame.
struct PlaneStressStiffness {
  Eigen::Matrix3d Q;
  Eigen::Matrix2d Qs;
};

/// Ply stiffness and expansion vectors rotated into the laminate frame.
/// Engineering (Voigt) shear convention throughout.
struct TransformedStiffness {
  Eigen::Matrix3d Qbar;
  Eigen::Matrix2d Qsbar;
  Eigen::Vector3d alpha_xy;  // (a_x, a_y, a_xy)
  Eigen::Vector3d beta_xy;   // (b_x, b_y, b_xy)
};

PlaneStressStiffness reduced_stiffness(const LaminaProperties& p);

TransformedStiffness transform_to_laminate_axes(const PlaneStressStiffness& q,
                                                const LaminaProperties& p,
                                                double theta_deg);

struct Ply {
  double angle_deg = 0.0;
  double thickness = 0.0;
};

/// Ordered ply stack, bottom (z = -h/2) to top (z = +h/2).
class LaminateStack {
 public:
  LaminateStack(std::vector<Ply> plies);

  /// Equal-thickness stack from angles, e.g. {0, 90, 90, 0}.
  static LaminateStack from_angles(const std::vector<double>& angles_deg,
                                   double total_thickness);

  const std::vector<Ply>& plies() const { return plies_; }
  double thickness() const { return h_; }
  /// n+1 z-interfaces, strictly increasing from -h/2 to +h/2.
  const std::vector<double>& interfaces() const { return z_; }
  bool symmetric() const;

 private:
  std::vector<Ply> plies_;
  std::vector<double> z_;
  double h_ = 0.0;
};

/// Through-thickness laminate integrals: extension / coupling / bending
/// stiffness, corrected transverse shear stiffness, inertia, and the
/// hygrothermal stress resultants for the given (T, C) state.
struct LaminateIntegrals {
  Eigen::Matrix3d A, B, D;
  Eigen::Matrix2d As;        // includes the 5/6 shear correction
  double p = 0.0;            // translational inertia per area
  double I = 0.0;            // rotary inertia per area
  Eigen::Vector3d N_hygro;   // hygrothermal force resultant
  Eigen::Vector3d M_hygro;   // hygrothermal moment resultant
};

/// Shear correction factor applied to As.
inline constexpr double kShearCorrection = 5.0 / 6.0;

struct Environment {
  double T = 300.0;  // K
  double C = 0.0;    // %
};

/// Integrate the stack at environment `env`. Moduli are looked up at
/// `property_env` (defaults to `env`); the hygrothermal strains always use
/// env's delta-T and delta-C relative to (300 K, 0 %). Passing the
/// reference state as `property_env` keeps the elastic stiffness at the
/// reference moduli while the environment acts through the prestress.
LaminateIntegrals laminate_integrals(const LaminateStack& stack,
                                     const MaterialTable& table,
                                     const Environment& env);
LaminateIntegrals laminate_integrals(const LaminateStack& stack,
                                     const MaterialTable& table,
                                     const Environment& env,
                                     const Environment& property_env);

}  // namespace xplate

#endif
