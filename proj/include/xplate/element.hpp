#ifndef XPLATE_ELEMENT_HPP
#define XPLATE_ELEMENT_HPP

#include <Eigen/Dense>

#include "xplate/levelset.hpp"
#include "xplate/material.hpp"

namespace xplate {

// Shear-flexible 4-node plate element, 5 dofs per node in the order
// (u0, v0, w0, bx, by), node-major: column 5*a + c. Transverse shear is
// assumed-natural-strain: covariant shear sampled at the edge midpoints of
// the parent square and interpolated linearly, which keeps the rotation
// field consistent with the w0 gradient and removes locking.

using ElementMatrix = Eigen::Matrix<double, 20, 20>;
using ElementVector = Eigen::Matrix<double, 20, 1>;

/// Bilinear shape functions and their parent-space gradients.
void shape_functions(double xi, double eta, Eigen::Vector4d& N,
                     Eigen::Matrix<double, 4, 2>& dN);

class Quad4Geometry {
 public:
  explicit Quad4Geometry(const Eigen::Matrix<double, 4, 2>& coords);

  const Eigen::Matrix<double, 4, 2>& coords() const { return coords_; }
  /// Jacobian rows are d(x,y)/dxi and d(x,y)/deta.
  Eigen::Matrix2d jacobian(double xi, double eta) const;
  double det_jacobian(double xi, double eta) const;
  /// Cartesian shape-function gradients (4x2) at a parent point.
  Eigen::Matrix<double, 4, 2> cartesian_gradients(double xi, double eta) const;
  Eigen::Vector2d map(double xi, double eta) const;

 private:
  Eigen::Matrix<double, 4, 2> coords_;
};

/// Strain-displacement operators at one quadrature point.
struct StrainOperators {
  Eigen::Matrix<double, 3, 20> Bp;  // membrane
  Eigen::Matrix<double, 3, 20> Bb;  // bending (curvature)
  Eigen::Matrix<double, 2, 20> Bs;  // transverse shear, field-consistent
  Eigen::Matrix<double, 2, 20> Gw;  // gradient of w0
};

/// Precomputed covariant shear rows at the four tying points of an element.
class ShearTying {
 public:
  explicit ShearTying(const Quad4Geometry& geom);
  /// Field-consistent Cartesian shear operator at (xi, eta).
  Eigen::Matrix<double, 2, 20> shear_B(const Quad4Geometry& geom, double xi,
                                       double eta) const;

 private:
  Eigen::Matrix<double, 1, 20> row_A_, row_C_;  // gamma_xi at eta = -1, +1
  Eigen::Matrix<double, 1, 20> row_D_, row_B_;  // gamma_eta at xi = -1, +1
};

StrainOperators strain_operators(const Quad4Geometry& geom,
                                 const ShearTying& tying, double xi, double eta);

ElementMatrix element_stiffness(const LaminateIntegrals& lam,
                                const Quad4Geometry& geom,
                                const ElementQuadrature& eq);

/// Consistent mass. On split elements the mass integrand is bi-quadratic,
/// so it is integrated with a degree-4 rule on the material subtriangles
/// instead of the 3-point plan rule.
ElementMatrix element_mass(double p, double I, const Quad4Geometry& geom,
                           const ElementQuadrature& eq);

/// Geometric stiffness of the in-plane resultant field acting through the
/// transverse-deflection gradient: sum w |J| Gw^T [N] Gw.
ElementMatrix element_geometric_stiffness(
    const std::vector<Eigen::Vector3d>& resultants_at_points,
    const Quad4Geometry& geom, const ElementQuadrature& eq);
ElementMatrix element_geometric_stiffness(const Eigen::Vector3d& uniform_resultant,
                                          const Quad4Geometry& geom,
                                          const ElementQuadrature& eq);

ElementVector element_hygrothermal_load(const Eigen::Vector3d& N_hygro,
                                        const Eigen::Vector3d& M_hygro,
                                        const Quad4Geometry& geom,
                                        const ElementQuadrature& eq);

/// Heaviside-enriched displacement evaluation: u = sum N_a u_a +
/// sum_{enriched a} N_a H b_a, H being the material indicator at the point.
Eigen::Matrix<double, 5, 1> enriched_interpolation(
    const Eigen::Matrix<double, 4, 5>& standard_dofs,
    const Eigen::Matrix<double, 4, 5>& enriched_dofs,
    const std::array<bool, 4>& enriched, double xi, double eta, double H);

}  // namespace xplate

#endif
