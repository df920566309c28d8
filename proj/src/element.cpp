#include "xplate/element.hpp"

#include <stdexcept>

namespace xplate {

namespace {
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};
}  // namespace

void shape_functions(double xi, double eta, Eigen::Vector4d& N,
                     Eigen::Matrix<double, 4, 2>& dN) {
  for (int a = 0; a < 4; ++a) {
    N(a) = 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta);
    dN(a, 0) = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
    dN(a, 1) = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
  }
}

Quad4Geometry::Quad4Geometry(const Eigen::Matrix<double, 4, 2>& coords)
    : coords_(coords) {
  if (det_jacobian(0.0, 0.0) <= 0.0)
    throw std::invalid_argument("element has non-positive Jacobian");
}

Eigen::Matrix2d Quad4Geometry::jacobian(double xi, double eta) const {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;
  shape_functions(xi, eta, N, dN);
  return dN.transpose() * coords_;
}

double Quad4Geometry::det_jacobian(double xi, double eta) const {
  return jacobian(xi, eta).determinant();
}

Eigen::Matrix<double, 4, 2> Quad4Geometry::cartesian_gradients(double xi,
                                                               double eta) const {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;
  shape_functions(xi, eta, N, dN);
  const Eigen::Matrix2d J = dN.transpose() * coords_;
  const double det = J.determinant();
  if (det <= 0.0) throw std::invalid_argument("element has non-positive Jacobian");
  return dN * J.inverse().transpose();
}

Eigen::Vector2d Quad4Geometry::map(double xi, double eta) const {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;
  shape_functions(xi, eta, N, dN);
  return coords_.transpose() * N;
}

namespace {

// Covariant transverse shear row at a parent point:
// gamma_xi = w,xi + x,xi*bx + y,xi*by (and likewise for eta).
Eigen::Matrix<double, 2, 20> covariant_shear_rows(const Quad4Geometry& geom,
                                                  double xi, double eta) {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;
  shape_functions(xi, eta, N, dN);
  const Eigen::Matrix2d J = dN.transpose() * geom.coords();
  Eigen::Matrix<double, 2, 20> rows;
  rows.setZero();
  for (int a = 0; a < 4; ++a) {
    rows(0, 5 * a + 2) = dN(a, 0);
    rows(0, 5 * a + 3) = N(a) * J(0, 0);
    rows(0, 5 * a + 4) = N(a) * J(0, 1);
    rows(1, 5 * a + 2) = dN(a, 1);
    rows(1, 5 * a + 3) = N(a) * J(1, 0);
    rows(1, 5 * a + 4) = N(a) * J(1, 1);
  }
  return rows;
}

}  // namespace

ShearTying::ShearTying(const Quad4Geometry& geom) {
  row_A_ = covariant_shear_rows(geom, 0.0, -1.0).row(0);
  row_C_ = covariant_shear_rows(geom, 0.0, 1.0).row(0);
  row_D_ = covariant_shear_rows(geom, -1.0, 0.0).row(1);
  row_B_ = covariant_shear_rows(geom, 1.0, 0.0).row(1);
}

Eigen::Matrix<double, 2, 20> ShearTying::shear_B(const Quad4Geometry& geom,
                                                 double xi, double eta) const {
  Eigen::Matrix<double, 2, 20> cov;
  cov.row(0) = 0.5 * (1.0 - eta) * row_A_ + 0.5 * (1.0 + eta) * row_C_;
  cov.row(1) = 0.5 * (1.0 - xi) * row_D_ + 0.5 * (1.0 + xi) * row_B_;
  return geom.jacobian(xi, eta).inverse() * cov;
}

StrainOperators strain_operators(const Quad4Geometry& geom,
                                 const ShearTying& tying, double xi, double eta) {
  StrainOperators ops;
  ops.Bp.setZero();
  ops.Bb.setZero();
  ops.Gw.setZero();
  const Eigen::Matrix<double, 4, 2> dNx = geom.cartesian_gradients(xi, eta);
  for (int a = 0; a < 4; ++a) {
    const double Nx = dNx(a, 0), Ny = dNx(a, 1);
    ops.Bp(0, 5 * a + 0) = Nx;
    ops.Bp(1, 5 * a + 1) = Ny;
    ops.Bp(2, 5 * a + 0) = Ny;
    ops.Bp(2, 5 * a + 1) = Nx;
    ops.Bb(0, 5 * a + 3) = Nx;
    ops.Bb(1, 5 * a + 4) = Ny;
    ops.Bb(2, 5 * a + 3) = Ny;
    ops.Bb(2, 5 * a + 4) = Nx;
    ops.Gw(0, 5 * a + 2) = Nx;
    ops.Gw(1, 5 * a + 2) = Ny;
  }
  ops.Bs = tying.shear_B(geom, xi, eta);
  return ops;
}

ElementMatrix element_stiffness(const LaminateIntegrals& lam,
                                const Quad4Geometry& geom,
                                const ElementQuadrature& eq) {
  ElementMatrix Ke = ElementMatrix::Zero();
  const ShearTying tying(geom);
  for (const QuadraturePoint& q : eq.points) {
    const StrainOperators ops = strain_operators(geom, tying, q.xi, q.eta);
    const double w = q.weight * geom.det_jacobian(q.xi, q.eta);
    Ke += w * (ops.Bp.transpose() * lam.A * ops.Bp +
               ops.Bp.transpose() * lam.B * ops.Bb +
               ops.Bb.transpose() * lam.B * ops.Bp +
               ops.Bb.transpose() * lam.D * ops.Bb +
               ops.Bs.transpose() * lam.As * ops.Bs);
  }
  return Ke;
}

namespace {

// Degree-4 symmetric triangle rule (6 points), weights normalised to 1.
struct TriRulePoint {
  double l1, l2, w;
};
constexpr TriRulePoint kTri6[6] = {
    {0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.109951743655322},
};

template <typename F>
void for_each_mass_point(const ElementQuadrature& eq, F&& fn) {
  if (eq.cls == ElementClass::Split) {
    for (const SubTriangle& t : eq.triangles) {
      if (!t.material) continue;
      const double area = t.area();
      for (const TriRulePoint& r : kTri6) {
        const double l3 = 1.0 - r.l1 - r.l2;
        const Eigen::Vector2d p = r.l1 * t.v[0] + r.l2 * t.v[1] + l3 * t.v[2];
        fn(p.x(), p.y(), r.w * area);
      }
    }
  } else {
    for (const QuadraturePoint& q : eq.points) fn(q.xi, q.eta, q.weight);
  }
}

}  // namespace

ElementMatrix element_mass(double p, double I, const Quad4Geometry& geom,
                           const ElementQuadrature& eq) {
  if (p <= 0 || I <= 0) throw std::invalid_argument("inertias must be positive");
  ElementMatrix Me = ElementMatrix::Zero();
  const double inertia[5] = {p, p, p, I, I};
  for_each_mass_point(eq, [&](double xi, double eta, double weight) {
    Eigen::Vector4d N;
    Eigen::Matrix<double, 4, 2> dN;
    shape_functions(xi, eta, N, dN);
    const double w = weight * geom.det_jacobian(xi, eta);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const double nn = w * N(a) * N(b);
        for (int c = 0; c < 5; ++c) Me(5 * a + c, 5 * b + c) += nn * inertia[c];
      }
  });
  return Me;
}

ElementMatrix element_geometric_stiffness(
    const std::vector<Eigen::Vector3d>& resultants_at_points,
    const Quad4Geometry& geom, const ElementQuadrature& eq) {
  if (resultants_at_points.size() != eq.points.size())
    throw std::invalid_argument("one resultant per quadrature point required");
  ElementMatrix Kg = ElementMatrix::Zero();
  for (size_t i = 0; i < eq.points.size(); ++i) {
    const QuadraturePoint& q = eq.points[i];
    const Eigen::Vector3d& N = resultants_at_points[i];
    Eigen::Matrix2d Nmat;
    Nmat << N(0), N(2), N(2), N(1);
    const Eigen::Matrix<double, 4, 2> dNx = geom.cartesian_gradients(q.xi, q.eta);
    Eigen::Matrix<double, 2, 20> Gw = Eigen::Matrix<double, 2, 20>::Zero();
    for (int a = 0; a < 4; ++a) {
      Gw(0, 5 * a + 2) = dNx(a, 0);
      Gw(1, 5 * a + 2) = dNx(a, 1);
    }
    Kg += q.weight * geom.det_jacobian(q.xi, q.eta) *
          (Gw.transpose() * Nmat * Gw);
  }
  return Kg;
}

ElementMatrix element_geometric_stiffness(const Eigen::Vector3d& uniform_resultant,
                                          const Quad4Geometry& geom,
                                          const ElementQuadrature& eq) {
  std::vector<Eigen::Vector3d> field(eq.points.size(), uniform_resultant);
  return element_geometric_stiffness(field, geom, eq);
}

ElementVector element_hygrothermal_load(const Eigen::Vector3d& N_hygro,
                                        const Eigen::Vector3d& M_hygro,
                                        const Quad4Geometry& geom,
                                        const ElementQuadrature& eq) {
  ElementVector fe = ElementVector::Zero();
  const ShearTying tying(geom);
  for (const QuadraturePoint& q : eq.points) {
    const StrainOperators ops = strain_operators(geom, tying, q.xi, q.eta);
    const double w = q.weight * geom.det_jacobian(q.xi, q.eta);
    fe += w * (ops.Bp.transpose() * N_hygro + ops.Bb.transpose() * M_hygro);
  }
  return fe;
}

Eigen::Matrix<double, 5, 1> enriched_interpolation(
    const Eigen::Matrix<double, 4, 5>& standard_dofs,
    const Eigen::Matrix<double, 4, 5>& enriched_dofs,
    const std::array<bool, 4>& enriched, double xi, double eta, double H) {
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dN;
  shape_functions(xi, eta, N, dN);
  Eigen::Matrix<double, 5, 1> u = standard_dofs.transpose() * N;
  for (int a = 0; a < 4; ++a)
    if (enriched[a]) u += N(a) * H * enriched_dofs.row(a).transpose();
  return u;
}

}  // namespace xplate
