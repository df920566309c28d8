#include "xplate/levelset.hpp"

#include <cmath>
#include <stdexcept>

namespace xplate {

CutoutSpec CutoutSpec::circle(const Eigen::Vector2d& c, double r) {
  CutoutSpec s;
  s.kind = CutoutKind::Circle;
  s.center = c;
  s.radius = r;
  return s;
}

CutoutSpec CutoutSpec::ellipse(const Eigen::Vector2d& c, double d, double e,
                               double theta_deg) {
  CutoutSpec s;
  s.kind = CutoutKind::Ellipse;
  s.center = c;
  s.d = d;
  s.e = e;
  s.theta_deg = theta_deg;
  return s;
}

void CutoutSpec::validate(const StructuredMesh& mesh) const {
  if (kind == CutoutKind::None) return;
  if (kind == CutoutKind::Circle && radius <= 0)
    throw std::invalid_argument("cutout radius must be positive");
  if (kind == CutoutKind::Ellipse && (d <= 0 || e <= 0))
    throw std::invalid_argument("ellipse semi-axes must be positive");
  const double extent = (kind == CutoutKind::Circle) ? radius : std::max(d, e);
  if (center.x() - extent <= 0 || center.x() + extent >= mesh.a() ||
      center.y() - extent <= 0 || center.y() + extent >= mesh.b())
    throw std::invalid_argument("cutout must lie strictly inside the plate");
}

LevelSetField circle_level_set(const StructuredMesh& mesh,
                               const Eigen::Vector2d& center, double r) {
  if (r <= 0) throw std::invalid_argument("cutout radius must be positive");
  LevelSetField f;
  f.phi.resize(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n)
    f.phi[n] = (mesh.node(n) - center).norm() - r;
  return f;
}

LevelSetField ellipse_level_set(const StructuredMesh& mesh,
                                const Eigen::Vector2d& center, double d,
                                double e, double theta_deg) {
  if (d <= 0 || e <= 0) throw std::invalid_argument("ellipse semi-axes must be positive");
  const double t = theta_deg * M_PI / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const double a1 = (c / d) * (c / d) + (s / e) * (s / e);
  const double a2 = 2.0 * c * s * (1.0 / (d * d) - 1.0 / (e * e));
  const double a3 = (s / d) * (s / d) + (c / e) * (c / e);
  LevelSetField f;
  f.phi.resize(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const double x = mesh.node(n).x() - center.x();
    const double y = mesh.node(n).y() - center.y();
    f.phi[n] = std::sqrt(a1 * x * x + a2 * x * y + a3 * y * y) - 1.0;
  }
  return f;
}

LevelSetField level_set(const StructuredMesh& mesh, const CutoutSpec& cut) {
  switch (cut.kind) {
    case CutoutKind::Circle:
      return circle_level_set(mesh, cut.center, cut.radius);
    case CutoutKind::Ellipse:
      return ellipse_level_set(mesh, cut.center, cut.d, cut.e, cut.theta_deg);
    case CutoutKind::None:
    default: {
      LevelSetField f;
      f.phi.assign(mesh.n_nodes(), 1.0);
      return f;
    }
  }
}

ElementClassification classify_elements(const StructuredMesh& mesh,
                                        LevelSetField& phi) {
  if (static_cast<int>(phi.phi.size()) != mesh.n_nodes())
    throw std::invalid_argument("level set size does not match the mesh");
  for (double& v : phi.phi) {
    if (!std::isfinite(v)) throw std::invalid_argument("level set must be finite");
    if (v == 0.0) v = 1e-10 * mesh.element_size();
  }

  ElementClassification cls;
  cls.classes.resize(mesh.n_elements());
  cls.enriched_node.assign(mesh.n_nodes(), false);
  cls.node_all_void.assign(mesh.n_nodes(), true);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& nd = mesh.element(e);
    int pos = 0;
    for (int a = 0; a < 4; ++a)
      if (phi.phi[nd[a]] > 0) ++pos;
    if (pos == 4) {
      cls.classes[e] = ElementClass::Standard;
    } else if (pos == 0) {
      cls.classes[e] = ElementClass::Void;
    } else {
      cls.classes[e] = ElementClass::Split;
      for (int a = 0; a < 4; ++a) cls.enriched_node[nd[a]] = true;
    }
  }
  // Blending: standard elements sharing an enriched node with a split one.
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (cls.classes[e] != ElementClass::Standard) continue;
    for (int a = 0; a < 4; ++a)
      if (cls.enriched_node[mesh.element(e)[a]]) {
        cls.classes[e] = ElementClass::SplitBlending;
        break;
      }
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (cls.classes[e] == ElementClass::Void) continue;
    for (int a = 0; a < 4; ++a) cls.node_all_void[mesh.element(e)[a]] = false;
  }
  return cls;
}

namespace {

constexpr double kParentArea = 4.0;

struct WalkPoint {
  Eigen::Vector2d p;
  int corner = -1;  // corner id, or -1 for an edge root
};

void fan_triangulate(const std::vector<Eigen::Vector2d>& poly, bool material,
                     std::vector<SubTriangle>& out) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& v : poly) c += v;
  c /= static_cast<double>(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) {
    SubTriangle t;
    t.v[0] = c;
    t.v[1] = poly[i];
    t.v[2] = poly[(i + 1) % poly.size()];
    t.material = material;
    if (t.area() >= 1e-12 * kParentArea) out.push_back(t);
  }
}

}  // namespace

std::vector<SubTriangle> triangulate_split_element(
    const std::array<double, 4>& corner_phi) {
  static const Eigen::Vector2d corner[4] = {
      {-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};

  int n_roots = 0;
  for (int i = 0; i < 4; ++i)
    if ((corner_phi[i] > 0) != (corner_phi[(i + 1) % 4] > 0)) ++n_roots;
  if (n_roots == 0)
    throw std::invalid_argument("element is not split by the level set");

  auto edge_root = [&](int i) {
    const int j = (i + 1) % 4;
    const double t = corner_phi[i] / (corner_phi[i] - corner_phi[j]);
    return Eigen::Vector2d(corner[i] + t * (corner[j] - corner[i]));
  };

  std::vector<SubTriangle> tris;
  if (n_roots == 2) {
    // Boundary walk; the two roots split the cycle into one-signed arcs.
    std::vector<WalkPoint> walk;
    for (int i = 0; i < 4; ++i) {
      walk.push_back({corner[i], i});
      if ((corner_phi[i] > 0) != (corner_phi[(i + 1) % 4] > 0))
        walk.push_back({edge_root(i), -1});
    }
    const int nw = static_cast<int>(walk.size());
    int first_root = 0;
    while (walk[first_root].corner >= 0) ++first_root;
    std::vector<Eigen::Vector2d> poly{walk[first_root].p};
    bool side = false;
    bool side_known = false;
    for (int k = 1; k <= nw; ++k) {
      const WalkPoint& w = walk[(first_root + k) % nw];
      if (w.corner >= 0) {
        poly.push_back(w.p);
        side = corner_phi[w.corner] > 0;
        side_known = true;
      } else {
        poly.push_back(w.p);
        if (side_known) fan_triangulate(poly, side, tris);
        poly.assign(1, w.p);
        side_known = false;
      }
    }
  } else {
    // Saddle: opposite corners share a sign; the centre value of the
    // bilinear interpolant picks which pair is connected.
    const double phi_c =
        0.25 * (corner_phi[0] + corner_phi[1] + corner_phi[2] + corner_phi[3]);
    const Eigen::Vector2d r01 = edge_root(0), r12 = edge_root(1),
                          r23 = edge_root(2), r30 = edge_root(3);
    const int base = (corner_phi[0] > 0) == (phi_c > 0) ? 0 : 1;
    // Hexagonal band through the centre around corners base and base+2,
    // and two cut-off triangles at the other pair.
    auto C = [&](int i) { return corner[(base + i) % 4]; };
    const Eigen::Vector2d roots[4] = {r01, r12, r23, r30};
    auto R = [&](int i) { return roots[(base + i) % 4]; };
    const bool band_material = phi_c > 0;
    fan_triangulate({C(0), R(0), R(1), C(2), R(2), R(3)}, band_material, tris);
    fan_triangulate({R(0), C(1), R(1)}, !band_material, tris);
    fan_triangulate({R(2), C(3), R(3)}, !band_material, tris);
  }
  return tris;
}

namespace {

void gauss_2x2(std::vector<QuadraturePoint>& pts) {
  const double g = 1.0 / std::sqrt(3.0);
  for (double eta : {-g, g})
    for (double xi : {-g, g}) pts.push_back({xi, eta, 1.0, true});
}

void triangle_3pt(const SubTriangle& t, std::vector<QuadraturePoint>& pts) {
  // Mid-edge rule, exact for quadratics.
  const double w = t.area() / 3.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d m = 0.5 * (t.v[i] + t.v[(i + 1) % 3]);
    pts.push_back({m.x(), m.y(), w, t.material});
  }
}

}  // namespace

QuadraturePlan quadrature_plan(const StructuredMesh& mesh,
                               const ElementClassification& cls,
                               const LevelSetField& phi) {
  QuadraturePlan plan;
  plan.elements.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    ElementQuadrature& eq = plan.elements[e];
    eq.cls = cls.classes[e];
    switch (eq.cls) {
      case ElementClass::Standard:
      case ElementClass::SplitBlending:
        gauss_2x2(eq.points);
        break;
      case ElementClass::Void:
        break;
      case ElementClass::Split: {
        const auto& nd = mesh.element(e);
        std::array<double, 4> cphi{phi.phi[nd[0]], phi.phi[nd[1]],
                                   phi.phi[nd[2]], phi.phi[nd[3]]};
        eq.triangles = triangulate_split_element(cphi);
        for (const SubTriangle& t : eq.triangles)
          if (t.material) triangle_3pt(t, eq.points);
        break;
      }
    }
  }
  return plan;
}

double element_material_fraction(const ElementQuadrature& eq) {
  switch (eq.cls) {
    case ElementClass::Standard:
    case ElementClass::SplitBlending:
      return 1.0;
    case ElementClass::Void:
      return 0.0;
    case ElementClass::Split: {
      double w = 0.0;
      for (const QuadraturePoint& q : eq.points) w += q.weight;
      return w / kParentArea;
    }
  }
  return 0.0;
}

double total_material_area(const StructuredMesh& mesh, const QuadraturePlan& plan) {
  const double elem_area = mesh.dx() * mesh.dy();
  double area = 0.0;
  for (const ElementQuadrature& eq : plan.elements)
    area += elem_area * element_material_fraction(eq);
  return area;
}

EnrichedModel build_model(const StructuredMesh& mesh, const CutoutSpec& cut) {
  cut.validate(mesh);
  EnrichedModel m{mesh, cut, level_set(mesh, cut), {}, {}};
  m.classification = classify_elements(m.mesh, m.phi);
  m.plan = quadrature_plan(m.mesh, m.classification, m.phi);
  return m;
}

}  // namespace xplate
