#ifndef XPLATE_LEVELSET_HPP
#define XPLATE_LEVELSET_HPP

#include <Eigen/Dense>
#include <vector>

#include "xplate/mesh.hpp"

namespace xplate {

enum class CutoutKind { None, Circle, Ellipse };

struct CutoutSpec {
  CutoutKind kind = CutoutKind::None;
  Eigen::Vector2d center{0.0, 0.0};
  double radius = 0.0;     // circle
  double d = 0.0, e = 0.0; // ellipse semi-axes (major, minor)
  double theta_deg = 0.0;  // ellipse orientation, ccw from the x axis

  static CutoutSpec none() { return {}; }
  static CutoutSpec circle(const Eigen::Vector2d& c, double r);
  static CutoutSpec ellipse(const Eigen::Vector2d& c, double d, double e,
                            double theta_deg);

  void validate(const StructuredMesh& mesh) const;
};

/// Nodal level-set values; phi > 0 is material, phi < 0 is void.
struct LevelSetField {
  std::vector<double> phi;
};

LevelSetField circle_level_set(const StructuredMesh& mesh,
                               const Eigen::Vector2d& center, double r);

/// Rotated-ellipse level set. The quadratic form under the square root is
/// the exact rotation of (x/d)^2 + (y/e)^2 by theta, so d = e reduces to a
/// circle for any orientation.
LevelSetField ellipse_level_set(const StructuredMesh& mesh,
                                const Eigen::Vector2d& center, double d,
                                double e, double theta_deg);

LevelSetField level_set(const StructuredMesh& mesh, const CutoutSpec& cut);

enum class ElementClass : int {
  Standard = 0,
  Void = 1,
  Split = 2,
  SplitBlending = 3,
};

struct ElementClassification {
  std::vector<ElementClass> classes;      // per element
  std::vector<bool> enriched_node;        // per node: node of a Split element
  std::vector<bool> node_all_void;        // per node: every incident element is Void
};

/// Classify elements by the nodal level-set signs. Values exactly at zero
/// are perturbed by +1e-10 * element size before classification; the
/// adjusted field is written back to `phi` so downstream triangulation sees
/// the same signs.
ElementClassification classify_elements(const StructuredMesh& mesh,
                                        LevelSetField& phi);

/// Triangle in parent coordinates of one element, tagged by the level-set
/// sign at its centroid.
struct SubTriangle {
  Eigen::Vector2d v[3];  // (xi, eta)
  bool material = true;

  double area() const {
    return 0.5 * std::abs((v[1] - v[0]).x() * (v[2] - v[0]).y() -
                          (v[2] - v[0]).x() * (v[1] - v[0]).y());
  }
  Eigen::Vector2d centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }
};

/// Split the parent square of a cut element into triangles aligned with the
/// chord(s) through the interpolated edge roots of phi. Covers every sign
/// pattern of a quad, including the saddle (two opposite corners inside),
/// which is disambiguated by the sign of phi at the element centre.
std::vector<SubTriangle> triangulate_split_element(
    const std::array<double, 4>& corner_phi);

struct QuadraturePoint {
  double xi = 0.0, eta = 0.0;
  double weight = 0.0;  // parent-space measure
  bool material = true;
};

struct ElementQuadrature {
  ElementClass cls = ElementClass::Standard;
  std::vector<QuadraturePoint> points;
  std::vector<SubTriangle> triangles;  // nonempty only for Split elements
};

struct QuadraturePlan {
  std::vector<ElementQuadrature> elements;
};

/// Integration rules: Standard and SplitBlending elements get the 2x2 Gauss
/// rule (4 points); Split elements get 3 points per material triangle; Void
/// elements get none.
QuadraturePlan quadrature_plan(const StructuredMesh& mesh,
                               const ElementClassification& cls,
                               const LevelSetField& phi);

/// Material area of one element implied by its quadrature (parent measure
/// integrates to 4 for a full element).
double element_material_fraction(const ElementQuadrature& eq);

/// Sum of material areas over the mesh (physical units).
double total_material_area(const StructuredMesh& mesh, const QuadraturePlan& plan);

/// Mesh + cutout + classification + quadrature, ready for assembly.
struct EnrichedModel {
  StructuredMesh mesh;
  CutoutSpec cutout;
  LevelSetField phi;
  ElementClassification classification;
  QuadraturePlan plan;
};

EnrichedModel build_model(const StructuredMesh& mesh, const CutoutSpec& cut);

}  // namespace xplate

#endif
