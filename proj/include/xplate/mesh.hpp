#ifndef XPLATE_MESH_HPP
#define XPLATE_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace xplate {

/// Uniform structured quadrilateral mesh on [0,a] x [0,b], nodes numbered
/// row-major (x fastest), elements counter-clockwise.
class StructuredMesh {
 public:
  StructuredMesh(double a, double b, int nx, int ny);

  double a() const { return a_; }
  double b() const { return b_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int n_nodes() const { return (nx_ + 1) * (ny_ + 1); }
  int n_elements() const { return nx_ * ny_; }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
  Eigen::Vector2d node(int n) const { return nodes_[n]; }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

  /// Node ids of element e, counter-clockwise from the lower-left corner.
  const std::array<int, 4>& element(int e) const { return elems_[e]; }
  /// 4x2 nodal coordinate block for element e.
  Eigen::Matrix<double, 4, 2> element_coords(int e) const;

  double dx() const { return a_ / nx_; }
  double dy() const { return b_ / ny_; }
  /// Characteristic element size.
  double element_size() const { return std::max(dx(), dy()); }

  bool on_boundary_x(int n) const;  // node lies on x = 0 or x = a
  bool on_boundary_y(int n) const;  // node lies on y = 0 or y = b

 private:
  double a_, b_;
  int nx_, ny_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::array<int, 4>> elems_;
};

inline StructuredMesh build_mesh(double a, double b, int nx, int ny) {
  return StructuredMesh(a, b, nx, ny);
}

}  // namespace xplate

#endif
