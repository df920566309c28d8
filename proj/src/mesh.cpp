#include "xplate/mesh.hpp"

#include <stdexcept>

namespace xplate {

StructuredMesh::StructuredMesh(double a, double b, int nx, int ny)
    : a_(a), b_(b), nx_(nx), ny_(ny) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("plate sides must be positive");
  if (nx < 1 || ny < 1) throw std::invalid_argument("element counts must be >= 1");
  nodes_.reserve(n_nodes());
  for (int j = 0; j <= ny_; ++j)
    for (int i = 0; i <= nx_; ++i)
      nodes_.emplace_back(a_ * i / nx_, b_ * j / ny_);
  elems_.reserve(n_elements());
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      elems_.push_back({node_index(i, j), node_index(i + 1, j),
                        node_index(i + 1, j + 1), node_index(i, j + 1)});
}

Eigen::Matrix<double, 4, 2> StructuredMesh::element_coords(int e) const {
  Eigen::Matrix<double, 4, 2> x;
  for (int a = 0; a < 4; ++a) x.row(a) = nodes_[elems_[e][a]].transpose();
  return x;
}

bool StructuredMesh::on_boundary_x(int n) const {
  const int i = n % (nx_ + 1);
  return i == 0 || i == nx_;
}

bool StructuredMesh::on_boundary_y(int n) const {
  const int j = n / (nx_ + 1);
  return j == 0 || j == ny_;
}

}  // namespace xplate
