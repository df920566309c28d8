#include "xplate/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace xplate {

void write_vtk(std::ostream& os, const EnrichedModel& model,
               const GlobalDofMap& dofs, const Eigen::VectorXd* field,
               const std::string& field_name) {
  const StructuredMesh& mesh = model.mesh;
  os << "# vtk DataFile Version 3.0\n";
  os << "plate model\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.n_nodes() << " double\n";
  for (int n = 0; n < mesh.n_nodes(); ++n)
    os << mesh.node(n).x() << ' ' << mesh.node(n).y() << " 0\n";
  os << "CELLS " << mesh.n_elements() << ' ' << 5 * mesh.n_elements() << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& nd = mesh.element(e);
    os << "4 " << nd[0] << ' ' << nd[1] << ' ' << nd[2] << ' ' << nd[3] << '\n';
  }
  os << "CELL_TYPES " << mesh.n_elements() << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) os << "9\n";

  os << "POINT_DATA " << mesh.n_nodes() << '\n';
  os << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) os << model.phi.phi[n] << '\n';
  if (field) {
    os << "VECTORS " << field_name << " double\n";
    for (int n = 0; n < mesh.n_nodes(); ++n) {
      if (dofs.active(n))
        os << (*field)(dofs.dof(n, 0)) << ' ' << (*field)(dofs.dof(n, 1)) << ' '
           << (*field)(dofs.dof(n, 2)) << '\n';
      else
        os << "0 0 0\n";
    }
  }
  os << "CELL_DATA " << mesh.n_elements() << '\n';
  os << "SCALARS classification int 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < mesh.n_elements(); ++e)
    os << static_cast<int>(model.classification.classes[e]) << '\n';
}

void write_vtk_file(const std::string& path, const EnrichedModel& model,
                    const GlobalDofMap& dofs, const Eigen::VectorXd* field,
                    const std::string& field_name) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_vtk(os, model, dofs, field, field_name);
}

}  // namespace xplate
