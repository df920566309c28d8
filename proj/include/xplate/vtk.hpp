#ifndef XPLATE_VTK_HPP
#define XPLATE_VTK_HPP

#include <iosfwd>
#include <string>

#include "xplate/assembly.hpp"

namespace xplate {

/// Legacy ASCII VTK dump of the model: point data carries the level set and
/// (optionally) the (u, v, w) field of a full standard-dof vector; cell
/// data carries the element classification code.
void write_vtk(std::ostream& os, const EnrichedModel& model,
               const GlobalDofMap& dofs,
               const Eigen::VectorXd* field = nullptr,
               const std::string& field_name = "displacement");

void write_vtk_file(const std::string& path, const EnrichedModel& model,
                    const GlobalDofMap& dofs,
                    const Eigen::VectorXd* field = nullptr,
                    const std::string& field_name = "displacement");

}  // namespace xplate

#endif
