#ifndef XPLATE_ASSEMBLY_HPP
#define XPLATE_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "xplate/element.hpp"
#include "xplate/levelset.hpp"
#include "xplate/material.hpp"

namespace xplate {

using SpMat = Eigen::SparseMatrix<double>;

/// Global dof numbering with enrichment. Nodes whose entire support is void
/// are eliminated. Nodes of split elements carry five extra Heaviside dofs;
/// for a traction-free void the enrichment functions coincide with the
/// standard basis over the integrated (material) domain, so those dofs are
/// linearly dependent and are excluded from the solve set.
struct GlobalDofMap {
  int n_nodes = 0;
  std::vector<int> node_base;  // node -> first of 5 standard dof ids, -1 if eliminated
  std::vector<int> enr_base;   // node -> first of 5 enriched dof ids, -1 if none
  int n_standard = 0;          // standard dofs (the solve set before constraints)
  int n_enriched = 0;
  std::vector<int> eliminated_nodes;
  std::vector<int> enriched_nodes;

  int n_allocated() const { return n_standard + n_enriched; }
  int dof(int node, int comp) const { return node_base[node] + comp; }
  bool active(int node) const { return node_base[node] >= 0; }
};

GlobalDofMap build_dof_map(const StructuredMesh& mesh,
                           const ElementClassification& cls);

struct GlobalSystem {
  SpMat K;           // linear stiffness, n_standard x n_standard
  SpMat M;           // consistent mass
  Eigen::VectorXd fT;  // hygrothermal load
};

GlobalSystem assemble(const EnrichedModel& model, const GlobalDofMap& dofs,
                      const LaminateIntegrals& lam);

/// In-plane resultants evaluated at every quadrature point, stored per
/// element with the same ordering as the plan.
struct ResultantField {
  std::vector<std::vector<Eigen::Vector3d>> per_element;
};

/// Geometric stiffness of a resultant field: sum over material points of
/// w |J| (grad w)^T [N] (grad w).
SpMat assemble_geometric(const EnrichedModel& model, const GlobalDofMap& dofs,
                         const ResultantField& field);
SpMat assemble_geometric(const EnrichedModel& model, const GlobalDofMap& dofs,
                         const Eigen::Vector3d& uniform_resultant);

/// N = A ep + B eb - N_hygro at every material quadrature point, from a
/// full-length standard-dof displacement vector.
ResultantField recover_resultants(const EnrichedModel& model,
                                  const GlobalDofMap& dofs,
                                  const LaminateIntegrals& lam,
                                  const Eigen::VectorXd& delta,
                                  bool include_hygro = true);

enum class BoundaryCondition { SSSS, CCCC };

/// Constrained-dof mask per the hard-simply-supported / clamped edge
/// conditions: SSSS fixes (u0, w0, by) on x = 0,a and (v0, w0, bx) on
/// y = 0,b; CCCC fixes all five fields on every boundary node.
std::vector<char> constraint_mask(const StructuredMesh& mesh,
                                  const GlobalDofMap& dofs,
                                  BoundaryCondition bc);

struct ConstrainedSystem {
  SpMat K, M;
  Eigen::VectorXd fT;
  std::vector<int> keep;  // reduced index -> full standard dof id
  int n_full = 0;
};

ConstrainedSystem apply_boundary_conditions(const GlobalSystem& sys,
                                            const std::vector<char>& mask);

/// Row/column extraction of the kept dofs.
SpMat constrain_matrix(const SpMat& A, const std::vector<char>& mask);
SpMat constrain_matrix(const SpMat& A, const std::vector<int>& keep, int n_full);

Eigen::VectorXd expand_vector(const Eigen::VectorXd& reduced,
                              const std::vector<int>& keep, int n_full);

/// SPD direct solve with a residual check of 1e-10 relative.
Eigen::VectorXd static_solve(const SpMat& K, const Eigen::VectorXd& f);

}  // namespace xplate

#endif
