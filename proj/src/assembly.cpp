#include "xplate/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <stdexcept>

#include "xplate/errors.hpp"

namespace xplate {

GlobalDofMap build_dof_map(const StructuredMesh& mesh,
                           const ElementClassification& cls) {
  GlobalDofMap m;
  m.n_nodes = mesh.n_nodes();
  m.node_base.assign(m.n_nodes, -1);
  m.enr_base.assign(m.n_nodes, -1);
  int next = 0;
  for (int n = 0; n < m.n_nodes; ++n) {
    if (cls.node_all_void[n]) {
      m.eliminated_nodes.push_back(n);
      continue;
    }
    m.node_base[n] = next;
    next += 5;
  }
  m.n_standard = next;
  for (int n = 0; n < m.n_nodes; ++n) {
    if (!cls.enriched_node[n] || m.node_base[n] < 0) continue;
    m.enr_base[n] = next;
    next += 5;
    m.enriched_nodes.push_back(n);
  }
  m.n_enriched = next - m.n_standard;
  return m;
}

namespace {

void element_dofs(const StructuredMesh& mesh, const GlobalDofMap& dofs, int e,
                  std::array<int, 20>& gdof) {
  const auto& nd = mesh.element(e);
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 5; ++c)
      gdof[5 * a + c] = dofs.active(nd[a]) ? dofs.dof(nd[a], c) : -1;
}

void scatter(const std::array<int, 20>& gdof, const ElementMatrix& Ae,
             std::vector<Eigen::Triplet<double>>& trips) {
  for (int i = 0; i < 20; ++i) {
    if (gdof[i] < 0) continue;
    for (int j = 0; j < 20; ++j) {
      if (gdof[j] < 0) continue;
      trips.emplace_back(gdof[i], gdof[j], Ae(i, j));
    }
  }
}

}  // namespace

GlobalSystem assemble(const EnrichedModel& model, const GlobalDofMap& dofs,
                      const LaminateIntegrals& lam) {
  const StructuredMesh& mesh = model.mesh;
  GlobalSystem sys;
  sys.fT = Eigen::VectorXd::Zero(dofs.n_standard);
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(static_cast<size_t>(mesh.n_elements()) * 400);
  tm.reserve(static_cast<size_t>(mesh.n_elements()) * 400);
  std::array<int, 20> gdof;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementQuadrature& eq = model.plan.elements[e];
    if (eq.points.empty()) continue;  // void element
    const Quad4Geometry geom(mesh.element_coords(e));
    const ElementMatrix Ke = element_stiffness(lam, geom, eq);
    const ElementMatrix Me = element_mass(lam.p, lam.I, geom, eq);
    const ElementVector fe =
        element_hygrothermal_load(lam.N_hygro, lam.M_hygro, geom, eq);
    element_dofs(mesh, dofs, e, gdof);
    scatter(gdof, Ke, tk);
    scatter(gdof, Me, tm);
    for (int i = 0; i < 20; ++i)
      if (gdof[i] >= 0) sys.fT(gdof[i]) += fe(i);
  }
  sys.K.resize(dofs.n_standard, dofs.n_standard);
  sys.K.setFromTriplets(tk.begin(), tk.end());
  sys.M.resize(dofs.n_standard, dofs.n_standard);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  return sys;
}

SpMat assemble_geometric(const EnrichedModel& model, const GlobalDofMap& dofs,
                         const ResultantField& field) {
  const StructuredMesh& mesh = model.mesh;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.n_elements()) * 64);
  std::array<int, 20> gdof;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementQuadrature& eq = model.plan.elements[e];
    if (eq.points.empty()) continue;
    const Quad4Geometry geom(mesh.element_coords(e));
    const ElementMatrix Kg =
        element_geometric_stiffness(field.per_element[e], geom, eq);
    element_dofs(mesh, dofs, e, gdof);
    scatter(gdof, Kg, trips);
  }
  SpMat G(dofs.n_standard, dofs.n_standard);
  G.setFromTriplets(trips.begin(), trips.end());
  return G;
}

SpMat assemble_geometric(const EnrichedModel& model, const GlobalDofMap& dofs,
                         const Eigen::Vector3d& uniform_resultant) {
  ResultantField field;
  field.per_element.resize(model.mesh.n_elements());
  for (int e = 0; e < model.mesh.n_elements(); ++e)
    field.per_element[e].assign(model.plan.elements[e].points.size(),
                                uniform_resultant);
  return assemble_geometric(model, dofs, field);
}

ResultantField recover_resultants(const EnrichedModel& model,
                                  const GlobalDofMap& dofs,
                                  const LaminateIntegrals& lam,
                                  const Eigen::VectorXd& delta,
                                  bool include_hygro) {
  const StructuredMesh& mesh = model.mesh;
  ResultantField field;
  field.per_element.resize(mesh.n_elements());
  std::array<int, 20> gdof;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementQuadrature& eq = model.plan.elements[e];
    if (eq.points.empty()) continue;
    const Quad4Geometry geom(mesh.element_coords(e));
    const ShearTying tying(geom);
    element_dofs(mesh, dofs, e, gdof);
    ElementVector de;
    for (int i = 0; i < 20; ++i) de(i) = gdof[i] >= 0 ? delta(gdof[i]) : 0.0;
    auto& vals = field.per_element[e];
    vals.reserve(eq.points.size());
    for (const QuadraturePoint& q : eq.points) {
      const StrainOperators ops = strain_operators(geom, tying, q.xi, q.eta);
      Eigen::Vector3d N = lam.A * (ops.Bp * de) + lam.B * (ops.Bb * de);
      if (include_hygro) N -= lam.N_hygro;
      vals.push_back(N);
    }
  }
  return field;
}

std::vector<char> constraint_mask(const StructuredMesh& mesh,
                                  const GlobalDofMap& dofs,
                                  BoundaryCondition bc) {
  std::vector<char> mask(dofs.n_standard, 0);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    if (!dofs.active(n)) continue;
    const bool bx = mesh.on_boundary_x(n);
    const bool by = mesh.on_boundary_y(n);
    if (!bx && !by) continue;
    if (bc == BoundaryCondition::CCCC) {
      for (int c = 0; c < 5; ++c) mask[dofs.dof(n, c)] = 1;
      continue;
    }
    if (bx) {  // u0 = w0 = by = 0 on x = 0, a
      mask[dofs.dof(n, 0)] = 1;
      mask[dofs.dof(n, 2)] = 1;
      mask[dofs.dof(n, 4)] = 1;
    }
    if (by) {  // v0 = w0 = bx = 0 on y = 0, b
      mask[dofs.dof(n, 1)] = 1;
      mask[dofs.dof(n, 2)] = 1;
      mask[dofs.dof(n, 3)] = 1;
    }
  }
  return mask;
}

SpMat constrain_matrix(const SpMat& A, const std::vector<int>& keep, int n_full) {
  std::vector<int> to_reduced(n_full, -1);
  for (size_t i = 0; i < keep.size(); ++i) to_reduced[keep[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = to_reduced[it.row()];
      const int c = to_reduced[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  SpMat R(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

SpMat constrain_matrix(const SpMat& A, const std::vector<char>& mask) {
  std::vector<int> keep;
  for (size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) keep.push_back(static_cast<int>(i));
  return constrain_matrix(A, keep, static_cast<int>(mask.size()));
}

ConstrainedSystem apply_boundary_conditions(const GlobalSystem& sys,
                                            const std::vector<char>& mask) {
  ConstrainedSystem cs;
  cs.n_full = static_cast<int>(mask.size());
  for (int i = 0; i < cs.n_full; ++i)
    if (!mask[i]) cs.keep.push_back(i);
  cs.K = constrain_matrix(sys.K, cs.keep, cs.n_full);
  cs.M = constrain_matrix(sys.M, cs.keep, cs.n_full);
  cs.fT.resize(cs.keep.size());
  for (size_t i = 0; i < cs.keep.size(); ++i) cs.fT(i) = sys.fT(cs.keep[i]);
  return cs;
}

Eigen::VectorXd expand_vector(const Eigen::VectorXd& reduced,
                              const std::vector<int>& keep, int n_full) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_full);
  for (size_t i = 0; i < keep.size(); ++i) full(keep[i]) = reduced(i);
  return full;
}

Eigen::VectorXd static_solve(const SpMat& K, const Eigen::VectorXd& f) {
  Eigen::SimplicialLDLT<SpMat> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("static solve: factorization failed (singular system)");
  if ((ldlt.vectorD().array() <= 0.0).any())
    throw SolverError("static solve: stiffness matrix is not positive definite");
  Eigen::VectorXd x = ldlt.solve(f);
  const double fn = f.norm();
  if (fn > 0.0) {
    const double res = (K * x - f).norm();
    if (res > 1e-10 * fn)
      throw SolverError("static solve: residual " + std::to_string(res / fn) +
                        " exceeds 1e-10");
  }
  return x;
}

}  // namespace xplate
