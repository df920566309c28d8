#include "xplate/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <sstream>

namespace xplate {

double ReferenceCache::get_or_compute(const std::string& key,
                                      const std::function<double()>& fn) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
  }
  const double v = fn();
  std::lock_guard<std::mutex> lock(mutex_);
  return values_.emplace(key, v).first->second;
}

namespace {

LaminateStack make_stack(const CaseSetup& s) {
  return LaminateStack::from_angles(s.layup, s.h);
}

// Negative-eigenvalue count of a symmetric matrix via LDLT inertia;
// roundoff-scale pivots are not counted.
int negative_inertia(const SpMat& A) {
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("inertia check: factorization failed");
  const auto& D = ldlt.vectorD();
  const double floor = -1e-14 * D.cwiseAbs().maxCoeff();
  int n = 0;
  for (int i = 0; i < D.size(); ++i)
    if (D(i) < floor) ++n;
  return n;
}

// The preload alone is past the stability limit: name the most negative
// eigenvalue the pencil (K + K_R, M) exposes among its smallest modes.
[[noreturn]] void report_instability(const SpMat& A, const SpMat& M, int nneg,
                                     const EigOptions& eig) {
  double named = 0.0;
  try {
    const auto probe = generalized_symmetric_eig(
        A, M, std::min<int>(nneg + 2, static_cast<int>(A.rows())),
        EigSelect::Smallest, eig);
    for (const auto& p : probe) named = std::min(named, p.value);
  } catch (const std::exception&) {
    // inertia already established the sign; report without the value
  }
  throw InstabilityError(
      "hygrothermal preload destabilises the plate: " + std::to_string(nneg) +
          " negative mode(s), omega^2 = " + std::to_string(named),
      named);
}

bool baseline_env(const Environment& e) {
  return e.T == kReferenceEnv.T && e.C == kReferenceEnv.C;
}

std::string reference_key(const CaseSetup& s) {
  std::ostringstream os;
  os.precision(17);
  os << s.a << ';' << s.b << ';' << s.h << ';' << s.nx << ';' << s.ny << ';'
     << (s.analysis.bc == BoundaryCondition::SSSS ? "S" : "C");
  for (double ang : s.layup) os << '/' << ang;
  return os.str();
}

}  // namespace

ResultantField applied_load_resultants(const EnrichedModel& model,
                                       const GlobalDofMap& dofs,
                                       const LaminateIntegrals& lam,
                                       const SpMat& K) {
  const StructuredMesh& mesh = model.mesh;
  if (model.cutout.kind == CutoutKind::None) {
    ResultantField f;
    f.per_element.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e)
      f.per_element[e].assign(model.plan.elements[e].points.size(),
                              Eigen::Vector3d(-1.0, 0.0, 0.0));
    return f;
  }

  // Membrane solve: keep u,v dofs, pin three rigid-body dofs at two corners.
  std::vector<char> mask(dofs.n_standard, 1);
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    if (!dofs.active(n)) continue;
    mask[dofs.dof(n, 0)] = 0;
    mask[dofs.dof(n, 1)] = 0;
  }
  const int pin0 = mesh.node_index(0, 0);
  const int pin1 = mesh.node_index(mesh.nx(), 0);
  mask[dofs.dof(pin0, 0)] = 1;
  mask[dofs.dof(pin0, 1)] = 1;
  mask[dofs.dof(pin1, 1)] = 1;

  // Consistent nodal loads of the traction pair sigma_xx = -1 on x = 0, a.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dofs.n_standard);
  const double dy = mesh.dy();
  for (int j = 0; j <= mesh.ny(); ++j) {
    const double share = (j == 0 || j == mesh.ny()) ? 0.5 * dy : dy;
    f(dofs.dof(mesh.node_index(0, j), 0)) += share;
    f(dofs.dof(mesh.node_index(mesh.nx(), j), 0)) -= share;
  }

  std::vector<int> keep;
  for (size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) keep.push_back(static_cast<int>(i));
  const SpMat Km = constrain_matrix(K, keep, dofs.n_standard);
  Eigen::VectorXd fr(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) fr(i) = f(keep[i]);
  const Eigen::VectorXd ur = static_solve(Km, fr);
  const Eigen::VectorXd u = expand_vector(ur, keep, dofs.n_standard);
  return recover_resultants(model, dofs, lam, u, /*include_hygro=*/false);
}

AnalysisResult run_case(const CaseSetup& setup, const RunContext& ctx) {
  static const MaterialTable builtin = MaterialTable::graphite_epoxy();
  const MaterialTable& table = ctx.table ? *ctx.table : builtin;

  const StructuredMesh mesh = build_mesh(setup.a, setup.b, setup.nx, setup.ny);
  const EnrichedModel model = build_model(mesh, setup.cutout);
  const GlobalDofMap dofs = build_dof_map(mesh, model.classification);
  const LaminateStack stack = make_stack(setup);
  const LaminateIntegrals lam =
      laminate_integrals(stack, table, setup.analysis.env, kReferenceEnv);

  const GlobalSystem sys = assemble(model, dofs, lam);
  const std::vector<char> mask = constraint_mask(mesh, dofs, setup.analysis.bc);
  const ConstrainedSystem cs = apply_boundary_conditions(sys, mask);

  AnalysisResult result;

  // Hygrothermal pre-state: static bending solve, then the residual
  // resultants feed the geometric stiffness K_R.
  Eigen::VectorXd delta_full = Eigen::VectorXd::Zero(dofs.n_standard);
  SpMat KRc;
  const bool preloaded = !baseline_env(setup.analysis.env);
  if (preloaded) {
    const Eigen::VectorXd dr = static_solve(cs.K, cs.fT);
    delta_full = expand_vector(dr, cs.keep, cs.n_full);
    const ResultantField res = recover_resultants(model, dofs, lam, delta_full);
    KRc = constrain_matrix(assemble_geometric(model, dofs, res), cs.keep, cs.n_full);
  }

  if (setup.analysis.mode == AnalysisMode::Static) {
    if (!preloaded) delta_full.setZero();
    result.delta = delta_full;
    for (int n = 0; n < mesh.n_nodes(); ++n)
      if (dofs.active(n))
        result.max_deflection =
            std::max(result.max_deflection, std::abs(delta_full(dofs.dof(n, 2))));
    return result;
  }

  SpMat A = cs.K;
  if (preloaded) {
    A += KRc;
    const int nneg = negative_inertia(A);
    if (nneg > 0) report_instability(A, cs.M, nneg, ctx.eig);
  }

  const int k = std::max(1, setup.analysis.eigencount);

  if (setup.analysis.mode == AnalysisMode::Vibration) {
    const auto pairs = generalized_symmetric_eig(A, cs.M, k, EigSelect::Smallest, ctx.eig);
    const double scale = std::abs(pairs.back().value);
    if (pairs.front().value < -1e-8 * scale)
      throw InstabilityError(
          "hygrothermal preload destabilises the plate: omega^2 = " +
              std::to_string(pairs.front().value),
          pairs.front().value);
    const double E2_ref = table.properties_at(kReferenceEnv.T, kReferenceEnv.C).E2;
    const double rho = table.rho();
    for (const auto& p : pairs) {
      const double w = std::sqrt(std::max(0.0, p.value));
      result.omega.push_back(w);
      result.Omega.push_back(w * setup.a * setup.a / setup.h * std::sqrt(rho / E2_ref));
      if (ctx.want_modes)
        result.mode_shapes.push_back(expand_vector(p.vector, cs.keep, cs.n_full));
    }
    return result;
  }

  // Buckling: [(K + K_R) - lambda * G] x = 0 with G the geometric stiffness
  // of the unit compressive load; solved as G x = mu A x, lambda = 1/mu.
  const ResultantField app = applied_load_resultants(model, dofs, lam, sys.K);
  SpMat G = assemble_geometric(model, dofs, app);
  G = (-G).eval();  // unit compression enters with a positive operator
  const SpMat Gc = constrain_matrix(G, cs.keep, cs.n_full);

  // the inertia pre-check above guarantees A is positive definite here
  const std::vector<EigenPair> pairs =
      generalized_symmetric_eig(Gc, A, k, EigSelect::Largest, ctx.eig);

  for (const auto& p : pairs) {
    if (p.value <= 0) continue;
    result.lambda.push_back(1.0 / p.value);
    if (ctx.want_modes)
      result.mode_shapes.push_back(expand_vector(p.vector, cs.keep, cs.n_full));
  }
  if (result.lambda.empty())
    throw SolverError("buckling: no positive eigenvalue among the requested count");

  if (setup.cutout.kind == CutoutKind::None && !preloaded) {
    result.reference_lambda = result.lambda.front();
  } else {
    CaseSetup ref = setup;
    ref.cutout = CutoutSpec::none();
    ref.analysis.env = kReferenceEnv;
    ref.analysis.eigencount = 1;
    auto compute_ref = [&]() {
      RunContext rc = ctx;
      rc.want_modes = false;
      rc.reference_cache = nullptr;
      return run_case(ref, rc).lambda.front();
    };
    result.reference_lambda =
        ctx.reference_cache
            ? ctx.reference_cache->get_or_compute(reference_key(ref), compute_ref)
            : compute_ref();
  }
  for (double l : result.lambda)
    result.lambda_normalized.push_back(l / result.reference_lambda);
  return result;
}

}  // namespace xplate
