#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <random>

#include "xplate/analysis.hpp"
#include "xplate/assembly.hpp"
#include "xplate/eigensolver.hpp"

using namespace xplate;

namespace {

const MaterialTable& table() {
  static const MaterialTable t = MaterialTable::graphite_epoxy();
  return t;
}

CaseSetup table4_setup(int mesh, AnalysisMode mode, double T, double C) {
  CaseSetup s;
  s.a = s.b = 1.0;
  s.h = 0.01;
  s.nx = s.ny = mesh;
  s.layup = {0, 90, 90, 0};
  s.analysis.mode = mode;
  s.analysis.env = {T, C};
  s.analysis.bc = BoundaryCondition::SSSS;
  s.analysis.eigencount = 1;
  return s;
}

}  // namespace

TEST_CASE("global dof map") {
  SUBCASE("no cutout: nothing enriched or eliminated") {
    const StructuredMesh m = build_mesh(1, 1, 8, 8);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    CHECK(dofs.enriched_nodes.empty());
    CHECK(dofs.eliminated_nodes.empty());
    CHECK(dofs.n_standard == 5 * m.n_nodes());
    CHECK(dofs.n_enriched == 0);
  }
  SUBCASE("cutout: eliminated set matches the brute-force support test") {
    const StructuredMesh m = build_mesh(1, 1, 40, 40);
    const EnrichedModel model =
        build_model(m, CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.2));
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    CHECK(!dofs.eliminated_nodes.empty());
    CHECK(!dofs.enriched_nodes.empty());
    std::vector<bool> elim(m.n_nodes(), false);
    for (int n : dofs.eliminated_nodes) elim[n] = true;
    for (int n = 0; n < m.n_nodes(); ++n) {
      bool brute = true;
      for (int e = 0; e < m.n_elements(); ++e) {
        const auto& nd = m.element(e);
        if (nd[0] != n && nd[1] != n && nd[2] != n && nd[3] != n) continue;
        if (model.classification.classes[e] != ElementClass::Void) brute = false;
      }
      CHECK(elim[n] == brute);
      CHECK(dofs.active(n) == !brute);
    }
    // enriched nodes carry five extra ids beyond the standard block
    for (int n : dofs.enriched_nodes) {
      CHECK(dofs.enr_base[n] >= dofs.n_standard);
      CHECK(model.classification.enriched_node[n]);
    }
    CHECK(dofs.n_enriched == 5 * static_cast<int>(dofs.enriched_nodes.size()));
  }
}

TEST_CASE("generalized symmetric eigensolver") {
  auto sparse_from = [](const Eigen::MatrixXd& d) {
    return SpMat(d.sparseView());
  };
  SUBCASE("diagonal pencil") {
    Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 3).asDiagonal();
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(3, 3);
    const auto pairs =
        generalized_symmetric_eig(sparse_from(A), sparse_from(B), 3, EigSelect::Smallest);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].value == doctest::Approx(1.0));
    CHECK(pairs[1].value == doctest::Approx(2.0));
    CHECK(pairs[2].value == doctest::Approx(3.0));
  }
  SUBCASE("identical matrices give unit eigenvalues") {
    Eigen::MatrixXd A(2, 2);
    A << 4, 1, 1, 3;
    const auto pairs =
        generalized_symmetric_eig(sparse_from(A), sparse_from(A), 2, EigSelect::Smallest);
    for (const auto& p : pairs) CHECK(p.value == doctest::Approx(1.0));
  }
  SUBCASE("random SPD pencil: Lanczos matches the dense factorization") {
    std::mt19937 rng(33);
    std::normal_distribution<double> g;
    const int n = 50;
    Eigen::MatrixXd R(n, n), S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        R(i, j) = g(rng);
        S(i, j) = g(rng);
      }
    Eigen::MatrixXd A = R * R.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd B = S * S.transpose() + 1.0 * Eigen::MatrixXd::Identity(n, n);
    EigOptions dense_opt, lanczos_opt;
    dense_opt.force_method = 1;
    lanczos_opt.force_method = 2;
    lanczos_opt.tol = 1e-10;
    for (EigSelect sel : {EigSelect::Smallest, EigSelect::Largest}) {
      const auto pd =
          generalized_symmetric_eig(sparse_from(A), sparse_from(B), 4, sel, dense_opt);
      const auto pl =
          generalized_symmetric_eig(sparse_from(A), sparse_from(B), 4, sel, lanczos_opt);
      REQUIRE(pd.size() == pl.size());
      for (size_t i = 0; i < pd.size(); ++i)
        CHECK(pl[i].value ==
              doctest::Approx(pd[i].value).epsilon(1e-10));
    }
  }
  SUBCASE("free-free plate: no negative squared frequencies") {
    const StructuredMesh m = build_mesh(1, 1, 4, 4);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const LaminateIntegrals lam = laminate_integrals(
        LaminateStack::from_angles({0, 90, 90, 0}, 0.01), table(), Environment{});
    const GlobalSystem sys = assemble(model, dofs, lam);
    const auto pairs =
        generalized_symmetric_eig(sys.K, sys.M, 8, EigSelect::Smallest);
    const double scale = std::abs(pairs.back().value);
    for (const auto& p : pairs) CHECK(p.value >= -1e-8 * scale);
    // six rigid modes at (numerical) zero
    int rigid = 0;
    for (const auto& p : pairs)
      if (std::abs(p.value) < 1e-6 * scale) ++rigid;
    CHECK(rigid == 6);
  }
  SUBCASE("largest of a negative pencil is negative (no positive modes)") {
    Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(4, 4);
    const auto pairs =
        generalized_symmetric_eig(sparse_from(A), sparse_from(B), 2, EigSelect::Largest);
    CHECK(pairs.front().value == doctest::Approx(-1.0));
  }
}

TEST_CASE("assembly") {
  const LaminateStack stack = LaminateStack::from_angles({0, 90, 90, 0}, 0.01);
  const LaminateIntegrals lam = laminate_integrals(stack, table(), Environment{});

  SUBCASE("one-element model reproduces the element matrices") {
    const StructuredMesh m = build_mesh(0.7, 0.4, 1, 1);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const GlobalSystem sys = assemble(model, dofs, lam);
    const Quad4Geometry geom(m.element_coords(0));
    const ElementMatrix Ke = element_stiffness(lam, geom, model.plan.elements[0]);
    const ElementMatrix Me =
        element_mass(lam.p, lam.I, geom, model.plan.elements[0]);
    const Eigen::MatrixXd Kg(sys.K);
    const Eigen::MatrixXd Mg(sys.M);
    const auto& nd = m.element(0);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const int gi = dofs.dof(nd[i / 5], i % 5);
        const int gj = dofs.dof(nd[j / 5], j % 5);
        CHECK(Kg(gi, gj) == doctest::Approx(Ke(i, j)).epsilon(1e-14));
        CHECK(Mg(gi, gj) == doctest::Approx(Me(i, j)).epsilon(1e-14));
      }
  }
  SUBCASE("global matrices symmetric, M positive definite") {
    const StructuredMesh m = build_mesh(1, 1, 6, 6);
    const EnrichedModel model =
        build_model(m, CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.22));
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const GlobalSystem sys = assemble(model, dofs, lam);
    CHECK((Eigen::MatrixXd(sys.K) - Eigen::MatrixXd(sys.K).transpose()).cwiseAbs().maxCoeff() <=
          1e-12 * Eigen::MatrixXd(sys.K).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sys.M));
    CHECK(es.eigenvalues().minCoeff() > 0);
  }
  SUBCASE("unconstrained full plate has exactly six rigid modes") {
    const StructuredMesh m = build_mesh(1, 1, 4, 4);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const GlobalSystem sys = assemble(model, dofs, lam);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(sys.K));
    const double scale = es.eigenvalues().maxCoeff();
    int zeros = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 1e-10 * scale) ++zeros;
    CHECK(zeros == 6);
  }
}

TEST_CASE("boundary conditions") {
  const StructuredMesh m = build_mesh(1, 1, 5, 5);
  const EnrichedModel model = build_model(m, CutoutSpec::none());
  const GlobalDofMap dofs = build_dof_map(m, model.classification);

  SUBCASE("CCCC pins all five fields on the boundary") {
    const auto mask = constraint_mask(m, dofs, BoundaryCondition::CCCC);
    for (int n = 0; n < m.n_nodes(); ++n) {
      const bool bnd = m.on_boundary_x(n) || m.on_boundary_y(n);
      for (int c = 0; c < 5; ++c) CHECK(static_cast<bool>(mask[dofs.dof(n, c)]) == bnd);
    }
  }
  SUBCASE("SSSS leaves the tangential displacement and rotation free") {
    const auto mask = constraint_mask(m, dofs, BoundaryCondition::SSSS);
    const int n = m.node_index(0, 2);  // on x = 0, off the corners
    CHECK(mask[dofs.dof(n, 0)]);       // u0
    CHECK_FALSE(mask[dofs.dof(n, 1)]); // v0 free
    CHECK(mask[dofs.dof(n, 2)]);       // w0
    CHECK_FALSE(mask[dofs.dof(n, 3)]); // bx free
    CHECK(mask[dofs.dof(n, 4)]);       // by
  }
  SUBCASE("constrained stiffness is positive definite for both conditions") {
    const LaminateIntegrals lam = laminate_integrals(
        LaminateStack::from_angles({0, 90, 90, 0}, 0.01), table(), Environment{});
    const GlobalSystem sys = assemble(model, dofs, lam);
    for (auto bc : {BoundaryCondition::SSSS, BoundaryCondition::CCCC}) {
      const auto cs = apply_boundary_conditions(sys, constraint_mask(m, dofs, bc));
      Eigen::SimplicialLDLT<SpMat> ldlt(cs.K);
      REQUIRE(ldlt.info() == Eigen::Success);
      CHECK((ldlt.vectorD().array() > 0).all());
    }
  }
}

TEST_CASE("static pre-stress solve and resultant recovery") {
  const LaminateStack stack = LaminateStack::from_angles({0, 90, 90, 0}, 0.01);

  SUBCASE("singular system is reported") {
    SpMat K(5, 5);  // all-zero stiffness
    Eigen::VectorXd f = Eigen::VectorXd::Ones(5);
    CHECK_THROWS_AS((void)static_solve(K, f), SolverError);
  }
  SUBCASE("zero load gives zero displacement") {
    const StructuredMesh m = build_mesh(1, 1, 6, 6);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const LaminateIntegrals lam = laminate_integrals(stack, table(), Environment{});
    const GlobalSystem sys = assemble(model, dofs, lam);
    const auto cs = apply_boundary_conditions(
        sys, constraint_mask(m, dofs, BoundaryCondition::SSSS));
    CHECK(sys.fT.norm() == 0.0);
    CHECK(static_solve(cs.K, cs.fT).norm() == 0.0);
  }
  SUBCASE("restrained uniform heating: no deflection, uniform resultants") {
    const StructuredMesh m = build_mesh(1, 1, 8, 8);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const LaminateIntegrals lam = laminate_integrals(
        stack, table(), Environment{325.0, 0.0}, kReferenceEnv);
    const GlobalSystem sys = assemble(model, dofs, lam);
    for (auto bc : {BoundaryCondition::SSSS, BoundaryCondition::CCCC}) {
      const auto cs = apply_boundary_conditions(sys, constraint_mask(m, dofs, bc));
      const Eigen::VectorXd dr = static_solve(cs.K, cs.fT);
      const Eigen::VectorXd d = expand_vector(dr, cs.keep, cs.n_full);
      for (int n = 0; n < m.n_nodes(); ++n)
        CHECK(std::abs(d(dofs.dof(n, 2))) <= 1e-12);
      const ResultantField f = recover_resultants(model, dofs, lam, d);
      for (const auto& elem : f.per_element)
        for (const auto& N : elem)
          CHECK((N + lam.N_hygro).norm() <= 1e-6 * lam.N_hygro.norm());
    }
  }
  SUBCASE("free in-plane expansion relieves the stress") {
    const StructuredMesh m = build_mesh(1, 1, 6, 6);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const LaminateStack one = LaminateStack::from_angles({0}, 0.01);
    const LaminateIntegrals lam =
        laminate_integrals(one, table(), Environment{350.0, 0.0}, kReferenceEnv);
    const GlobalSystem sys = assemble(model, dofs, lam);
    // membrane dofs only, rigid modes pinned
    std::vector<char> mask(dofs.n_standard, 1);
    for (int n = 0; n < m.n_nodes(); ++n) {
      mask[dofs.dof(n, 0)] = 0;
      mask[dofs.dof(n, 1)] = 0;
    }
    mask[dofs.dof(m.node_index(0, 0), 0)] = 1;
    mask[dofs.dof(m.node_index(0, 0), 1)] = 1;
    mask[dofs.dof(m.node_index(6, 0), 1)] = 1;
    const auto cs = apply_boundary_conditions(sys, mask);
    const Eigen::VectorXd d =
        expand_vector(static_solve(cs.K, cs.fT), cs.keep, cs.n_full);
    const ResultantField f = recover_resultants(model, dofs, lam, d);
    for (const auto& elem : f.per_element)
      for (const auto& N : elem)
        CHECK(N.norm() <= 1e-8 * lam.N_hygro.norm());
  }
  SUBCASE("hygrothermal edge equilibrium matches A * alpha * dT") {
    // SSSS restrains the normal displacement on x = 0: the reaction flux
    // there must equal the constrained-expansion resultant.
    const StructuredMesh m = build_mesh(1, 1, 8, 8);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const LaminateStack one = LaminateStack::from_angles({0}, 0.01);
    const double dT = 40.0;
    const LaminateIntegrals lam = laminate_integrals(
        one, table(), Environment{300.0 + dT, 0.0}, kReferenceEnv);
    const GlobalSystem sys = assemble(model, dofs, lam);
    const auto cs = apply_boundary_conditions(
        sys, constraint_mask(m, dofs, BoundaryCondition::SSSS));
    const Eigen::VectorXd d =
        expand_vector(static_solve(cs.K, cs.fT), cs.keep, cs.n_full);
    const ResultantField f = recover_resultants(model, dofs, lam, d);
    // resultant at every material point is -N_hygro; their x-flux through
    // the restrained edge equals N_hygro_x times the edge length
    double Nxx = 0;
    int count = 0;
    for (const auto& elem : f.per_element)
      for (const auto& N : elem) {
        Nxx += N(0);
        ++count;
      }
    Nxx /= count;
    CHECK(Nxx == doctest::Approx(-lam.N_hygro(0)).epsilon(1e-9));
  }
}

TEST_CASE("patch tests on a distorted 2x2 assembly") {
  // 3x3 nodes, interior node displaced; boundary nodes carry the exact
  // constant-strain fields, the interior node is solved for.
  Eigen::Matrix<double, 9, 2> nodes;
  nodes << 0.0, 0.0, 0.55, 0.0, 1.0, 0.0,
           0.0, 0.45, 0.62, 0.57, 1.0, 0.52,
           0.0, 1.0, 0.48, 1.0, 1.0, 1.0;
  const int conn[4][4] = {{0, 1, 4, 3}, {1, 2, 5, 4}, {4, 5, 8, 7}, {3, 4, 7, 6}};
  LaminaProperties iso;
  iso.E1 = iso.E2 = 70e9;
  iso.nu12 = 0.3;
  iso.G12 = iso.G13 = iso.G23 = 70e9 / 2.6;
  iso.rho = 1000;
  const PlaneStressStiffness q = reduced_stiffness(iso);
  LaminateIntegrals lam;
  const double h = 0.02;
  lam.A = q.Q * h;
  lam.B.setZero();
  lam.D = q.Q * h * h * h / 12.0;
  lam.As = kShearCorrection * q.Qs * h;
  lam.p = iso.rho * h;
  lam.I = iso.rho * h * h * h / 12.0;
  lam.N_hygro.setZero();
  lam.M_hygro.setZero();

  auto assemble_patch = [&](auto u, auto v, auto w, auto bx, auto by) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(45, 45);
    for (int e = 0; e < 4; ++e) {
      Eigen::Matrix<double, 4, 2> c;
      for (int a = 0; a < 4; ++a) c.row(a) = nodes.row(conn[e][a]);
      const Quad4Geometry geom(c);
      ElementQuadrature eq;
      eq.cls = ElementClass::Standard;
      const double g = 1.0 / std::sqrt(3.0);
      for (double eta : {-g, g})
        for (double xi : {-g, g}) eq.points.push_back({xi, eta, 1.0, true});
      const ElementMatrix Ke = element_stiffness(lam, geom, eq);
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
          K(5 * conn[e][i / 5] + i % 5, 5 * conn[e][j / 5] + j % 5) += Ke(i, j);
    }
    Eigen::VectorXd d(45);
    for (int n = 0; n < 9; ++n) {
      const double x = nodes(n, 0), y = nodes(n, 1);
      d(5 * n + 0) = u(x, y);
      d(5 * n + 1) = v(x, y);
      d(5 * n + 2) = w(x, y);
      d(5 * n + 3) = bx(x, y);
      d(5 * n + 4) = by(x, y);
    }
    // solve the interior node (node 4) from the boundary values
    Eigen::MatrixXd Kii = K.block(20, 20, 5, 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
    for (int n = 0; n < 9; ++n) {
      if (n == 4) continue;
      rhs -= K.block(20, 5 * n, 5, 5) * d.segment(5 * n, 5);
    }
    d.segment(20, 5) = Kii.ldlt().solve(rhs);
    return d;
  };

  auto check_constant_resultants = [&](const Eigen::VectorXd& d,
                                       const Eigen::Vector3d& N_expect,
                                       const Eigen::Vector3d& M_expect) {
    for (int e = 0; e < 4; ++e) {
      Eigen::Matrix<double, 4, 2> c;
      ElementVector de;
      for (int a = 0; a < 4; ++a) {
        c.row(a) = nodes.row(conn[e][a]);
        de.segment(5 * a, 5) = d.segment(5 * conn[e][a], 5);
      }
      const Quad4Geometry geom(c);
      const ShearTying tying(geom);
      const double g = 1.0 / std::sqrt(3.0);
      for (double eta : {-g, g})
        for (double xi : {-g, g}) {
          const StrainOperators ops = strain_operators(geom, tying, xi, eta);
          const Eigen::Vector3d N = lam.A * (ops.Bp * de);
          const Eigen::Vector3d M = lam.D * (ops.Bb * de);
          const double scale = std::max(N_expect.norm() + M_expect.norm() *
                                        10.0, 1e-30);
          CHECK((N - N_expect).norm() <= 1e-10 * scale * 10);
          CHECK((M - M_expect).norm() / std::max(M_expect.norm(), 1e-30) <= 1e-10);
        }
    }
  };

  SUBCASE("membrane patch") {
    auto zero = [](double, double) { return 0.0; };
    const double e0 = 1e-3;
    const Eigen::Vector3d eps(e0, -0.7 * e0, 0.8 * e0);
    const Eigen::VectorXd d = assemble_patch(
        [&](double x, double y) { return e0 * x + 0.8 * e0 * y * 0.5; },
        [&](double x, double y) { return -0.7 * e0 * y + 0.8 * e0 * x * 0.5; },
        zero, zero, zero);
    check_constant_resultants(d, lam.A * eps, Eigen::Vector3d::Zero());
  }
  SUBCASE("bending patch") {
    auto zero = [](double, double) { return 0.0; };
    const double k0 = 1e-3;
    const Eigen::Vector3d kap(k0, 0.8 * k0, 0.6 * k0);
    const Eigen::VectorXd d = assemble_patch(
        zero, zero,
        [&](double x, double y) {
          return -k0 * (0.5 * x * x + 0.3 * x * y + 0.4 * y * y);
        },
        [&](double x, double y) { return k0 * (x + 0.3 * y); },
        [&](double x, double y) { return k0 * (0.3 * x + 0.8 * y); });
    check_constant_resultants(d, Eigen::Vector3d::Zero(), lam.D * kap);
  }
}

TEST_CASE("analysis pipeline against the published 10x10 grid") {
  RunContext ctx;
  ctx.table = &table();
  SUBCASE("vibration, moisture case") {
    const auto r = run_case(table4_setup(10, AnalysisMode::Vibration, 300, 0.1), ctx);
    CHECK(std::abs(r.Omega.front() - 9.6133) / 9.6133 < 0.01);
  }
  SUBCASE("vibration, thermal case") {
    const auto r = run_case(table4_setup(10, AnalysisMode::Vibration, 325, 0.0), ctx);
    CHECK(std::abs(r.Omega.front() - 8.2604) / 8.2604 < 0.01);
  }
  SUBCASE("buckling, moisture case") {
    const auto r = run_case(table4_setup(10, AnalysisMode::Buckling, 300, 0.1), ctx);
    CHECK(std::abs(r.lambda_normalized.front() - 0.6158) / 0.6158 < 0.015);
  }
  SUBCASE("buckling, thermal case") {
    const auto r = run_case(table4_setup(10, AnalysisMode::Buckling, 325, 0.0), ctx);
    CHECK(std::abs(r.lambda_normalized.front() - 0.4571) / 0.4571 < 0.015);
  }
}

TEST_CASE("pipeline invariants") {
  SUBCASE("density invariance of the nondimensional frequency") {
    MaterialTable t1 = MaterialTable::graphite_epoxy();
    MaterialTable t2 = MaterialTable::graphite_epoxy();
    t2.set_rho(10.0 * t1.rho());
    RunContext c1, c2;
    c1.table = &t1;
    c2.table = &t2;
    const CaseSetup s = table4_setup(8, AnalysisMode::Vibration, 300, 0.1);
    const auto r1 = run_case(s, c1);
    const auto r2 = run_case(s, c2);
    CHECK(std::abs(r1.Omega.front() - r2.Omega.front()) <=
          1e-10 * r1.Omega.front());
  }
  SUBCASE("buckling self-normalisation is exactly one") {
    const auto r =
        run_case(table4_setup(8, AnalysisMode::Buckling, 300, 0.0), RunContext{});
    CHECK(r.lambda_normalized.front() == 1.0);
  }
  SUBCASE("dense and Lanczos paths agree to 1e-8") {
    CaseSetup s = table4_setup(12, AnalysisMode::Vibration, 325, 0.0);
    RunContext dense, lanczos;
    dense.eig.force_method = 1;
    lanczos.eig.force_method = 2;
    const auto rd = run_case(s, dense);
    const auto rl = run_case(s, lanczos);
    CHECK(std::abs(rd.omega.front() - rl.omega.front()) <= 1e-8 * rd.omega.front());
    s.analysis.mode = AnalysisMode::Buckling;
    const auto bd = run_case(s, dense);
    const auto bl = run_case(s, lanczos);
    CHECK(std::abs(bd.lambda.front() - bl.lambda.front()) <= 1e-8 * bd.lambda.front());
  }
  SUBCASE("overwhelming preload reports instability") {
    CaseSetup s = table4_setup(8, AnalysisMode::Vibration, 425, 1.5);
    CHECK_THROWS_AS((void)run_case(s, RunContext{}), InstabilityError);
    s.analysis.mode = AnalysisMode::Buckling;
    CHECK_THROWS_AS((void)run_case(s, RunContext{}), InstabilityError);
  }
  SUBCASE("marginally supercritical preload is detected, not misreported") {
    // indefinite K + K_R whose negative mode is larger in magnitude than
    // the smallest positive one, so a smallest-magnitude probe alone
    // would miss it
    CaseSetup s;
    s.a = 0.522168;
    s.b = 1.431829;
    s.h = 0.005311;
    s.nx = s.ny = 16;
    s.layup = {0, 90, 90, 0};
    s.cutout = CutoutSpec::circle(Eigen::Vector2d(0.185769, 0.581028), 0.1013);
    s.analysis.env = {306.990, 0.2730};
    s.analysis.bc = BoundaryCondition::SSSS;
    for (auto mode : {AnalysisMode::Vibration, AnalysisMode::Buckling}) {
      s.analysis.mode = mode;
      try {
        (void)run_case(s, RunContext{});
        FAIL("expected InstabilityError");
      } catch (const InstabilityError& e) {
        CHECK(e.offending_eigenvalue < 0);
      }
    }
  }
  SUBCASE("static mode under restrained heating keeps the plate flat") {
    CaseSetup s = table4_setup(8, AnalysisMode::Static, 350, 0.0);
    const auto r = run_case(s, RunContext{});
    CHECK(r.max_deflection <= 1e-12);
    CHECK(r.delta.size() > 0);
  }
}

TEST_CASE("cutout pipeline checks") {
  RunContext ctx;
  ctx.table = &table();
  SUBCASE("degenerate ellipse reproduces the circle spectrum") {
    CaseSetup s = table4_setup(16, AnalysisMode::Vibration, 300, 0.0);
    s.h = 0.1;  // thick plate keeps the test cheap
    s.cutout = CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.2);
    const double circle = run_case(s, ctx).Omega.front();
    s.cutout = CutoutSpec::ellipse(Eigen::Vector2d(0.5, 0.5), 0.2, 0.2, 57.0);
    const double ellipse = run_case(s, ctx).Omega.front();
    // the two level sets agree up to scale, so the interface roots differ
    // only in the last ulps
    CHECK(ellipse == doctest::Approx(circle).epsilon(1e-9));
  }
  SUBCASE("frequency with a hole converges under refinement") {
    auto omega = [&](int mesh) {
      CaseSetup s = table4_setup(mesh, AnalysisMode::Vibration, 300, 0.0);
      s.h = 0.1;
      s.cutout = CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.2);
      return run_case(s, ctx).Omega.front();
    };
    const double o10 = omega(10), o20 = omega(20), o40 = omega(40);
    // successive differences shrink markedly
    CHECK(std::abs(o20 - o40) < 0.5 * std::abs(o10 - o20));
    CHECK(std::abs(o20 - o40) / o40 < 0.01);
  }
  SUBCASE("hole concentrates the in-plane load") {
    const StructuredMesh m = build_mesh(1, 1, 24, 24);
    const EnrichedModel model =
        build_model(m, CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.15));
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    LaminaProperties iso;
    iso.E1 = iso.E2 = 70e9;
    iso.nu12 = 0.3;
    iso.G12 = iso.G13 = iso.G23 = 70e9 / 2.6;
    iso.rho = 1;
    const PlaneStressStiffness q = reduced_stiffness(iso);
    LaminateIntegrals lam;
    lam.A = q.Q * 0.01;
    lam.B.setZero();
    lam.D = q.Q * 1e-6 / 12;
    lam.As = kShearCorrection * q.Qs * 0.01;
    lam.p = 0.01;
    lam.I = 1e-6 / 12;
    lam.N_hygro.setZero();
    lam.M_hygro.setZero();
    const GlobalSystem sys = assemble(model, dofs, lam);
    const ResultantField f = applied_load_resultants(model, dofs, lam, sys.K);
    // net-section point right beside the hole on the transverse diameter
    double peak = 0;
    for (int e = 0; e < m.n_elements(); ++e)
      for (const auto& N : f.per_element[e]) peak = std::min(peak, N(0));
    // the classical concentration factor for a circular hole is about 3
    CHECK(peak < -2.0);
    CHECK(peak > -4.5);
  }
}

TEST_CASE("applied unit load field") {
  const LaminateStack stack = LaminateStack::from_angles({0, 90, 90, 0}, 0.01);
  const LaminateIntegrals lam = laminate_integrals(stack, table(), Environment{});
  SUBCASE("no cutout: exactly uniform") {
    const StructuredMesh m = build_mesh(1, 1, 6, 6);
    const EnrichedModel model = build_model(m, CutoutSpec::none());
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const GlobalSystem sys = assemble(model, dofs, lam);
    const ResultantField f = applied_load_resultants(model, dofs, lam, sys.K);
    for (const auto& elem : f.per_element)
      for (const auto& N : elem) {
        CHECK(N(0) == -1.0);
        CHECK(N(1) == 0.0);
      }
  }
  SUBCASE("cutout: far field stays near the applied value") {
    const StructuredMesh m = build_mesh(1, 1, 16, 16);
    const EnrichedModel model =
        build_model(m, CutoutSpec::circle(Eigen::Vector2d(0.5, 0.5), 0.15));
    const GlobalDofMap dofs = build_dof_map(m, model.classification);
    const GlobalSystem sys = assemble(model, dofs, lam);
    const ResultantField f = applied_load_resultants(model, dofs, lam, sys.K);
    // corner element far from the hole
    const Eigen::Vector3d N = f.per_element[0][0];
    CHECK(N(0) == doctest::Approx(-1.0).epsilon(0.08));
    // net x-flux through the mid section equals the applied load
    double flux = 0;
    for (int j = 0; j < m.ny(); ++j) {
      const int e = j * m.nx() + m.nx() / 2 - 1;
      double avg = 0;
      if (f.per_element[e].empty()) continue;
      for (const auto& Np : f.per_element[e]) avg += Np(0);
      avg /= f.per_element[e].size();
      flux += avg * m.dy() *
              element_material_fraction(model.plan.elements[e]);
    }
    CHECK(flux == doctest::Approx(-1.0).epsilon(0.05));
  }
}
