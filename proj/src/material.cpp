#include "xplate/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace xplate {

void LaminaProperties::validate() const {
  if (E1 <= 0 || E2 <= 0 || G12 <= 0 || G13 <= 0 || G23 <= 0 || rho <= 0)
    throw std::invalid_argument("lamina moduli and density must be positive");
  if (nu12 < 0 || nu12 >= 0.5)
    throw std::invalid_argument("nu12 out of [0, 0.5)");
  if (nu21() >= 0.5)
    throw std::invalid_argument("reciprocal Poisson ratio nu21 out of range");
}

MaterialTable::MaterialTable(std::vector<Row> moisture,
                             std::vector<Row> temperature,
                             LaminaProperties fixed)
    : moisture_(std::move(moisture)),
      temperature_(std::move(temperature)),
      fixed_(fixed) {
  auto check = [](const std::vector<Row>& rows, const char* what) {
    if (rows.size() < 2)
      throw std::invalid_argument(std::string(what) + " table needs >= 2 rows");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].E1 <= 0 || rows[i].E2 <= 0 || rows[i].G12 <= 0)
        throw std::invalid_argument(std::string(what) + " table has a non-positive modulus");
      if (i > 0 && rows[i].x <= rows[i - 1].x)
        throw std::invalid_argument(std::string(what) + " table rows must be strictly increasing");
    }
  };
  check(moisture_, "moisture");
  check(temperature_, "temperature");
}

MaterialTable MaterialTable::graphite_epoxy() {
  const double GPa = 1e9;
  std::vector<Row> moist = {
      {0.00, 130 * GPa, 9.50 * GPa, 6.0 * GPa},
      {0.25, 130 * GPa, 9.25 * GPa, 6.0 * GPa},
      {0.50, 130 * GPa, 9.00 * GPa, 6.0 * GPa},
      {0.75, 130 * GPa, 8.75 * GPa, 6.0 * GPa},
      {1.00, 130 * GPa, 8.50 * GPa, 6.0 * GPa},
      {1.25, 130 * GPa, 8.50 * GPa, 6.0 * GPa},
      {1.50, 130 * GPa, 8.50 * GPa, 6.0 * GPa},
  };
  std::vector<Row> temp = {
      {300, 130 * GPa, 9.50 * GPa, 6.00 * GPa},
      {325, 130 * GPa, 8.50 * GPa, 6.00 * GPa},
      {350, 130 * GPa, 8.00 * GPa, 5.50 * GPa},
      {375, 130 * GPa, 7.50 * GPa, 5.00 * GPa},
      {400, 130 * GPa, 7.00 * GPa, 4.75 * GPa},
      {425, 130 * GPa, 6.75 * GPa, 4.50 * GPa},
  };
  LaminaProperties fixed;
  fixed.nu12 = 0.3;
  fixed.alpha1 = -0.3e-6;
  fixed.alpha2 = 28.1e-6;
  // Moisture swelling per unit weight fraction; C is quoted in %, the
  // strain evaluation divides by 100.
  fixed.beta1m = 0.0;
  fixed.beta2m = 0.44;
  fixed.rho = 1.0;
  return MaterialTable(std::move(moist), std::move(temp), fixed);
}

MaterialTable MaterialTable::from_stream(std::istream& in) {
  std::vector<Row> moist, temp;
  LaminaProperties fixed;
  fixed.rho = 1.0;
  double g13 = 1.0, g23 = 0.5;
  std::vector<Row>* section = nullptr;
  std::string line;
  int lineno = 0;
  const double GPa = 1e9;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "moisture") {
      section = &moist;
    } else if (tok == "temperature") {
      section = &temp;
    } else if (tok == "fixed") {
      std::string name;
      double value;
      if (!(ss >> name >> value))
        throw std::invalid_argument("material file line " + std::to_string(lineno) +
                                    ": expected 'fixed <name> <value>'");
      if (name == "nu12") fixed.nu12 = value;
      else if (name == "alpha1") fixed.alpha1 = value;
      else if (name == "alpha2") fixed.alpha2 = value;
      else if (name == "beta1") fixed.beta1m = value;
      else if (name == "beta2") fixed.beta2m = value;
      else if (name == "rho") fixed.rho = value;
      else if (name == "g13_ratio") g13 = value;
      else if (name == "g23_ratio") g23 = value;
      else
        throw std::invalid_argument("material file line " + std::to_string(lineno) +
                                    ": unknown fixed property '" + name + "'");
    } else {
      if (!section)
        throw std::invalid_argument("material file line " + std::to_string(lineno) +
                                    ": data row before a section header");
      Row r;
      std::istringstream rs(line);
      if (!(rs >> r.x >> r.E1 >> r.E2 >> r.G12))
        throw std::invalid_argument("material file line " + std::to_string(lineno) +
                                    ": expected 'x E1 E2 G12'");
      r.E1 *= GPa; r.E2 *= GPa; r.G12 *= GPa;
      section->push_back(r);
    }
  }
  MaterialTable table(std::move(moist), std::move(temp), fixed);
  table.set_shear_rules(g13, g23);
  return table;
}

MaterialTable MaterialTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open material file: " + path);
  return from_stream(in);
}

namespace {

MaterialTable::Row interp_rows(const std::vector<MaterialTable::Row>& rows,
                               double x, const char* what) {
  if (x < rows.front().x || x > rows.back().x)
    throw std::out_of_range(std::string(what) + " outside the tabulated range");
  auto hi = std::lower_bound(rows.begin(), rows.end(), x,
                             [](const MaterialTable::Row& r, double v) { return r.x < v; });
  if (hi == rows.begin()) return rows.front();
  auto lo = hi - 1;
  if (hi == rows.end()) return rows.back();
  const double t = (x - lo->x) / (hi->x - lo->x);
  MaterialTable::Row r;
  r.x = x;
  r.E1 = lo->E1 + t * (hi->E1 - lo->E1);
  r.E2 = lo->E2 + t * (hi->E2 - lo->E2);
  r.G12 = lo->G12 + t * (hi->G12 - lo->G12);
  return r;
}

}  // namespace

LaminaProperties MaterialTable::properties_at(double T, double C) const {
  const Row base_m = interp_rows(moisture_, 0.0, "moisture concentration");
  const Row base_t = interp_rows(temperature_, 300.0, "temperature");
  const Row rm = interp_rows(moisture_, C, "moisture concentration");
  const Row rt = interp_rows(temperature_, T, "temperature");
  // Independent degradations added relative to the (300 K, 0 %) baseline.
  LaminaProperties p = fixed_;
  p.E1 = base_t.E1 + (rt.E1 - base_t.E1) + (rm.E1 - base_m.E1);
  p.E2 = base_t.E2 + (rt.E2 - base_t.E2) + (rm.E2 - base_m.E2);
  p.G12 = base_t.G12 + (rt.G12 - base_t.G12) + (rm.G12 - base_m.G12);
  p.G13 = g13_ratio_ * p.G12;
  p.G23 = g23_ratio_ * p.G12;
  p.validate();
  return p;
}

PlaneStressStiffness reduced_stiffness(const LaminaProperties& p) {
  const double nu21 = p.nu21();
  const double den = 1.0 - p.nu12 * nu21;
  if (den <= 0) throw std::invalid_argument("invalid material: 1 - nu12*nu21 <= 0");
  PlaneStressStiffness r;
  r.Q.setZero();
  r.Q(0, 0) = p.E1 / den;
  r.Q(1, 1) = p.E2 / den;
  r.Q(0, 1) = r.Q(1, 0) = p.nu12 * p.E2 / den;
  r.Q(2, 2) = p.G12;
  r.Qs.setZero();
  r.Qs(0, 0) = p.G13;
  r.Qs(1, 1) = p.G23;
  return r;
}

TransformedStiffness transform_to_laminate_axes(const PlaneStressStiffness& q,
                                                const LaminaProperties& p,
                                                double theta_deg) {
  const double t = theta_deg * M_PI / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const double c2 = c * c, s2 = s * s, cs = c * s;

  // Congruence with the inverse stress-transformation matrix; valid for a
  // fully anisotropic input, so successive rotations compose.
  Eigen::Matrix3d Tinv;
  Tinv << c2, s2, -2 * cs,
          s2, c2, 2 * cs,
          cs, -cs, c2 - s2;
  TransformedStiffness r;
  r.Qbar = Tinv * q.Q * Tinv.transpose();
  r.Qbar = 0.5 * (r.Qbar + r.Qbar.transpose()).eval();

  Eigen::Matrix2d R;
  R << c, s, -s, c;
  r.Qsbar = R.transpose() * q.Qs * R;

  auto rotate_expansion = [&](double a1, double a2) {
    // Second-order tensor rotation; the shear entry is engineering
    // (gamma = 2 * eps_12).
    return Eigen::Vector3d(a1 * c2 + a2 * s2, a1 * s2 + a2 * c2,
                           2.0 * cs * (a1 - a2));
  };
  r.alpha_xy = rotate_expansion(p.alpha1, p.alpha2);
  r.beta_xy = rotate_expansion(p.beta1m, p.beta2m);
  return r;
}

LaminateStack::LaminateStack(std::vector<Ply> plies) : plies_(std::move(plies)) {
  if (plies_.empty()) throw std::invalid_argument("laminate needs >= 1 ply");
  h_ = 0.0;
  for (const Ply& p : plies_) {
    if (p.thickness <= 0) throw std::invalid_argument("ply thickness must be positive");
    h_ += p.thickness;
  }
  z_.resize(plies_.size() + 1);
  z_[0] = -0.5 * h_;
  for (size_t k = 0; k < plies_.size(); ++k) z_[k + 1] = z_[k] + plies_[k].thickness;
  z_.back() = 0.5 * h_;  // kill accumulated roundoff at the top face
}

LaminateStack LaminateStack::from_angles(const std::vector<double>& angles_deg,
                                         double total_thickness) {
  if (angles_deg.empty()) throw std::invalid_argument("empty layup");
  if (total_thickness <= 0) throw std::invalid_argument("thickness must be positive");
  std::vector<Ply> plies(angles_deg.size());
  for (size_t k = 0; k < angles_deg.size(); ++k)
    plies[k] = {angles_deg[k], total_thickness / angles_deg.size()};
  return LaminateStack(std::move(plies));
}

bool LaminateStack::symmetric() const {
  const size_t n = plies_.size();
  for (size_t k = 0; k < n / 2; ++k) {
    const Ply& a = plies_[k];
    const Ply& b = plies_[n - 1 - k];
    if (std::abs(a.angle_deg - b.angle_deg) > 1e-12 ||
        std::abs(a.thickness - b.thickness) > 1e-12)
      return false;
  }
  return true;
}

LaminateIntegrals laminate_integrals(const LaminateStack& stack,
                                     const MaterialTable& table,
                                     const Environment& env) {
  return laminate_integrals(stack, table, env, env);
}

LaminateIntegrals laminate_integrals(const LaminateStack& stack,
                                     const MaterialTable& table,
                                     const Environment& env,
                                     const Environment& property_env) {
  // Bounds-check the load state even when the moduli come from elsewhere.
  (void)table.properties_at(env.T, env.C);
  const LaminaProperties props = table.properties_at(property_env.T, property_env.C);
  const PlaneStressStiffness q = reduced_stiffness(props);

  const double dT = env.T - 300.0;
  const double dC = (env.C - 0.0) / 100.0;  // % -> weight fraction

  LaminateIntegrals r;
  r.A.setZero(); r.B.setZero(); r.D.setZero(); r.As.setZero();
  r.N_hygro.setZero(); r.M_hygro.setZero();

  const auto& z = stack.interfaces();
  for (size_t k = 0; k < stack.plies().size(); ++k) {
    const TransformedStiffness tq =
        transform_to_laminate_axes(q, props, stack.plies()[k].angle_deg);
    const double z0 = z[k], z1 = z[k + 1];
    const double m0 = z1 - z0;
    const double m1 = 0.5 * (z1 * z1 - z0 * z0);
    const double m2 = (z1 * z1 * z1 - z0 * z0 * z0) / 3.0;
    r.A += tq.Qbar * m0;
    r.B += tq.Qbar * m1;
    r.D += tq.Qbar * m2;
    r.As += tq.Qsbar * m0;
    const Eigen::Vector3d eps0 = dT * tq.alpha_xy + dC * tq.beta_xy;
    r.N_hygro += tq.Qbar * eps0 * m0;
    r.M_hygro += tq.Qbar * eps0 * m1;
  }
  r.As *= kShearCorrection;
  const double h = stack.thickness();
  r.p = props.rho * h;
  r.I = props.rho * h * h * h / 12.0;
  return r;
}

}  // namespace xplate
