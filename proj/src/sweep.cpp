#include "xplate/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <thread>

namespace xplate {

std::vector<SweepOutcome> run_sweep(const std::vector<SweepCase>& plan,
                                    const MaterialTable& table, int workers,
                                    bool want_modes) {
  std::vector<SweepOutcome> outcomes(plan.size());
  ReferenceCache cache;
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    RunContext ctx;
    ctx.table = &table;
    ctx.reference_cache = &cache;
    ctx.want_modes = want_modes;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      outcomes[i].swept = plan[i];
      try {
        outcomes[i].result = run_case(plan[i].setup, ctx);
      } catch (const InstabilityError& e) {
        outcomes[i].error = e.what();
        outcomes[i].instability = true;
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };

  workers = std::max(1, workers);
  if (workers == 1 || plan.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return outcomes;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const char* mode_name(AnalysisMode m) {
  switch (m) {
    case AnalysisMode::Static: return "static";
    case AnalysisMode::Vibration: return "vibration";
    case AnalysisMode::Buckling: return "buckling";
  }
  return "?";
}

const char* cutout_name(CutoutKind k) {
  switch (k) {
    case CutoutKind::None: return "none";
    case CutoutKind::Circle: return "circle";
    case CutoutKind::Ellipse: return "ellipse";
  }
  return "?";
}

void csv_row(std::ostream& os, std::size_t case_id, const SweepCase& sc,
             int index, double raw, double nondim, const std::string& error) {
  const CaseSetup& s = sc.setup;
  os << case_id << ',' << fmt(s.a) << ',' << fmt(s.b) << ',' << fmt(s.h) << ','
     << sc.layup_label << ',' << cutout_name(s.cutout.kind) << ','
     << fmt(s.cutout.radius) << ',' << fmt(s.cutout.d) << ',' << fmt(s.cutout.e)
     << ',' << fmt(s.cutout.theta_deg) << ',' << fmt(s.analysis.env.T) << ','
     << fmt(s.analysis.env.C) << ','
     << (s.analysis.bc == BoundaryCondition::SSSS ? "SSSS" : "CCCC") << ','
     << mode_name(s.analysis.mode) << ',' << index << ','
     << (error.empty() ? fmt(raw) : "") << ','
     << (error.empty() ? fmt(nondim) : "") << ',' << error << '\n';
}

}  // namespace

std::string csv_header() {
  return "case,a,b,h,layup,cutout,r,d,e,psi,T,C,bc,mode,index,raw,nondim,error";
}

void write_csv(std::ostream& os, const std::vector<SweepOutcome>& outcomes) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
  os << "# generated " << stamp << "Z\n" << csv_header() << '\n';

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SweepOutcome& oc = outcomes[i];
    if (!oc.error.empty()) {
      csv_row(os, i, oc.swept, 0, 0, 0, oc.error);
      continue;
    }
    const AnalysisResult& r = oc.result;
    switch (oc.swept.setup.analysis.mode) {
      case AnalysisMode::Static:
        csv_row(os, i, oc.swept, 1, r.max_deflection,
                r.max_deflection / oc.swept.setup.h, "");
        break;
      case AnalysisMode::Vibration:
        for (std::size_t m = 0; m < r.omega.size(); ++m)
          csv_row(os, i, oc.swept, static_cast<int>(m + 1), r.omega[m], r.Omega[m], "");
        break;
      case AnalysisMode::Buckling:
        for (std::size_t m = 0; m < r.lambda.size(); ++m)
          csv_row(os, i, oc.swept, static_cast<int>(m + 1), r.lambda[m],
                  r.lambda_normalized[m], "");
        break;
    }
  }
}

ValidationReport run_validation(std::ostream& os, const MaterialTable& table,
                                int workers) {
  // Published reference grid: shear-flexible FEM at four mesh densities,
  // a Ritz series solution, and a Q8 finite element solution.
  const int meshes[4] = {10, 20, 30, 40};
  const ValidationEntry ref_fem[4] = {
      {10, 9.6133, 8.2604, 0.6158, 0.4571},
      {20, 9.4596, 8.0926, 0.6100, 0.4488},
      {30, 9.4345, 8.0651, 0.6090, 0.4475},
      {40, 9.4260, 8.0559, 0.6087, 0.4393},
  };
  const ValidationEntry ritz = {0, 9.4110, 8.0680, 0.6091, 0.4477};
  const ValidationEntry q8 = {0, 9.3993, 8.0531, 0.6084, 0.4466};

  std::vector<SweepCase> plan;
  for (int mesh : meshes) {
    for (int env = 0; env < 2; ++env) {
      for (int mode = 0; mode < 2; ++mode) {
        CaseSetup s;
        s.a = s.b = 1.0;
        s.h = 0.01;
        s.nx = s.ny = mesh;
        s.layup = {0, 90, 90, 0};
        s.analysis.bc = BoundaryCondition::SSSS;
        s.analysis.mode = mode == 0 ? AnalysisMode::Vibration : AnalysisMode::Buckling;
        s.analysis.eigencount = 1;
        s.analysis.env = env == 0 ? Environment{300.0, 0.1} : Environment{325.0, 0.0};
        plan.push_back({s, "0/90/90/0"});
      }
    }
  }
  const auto outcomes = run_sweep(plan, table, workers);
  for (const auto& oc : outcomes)
    if (!oc.error.empty())
      throw SolverError("validation case failed (" +
                        std::to_string(&oc - outcomes.data()) + "): " + oc.error);

  ValidationReport report;
  for (int m = 0; m < 4; ++m) {
    ValidationEntry e;
    e.mesh = meshes[m];
    e.freq_moist = outcomes[4 * m + 0].result.Omega.front();
    e.buck_moist = outcomes[4 * m + 1].result.lambda_normalized.front();
    e.freq_temp = outcomes[4 * m + 2].result.Omega.front();
    e.buck_temp = outcomes[4 * m + 3].result.lambda_normalized.front();
    report.computed.push_back(e);
    report.reference.push_back(ref_fem[m]);
  }

  auto dev = [](double got, double want) { return 100.0 * (got - want) / want; };
  os << "Cross-ply (0/90/90/0) square plate, a/h = 100, SSSS\n";
  os << "Nondimensional frequency and normalised critical load vs. references\n\n";
  os << std::setw(8) << "mesh"
     << " | freq C=0.1%    ref    dev% | freq T=325K    ref    dev%"
     << " | buck C=0.1%    ref    dev% | buck T=325K    ref    dev%\n";
  os << std::string(130, '-') << '\n';
  os << std::fixed << std::setprecision(4);
  for (int m = 0; m < 4; ++m) {
    const ValidationEntry& c = report.computed[m];
    const ValidationEntry& r = ref_fem[m];
    os << std::setw(5) << c.mesh << "^2  |";
    os << std::setw(9) << c.freq_moist << std::setw(9) << r.freq_moist
       << std::setw(7) << std::setprecision(2) << dev(c.freq_moist, r.freq_moist)
       << std::setprecision(4) << " |";
    os << std::setw(9) << c.freq_temp << std::setw(9) << r.freq_temp << std::setw(7)
       << std::setprecision(2) << dev(c.freq_temp, r.freq_temp)
       << std::setprecision(4) << " |";
    os << std::setw(9) << c.buck_moist << std::setw(9) << r.buck_moist
       << std::setw(7) << std::setprecision(2) << dev(c.buck_moist, r.buck_moist)
       << std::setprecision(4) << " |";
    os << std::setw(9) << c.buck_temp << std::setw(9) << r.buck_temp << std::setw(7)
       << std::setprecision(2) << dev(c.buck_temp, r.buck_temp)
       << std::setprecision(4) << "\n";
  }
  os << std::string(130, '-') << '\n';
  os << "   Ritz  |" << std::setw(9) << ritz.freq_moist << std::setw(16) << " "
     << std::setw(9) << ritz.freq_temp << std::setw(16) << " " << std::setw(9)
     << ritz.buck_moist << std::setw(16) << " " << std::setw(9) << ritz.buck_temp
     << '\n';
  os << "     Q8  |" << std::setw(9) << q8.freq_moist << std::setw(16) << " "
     << std::setw(9) << q8.freq_temp << std::setw(16) << " " << std::setw(9)
     << q8.buck_moist << std::setw(16) << " " << std::setw(9) << q8.buck_temp
     << '\n';
  os.unsetf(std::ios::fixed);
  return report;
}

}  // namespace xplate
