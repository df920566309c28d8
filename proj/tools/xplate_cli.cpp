// Batch front end: single runs, the published-reference validation grid,
// and parametric sweeps with CSV output.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "xplate/config.hpp"
#include "xplate/sweep.hpp"
#include "xplate/vtk.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInstability = 4;

struct CommonFlags {
  std::vector<int> mesh;
  std::string out;
  bool dump_fields = false;
  int workers = 1;
  std::string material_file;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--mesh", f.mesh, "Override mesh as NX NY")->expected(2);
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_flag("--dump-fields", f.dump_fields, "Write VTK field dumps per case");
  cmd->add_option("--workers", f.workers, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--material", f.material_file,
                  "Material table file (defaults to the built-in lamina data)");
}

xplate::MaterialTable load_table(const CommonFlags& f) {
  return f.material_file.empty() ? xplate::MaterialTable::graphite_epoxy()
                                 : xplate::MaterialTable::from_file(f.material_file);
}

void apply_overrides(xplate::RunConfig& cfg, const CommonFlags& f) {
  if (!f.mesh.empty()) {
    cfg.nx = f.mesh[0];
    cfg.ny = f.mesh[1];
  }
  if (!f.out.empty()) cfg.out_path = f.out;
  if (f.dump_fields) cfg.dump_fields = true;
}

void dump_fields(const std::vector<xplate::SweepOutcome>& outcomes,
                 const std::string& base) {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& oc = outcomes[i];
    if (!oc.error.empty()) continue;
    const auto& s = oc.swept.setup;
    const xplate::StructuredMesh mesh = xplate::build_mesh(s.a, s.b, s.nx, s.ny);
    const xplate::EnrichedModel model = xplate::build_model(mesh, s.cutout);
    const xplate::GlobalDofMap dofs =
        xplate::build_dof_map(mesh, model.classification);
    const Eigen::VectorXd* field = nullptr;
    if (!oc.result.mode_shapes.empty())
      field = &oc.result.mode_shapes.front();
    else if (oc.result.delta.size() > 0)
      field = &oc.result.delta;
    xplate::write_vtk_file(base + "_case" + std::to_string(i) + ".vtk", model,
                           dofs, field,
                           oc.result.mode_shapes.empty() ? "displacement" : "mode1");
  }
}

int emit(const std::vector<xplate::SweepOutcome>& outcomes,
         const xplate::RunConfig& cfg, bool single, bool stop_on_error) {
  if (!cfg.out_path.empty()) {
    std::ofstream os(cfg.out_path, std::ios::app);
    if (!os) {
      std::cerr << "error: cannot open " << cfg.out_path << "\n";
      return kExitConfig;
    }
    xplate::write_csv(os, outcomes);
  } else {
    xplate::write_csv(std::cout, outcomes);
  }
  if (cfg.dump_fields)
    dump_fields(outcomes, cfg.out_path.empty() ? "fields" : cfg.out_path);

  if (single || stop_on_error) {
    for (const auto& oc : outcomes) {
      if (oc.error.empty()) continue;
      std::cerr << "error: " << oc.error << "\n";
      return oc.instability ? kExitInstability : kExitSolver;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite plate vibration and buckling with mesh-independent cutouts"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, val_flags;
  std::string run_config_path, sweep_config_path;

  CLI::App* run = app.add_subcommand("run", "Run a single analysis case");
  run->add_option("config", run_config_path, "Config file")->required();
  add_common(run, run_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parametric sweep");
  sweep->add_option("config", sweep_config_path, "Config file")->required();
  add_common(sweep, sweep_flags);

  CLI::App* validate =
      app.add_subcommand("validate", "Mesh-refinement grid vs. published references");
  add_common(validate, val_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || sweep->parsed()) {
      const bool single = run->parsed();
      const CommonFlags& flags = single ? run_flags : sweep_flags;
      const std::string& path = single ? run_config_path : sweep_config_path;
      const xplate::MaterialTable table = load_table(flags);
      xplate::RunConfig cfg = xplate::parse_config_file(path, table);
      apply_overrides(cfg, flags);
      if (single && !cfg.is_single()) {
        std::cerr << "error: 'run' needs a single-valued config ("
                  << cfg.case_count() << " cases given); use 'sweep'\n";
        return kExitConfig;
      }
      const auto plan = xplate::expand_sweep(cfg, table);
      const auto outcomes =
          xplate::run_sweep(plan, table, flags.workers, cfg.dump_fields);
      return emit(outcomes, cfg, single, /*stop_on_error=*/single);
    }
    const xplate::MaterialTable table = load_table(val_flags);
    xplate::run_validation(std::cout, table, val_flags.workers);
    return 0;
  } catch (const xplate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const xplate::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
}
