#ifndef XPLATE_SWEEP_HPP
#define XPLATE_SWEEP_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "xplate/config.hpp"

namespace xplate {

struct SweepOutcome {
  SweepCase swept;
  AnalysisResult result;
  std::string error;  // empty on success
  bool instability = false;
};

/// Run every case of the plan. Cases are dispatched to `workers` threads;
/// outcomes are returned in plan order regardless of completion order.
std::vector<SweepOutcome> run_sweep(const std::vector<SweepCase>& plan,
                                    const MaterialTable& table, int workers = 1,
                                    bool want_modes = false);

/// CSV rows: case,a,b,h,layup,cutout,r,d,e,psi,T,C,bc,mode,index,raw,nondim,error
/// The first line is a timestamp comment; everything below is deterministic.
void write_csv(std::ostream& os, const std::vector<SweepOutcome>& outcomes);
std::string csv_header();

/// The mesh-refinement validation grid: frequencies and normalised critical
/// loads of the four-layer cross-ply square plate (a/h = 100, SSSS) at two
/// environmental states, against the published reference solutions.
struct ValidationEntry {
  int mesh = 0;
  double freq_moist = 0, freq_temp = 0;   // nondimensional frequency
  double buck_moist = 0, buck_temp = 0;   // normalised critical load
};

struct ValidationReport {
  std::vector<ValidationEntry> computed;   // per mesh density
  std::vector<ValidationEntry> reference;  // published values, same layout
};

ValidationReport run_validation(std::ostream& os, const MaterialTable& table,
                                int workers = 1);

}  // namespace xplate

#endif
