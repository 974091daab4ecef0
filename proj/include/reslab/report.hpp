#ifndef RESLAB_REPORT_HPP
#define RESLAB_REPORT_HPP

#include <string>
#include <vector>

#include "reslab/dynamics.hpp"
#include "reslab/sweep.hpp"

namespace reslab {

/// Full-precision float formatting shared by every emitter (17 significant
/// digits, reproducible across runs).
std::string fmt17(double v);

void write_width_csv(const WidthLawReport& rep, const std::string& path);
void write_width_json(const WidthLawReport& rep, double slope_bound,
                      const std::string& path);
/// Scatter of (1/h, ln|Im rho|) with the fitted line and the reference line
/// of slope -2 S0.
void write_width_svg(const WidthLawReport& rep, const std::string& path);

void write_agmon_csv(const AgmonField& field, const std::string& path);
void write_decomposition_json(const SublevelDecomposition& decomp, double S0,
                              const GeodesicSet* geodesics, const std::string& path);
void write_geodesics_json(const GeodesicSet& gs, const std::string& path);
void write_trajectory_csv(const Trajectory& tr, const std::string& path);
void write_coverage_csv(const CoverageReport& rep, const std::string& path);
void write_eigenvalues_csv(const std::vector<std::pair<Complex, double>>& values,
                           const std::string& path);

}  // namespace reslab

#endif
