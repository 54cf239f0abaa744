#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "heatlab/solver.hpp"

namespace heatlab {

// 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_g17(double x);

// Schema: t,sup_u,mass,dt with a header row.
void write_timeseries_csv(const std::string& path,
                          const std::vector<HistoryRow>& history);

// Schema: r,u with a header row.
void write_profile_csv(const std::string& path, const Eigen::ArrayXd& r,
                       const Eigen::ArrayXd& u);

std::string profile_filename(double t);

}  // namespace heatlab
