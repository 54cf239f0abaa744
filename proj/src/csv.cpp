#include "heatlab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "heatlab/common.hpp"

namespace heatlab {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

static std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open output file: " + path);
  return out;
}

void write_timeseries_csv(const std::string& path,
                          const std::vector<HistoryRow>& history) {
  auto out = open_out(path);
  out << "t,sup_u,mass,dt\n";
  for (const auto& row : history) {
    out << format_g17(row.t) << ',' << format_g17(row.sup_u) << ','
        << format_g17(row.mass) << ',' << format_g17(row.dt) << '\n';
  }
}

void write_profile_csv(const std::string& path, const Eigen::ArrayXd& r,
                       const Eigen::ArrayXd& u) {
  auto out = open_out(path);
  out << "r,u\n";
  for (int i = 0; i < r.size(); ++i)
    out << format_g17(r[i]) << ',' << format_g17(u[i]) << '\n';
}

std::string profile_filename(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "profile_t%g.csv", t);
  return buf;
}

}  // namespace heatlab
