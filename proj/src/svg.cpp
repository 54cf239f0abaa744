#include "heatlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "heatlab/common.hpp"

namespace heatlab {

namespace {

constexpr int kWidth = 800, kHeight = 560;
constexpr int kLeft = 80, kRight = 40, kTop = 50, kBottom = 70;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double map(double v, double pix_lo, double pix_hi) const {
    double a = lo, b = hi, x = v;
    if (log) {
      a = std::log10(lo);
      b = std::log10(hi);
      x = std::log10(v);
    }
    const double s = b > a ? (x - a) / (b - a) : 0.5;
    return pix_lo + s * (pix_hi - pix_lo);
  }
  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      for (int e = e0; e <= e1; ++e) t.push_back(std::pow(10.0, e));
    } else {
      const double span = hi - lo;
      if (span <= 0) return {lo};
      const double step = std::pow(10.0, std::floor(std::log10(span / 4)));
      double s = step;
      if (span / s > 8) s *= 2;
      if (span / s > 8) s *= 2.5;
      for (double v = std::ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s)
        t.push_back(v);
    }
    return t;
  }
};

void open_svg(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-size=\"17\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << xml_escape(title) << "</text>\n";
}

void draw_axes(std::ostream& out, const Axis& ax, const Axis& ay,
               const std::string& x_label, const std::string& y_label) {
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : ax.ticks()) {
    const double px = ax.map(t, kLeft, kWidth - kRight);
    if (px < kLeft - 0.5 || px > kWidth - kRight + 0.5) continue;
    out << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom
        << "\" x2=\"" << px << "\" y2=\"" << kHeight - kBottom + 5
        << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, kHeight - kBottom, kTop);
    if (py < kTop - 0.5 || py > kHeight - kBottom + 0.5) continue;
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\""
        << kLeft << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
        << "\" font-size=\"12\" text-anchor=\"end\" "
           "font-family=\"sans-serif\">"
        << fmt(t) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 18
      << "\" font-size=\"14\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">"
      << xml_escape(x_label) << "</text>\n"
      << "<text x=\"20\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 20 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SvgSeries>& series, bool log_y) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open output file: " + path);

  Axis ax, ay;
  ax.lo = kInf;
  ax.hi = -kInf;
  ay.lo = kInf;
  ay.hi = -kInf;
  ay.log = log_y;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (log_y && !(y > 0)) continue;
      ax.lo = std::min(ax.lo, s.x[i]);
      ax.hi = std::max(ax.hi, s.x[i]);
      ay.lo = std::min(ay.lo, y);
      ay.hi = std::max(ay.hi, y);
    }
  }
  if (!(ax.lo < ax.hi)) {
    ax.lo -= 1;
    ax.hi += 1;
  }
  if (!(ay.lo < ay.hi)) {
    ay.lo = log_y ? ay.lo / 10 : ay.lo - 1;
    ay.hi = log_y ? ay.hi * 10 : ay.hi + 1;
  }

  open_svg(out, title);
  draw_axes(out, ax, ay, x_label, y_label);
  int color = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (log_y && !(y > 0)) continue;
      out << ax.map(s.x[i], kLeft, kWidth - kRight) << ','
          << ay.map(y, kHeight - kBottom, kTop) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight - 6 << "\" y=\""
        << kTop + 16 + 16 * color << "\" font-size=\"12\" text-anchor=\"end\" "
        << "fill=\"" << kPalette[color % 6] << "\" font-family=\"sans-serif\">"
        << xml_escape(s.name) << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

void write_phase_svg(const std::string& path, const std::string& title,
                     const PhasePlotData& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open output file: " + path);
  const int np = static_cast<int>(d.p_values.size());
  const int na = static_cast<int>(d.amplitudes.size());
  if (np == 0 || na == 0 || d.outcome.size() != static_cast<size_t>(np * na))
    throw UsageError("write_phase_svg: inconsistent cell data");

  Axis ax, ay;
  ax.lo = d.p_values.front();
  ax.hi = d.p_values.back();
  for (auto& [pv, label] : d.vlines) {
    ax.lo = std::min(ax.lo, pv);
    ax.hi = std::max(ax.hi, pv);
  }
  const double pad = 0.05 * std::max(ax.hi - ax.lo, 0.2);
  ax.lo -= pad;
  ax.hi += pad;
  ay.log = true;
  ay.lo = d.amplitudes.front() / 3.0;
  ay.hi = d.amplitudes.back() * 3.0;

  open_svg(out, title);
  draw_axes(out, ax, ay, "reaction exponent p", "initial amplitude");

  static const char* cell_colors[] = {"#d62728", "#1f77b4", "#bbbbbb"};
  static const char* cell_names[] = {"blow-up", "global", "inconclusive"};
  for (int j = 0; j < na; ++j) {
    for (int i = 0; i < np; ++i) {
      const int code = std::clamp(d.outcome[j * np + i], 0, 2);
      const double cx = ax.map(d.p_values[i], kLeft, kWidth - kRight);
      const double cy = ay.map(d.amplitudes[j], kHeight - kBottom, kTop);
      out << "<rect x=\"" << cx - 9 << "\" y=\"" << cy - 9
          << "\" width=\"18\" height=\"18\" fill=\"" << cell_colors[code]
          << "\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
    }
  }
  for (auto& [pv, label] : d.vlines) {
    const double px = ax.map(pv, kLeft, kWidth - kRight);
    out << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px
        << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"#444\" stroke-dasharray=\"6 4\"/>\n"
        << "<text x=\"" << px + 4 << "\" y=\"" << kTop + 14
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(label)
        << "</text>\n";
  }
  for (int c = 0; c < 3; ++c) {
    out << "<rect x=\"" << kLeft + 10 + 130 * c << "\" y=\"" << kHeight - 46
        << "\" width=\"12\" height=\"12\" fill=\"" << cell_colors[c]
        << "\"/>\n<text x=\"" << kLeft + 26 + 130 * c << "\" y=\""
        << kHeight - 36 << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << cell_names[c] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace heatlab
