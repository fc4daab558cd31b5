#include "ettrap/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

constexpr double kLeft = 80.0, kRight = 24.0, kTop = 40.0, kBottom = 60.0, kBar = 80.0;

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;  // in transformed units
  bool log = false;
  double pixel_lo = 0.0, pixel_hi = 1.0;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double to_pixel(double v) const { return pixel_lo + (transform(v) - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
  double t_to_pixel(double t) const { return pixel_lo + (t - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

Axis make_axis(const std::vector<double>& values, bool log, const std::string& name) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const double v : values) {
    if (!std::isfinite(v)) continue;
    if (log && !(v > 0.0)) throw ConfigError("column '" + name + "' has non-positive values on a log axis");
    lo = std::min(lo, a.transform(v));
    hi = std::max(hi, a.transform(v));
  }
  if (!std::isfinite(lo)) throw ConfigError("column '" + name + "' has no finite values");
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;  // transformed units
  if (a.log && a.hi - a.lo >= 1.0) {
    for (double d = std::ceil(a.lo - 1e-9); d <= a.hi + 1e-9; d += 1.0) out.push_back(d);
    return out;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step - 1e-9) * step; v <= a.hi + 1e-9 * span; v += step) out.push_back(v);
  return out;
}

std::array<int, 3> colormap(double f) {
  static const std::array<std::array<double, 3>, 5> anchors = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                               {94, 201, 98}, {253, 231, 37}}};
  f = std::clamp(f, 0.0, 1.0) * (anchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(f), anchors.size() - 2);
  const double w = f - static_cast<double>(i);
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k)
    c[static_cast<std::size_t>(k)] =
        static_cast<int>(std::lround((1 - w) * anchors[i][static_cast<std::size_t>(k)] + w * anchors[i + 1][static_cast<std::size_t>(k)]));
  return c;
}

std::string rgb(const std::array<int, 3>& c) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

void draw_axes(std::ostringstream& s, const Axis& ax, const Axis& ay, const PlotSpec& spec) {
  const double x0 = ax.pixel_lo, x1 = ax.pixel_hi, y0 = ay.pixel_lo, y1 = ay.pixel_hi;
  s << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y1) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
    << fmt(y0 - y1) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  for (const double t : ticks(ax)) {
    const double px = ax.t_to_pixel(t);
    const double label = ax.log ? std::pow(10.0, t) : t;
    s << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(px) << "\" y2=\"" << fmt(y0 + 5)
      << "\" stroke=\"#000000\"/>\n";
    s << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(y0 + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
      << escape(tick_label(label)) << "</text>\n";
  }
  for (const double t : ticks(ay)) {
    const double py = ay.t_to_pixel(t);
    const double label = ay.log ? std::pow(10.0, t) : t;
    s << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(x0) << "\" y2=\"" << fmt(py)
      << "\" stroke=\"#000000\"/>\n";
    s << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(py + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
      << escape(tick_label(label)) << "</text>\n";
  }
  const std::string xl = spec.x_label.empty() ? spec.x : spec.x_label;
  const std::string yl = spec.y_label.empty() ? (spec.y.size() == 1 ? spec.y.front() : std::string{}) : spec.y_label;
  s << "<text x=\"" << fmt(0.5 * (x0 + x1)) << "\" y=\"" << fmt(spec.height - 16.0)
    << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
  if (!yl.empty())
    s << "<text x=\"18\" y=\"" << fmt(0.5 * (y0 + y1)) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(0.5 * (y0 + y1)) << ")\">" << escape(yl) << "</text>\n";
  if (!spec.title.empty())
    s << "<text x=\"" << fmt(0.5 * spec.width) << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">"
      << escape(spec.title) << "</text>\n";
}

void render_lines(std::ostringstream& s, const CsvTable& data, const PlotSpec& spec) {
  const std::vector<double> x = data.numeric_column(spec.x);
  std::vector<std::vector<double>> ys;
  std::vector<double> all;
  for (const auto& name : spec.y) {
    ys.push_back(data.numeric_column(name));
    all.insert(all.end(), ys.back().begin(), ys.back().end());
  }
  Axis ax = make_axis(x, spec.log_x, spec.x);
  Axis ay = make_axis(all, spec.log_y, spec.y.front());
  ax.pixel_lo = kLeft;
  ax.pixel_hi = spec.width - kRight;
  ay.pixel_lo = spec.height - kBottom;
  ay.pixel_hi = kTop;
  draw_axes(s, ax, ay, spec);

  for (std::size_t c = 0; c < ys.size(); ++c) {
    const char* colour = kPalette[c % kPalette.size()];
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (std::size_t r = 0; r < x.size(); ++r) {
      const double xv = x[r], yv = ys[c][r];
      const bool ok = std::isfinite(xv) && std::isfinite(yv) && (!spec.log_x || xv > 0) && (!spec.log_y || yv > 0);
      if (!ok) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt(ax.to_pixel(xv)) + "," + fmt(ay.to_pixel(yv));
    }
    flush();
    const double ly = kTop + 14.0 + 16.0 * static_cast<double>(c);
    const double lx = spec.width - kRight - 150.0;
    s << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 20) << "\" y2=\"" << fmt(ly)
      << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fmt(lx + 26) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"11\">" << escape(spec.y[c])
      << "</text>\n";
  }
}

std::vector<double> cell_edges(const std::vector<double>& centres) {
  std::vector<double> e(centres.size() + 1);
  if (centres.size() == 1) {
    e[0] = centres[0] - 0.5;
    e[1] = centres[0] + 0.5;
    return e;
  }
  for (std::size_t i = 1; i < centres.size(); ++i) e[i] = 0.5 * (centres[i - 1] + centres[i]);
  e.front() = centres.front() - 0.5 * (centres[1] - centres[0]);
  e.back() = centres.back() + 0.5 * (centres.back() - centres[centres.size() - 2]);
  return e;
}

void render_heatmap(std::ostringstream& s, const CsvTable& data, const PlotSpec& spec) {
  if (spec.z.empty()) throw ConfigError("heatmap needs a z column");
  const std::vector<double> x = data.numeric_column(spec.x);
  const std::vector<double> y = data.numeric_column(spec.y.front());
  const std::vector<double> z = data.numeric_column(spec.z);
  Axis ax = make_axis(x, spec.log_x, spec.x);
  Axis ay = make_axis(y, spec.log_y, spec.y.front());

  std::vector<double> ux, uy;  // transformed centres
  for (const double v : x) ux.push_back(ax.transform(v));
  for (const double v : y) uy.push_back(ay.transform(v));
  auto unique_sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const std::vector<double> cx = unique_sorted(ux), cy = unique_sorted(uy);
  const std::vector<double> ex = cell_edges(cx), ey = cell_edges(cy);
  ax.lo = ex.front();
  ax.hi = ex.back();
  ay.lo = ey.front();
  ay.hi = ey.back();
  ax.pixel_lo = kLeft;
  ax.pixel_hi = spec.width - kRight - kBar;
  ay.pixel_lo = spec.height - kBottom;
  ay.pixel_hi = kTop;

  double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
  for (const double v : z)
    if (std::isfinite(v)) {
      zlo = std::min(zlo, v);
      zhi = std::max(zhi, v);
    }
  if (!std::isfinite(zlo)) throw ConfigError("column '" + spec.z + "' has no finite values");
  const double zspan = zhi > zlo ? zhi - zlo : 1.0;

  for (std::size_t r = 0; r < z.size(); ++r) {
    const auto ix = static_cast<std::size_t>(std::lower_bound(cx.begin(), cx.end(), ux[r]) - cx.begin());
    const auto iy = static_cast<std::size_t>(std::lower_bound(cy.begin(), cy.end(), uy[r]) - cy.begin());
    const double px0 = ax.t_to_pixel(ex[ix]), px1 = ax.t_to_pixel(ex[ix + 1]);
    const double py0 = ay.t_to_pixel(ey[iy + 1]), py1 = ay.t_to_pixel(ey[iy]);
    const std::string colour = std::isfinite(z[r]) ? rgb(colormap((z[r] - zlo) / zspan)) : "#cccccc";
    s << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py0) << "\" width=\"" << fmt(px1 - px0) << "\" height=\""
      << fmt(py1 - py0) << "\" fill=\"" << colour << "\" stroke=\"none\"/>\n";
  }
  draw_axes(s, ax, ay, spec);

  const double bx = spec.width - kRight - kBar + 16.0;
  const double top = kTop, bottom = spec.height - kBottom;
  const int steps = 32;
  for (int i = 0; i < steps; ++i) {
    const double f = (i + 0.5) / steps;
    const double y0 = bottom - (bottom - top) * (i + 1.0) / steps;
    s << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y0) << "\" width=\"14\" height=\"" << fmt((bottom - top) / steps)
      << "\" fill=\"" << rgb(colormap(f)) << "\" stroke=\"none\"/>\n";
  }
  s << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(top + 8) << "\" font-size=\"11\">" << escape(tick_label(zhi))
    << "</text>\n";
  s << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(bottom) << "\" font-size=\"11\">" << escape(tick_label(zlo))
    << "</text>\n";
  s << "<text x=\"" << fmt(bx) << "\" y=\"" << fmt(top - 8) << "\" font-size=\"11\">" << escape(spec.z) << "</text>\n";
}

}  // namespace

std::string render_svg(const CsvTable& data, const PlotSpec& spec) {
  if (spec.x.empty() || spec.y.empty()) throw ConfigError("plot needs x and y columns");
  if (data.rows.empty()) throw ConfigError("no data rows to plot");
  if (spec.width < 200 || spec.height < 150) throw ConfigError("plot size must be at least 200x150");
  data.column(spec.x);
  for (const auto& name : spec.y) data.column(name);
  if (spec.kind == PlotSpec::Kind::Heatmap) {
    if (spec.y.size() != 1) throw ConfigError("heatmap takes exactly one y column");
    data.column(spec.z);
  }

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
    << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\" font-family=\"sans-serif\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\"#ffffff\"/>\n";
  if (spec.kind == PlotSpec::Kind::Line) render_lines(s, data, spec);
  else render_heatmap(s, data, spec);
  s << "</svg>\n";
  return s.str();
}

}  // namespace ettrap
