#include "gcl/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gcl/error.hpp"

namespace gcl {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 180;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  if (std::abs(v) < 1e-12) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void finish() {
    if (lo > hi) {
      lo = 0;
      hi = 1;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1 : r < 3 ? 2 : r < 7 ? 5 : 10;
  return nice * mag;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(Series series) { series_.push_back(std::move(series)); }

void SvgPlot::add_horizontal_line(double y, std::string label, std::string color) {
  rules_.push_back({true, y, std::move(label), std::move(color)});
}

void SvgPlot::add_vertical_line(double x, std::string label, std::string color) {
  rules_.push_back({false, x, std::move(label), std::move(color)});
}

std::string SvgPlot::render() const {
  Range xr, yr;
  for (const auto& s : series_) {
    for (const auto& [x, y] : s.points) {
      xr.include(x);
      yr.include(y);
    }
  }
  for (const auto& r : rules_) (r.horizontal ? yr : xr).include(r.value);
  xr.finish();
  yr.finish();
  const double pad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title_) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n"
      << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h) << "\"/>\n</g>\n";
  svg << "<g font-size=\"11\" fill=\"#222\">\n";
  const double xs = nice_step(xr.hi - xr.lo);
  for (double x = std::ceil(xr.lo / xs) * xs; x <= xr.hi + 1e-9 * xs; x += xs) {
    svg << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\"" << fmt(sx(x))
        << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"#444\"/>"
        << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fmt_tick(x) << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double y = std::ceil(yr.lo / ys) * ys; y <= yr.hi + 1e-9 * ys; y += ys) {
    svg << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(sy(y)) << "\" stroke=\"#444\"/>"
        << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(y) + 4)
        << "\" text-anchor=\"end\">" << fmt_tick(y) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label_) << "</text>\n"
      << "<text transform=\"translate(18," << fmt(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label_) << "</text>\n"
      << "</g>\n";

  svg << "<g fill=\"none\" stroke-width=\"1.5\">\n";
  for (const auto& r : rules_) {
    if (r.horizontal) {
      svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(r.value)) << "\" x2=\""
          << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(sy(r.value));
    } else {
      svg << "<line x1=\"" << fmt(sx(r.value)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
          << fmt(sx(r.value)) << "\" y2=\"" << fmt(kTop + plot_h);
    }
    svg << "\" stroke=\"" << r.color << "\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (const auto& s : series_) {
    svg << "<polyline stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
        << " points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      svg << (first ? "" : " ") << fmt(sx(x)) << ',' << fmt(sy(y));
      first = false;
    }
    svg << "\"/>\n";
    if (s.markers) {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        svg << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y)) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
      }
    }
  }
  svg << "</g>\n";

  // Legend.
  svg << "<g font-size=\"11\">\n";
  double ly = kTop + 10;
  const double lx = kLeft + plot_w + 15;
  auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
    svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 22)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>"
        << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(label)
        << "</text>\n";
    ly += 18;
  };
  for (const auto& s : series_) legend(s.label, s.color, s.dashed);
  for (const auto& r : rules_) {
    if (!r.label.empty()) legend(r.label, r.color, true);
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void SvgPlot::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << render();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gcl
