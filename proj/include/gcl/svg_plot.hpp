#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gcl {

// Minimal self-contained line plot: axes, ticks, polylines, legend.
// Output depends only on the data, so equal inputs give byte-identical files.
class SvgPlot {
 public:
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::string color;
    bool dashed = false;
    bool markers = false;
  };

  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(Series series);
  void add_horizontal_line(double y, std::string label, std::string color);
  void add_vertical_line(double x, std::string label, std::string color);

  std::string render() const;
  void write(const std::filesystem::path& path) const;

 private:
  struct Rule {
    bool horizontal;
    double value;
    std::string label;
    std::string color;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
  std::vector<Rule> rules_;
};

}  // namespace gcl
