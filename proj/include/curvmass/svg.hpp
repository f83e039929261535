#pragma once

// Self-contained SVG line charts (no external assets).  Write-only output:
// nothing in the computation path depends on this.

#include <string>
#include <vector>

namespace curvmass::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  void add_series(Series series) { series_.push_back(std::move(series)); }
  std::string render() const;

 private:
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace curvmass::svg
