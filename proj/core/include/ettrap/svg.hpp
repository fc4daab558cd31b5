#pragma once

#include <string>
#include <vector>

#include "ettrap/csv.hpp"

namespace ettrap {

struct PlotSpec {
  enum class Kind { Line, Heatmap };
  Kind kind = Kind::Line;
  std::string x;
  std::vector<std::string> y;  ///< one series per column (line); single column (heatmap)
  std::string z;               ///< heatmap colour column
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 480;
};

/// Standalone SVG 1.1 document. Output depends only on the inputs. Throws
/// ConfigError for missing columns, empty data or non-positive values on a log axis.
std::string render_svg(const CsvTable& data, const PlotSpec& spec);

}  // namespace ettrap
