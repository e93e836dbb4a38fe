#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "grid.hpp"

namespace polyjump {

inline constexpr const char* kVersion = "0.1.0";

/// CSV with a mandatory header row. Reals are written with %.16e (17
/// significant digits), integers and strings verbatim.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::filesystem::path path_;
};

std::string format_real(double x);

/// Fixed 256-entry viridis-like ramp, index 0 = low.
const std::array<std::array<std::uint8_t, 3>, 256>& colormap();

/// Heatmap of f over its grid, averaged onto at most max_cells x max_cells
/// blocks, with a colour bar and min/max labels.
void write_heatmap_svg(const std::filesystem::path& path, const GridField& f, const std::string& title,
                       int max_cells = 96);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::vector<Series> series;
  double marker_x = std::numeric_limits<double>::quiet_NaN();  // vertical dashed line; NaN disables
};

/// Stack of line-plot panels sharing one file.
void write_panels_svg(const std::filesystem::path& path, const std::vector<Panel>& panels);

}  // namespace polyjump
