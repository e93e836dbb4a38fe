#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "report.hpp"

using namespace polyjump;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("real formatting keeps 17 significant digits") {
  CHECK(format_real(0.1) == "1.0000000000000001e-01");
  CHECK(format_real(-2.0) == "-2.0000000000000000e+00");
  CHECK(std::stod(format_real(std::acos(-1.0))) == std::acos(-1.0));
}

TEST_CASE("CSV writer") {
  const fs::path dir = fs::temp_directory_path() / "polyjump_test_report";
  fs::create_directories(dir);
  {
    CsvWriter w(dir / "a.csv", {"n", "name", "value"});
    w.row({65LL, std::string("corrector"), 0.5});
    w.close();
  }
  CHECK(slurp(dir / "a.csv") == "n,name,value\n65,corrector,5.0000000000000000e-01\n");
  fs::remove_all(dir);
}

TEST_CASE("colour ramp endpoints and monotone lightness") {
  const auto& cm = colormap();
  CHECK(cm.front() == std::array<std::uint8_t, 3>{68, 1, 84});
  CHECK(cm.back() == std::array<std::uint8_t, 3>{253, 231, 37});
  double prev = -1.0;
  for (const auto& c : cm) {
    const double y = 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2];
    CHECK(y >= prev - 1e-9);
    prev = y;
  }
}

TEST_CASE("colour ramp matches the documented table") {
  const fs::path doc = fs::path(POLYJUMP_SOURCE_DIR) / "docs" / "config.md";
  const std::string text = slurp(doc);
  REQUIRE_FALSE(text.empty());
  const auto& cm = colormap();
  for (int k = 0; k < 256; ++k) {
    std::ostringstream row;
    row << "| " << k << " | " << int(cm[k][0]) << " | " << int(cm[k][1]) << " | " << int(cm[k][2]) << " |";
    CHECK_MESSAGE(text.find(row.str()) != std::string::npos, row.str());
  }
}
