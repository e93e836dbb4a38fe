#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace polyjump {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path) {
  if (!out_) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw Error(ErrorCode::invalid_argument, "CSV row width mismatch in " + path_.string());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ << ',';
    if (const double* d = std::get_if<double>(&cells[k])) out_ << format_real(*d);
    else if (const long long* i = std::get_if<long long>(&cells[k])) out_ << *i;
    else out_ << std::get<std::string>(cells[k]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw Error(ErrorCode::io_error, "write failed for " + path_.string());
}

const std::array<std::array<std::uint8_t, 3>, 256>& colormap() {
  static const auto table = [] {
    // viridis sampled at 0, 1/8, ..., 1; linear in between
    static const double anchors[9][3] = {{68, 1, 84},    {71, 44, 122},  {59, 81, 139},
                                         {44, 113, 142}, {33, 144, 141}, {39, 173, 129},
                                         {92, 200, 99},  {170, 220, 50}, {253, 231, 37}};
    std::array<std::array<std::uint8_t, 3>, 256> t{};
    for (int k = 0; k < 256; ++k) {
      const double s = k / 255.0 * 8.0;
      const int a = std::min(7, static_cast<int>(s));
      const double w = s - a;
      for (int c = 0; c < 3; ++c)
        t[k][c] = static_cast<std::uint8_t>(std::lround((1.0 - w) * anchors[a][c] + w * anchors[a + 1][c]));
    }
    return t;
  }();
  return table;
}

namespace {

std::string hex(const std::array<std::uint8_t, 3>& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else o += ch;
  }
  return o;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::ofstream open_svg(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path, const GridField& f, const std::string& title, int max_cells) {
  const int n = f.grid.n;
  const int cells = std::min(n, max_cells);
  // Block averages; block b covers nodes [b n / cells, (b + 1) n / cells).
  std::vector<double> block(static_cast<std::size_t>(cells) * cells, 0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int bj = 0; bj < cells; ++bj) {
    for (int bi = 0; bi < cells; ++bi) {
      const int i0 = bi * n / cells, i1 = (bi + 1) * n / cells;
      const int j0 = bj * n / cells, j1 = (bj + 1) * n / cells;
      double s = 0.0;
      for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) s += f(i, j);
      const double v = s / ((i1 - i0) * (j1 - j0));
      block[static_cast<std::size_t>(bj) * cells + bi] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const double px = 480.0 / cells;
  std::ofstream out = open_svg(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"540\" shape-rendering=\"crispEdges\">\n";
  out << "<text x=\"10\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" << esc(title) << "</text>\n";
  for (int bj = 0; bj < cells; ++bj) {
    for (int bi = 0; bi < cells; ++bi) {
      const double v = block[static_cast<std::size_t>(bj) * cells + bi];
      const int idx = std::clamp(static_cast<int>((v - lo) / span * 255.0 + 0.5), 0, 255);
      // y axis points up: row 0 at the bottom
      out << "<rect x=\"" << num(10 + bi * px) << "\" y=\"" << num(40 + (cells - 1 - bj) * px) << "\" width=\""
          << num(px + 0.05) << "\" height=\"" << num(px + 0.05) << "\" fill=\"" << hex(colormap()[idx]) << "\"/>\n";
    }
  }
  for (int k = 0; k < 256; ++k)
    out << "<rect x=\"510\" y=\"" << num(40 + (255 - k) * 480.0 / 256) << "\" width=\"20\" height=\""
        << num(480.0 / 256 + 0.05) << "\" fill=\"" << hex(colormap()[k]) << "\"/>\n";
  out << "<text x=\"535\" y=\"50\" font-family=\"sans-serif\" font-size=\"11\">" << num(hi) << "</text>\n";
  out << "<text x=\"535\" y=\"520\" font-family=\"sans-serif\" font-size=\"11\">" << num(lo) << "</text>\n";
  out << "</svg>\n";
}

void write_panels_svg(const std::filesystem::path& path, const std::vector<Panel>& panels) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const double w = 640, ph = 220, left = 70, right = 20, top = 30, gap = 50;
  const double height = panels.size() * (ph + gap) + 20;
  std::ofstream out = open_svg(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << num(height) << "\">\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& pn = panels[p];
    const double y0 = p * (ph + gap) + top;
    double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
    for (const auto& s : pn.series)
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (!std::isfinite(s.y[k])) continue;
        xl = std::min(xl, s.x[k]);
        xh = std::max(xh, s.x[k]);
        yl = std::min(yl, s.y[k]);
        yh = std::max(yh, s.y[k]);
      }
    if (!(xh > xl)) xh = xl + 1.0;
    if (!(yh > yl)) {
      yl -= 0.5;
      yh += 0.5;
    }
    const double pad = 0.05 * (yh - yl);
    yl -= pad;
    yh += pad;
    const double iw = w - left - right;
    auto X = [&](double x) { return left + (x - xl) / (xh - xl) * iw; };
    auto Y = [&](double y) { return y0 + ph - (y - yl) / (yh - yl) * ph; };
    out << "<text x=\"" << left << "\" y=\"" << num(y0 - 8) << "\" font-family=\"sans-serif\" font-size=\"13\">"
        << esc(pn.title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << num(y0) << "\" width=\"" << iw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (yl < 0.0 && yh > 0.0)
      out << "<line x1=\"" << left << "\" x2=\"" << num(left + iw) << "\" y1=\"" << num(Y(0.0)) << "\" y2=\""
          << num(Y(0.0)) << "\" stroke=\"#bbb\"/>\n";
    if (std::isfinite(pn.marker_x))
      out << "<line x1=\"" << num(X(pn.marker_x)) << "\" x2=\"" << num(X(pn.marker_x)) << "\" y1=\"" << num(y0)
          << "\" y2=\"" << num(y0 + ph) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t s = 0; s < pn.series.size(); ++s) {
      const Series& se = pn.series[s];
      out << "<polyline fill=\"none\" stroke=\"" << colors[s % 4] << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < se.x.size(); ++k) {
        if (!std::isfinite(se.y[k])) continue;
        out << num(X(se.x[k])) << ',' << num(Y(se.y[k])) << ' ';
      }
      out << "\"/>\n";
      out << "<text x=\"" << num(left + iw - 120) << "\" y=\"" << num(y0 + 16 + 14 * s)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[s % 4] << "\">" << esc(se.label)
          << "</text>\n";
    }
    out << "<text x=\"" << left << "\" y=\"" << num(y0 + ph + 16) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(xl) << "</text>\n";
    out << "<text x=\"" << num(left + iw - 40) << "\" y=\"" << num(y0 + ph + 16)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(xh) << "</text>\n";
    out << "<text x=\"" << num(left + iw / 2 - 10) << "\" y=\"" << num(y0 + ph + 16)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(pn.xlabel) << "</text>\n";
    out << "<text x=\"4\" y=\"" << num(y0 + 10) << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(yh)
        << "</text>\n";
    out << "<text x=\"4\" y=\"" << num(y0 + ph) << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(yl)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace polyjump
