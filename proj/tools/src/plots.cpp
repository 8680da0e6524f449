#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "slabcausal/errors.hpp"
#include "slabcausal_cli/runner.hpp"

namespace slabcausal::cli {
namespace {

namespace fs = std::filesystem;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError(fmt::format("artifact has no column '{}'", name));
    return columns[static_cast<std::size_t>(it - header.begin())];
  }
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("missing artifact '{}'", path.string()));
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(fmt::format("empty artifact '{}'", path.string()));
  t.header = split_csv(line);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != t.header.size()) throw ValidationError(fmt::format("malformed row in '{}'", path.string()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = std::stod(cells[i]);
      } catch (const std::exception&) {
      }
      t.columns[i].push_back(v);
    }
  }
  return t;
}

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string colour;
  std::string label;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300 + 1e-12 * std::abs(hi)) {
      const double pad = std::max(std::abs(hi) * 0.05, 1e-12);
      lo -= pad;
      hi += pad;
    }
  }
};

// 1-2-5 tick spacing giving roughly `target` intervals.
std::vector<double> ticks(const Range& r, int target = 6) {
  const double raw = (r.hi - r.lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

class Canvas {
 public:
  Canvas(std::string title, std::string xlabel, std::string ylabel, Range x, Range y)
      : x_(x), y_(y) {
    svg_ << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight);
    svg_ << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    svg_ << fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", kWidth / 2,
                        title);
    svg_ << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                        kLeft + plot_width() / 2, kHeight - 14, xlabel);
    svg_ << fmt::format(
        "<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1f})\">{1}</text>\n",
        kTop + plot_height() / 2, ylabel);
  }

  static double plot_width() { return kWidth - kLeft - kRight; }
  static double plot_height() { return kHeight - kTop - kBottom; }
  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * plot_width(); }
  double py(double y) const { return kTop + (y_.hi - y) / (y_.hi - y_.lo) * plot_height(); }

  void axes() {
    for (double t : ticks(x_)) {
      svg_ << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n", px(t),
                          kTop, kTop + plot_height());
      svg_ << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(t),
                          kTop + plot_height() + 16, t);
    }
    for (double t : ticks(y_)) {
      svg_ << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n", kLeft,
                          py(t), kLeft + plot_width());
      svg_ << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", kLeft - 6, py(t) + 4,
                          t);
    }
    svg_ << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                        kTop, plot_width(), plot_height());
  }

  // Polyline broken at non-finite samples; long series are reduced to the
  // min/max of each pixel column so envelopes survive.
  void line(const Series& s) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t n = s.x.size();
    const std::size_t buckets = 1500;
    if (n <= 2 * buckets) {
      for (std::size_t i = 0; i < n; ++i) pts.emplace_back(s.x[i], s.y[i]);
    } else {
      const std::size_t per = (n + buckets - 1) / buckets;
      for (std::size_t b = 0; b < n; b += per) {
        const std::size_t e = std::min(n, b + per);
        std::size_t lo = b;
        std::size_t hi = b;
        bool finite = false;
        for (std::size_t i = b; i < e; ++i) {
          if (!std::isfinite(s.y[i])) {
            pts.emplace_back(s.x[i], s.y[i]);
            continue;
          }
          if (!finite || s.y[i] < s.y[lo]) lo = i;
          if (!finite || s.y[i] > s.y[hi]) hi = i;
          finite = true;
        }
        if (!finite) continue;
        pts.emplace_back(s.x[std::min(lo, hi)], s.y[std::min(lo, hi)]);
        if (lo != hi) pts.emplace_back(s.x[std::max(lo, hi)], s.y[std::max(lo, hi)]);
      }
    }
    std::string path;
    bool pen = false;
    for (const auto& [x, y] : pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen = false;
        continue;
      }
      path += fmt::format("{}{:.2f},{:.2f}", pen ? " L" : (path.empty() ? "M" : " M"), px(x), py(y));
      pen = true;
    }
    if (!path.empty()) {
      svg_ << fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"/>\n", path, s.colour);
    }
  }

  void legend(const std::vector<Series>& series) {
    double y = kTop + 16;
    for (const auto& s : series) {
      if (s.label.empty()) continue;
      svg_ << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                          kLeft + plot_width() - 150, y, kLeft + plot_width() - 126, s.colour);
      svg_ << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + plot_width() - 120, y + 4, s.label);
      y += 18;
    }
  }

  void vertical_marker(double x, const std::string& label) {
    if (x < x_.lo || x > x_.hi) return;
    svg_ << fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#c00\" stroke-dasharray=\"5,4\"/>\n",
        px(x), kTop, kTop + plot_height());
    svg_ << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"#c00\">{}</text>\n", px(x) + 4, kTop + 14, label);
  }

  void raw(const std::string& s) { svg_ << s; }

  void save(const fs::path& path) {
    svg_ << "</svg>\n";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path.string()));
    out << svg_.str();
  }

 private:
  Range x_;
  Range y_;
  std::ostringstream svg_;
};

void line_plot(const fs::path& path, const std::string& title, const std::string& xlabel, const std::string& ylabel,
               const std::vector<Series>& series, std::optional<double> marker = std::nullopt) {
  Range x;
  Range y;
  for (const auto& s : series) {
    for (double v : s.x) x.add(v);
    for (double v : s.y) y.add(v);
  }
  x.finish();
  y.finish();
  Canvas c(title, xlabel, ylabel, x, y);
  c.axes();
  for (const auto& s : series) c.line(s);
  if (marker) c.vertical_marker(*marker, "front");
  c.legend(series);
  c.save(path);
}

std::string colour_map(double u) {
  // Dark blue through teal to yellow.
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                                          {253, 231, 37}}};
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), 3);
  const double f = u - static_cast<double>(i);
  std::array<int, 3> rgb{};
  for (std::size_t k = 0; k < 3; ++k) {
    rgb[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

void heat_map(const fs::path& path, const Table& t) {
  const auto& re = t.column("re_zeta");
  const auto& im = t.column("im_zeta");
  const auto& vr = t.column("re_value");
  const auto& vi = t.column("im_value");
  std::vector<double> xs(re);
  std::vector<double> ys(im);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (xs.size() < 2 || ys.size() < 2) throw ValidationError("scan grid artifact has too few points for a heat map");

  std::map<std::pair<std::size_t, std::size_t>, double> level;
  Range lv;
  for (std::size_t k = 0; k < re.size(); ++k) {
    const auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), re[k]) - xs.begin());
    const auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), im[k]) - ys.begin());
    const double mag = std::hypot(vr[k], vi[k]);
    const double v = mag > 0.0 ? std::log10(mag) : -300.0;
    level[{i, j}] = v;
    lv.add(std::clamp(v, -6.0, 6.0));
  }
  lv.finish();

  Range x{xs.front(), xs.back()};
  Range y{ys.front(), ys.back()};
  Canvas c("log10 |tau(zeta)| over the upper half plane", "Re zeta", "Im zeta", x, y);
  std::string cells;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const double y0 = j == 0 ? ys[0] : 0.5 * (ys[j - 1] + ys[j]);
    const double y1 = j + 1 == ys.size() ? ys[j] : 0.5 * (ys[j] + ys[j + 1]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto it = level.find({i, j});
      if (it == level.end()) continue;
      const double x0 = i == 0 ? xs[0] : 0.5 * (xs[i - 1] + xs[i]);
      const double x1 = i + 1 == xs.size() ? xs[i] : 0.5 * (xs[i] + xs[i + 1]);
      const double u = (std::clamp(it->second, -6.0, 6.0) - lv.lo) / (lv.hi - lv.lo);
      cells += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", c.px(x0),
                           c.py(y1), c.px(x1) - c.px(x0) + 0.3, c.py(y0) - c.py(y1) + 0.3, colour_map(u));
    }
  }
  c.raw(cells);
  c.axes();
  c.raw(fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">colour: {:.3g} .. {:.3g}</text>\n",
                    kWidth - kRight, kHeight - 14, lv.lo, lv.hi));
  c.save(path);
}

}  // namespace

std::vector<std::string> emit_plots(const fs::path& dir) {
  std::vector<std::string> written;
  const bool spectrum = fs::exists(dir / "spectrum.csv");
  const bool wave_in = fs::exists(dir / "waveform_in.csv");
  const bool wave_out = fs::exists(dir / "waveform_out.csv");
  const bool scan = fs::exists(dir / "scan_grid.csv");
  if (!spectrum && !wave_in && !wave_out && !scan) {
    throw ValidationError(fmt::format("no plottable artifacts in '{}'", dir.string()));
  }

  if (spectrum) {
    const Table t = read_table(dir / "spectrum.csv");
    const auto& w = t.column("omega");
    line_plot(dir / "spectrum.svg", "Transmitted power", "omega", "P = |tau|^2",
              {Series{w, t.column("P"), "#1f77b4", ""}});
    written.push_back("spectrum.svg");
    line_plot(dir / "group_delay.svg", "Group delay", "omega", "t_delay",
              {Series{w, t.column("t_delay"), "#d62728", ""}});
    written.push_back("group_delay.svg");
  }

  if (wave_in || wave_out) {
    const Table in = read_table(dir / "waveform_in.csv");
    const Table out = read_table(dir / "waveform_out.csv");
    std::optional<double> front;
    if (std::ifstream rf(dir / "report.json"); rf) {
      const auto report = nlohmann::json::parse(rf, nullptr, false);
      if (!report.is_discarded() && report.contains("waveform") && report["waveform"]["front_time"].is_number()) {
        front = report["waveform"]["front_time"].get<double>();
      }
    }
    line_plot(dir / "waveform.svg", "Input and transmitted waveforms", "t", "V",
              {Series{in.column("t"), in.column("V"), "#7f7f7f", "input"},
               Series{out.column("t"), out.column("V"), "#1f77b4", "output"}},
              front);
    written.push_back("waveform.svg");
  }

  if (scan) {
    heat_map(dir / "scan_heatmap.svg", read_table(dir / "scan_grid.csv"));
    written.push_back("scan_heatmap.svg");
  }
  return written;
}

}  // namespace slabcausal::cli
