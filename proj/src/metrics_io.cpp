#include "congestion/metrics_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace congestion {

namespace fs = std::filesystem;

IoError::IoError(const fs::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  // Avoid "-0.000000".
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw IoError(file.parent_path(), "cannot create directory: " + ec.message());
  }
  std::ofstream out(file);
  if (!out) throw IoError(file, "cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw IoError(file, "write failed");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text, const fs::path& file, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError(file, "line " + std::to_string(line) + ": not a number: '" + text + "'");
  }
}

int parse_int(const std::string& text, const fs::path& file, int line) {
  int v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw IoError(file, "line " + std::to_string(line) + ": not an integer: '" + text + "'");
  }
  return v;
}

std::ifstream open_in(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(file, "cannot open for reading");
  return in;
}

}  // namespace

void write_learning_curve_csv(const MetricsSeries& series, const fs::path& file, int smoothing_window) {
  const auto means = moving_average(series.mean_g, smoothing_window);
  auto out = open_out(file);
  out << "episode,mean_G,std_G\n";
  for (std::size_t e = 0; e < means.size(); ++e) {
    out << (e + 1) << ',' << format_number(means[e]) << ',';
    if (e < series.std_g.size() && series.std_g[e]) out << format_number(*series.std_g[e]);
    out << '\n';
  }
  finish(out, file);
}

void write_histogram_csv(std::span<const HistogramBin> bins, const fs::path& file) {
  auto out = open_out(file);
  out << "resource_id,mean_count,std_count\n";
  for (const auto& b : bins) out << b.id << ',' << format_number(b.mean_count) << ',' << format_number(b.std_count) << '\n';
  finish(out, file);
}

void write_oracle_csv(std::span<const std::string> ids, std::span<const int> counts, double max_g,
                      const fs::path& file) {
  if (ids.size() != counts.size()) throw std::invalid_argument("oracle ids and counts differ in length");
  auto out = open_out(file);
  out << "entity_id,count\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << counts[i] << '\n';
  out << "max_G," << format_number(max_g) << '\n';
  finish(out, file);
}

void write_abstract_curve_csv(std::span<const CurvePoint> curve, const fs::path& file) {
  auto out = open_out(file);
  out << "agents,reward\n";
  for (const auto& p : curve) out << p.agents << ',' << format_number(p.reward) << '\n';
  finish(out, file);
}

std::vector<CurveRow> read_learning_curve_csv(const fs::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line) || line != "episode,mean_G,std_G") throw IoError(file, "missing learning-curve header");
  std::vector<CurveRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw IoError(file, "line " + std::to_string(lineno) + ": expected 3 columns");
    CurveRow row{parse_int(cells[0], file, lineno), parse_double(cells[1], file, lineno), std::nullopt};
    if (!cells[2].empty()) row.std_g = parse_double(cells[2], file, lineno);
    rows.push_back(row);
  }
  return rows;
}

OracleRecord read_oracle_csv(const fs::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line) || line != "entity_id,count") throw IoError(file, "missing oracle header");
  OracleRecord rec;
  bool have_max = false;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw IoError(file, "line " + std::to_string(lineno) + ": expected 2 columns");
    if (cells[0] == "max_G") {
      rec.max_g = parse_double(cells[1], file, lineno);
      have_max = true;
    } else {
      rec.ids.push_back(cells[0]);
      rec.counts.push_back(parse_int(cells[1], file, lineno));
    }
  }
  if (!have_max) throw IoError(file, "missing max_G record");
  return rec;
}

void write_learning_curve_svg(const MetricsSeries& series, const fs::path& file, const std::string& title,
                              int smoothing_window) {
  const auto means = moving_average(series.mean_g, smoothing_window);
  if (means.empty()) throw std::invalid_argument("cannot plot an empty series");

  constexpr double width = 720, height = 420, left = 60, right = 20, top = 40, bottom = 50;
  double lo = *std::min_element(means.begin(), means.end());
  double hi = *std::max_element(means.begin(), means.end());
  for (std::size_t e = 0; e < series.std_g.size(); ++e) {
    if (series.std_g[e]) {
      lo = std::min(lo, means[e] - *series.std_g[e]);
      hi = std::max(hi, means[e] + *series.std_g[e]);
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double n = static_cast<double>(means.size());
  auto px = [&](double episode) { return left + (episode - 1) / std::max(1.0, n - 1) * (width - left - right); };
  auto py = [&](double g) { return top + (hi - g) / (hi - lo) * (height - top - bottom); };

  auto out = open_out(file);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double g = lo + (hi - lo) * i / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(g) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << format_number(g).substr(0, 6)
        << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">episode (1.." << means.size()
      << ")</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  const std::size_t stride = std::max<std::size_t>(1, means.size() / 2000);
  for (std::size_t e = 0; e < means.size(); e += stride) out << px(e + 1.0) << ',' << py(means[e]) << ' ';
  out << px(n) << ',' << py(means.back()) << "\"/>\n";
  for (std::size_t e = 0; e < series.std_g.size(); ++e) {
    if (!series.std_g[e]) continue;
    const double x = px(e + 1.0);
    out << "<line x1=\"" << x << "\" y1=\"" << py(means[e] - *series.std_g[e]) << "\" x2=\"" << x << "\" y2=\""
        << py(means[e] + *series.std_g[e]) << "\" stroke=\"darkred\"/>\n";
  }
  out << "</svg>\n";
  finish(out, file);
}

MetricsFiles write_metrics(const MetricsSeries& series, const fs::path& dir, const std::string& stem,
                           int smoothing_window, bool plot) {
  MetricsFiles files{dir / (stem + "_curve.csv"), dir / (stem + "_hist.csv"), std::nullopt};
  write_learning_curve_csv(series, files.curve, smoothing_window);
  const auto bins = distribution_histogram(series);
  write_histogram_csv(bins, files.histogram);
  if (plot) {
    files.plot = dir / (stem + "_curve.svg");
    write_learning_curve_svg(series, *files.plot, stem, smoothing_window);
  }
  return files;
}

}  // namespace congestion
