#include "idesprit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace idesprit {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> records(std::string_view text, std::size_t fields) {
  std::vector<std::vector<std::string>> out;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != fields) {
      throw std::runtime_error("csv: expected " + std::to_string(fields) + " fields in '" +
                               std::string(line) + "'");
    }
    out.push_back(std::move(f));
  }
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string rmse_csv(const RmseTable& t) {
  std::string out = "sweep_axis,sweep_value,estimator,param_class,rmse_deg,trials_ok,trials_failed\n";
  for (const auto& r : t.rows) {
    out += r.sweep_axis + ',' + num(r.sweep_value) + ',' + r.estimator + ',' +
           std::string(to_string(r.param_class)) + ',' + num(r.rmse_deg) + ',' +
           std::to_string(r.trials_ok) + ',' + std::to_string(r.trials_failed) + '\n';
  }
  return out;
}

std::string source_rmse_csv(const RmseTable& t) {
  std::string out = "sweep_axis,sweep_value,estimator,param_class,source_index,rmse_deg\n";
  for (const auto& r : t.source_rows) {
    out += r.sweep_axis + ',' + num(r.sweep_value) + ',' + r.estimator + ',' +
           std::string(to_string(r.param_class)) + ',' + std::to_string(r.source_index) + ',' +
           num(r.rmse_deg) + '\n';
  }
  return out;
}

std::string crb_csv(const RmseTable& t) {
  std::string out = "sweep_axis,sweep_value,param_class,source_index,crb_sqrt_deg\n";
  for (const auto& r : t.crb_rows) {
    out += r.sweep_axis + ',' + num(r.sweep_value) + ',' + std::string(to_string(r.param_class)) +
           ',' + std::to_string(r.source_index) + ',' + num(r.crb_sqrt_deg) + '\n';
  }
  return out;
}

std::string diagnostics_csv(const RmseTable& t) {
  std::string out = "sweep_axis,sweep_value,name,value\n";
  for (const auto& r : t.diagnostics) {
    out += r.sweep_axis + ',' + num(r.sweep_value) + ',' + r.name + ',' + num(r.value) + '\n';
  }
  return out;
}

std::string complexity_csv(std::span<const ComplexityPoint> points) {
  std::string out = "m,t,k,d1,d2,method,count,leading\n";
  for (const auto& p : points) {
    for (const auto& r : p.table.rows) {
      out += std::to_string(p.m) + ',' + std::to_string(p.t) + ',' + std::to_string(p.k) + ',' +
             std::to_string(p.table.d1) + ',' + std::to_string(p.table.d2) + ',' + r.method + ',' +
             std::to_string(r.count) + ',' + std::to_string(r.leading) + '\n';
    }
  }
  return out;
}

std::vector<RmseRow> parse_rmse_csv(std::string_view text) {
  std::vector<RmseRow> out;
  for (const auto& f : records(text, 7)) {
    out.push_back({f[0], to_double(f[1]), f[2], param_class_from(f[3]), to_double(f[4]),
                   std::stoi(f[5]), std::stoi(f[6])});
  }
  return out;
}

std::vector<CrbRow> parse_crb_csv(std::string_view text) {
  std::vector<CrbRow> out;
  for (const auto& f : records(text, 5)) {
    out.push_back({f[0], to_double(f[1]), param_class_from(f[2]), std::stoi(f[3]),
                   to_double(f[4])});
  }
  return out;
}

std::string svg_plot(const RmseTable& t, ParamClass c) {
  using Series = std::vector<std::pair<double, double>>;
  std::map<std::string, Series> series;
  std::string axis = "sweep";
  for (const auto& r : t.rows) {
    if (r.param_class != c) continue;
    axis = r.sweep_axis;
    if (std::isfinite(r.rmse_deg) && r.rmse_deg > 0.0) {
      series[r.estimator].emplace_back(r.sweep_value, r.rmse_deg);
    }
  }
  std::map<double, std::pair<double, int>> crb;
  for (const auto& r : t.crb_rows) {
    if (r.param_class != c) continue;
    auto& acc = crb[r.sweep_value];
    acc.first += r.crb_sqrt_deg;
    acc.second += 1;
  }
  for (const auto& [x, acc] : crb) {
    const double v = acc.first / acc.second;
    if (std::isfinite(v) && v > 0.0) series["CRB"].emplace_back(x, v);
  }

  const double w = 640, h = 420, left = 70, right = 150, top = 30, bottom = 50;
  double xmin = 0, xmax = 1, ymin = 1e-3, ymax = 1;
  bool first = true;
  for (const auto& [name, s] : series) {
    for (const auto& [x, y] : s) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  const double lo = std::floor(std::log10(ymin));
  double hi = std::ceil(std::log10(ymax));
  if (hi <= lo) hi = lo + 1;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (w - left - right); };
  auto py = [&](double y) { return top + (hi - std::log10(y)) / (hi - lo) * (h - top - bottom); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left << "\" y=\"18\">RMSE of " << to_string(c) << " (deg)</text>\n";
  for (double d = lo; d <= hi; d += 1.0) {
    const double y = py(std::pow(10.0, d));
    o << "<line x1=\"" << left << "\" x2=\"" << w - right << "\" y1=\"" << y << "\" y2=\"" << y
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d
      << "</text>\n";
  }
  std::set<double> xs;
  for (const auto& [name, s] : series) {
    for (const auto& p : s) xs.insert(p.first);
  }
  for (const double x : xs) {
    o << "<text x=\"" << px(x) << "\" y=\"" << h - bottom + 18 << "\" text-anchor=\"middle\">" << x
      << "</text>\n";
  }
  o << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10
    << "\" text-anchor=\"middle\">" << axis << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right
    << "\" height=\"" << h - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  int idx = 0;
  for (auto& [name, s] : series) {
    std::sort(s.begin(), s.end());
    const char* col = name == "CRB" ? "black" : colors[idx++ % 5];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\""
      << (name == "CRB" ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (const auto& [x, y] : s) o << px(x) << ',' << py(y) << ' ';
    o << "\"/>\n";
    for (const auto& [x, y] : s) {
      o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col
        << "\"/>\n";
    }
    const double ly = top + 20.0 * (idx + (name == "CRB" ? 5 : 0));
    o << "<line x1=\"" << w - right + 10 << "\" x2=\"" << w - right + 35 << "\" y1=\"" << ly
      << "\" y2=\"" << ly << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << w - right + 40 << "\" y=\"" << ly + 4 << "\">" << name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

std::vector<std::filesystem::path> emit(const RmseTable& t, std::span<const ComplexityPoint> cx,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto p = dir / name;
    write_atomic(p, content);
    written.push_back(p);
  };
  put("rmse.csv", rmse_csv(t));
  put("rmse_by_source.csv", source_rmse_csv(t));
  put("crb.csv", crb_csv(t));
  put("diagnostics.csv", diagnostics_csv(t));
  put("complexity.csv", complexity_csv(cx));
  for (const auto c : kParamClasses) {
    put("rmse_" + std::string(to_string(c)) + ".svg", svg_plot(t, c));
  }
  return written;
}

}  // namespace idesprit
