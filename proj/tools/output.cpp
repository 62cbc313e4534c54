#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hullsing::cli {

namespace {

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kSize = 480.0, kMargin = 60.0;

std::string svg_open(const Stamp& stamp, const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  fmt("%.0f", kSize + 2 * kMargin) + "\" height=\"" +
                  fmt("%.0f", kSize + 2 * kMargin) + "\">\n";
  s += "<!-- hullsing " + stamp.command + " config_hash=" + stamp.config_hash +
       " seed=" + std::to_string(stamp.seed) + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt("%.0f", kMargin) + "\" y=\"30\" font-family=\"sans-serif\" "
       "font-size=\"14\">" + escape(title) + "</text>\n";
  return s;
}

std::string frame(const std::string& xlabel, const std::string& ylabel, double x0, double x1,
                  double y0, double y1) {
  std::string s = "<rect x=\"" + fmt("%.0f", kMargin) + "\" y=\"" + fmt("%.0f", kMargin) +
                  "\" width=\"" + fmt("%.0f", kSize) + "\" height=\"" + fmt("%.0f", kSize) +
                  "\" fill=\"none\" stroke=\"black\"/>\n";
  const double bottom = kMargin + kSize + 18, left = kMargin - 6;
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    s += "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" + anchor + "\">" +
         escape(text) + "</text>\n";
  };
  label(kMargin, bottom, fmt("%g", x0), "start");
  label(kMargin + kSize, bottom, fmt("%g", x1), "end");
  label(kMargin + kSize / 2, bottom + 16, xlabel, "middle");
  label(left, kMargin + kSize, fmt("%g", y0), "end");
  label(left, kMargin + 10, fmt("%g", y1), "end");
  label(left - 20, kMargin + kSize / 2, ylabel, "end");
  return s;
}

}  // namespace

CsvWriter::CsvWriter(const Stamp& stamp, std::vector<std::string> columns)
    : columns_(columns.size()) {
  text_ = "# hullsing " + stamp.command + " config_hash=" + stamp.config_hash +
          " seed=" + std::to_string(stamp.seed) + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) text_ += (i ? "," : "") + columns[i];
  text_ += "\n";
}

std::string CsvWriter::number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt("%.16e", v);
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + number(values[i]);
  text_ += "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
  text_ += "\n";
}

void CsvWriter::save(const std::string& path) const { save_text(path, text_); }

void write_json(const std::string& path, const Stamp& stamp, json body) {
  body["command"] = stamp.command;
  body["config_hash"] = stamp.config_hash;
  body["seed"] = stamp.seed;
  save_text(path, body.dump(2) + "\n");
}

void write_section_svg(const std::string& path, const Stamp& stamp, const std::string& title,
                       const Axis& x, const Axis& y, const std::vector<double>& z) {
  const int nx = x.n, ny = y.n;
  double scale = 0.0;
  for (double v : z) {
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) scale = 1.0;
  const double cw = kSize / nx, ch = kSize / ny;
  std::string s = svg_open(stamp, title);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double v = z[static_cast<std::size_t>(i) * ny + j];
      std::string colour = "#cccccc";
      if (std::isfinite(v)) {
        const double a = std::min(1.0, std::abs(v) / scale);
        const int fade = static_cast<int>(std::lround(255 * (1.0 - 0.8 * a)));
        char buf[16];
        if (v >= 0) {
          std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
        } else {
          std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
        }
        colour = buf;
      }
      s += "<rect x=\"" + fmt("%.2f", kMargin + i * cw) + "\" y=\"" +
           fmt("%.2f", kMargin + kSize - (j + 1) * ch) + "\" width=\"" + fmt("%.2f", cw + 0.05) +
           "\" height=\"" + fmt("%.2f", ch + 0.05) + "\" fill=\"" + colour + "\"/>\n";
    }
  }
  // zero level by marching squares through the cell centres
  auto px = [&](double fi) { return kMargin + (fi + 0.5) * cw; };
  auto py = [&](double fj) { return kMargin + kSize - (fj + 0.5) * ch; };
  s += "<g stroke=\"black\" stroke-width=\"1.5\" fill=\"none\">\n";
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const double c[4] = {z[static_cast<std::size_t>(i) * ny + j],
                           z[static_cast<std::size_t>(i + 1) * ny + j],
                           z[static_cast<std::size_t>(i + 1) * ny + j + 1],
                           z[static_cast<std::size_t>(i) * ny + j + 1]};
      if (!(std::isfinite(c[0]) && std::isfinite(c[1]) && std::isfinite(c[2]) &&
            std::isfinite(c[3]))) {
        continue;
      }
      const double cx[4] = {0, 1, 1, 0}, cy[4] = {0, 0, 1, 1};
      std::vector<std::pair<double, double>> hits;
      for (int e = 0; e < 4; ++e) {
        const double a = c[e], b = c[(e + 1) % 4];
        if ((a <= 0) == (b <= 0)) continue;
        const double f = a / (a - b);
        hits.emplace_back(cx[e] + f * (cx[(e + 1) % 4] - cx[e]), cy[e] + f * (cy[(e + 1) % 4] - cy[e]));
      }
      for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
        s += "<line x1=\"" + fmt("%.2f", px(i + hits[h].first)) + "\" y1=\"" +
             fmt("%.2f", py(j + hits[h].second)) + "\" x2=\"" +
             fmt("%.2f", px(i + hits[h + 1].first)) + "\" y2=\"" +
             fmt("%.2f", py(j + hits[h + 1].second)) + "\"/>\n";
      }
    }
  }
  s += "</g>\n";
  s += frame(x.name, y.name, x.lo, x.hi, y.lo, y.hi);
  s += "</svg>\n";
  save_text(path, s);
}

void write_curves_svg(const std::string& path, const Stamp& stamp, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Polyline>& lines) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      x0 = std::min(x0, l.x[i]);
      x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, l.y[i]);
      y1 = std::max(y1, l.y[i]);
    }
  }
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y0 -= 1, y1 += 1;
  std::string s = svg_open(stamp, title);
  for (const auto& l : lines) {
    s += "<polyline fill=\"none\" stroke=\"" + l.colour + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      s += fmt("%.2f", kMargin + (l.x[i] - x0) / (x1 - x0) * kSize) + "," +
           fmt("%.2f", kMargin + kSize - (l.y[i] - y0) / (y1 - y0) * kSize) + " ";
    }
    s += "\"/>\n";
  }
  s += frame(xlabel, ylabel, x0, x1, y0, y1);
  s += "</svg>\n";
  save_text(path, s);
}

}  // namespace hullsing::cli
