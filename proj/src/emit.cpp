#include "semiflow/emit.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

std::string digits17(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

std::string fixed2(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  (void)ec;
  return std::string(buf, p);
}

std::string shortg(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  (void)ec;
  return std::string(buf, p);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path + ": " + std::strerror(errno));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw Error(path + ": " + std::strerror(errno));
}

}  // namespace

void emit_csv(const std::vector<double>& times,
              const std::vector<std::vector<double>>& columns, const std::string& path) {
  if (times.empty()) throw PreconditionError("emit_csv: empty series");
  if (columns.empty()) throw PreconditionError("emit_csv: no value columns");
  for (const auto& col : columns)
    if (col.size() != times.size())
      throw PreconditionError("emit_csv: column length does not match times");

  std::string body = "t";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    body += ",value";
    if (c > 0) body += std::to_string(c + 1);
  }
  body += "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    body += digits17(times[i]);
    for (const auto& col : columns) {
      body += ',';
      body += digits17(col[i]);
    }
    body += "\n";
  }
  write_file(path, body);
}

void emit_svg(const std::vector<double>& times, const std::vector<double>& values,
              const std::string& path, const std::string& y_label) {
  if (times.empty()) throw PreconditionError("emit_svg: empty series");
  if (times.size() != values.size()) throw PreconditionError("emit_svg: length mismatch");

  const double width = 640.0, height = 400.0;
  const double left = 70.0, right = 20.0, top = 24.0, bottom = 48.0;

  double t_lo = times.front(), t_hi = times.front();
  double v_lo = values.front(), v_hi = values.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    t_lo = std::min(t_lo, times[i]);
    t_hi = std::max(t_hi, times[i]);
    v_lo = std::min(v_lo, values[i]);
    v_hi = std::max(v_hi, values[i]);
  }
  if (!(t_hi > t_lo)) t_hi = t_lo + 1.0;
  if (!(v_hi > v_lo)) v_hi = v_lo + 1.0;

  auto px = [&](double t) { return left + (t - t_lo) / (t_hi - t_lo) * (width - left - right); };
  auto py = [&](double v) {
    return height - bottom - (v - v_lo) / (v_hi - v_lo) * (height - top - bottom);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
         "height=\"400\" viewBox=\"0 0 640 400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  // axes
  svg += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(height - bottom) + "\" x2=\"" +
         fixed2(width - right) + "\" y2=\"" + fixed2(height - bottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(top) + "\" x2=\"" + fixed2(left) +
         "\" y2=\"" + fixed2(height - bottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  // polyline
  svg += "<polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += fixed2(px(times[i]));
    svg += ',';
    svg += fixed2(py(values[i]));
  }
  svg += "\"/>\n";
  // tick labels at the axis ends
  svg += "<text x=\"" + fixed2(left) + "\" y=\"" + fixed2(height - bottom + 18.0) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" + shortg(t_lo) +
         "</text>\n";
  svg += "<text x=\"" + fixed2(width - right) + "\" y=\"" + fixed2(height - bottom + 18.0) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" + shortg(t_hi) +
         "</text>\n";
  svg += "<text x=\"" + fixed2(left - 6.0) + "\" y=\"" + fixed2(height - bottom + 4.0) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">" + shortg(v_lo) +
         "</text>\n";
  svg += "<text x=\"" + fixed2(left - 6.0) + "\" y=\"" + fixed2(top + 4.0) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">" + shortg(v_hi) +
         "</text>\n";
  // axis labels
  svg += "<text x=\"" + fixed2((left + width - right) / 2.0) + "\" y=\"" +
         fixed2(height - 10.0) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"" + fixed2(left) + "\" y=\"" + fixed2(top - 8.0) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"start\">" + y_label +
         "</text>\n";
  svg += "</svg>\n";

  write_file(path, svg);
}

}  // namespace semiflow
