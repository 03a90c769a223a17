#pragma once

#include <string>
#include <vector>

namespace semiflow {

// CSV with header `t,value[,value2...]`, 17 significant digits, LF endings.
void emit_csv(const std::vector<double>& times,
              const std::vector<std::vector<double>>& columns, const std::string& path);

// Standalone SVG 1.1 line plot: one polyline with axes and corner tick
// labels; byte output is deterministic for fixed input.
void emit_svg(const std::vector<double>& times, const std::vector<double>& values,
              const std::string& path, const std::string& y_label);

}  // namespace semiflow
