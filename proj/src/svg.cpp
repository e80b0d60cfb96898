/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "crackseg/svg.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>

namespace crackseg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b"};

double plot_x(double recall) {
  return kMarginLeft + recall * (kWidth - kMarginLeft - kMarginRight);
}

double plot_y(double prec) {
  return kHeight - kMarginBottom -
         prec * (kHeight - kMarginTop - kMarginBottom);
}

void append(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

}  // namespace

std::string pr_curve_svg(
    const std::vector<std::pair<std::string, PrCurve>>& curves) {
  std::string out;
  append(out,
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
         "viewBox=\"0 0 %d %d\">\n",
         kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes box and gridlines at 0.2 steps
  for (int i = 0; i <= 5; ++i) {
    const double f = i / 5.0;
    append(out,
           "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
           "stroke=\"#dddddd\"/>\n",
           plot_x(f), plot_y(0.0), plot_x(f), plot_y(1.0));
    append(out,
           "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
           "stroke=\"#dddddd\"/>\n",
           plot_x(0.0), plot_y(f), plot_x(1.0), plot_y(f));
    append(out,
           "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
           "text-anchor=\"middle\">%.1f</text>\n",
           plot_x(f), plot_y(0.0) + 18.0, f);
    append(out,
           "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
           "text-anchor=\"end\">%.1f</text>\n",
           plot_x(0.0) - 6.0, plot_y(f) + 4.0, f);
  }
  append(out,
         "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
         "fill=\"none\" stroke=\"black\"/>\n",
         plot_x(0.0), plot_y(1.0), plot_x(1.0) - plot_x(0.0),
         plot_y(0.0) - plot_y(1.0));
  append(out,
         "<text x=\"%.1f\" y=\"%d\" font-size=\"14\" "
         "text-anchor=\"middle\">recall</text>\n",
         0.5 * (plot_x(0.0) + plot_x(1.0)), kHeight - 10);
  append(out,
         "<text x=\"16\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 %.1f)\">precision</text>\n",
         0.5 * (plot_y(0.0) + plot_y(1.0)), 0.5 * (plot_y(0.0) + plot_y(1.0)));

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& [name, curve] = curves[k];
    // plot in recall order
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.points.size());
    for (const PrPoint& p : curve.points) pts.emplace_back(p.recall, p.precision);
    std::sort(pts.begin(), pts.end());
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\" points=\"";
    char buf[64];
    for (const auto& [r, p] : pts) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", plot_x(r), plot_y(p));
      out += buf;
    }
    out += "\"/>\n";
    append(out,
           "<rect x=\"%d\" y=\"%d\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
           kMarginLeft + 10, kMarginTop + 10 + static_cast<int>(k) * 20, color);
    append(out,
           "<text x=\"%d\" y=\"%d\" font-size=\"13\">%s</text>\n",
           kMarginLeft + 28, kMarginTop + 21 + static_cast<int>(k) * 20,
           name.c_str());
  }
  out += "</svg>\n";
  return out;
}

}  // namespace crackseg
