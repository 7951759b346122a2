#include "chartrl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chartrl {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 616.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 416.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string point_label(const ChartPoint& p) {
  if (std::holds_alternative<std::string>(p.x)) return std::get<std::string>(p.x);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::get<double>(p.x));
  return buf;
}

void text_el(std::string& out, const std::string& cls, double x, double y, const std::string& body,
             const char* anchor = "middle") {
  out += "  <text class=\"" + cls + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
         "\" text-anchor=\"" + anchor + "\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(body) + "</text>\n";
}

}  // namespace

std::string render_svg(const ChartSpec& spec) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 640 480\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";

  if (spec.title) text_el(out, "title", kWidth / 2, 28.0, *spec.title);
  if (spec.xlabel) text_el(out, "xlabel", (kLeft + kRight) / 2, 462.0, *spec.xlabel);
  if (spec.ylabel) {
    out += "  <text class=\"ylabel\" x=\"18.00\" y=\"" + fmt((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           fmt((kTop + kBottom) / 2) + ")\">" + escape(*spec.ylabel) + "</text>\n";
  }

  const auto& pts = spec.points;
  const size_t n = pts.size();

  if (spec.chart == ChartType::PIE) {
    double total = 0.0;
    for (const auto& p : pts) total += p.y;
    const double cx = kWidth / 2, cy = (kTop + kBottom) / 2, r = 150.0;
    if (n > 0 && total > 0.0) {
      double angle = -M_PI / 2;
      for (size_t i = 0; i < n; ++i) {
        double frac = pts[i].y / total;
        double next = angle + frac * 2 * M_PI;
        double x0 = cx + r * std::cos(angle), y0 = cy + r * std::sin(angle);
        double x1 = cx + r * std::cos(next), y1 = cy + r * std::sin(next);
        int large = (next - angle) > M_PI ? 1 : 0;
        int shade = 40 + static_cast<int>((i * 160) / std::max<size_t>(n, 1));
        char color[16];
        std::snprintf(color, sizeof(color), "#4c%02x%02x", shade, 255 - shade);
        out += "  <path class=\"wedge\" d=\"M " + fmt(cx) + " " + fmt(cy) + " L " + fmt(x0) + " " +
               fmt(y0) + " A " + fmt(r) + " " + fmt(r) + " 0 " + std::to_string(large) +
               " 1 " + fmt(x1) + " " + fmt(y1) + " Z\" fill=\"" + color +
               "\" stroke=\"white\"/>\n";
        double mid = (angle + next) / 2;
        text_el(out, "tick", cx + (r + 22.0) * std::cos(mid), cy + (r + 22.0) * std::sin(mid),
                point_label(pts[i]));
        angle = next;
      }
    }
    out += "</svg>\n";
    return out;
  }

  // Axes.
  out += "  <line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(kRight) +
         "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
  out += "  <line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
         "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";

  if (n == 0) {
    out += "</svg>\n";
    return out;
  }

  double ymin = 0.0, ymax = 0.0;
  for (const auto& p : pts) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  if (ymax == ymin) ymax = ymin + 1.0;
  auto sy = [&](double v) { return kBottom - (v - ymin) / (ymax - ymin) * (kBottom - kTop); };

  if (spec.chart == ChartType::BAR) {
    const double slot = (kRight - kLeft) / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      double x = kLeft + slot * (static_cast<double>(i) + 0.2);
      double y0 = sy(0.0), y1 = sy(pts[i].y);
      out += "  <rect class=\"bar\" x=\"" + fmt(x) + "\" y=\"" + fmt(std::min(y0, y1)) +
             "\" width=\"" + fmt(slot * 0.6) + "\" height=\"" + fmt(std::fabs(y0 - y1)) +
             "\" fill=\"#4c72b0\"/>\n";
      text_el(out, "tick", kLeft + slot * (static_cast<double>(i) + 0.5), kBottom + 18.0,
              point_label(pts[i]));
    }
  } else {
    // LINE / SCATTER share the numeric mapping of x.
    bool numeric_x = std::holds_alternative<double>(pts[0].x);
    double xmin = 0.0, xmax = 1.0;
    if (numeric_x) {
      xmin = std::get<double>(pts[0].x);
      xmax = xmin;
      for (const auto& p : pts) {
        xmin = std::min(xmin, std::get<double>(p.x));
        xmax = std::max(xmax, std::get<double>(p.x));
      }
      if (xmax == xmin) xmax = xmin + 1.0;
    }
    auto sx = [&](const ChartPoint& p, size_t i) {
      if (numeric_x)
        return kLeft + (std::get<double>(p.x) - xmin) / (xmax - xmin) * (kRight - kLeft);
      return kLeft + (kRight - kLeft) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    };

    if (spec.chart == ChartType::LINE && n > 1) {
      std::string poly = "  <polyline class=\"series\" fill=\"none\" stroke=\"#4c72b0\" "
                         "stroke-width=\"2\" points=\"";
      for (size_t i = 0; i < n; ++i) {
        if (i > 0) poly += ' ';
        poly += fmt(sx(pts[i], i)) + "," + fmt(sy(pts[i].y));
      }
      out += poly + "\"/>\n";
    }
    for (size_t i = 0; i < n; ++i) {
      out += "  <circle class=\"mark\" cx=\"" + fmt(sx(pts[i], i)) + "\" cy=\"" +
             fmt(sy(pts[i].y)) + "\" r=\"3.5\" fill=\"#4c72b0\"/>\n";
    }
    text_el(out, "tick", kLeft, kBottom + 18.0, point_label(pts.front()));
    if (n > 1) text_el(out, "tick", kRight, kBottom + 18.0, point_label(pts.back()));
  }

  // y-axis extent labels.
  text_el(out, "tick", kLeft - 8.0, kBottom + 4.0, fmt(ymin), "end");
  text_el(out, "tick", kLeft - 8.0, kTop + 4.0, fmt(ymax), "end");

  out += "</svg>\n";
  return out;
}

}  // namespace chartrl
