#pragma once

#include <string>
#include <vector>

namespace cfplan {

// Minimal deterministic SVG writer: fixed 3-decimal coordinate formatting,
// no timestamps, insertion-ordered elements.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  void comment(const std::string& text);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none", double stroke_width = 0.0);
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "none", double stroke_width = 0.0);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double stroke_width = 1.0);
  void text(double x, double y, const std::string& s, double size = 12.0,
            const std::string& anchor = "start", const std::string& fill = "#000000");

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double width_, height_;
  std::string body_;
};

}  // namespace cfplan
