#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "hslab/core.hpp"

namespace hslab {

// Standalone SVG of the square [-extent, extent]^2, y axis pointing up.
class SvgFigure {
 public:
  explicit SvgFigure(int pixels = 600, double extent = 1.05);

  void polyline(const std::vector<Complex>& pts, const std::string& color, double width = 1.0, bool closed = false);
  void circle(Complex center, double radius, const std::string& color, double width = 1.0, bool dashed = false);
  void dot(Complex p, double radius_px, const std::string& color);
  void axes();
  void label(Complex at, const std::string& text);

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  int pixels_;
  double extent_;
  std::ostringstream body_;
};

}  // namespace hslab
