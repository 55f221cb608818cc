#include "hslab/svg.hpp"

#include <cstdio>
#include <fstream>

namespace hslab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

SvgFigure::SvgFigure(int pixels, double extent) : pixels_(pixels), extent_(extent) {}

double SvgFigure::px(double x) const { return (x + extent_) / (2.0 * extent_) * pixels_; }
double SvgFigure::py(double y) const { return (extent_ - y) / (2.0 * extent_) * pixels_; }

void SvgFigure::polyline(const std::vector<Complex>& pts, const std::string& color, double width, bool closed) {
  if (pts.empty()) return;
  body_ << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << fmt(width) << "\" points=\"";
  for (size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << fmt(px(pts[i].real())) << "," << fmt(py(pts[i].imag()));
  body_ << "\"/>\n";
}

void SvgFigure::circle(Complex c, double r, const std::string& color, double width, bool dashed) {
  body_ << "<circle cx=\"" << fmt(px(c.real())) << "\" cy=\"" << fmt(py(c.imag())) << "\" r=\""
        << fmt(r / (2.0 * extent_) * pixels_) << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << fmt(width) << "\"" << (dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>\n";
}

void SvgFigure::dot(Complex p, double radius_px, const std::string& color) {
  body_ << "<circle cx=\"" << fmt(px(p.real())) << "\" cy=\"" << fmt(py(p.imag())) << "\" r=\"" << fmt(radius_px)
        << "\" fill=\"" << color << "\"/>\n";
}

void SvgFigure::axes() {
  body_ << "<line x1=\"" << fmt(px(-1.0)) << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\"" << fmt(px(1.0)) << "\" y2=\""
        << fmt(py(0.0)) << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  body_ << "<line x1=\"" << fmt(px(0.0)) << "\" y1=\"" << fmt(py(-1.0)) << "\" x2=\"" << fmt(px(0.0)) << "\" y2=\""
        << fmt(py(1.0)) << "\" stroke=\"#bbb\" stroke-width=\"0.5\"/>\n";
  circle(0.0, 1.0, "#444", 1.0);
}

void SvgFigure::label(Complex at, const std::string& text) {
  body_ << "<text x=\"" << fmt(px(at.real())) << "\" y=\"" << fmt(py(at.imag()))
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << text << "</text>\n";
}

std::string SvgFigure::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels_ << "\" height=\"" << pixels_
      << "\" viewBox=\"0 0 " << pixels_ << " " << pixels_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void SvgFigure::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << str();
}

}  // namespace hslab
