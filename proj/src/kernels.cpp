#include "hslab/kernels.hpp"

namespace hslab::kernels {
namespace {

constexpr double kDiagonal = 1e-8;

void require_interior(DiskPoint zeta) {
  if (!zeta.interior()) throw DomainError("second argument must lie strictly inside the disk");
}

void require_off_diagonal(DiskPoint z, DiskPoint zeta) {
  if (z.re == zeta.re && z.im == zeta.im) throw SingularInput("kernel evaluated on the diagonal");
}

// G written as -log1p((1-|z|^2)(1-|zeta|^2)/|z-zeta|^2) so that it is exactly 0 on the circle.
double green_raw(Complex z, Complex zeta) {
  double num = one_minus_abs2(z) * one_minus_abs2(zeta);
  return -std::log1p(num / std::norm(z - zeta));
}

}  // namespace

double green(DiskPoint z, DiskPoint zeta) {
  require_interior(zeta);
  require_off_diagonal(z, zeta);
  return green_raw(z.c(), zeta.c());
}

double gamma1(DiskPoint zp, DiskPoint zetap) {
  require_interior(zetap);
  const Complex z = zp.c(), zeta = zetap.c();
  const double a = one_minus_abs2(z);
  if (a == 0.0) return 0.0;
  const double b = one_minus_abs2(zeta);
  const double d2 = std::norm(z - zeta);

  double first = 0.0;
  if (std::sqrt(d2) >= kDiagonal) {
    first = (d2 - 0.25 * std::norm(z * z - zeta * zeta)) * green_raw(z, zeta);
  }
  const double z2 = std::norm(z), w2 = std::norm(zeta);
  const Complex zw = z * std::conj(zeta);
  const double brace = 7.0 - z2 - w2 - z2 * w2 - 4.0 * zw.real() -
                       2.0 * a * b * (1.0 - z2 * w2) / std::norm(1.0 - zw);
  return first + 0.125 * a * b * brace;
}

double compensator(DiskPoint zp, DiskPoint zetap) {
  const Complex z = zp.c(), zeta = zetap.c();
  const Complex zw = z * std::conj(zeta);
  const Complex q = 1.0 - zw;
  if (std::abs(q) < kDiagonal) throw SingularInput("compensator at coincident boundary points");
  const double b = one_minus_abs2(zeta);
  const double w2 = std::norm(zeta);
  const double term1 = 0.5 * (3.0 - w2) * (1.0 - std::norm(zw)) / std::norm(q);
  const double term2 = b * (zw / (q * q)).real();
  return b * (term1 + term2);
}

double lap_gamma1(DiskPoint z, DiskPoint zeta) {
  require_interior(zeta);
  require_off_diagonal(z, zeta);
  const double a = one_minus_abs2(z.c());
  if (a == 0.0) return 0.0;
  return a * (green_raw(z.c(), zeta.c()) + compensator(z, zeta));
}

Complex bergman(double alpha, DiskPoint z, DiskPoint zeta) {
  if (alpha < 0.0) throw DomainError("bergman kernel needs alpha >= 0");
  if (!z.interior() || !zeta.interior()) throw DomainError("bergman kernel needs interior points");
  const Complex q = 1.0 - z.c() * std::conj(zeta.c());
  return std::pow(q, -(2.0 + alpha));
}

KernelValue evaluate(Kind kind, DiskPoint z, DiskPoint zeta, double alpha) {
  switch (kind) {
    case Kind::green: return {green(z, zeta), kind};
    case Kind::gamma1: return {gamma1(z, zeta), kind};
    case Kind::compensator: return {compensator(z, zeta), kind};
    case Kind::lap_gamma1: return {lap_gamma1(z, zeta), kind};
    case Kind::bergman: return {bergman(alpha, z, zeta), kind};
  }
  throw DomainError("unknown kernel kind");
}

double compensator_at_origin(double s) { return 1.5 - 2.0 * s + 0.5 * s * s; }

}  // namespace hslab::kernels
