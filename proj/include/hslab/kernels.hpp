#pragma once

#include "hslab/core.hpp"

// Closed-form kernels of the disk. Laplacian is d^2/dz dzbar (a quarter of the usual one).
namespace hslab::kernels {

enum class Kind { green, gamma1, compensator, lap_gamma1, bergman };

struct KernelValue {
  Complex value;
  Kind kind;
};

// log |(z - zeta)/(1 - conj(zeta) z)|^2
double green(DiskPoint z, DiskPoint zeta);

// Weighted biharmonic Green function for Delta (1-|z|^2)^{-1} Delta.
double gamma1(DiskPoint z, DiskPoint zeta);

// Harmonic compensator H1.
double compensator(DiskPoint z, DiskPoint zeta);

// (1-|z|^2)(G + H1), the Laplacian of gamma1 in z.
double lap_gamma1(DiskPoint z, DiskPoint zeta);

// (1 - z conj(zeta))^{-(2+alpha)}, principal branch.
Complex bergman(double alpha, DiskPoint z, DiskPoint zeta);

KernelValue evaluate(Kind kind, DiskPoint z, DiskPoint zeta, double alpha = 0.0);

// Closed form of the compensator at z = 0: 3/2 - 2|zeta|^2 + |zeta|^4/2.
double compensator_at_origin(double zeta_abs2);

}  // namespace hslab::kernels
