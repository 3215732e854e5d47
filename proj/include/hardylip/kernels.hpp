#pragma once

#include <complex>

#include "hardylip/geometry.hpp"

namespace hardylip {

// Paired Cauchy kernel K_z(zeta, zeta0) = (1/(pi*i)) * z / ((zeta-zeta0)^2 - z^2),
// the closed form of the two-pole difference kernel. Throws a pole error
// when z = +-(zeta - zeta0).
Complex k_kernel(Complex zeta, Complex zeta0, Complex z);

// Two-term difference form (1/(2 pi i)) (1/(zeta-zeta0-z) - 1/(zeta-zeta0+z)).
// Kept as the independent evaluation route; preferred near the boundary
// where the closed form cancels.
Complex k_kernel_difference(Complex zeta, Complex zeta0, Complex z);

// Half-plane Poisson kernel P_y(x) = (1/pi) y/(x^2+y^2), y > 0.
double poisson_kernel(double x, double y);

enum class KernelRegime { VerticalShift, ConeApproach };

struct KernelBoundCertificate {
    double lhs = 0.0;            // |K_z(zeta, zeta0)|
    double rhs = 0.0;            // (C'/pi) |z| / (|zeta-zeta0|^2 + |z|^2)
    double constant_used = 0.0;  // C'
    KernelRegime regime = KernelRegime::VerticalShift;
    bool pass = false;
    Complex sample_zeta;
    Complex sample_zeta0;
    Complex sample_z;
};

// C' = max{13/5, 39 sqrt(1+M^2)/8} for the vertical-shift bound.
double vertical_shift_constant(double lipschitz_M);

// C' = max{5/3, 2/sin^2(phi/2)} for approach within a cone of half-angle phi.
double cone_approach_constant(double half_angle_phi);

// Vertical-shift certificate: z = i*tau with tau > 0, zeta and zeta0 on
// the curve (given by their u-parameters).
KernelBoundCertificate kernel_bound_certificate(const LipschitzGraph& graph,
                                                double u, double u0, double tau);

// Cone-approach certificate: zeta0 is the cone vertex, zeta = zeta(u), and
// zeta0 + z must lie inside the cone with |z| below both the certified
// entry radius and the direction radius.
KernelBoundCertificate kernel_bound_certificate(const LipschitzGraph& graph,
                                                const NTCone& cone, double u,
                                                Complex z);

}  // namespace hardylip
