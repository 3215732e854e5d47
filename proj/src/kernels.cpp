#include "hardylip/kernels.hpp"

#include <cmath>

namespace hardylip {

namespace {

constexpr Complex kPiI{0.0, M_PI};

bool near_pole(Complex d, Complex z) {
    const double scale = std::abs(d) + std::abs(z);
    return std::abs(d - z) <= 1e-300 * (1.0 + scale) ||
           std::abs(d + z) <= 1e-300 * (1.0 + scale);
}

}  // namespace

Complex k_kernel(Complex zeta, Complex zeta0, Complex z) {
    const Complex d = zeta - zeta0;
    if (near_pole(d, z))
        throw Error(Error::Kind::Pole, "k_kernel: z = +-(zeta - zeta0)");
    return z / (kPiI * (d * d - z * z));
}

Complex k_kernel_difference(Complex zeta, Complex zeta0, Complex z) {
    const Complex d = zeta - zeta0;
    if (near_pole(d, z))
        throw Error(Error::Kind::Pole, "k_kernel_difference: z = +-(zeta - zeta0)");
    return (1.0 / (d - z) - 1.0 / (d + z)) / (2.0 * kPiI);
}

double poisson_kernel(double x, double y) {
    if (!(y > 0.0)) throw Error(Error::Kind::Input, "poisson_kernel: y must be > 0");
    return y / (M_PI * (x * x + y * y));
}

double vertical_shift_constant(double lipschitz_M) {
    return std::max(13.0 / 5.0, 39.0 * std::sqrt(1.0 + lipschitz_M * lipschitz_M) / 8.0);
}

double cone_approach_constant(double half_angle_phi) {
    const double s = std::sin(0.5 * half_angle_phi);
    return std::max(5.0 / 3.0, 2.0 / (s * s));
}

KernelBoundCertificate kernel_bound_certificate(const LipschitzGraph& graph,
                                                double u, double u0, double tau) {
    if (!(tau > 0.0))
        throw Error(Error::Kind::Precondition, "vertical-shift bound needs tau > 0");
    const Complex zeta = graph.point(u);
    const Complex zeta0 = graph.point(u0);
    const Complex z(0.0, tau);

    KernelBoundCertificate cert;
    cert.regime = KernelRegime::VerticalShift;
    cert.sample_zeta = zeta;
    cert.sample_zeta0 = zeta0;
    cert.sample_z = z;
    cert.constant_used = vertical_shift_constant(graph.lipschitz_M);
    cert.lhs = std::abs(k_kernel_difference(zeta, zeta0, z));
    cert.rhs = cert.constant_used / M_PI * tau / (std::norm(zeta - zeta0) + tau * tau);
    cert.pass = cert.lhs <= cert.rhs;
    return cert;
}

KernelBoundCertificate kernel_bound_certificate(const LipschitzGraph& graph,
                                                const NTCone& cone, double u,
                                                Complex z) {
    const Complex zeta0 = graph.point(cone.vertex_u);
    const Complex zeta = graph.point(u);
    const ConeQuery q = cone_contains(cone, graph, zeta0 + z);
    if (!q.inside_cone)
        throw Error(Error::Kind::Precondition, "cone-approach bound: zeta0+z not in the cone");
    const double phi1 = 0.5 * cone.half_angle_phi;
    const double dir_delta =
        direction_radius(graph, cone.vertex_u, cone.tangent_angle_phi0, phi1);
    const double delta = std::min(q.entry_radius_delta, dir_delta);
    if (!(std::abs(z) < delta))
        throw Error(Error::Kind::Precondition,
                    "cone-approach bound: |z| not below the certified radius");

    KernelBoundCertificate cert;
    cert.regime = KernelRegime::ConeApproach;
    cert.sample_zeta = zeta;
    cert.sample_zeta0 = zeta0;
    cert.sample_z = z;
    cert.constant_used = cone_approach_constant(cone.half_angle_phi);
    cert.lhs = std::abs(k_kernel_difference(zeta, zeta0, z));
    cert.rhs = cert.constant_used / M_PI * std::abs(z) /
               (std::norm(zeta - zeta0) + std::norm(z));
    cert.pass = cert.lhs <= cert.rhs;
    return cert;
}

}  // namespace hardylip
