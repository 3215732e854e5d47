#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "hardylip/errors.hpp"

namespace hardylip {

using Complex = std::complex<double>;

// Graph of a piecewise-linear Lipschitz function a(u). The curve is
// zeta(u) = u + i*a(u); tails extend linearly beyond the extreme
// breakpoints. lipschitz_M bounds |a'| everywhere (chords and tails).
struct LipschitzGraph {
    std::vector<std::pair<double, double>> breakpoints;  // (u_k, a_k), u strictly increasing
    double tail_slope_left = 0.0;
    double tail_slope_right = 0.0;
    double lipschitz_M = 0.0;

    // Validates strict ordering and the slope bound; throws Error::Kind::Input
    // with the offending chord named.
    void validate() const;

    double a(double u) const;        // boundary function value
    double slope_at(double u) const; // a'(u); at a breakpoint returns the right slope
    double slope_left_of(double u) const;
    double slope_right_of(double u) const;
    bool is_breakpoint(double u, double tol = 0.0) const;

    Complex point(double u) const { return {u, a(u)}; }

    double u_min() const { return breakpoints.front().first; }
    double u_max() const { return breakpoints.back().first; }
};

// Convenience builders used throughout the tests and the CLI.
LipschitzGraph make_flat_graph();
LipschitzGraph make_wedge_graph(double slope = 1.0);  // a(u) = slope*|u|
LipschitzGraph make_zigzag_graph();                   // slopes +1,-1,+1
LipschitzGraph make_w_graph();                        // slopes -1,+1,-1,+1

enum class RegionTag { UpperDomain, Boundary, LowerDomain };

const char* to_string(RegionTag tag);

// Point on the curve with one-sided derivative data. At a breakpoint the
// two one-sided derivatives differ and `derivative` is disengaged.
struct CurvePoint {
    Complex zeta;
    std::optional<Complex> derivative;  // 1 + i*a'(u) where a' exists
    Complex derivative_left;
    Complex derivative_right;
    double arc_density = 1.0;  // sqrt(1 + a'^2); right-sided at breakpoints
};

CurvePoint eval_curve(const LipschitzGraph& graph, double u);

RegionTag classify(const LipschitzGraph& graph, Complex w, double tol = 0.0);

// Non-tangential approach cone at zeta0 = zeta(vertex_u):
//   {zeta0 + r e^{i theta} : r > 0, theta - phi0 in (phi, pi - phi)}.
struct NTCone {
    double vertex_u = 0.0;
    double tangent_angle_phi0 = 0.0;  // arg zeta'(u0)
    double half_angle_phi = 0.0;      // in (0, pi/2)
};

// Builds a cone at u0. Where zeta'(u0) does not exist the chord-average
// angle of the two one-sided tangents is used.
NTCone make_cone(const LipschitzGraph& graph, double u0, double phi);

struct ConeQuery {
    bool inside_cone = false;
    double entry_radius_delta = 0.0;  // sampling-certified entry radius
};

// Membership of w in the cone plus a certified radius delta such that for
// every sampled |z| < delta with zeta0+z in the cone, zeta0+z lies in
// Omega+ and zeta0-z in Omega-. Certification is a golden-ratio angle
// sweep over dyadic radii.
ConeQuery cone_contains(const NTCone& cone, const LipschitzGraph& graph, Complex w);

// Largest dyadic radius (up to `initial`) such that sampled curve points
// with |u - u0| < 2*delta make chord angles within phi1 of the tangent
// direction (mod pi). Used by the cone-approach kernel bound.
double direction_radius(const LipschitzGraph& graph, double u0, double phi0,
                        double phi1, double initial = 1.0);

// Exact distance from w to the polygonal curve (segments plus tails).
double distance_to_graph(const LipschitzGraph& graph, Complex w);

// Dyadic polygonal approximation: nodes at (k*2^-j, a(k*2^-j) + 2M*2^-j)
// for |k| <= j*2^j, with tail slopes -M and +M.
LipschitzGraph polygonal_approximation(const LipschitzGraph& graph, int j,
                                       std::size_t max_nodes = 4'000'000);

}  // namespace hardylip
