#include "hardylip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hardylip {

namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Slope-bound comparisons allow a whisker of roundoff so that graphs built
// from exact dyadic arithmetic do not get rejected.
constexpr double kSlopeSlack = 1e-12;

}  // namespace

void LipschitzGraph::validate() const {
    if (breakpoints.empty())
        throw Error(Error::Kind::Input, "graph needs at least one breakpoint");
    if (!(lipschitz_M >= 0.0) || !finite(lipschitz_M))
        throw Error(Error::Kind::Input, "lipschitz_M must be finite and >= 0");
    for (const auto& [u, a] : breakpoints)
        if (!finite(u) || !finite(a))
            throw Error(Error::Kind::Input, "non-finite breakpoint");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const auto& [u0, a0] = breakpoints[k];
        const auto& [u1, a1] = breakpoints[k + 1];
        if (!(u1 > u0)) {
            std::ostringstream os;
            os << "breakpoints not strictly increasing at u=" << u0;
            throw Error(Error::Kind::Input, os.str());
        }
        const double slope = (a1 - a0) / (u1 - u0);
        if (std::abs(slope) > lipschitz_M * (1.0 + kSlopeSlack) + kSlopeSlack) {
            std::ostringstream os;
            os << "chord (" << u0 << "," << a0 << ")-(" << u1 << "," << a1
               << ") has slope " << slope << " exceeding M=" << lipschitz_M;
            throw Error(Error::Kind::Input, os.str());
        }
    }
    if (std::abs(tail_slope_left) > lipschitz_M * (1.0 + kSlopeSlack) + kSlopeSlack)
        throw Error(Error::Kind::Input, "left tail slope exceeds M");
    if (std::abs(tail_slope_right) > lipschitz_M * (1.0 + kSlopeSlack) + kSlopeSlack)
        throw Error(Error::Kind::Input, "right tail slope exceeds M");
}

double LipschitzGraph::a(double u) const {
    const auto& bp = breakpoints;
    if (u <= bp.front().first)
        return bp.front().second + tail_slope_left * (u - bp.front().first);
    if (u >= bp.back().first)
        return bp.back().second + tail_slope_right * (u - bp.back().first);
    auto it = std::upper_bound(bp.begin(), bp.end(), u,
                               [](double x, const auto& p) { return x < p.first; });
    const auto& [u1, a1] = *it;
    const auto& [u0, a0] = *(it - 1);
    const double t = (u - u0) / (u1 - u0);
    return a0 + t * (a1 - a0);
}

double LipschitzGraph::slope_left_of(double u) const {
    const auto& bp = breakpoints;
    if (u <= bp.front().first) return tail_slope_left;
    if (u > bp.back().first) return tail_slope_right;
    auto it = std::lower_bound(bp.begin(), bp.end(), u,
                               [](const auto& p, double x) { return p.first < x; });
    // first breakpoint with u_k >= u; it > begin since u > u_min here
    const auto& [u1, a1] = *it;
    const auto& [u0, a0] = *(it - 1);
    return (a1 - a0) / (u1 - u0);
}

double LipschitzGraph::slope_right_of(double u) const {
    const auto& bp = breakpoints;
    if (u < bp.front().first) return tail_slope_left;
    if (u >= bp.back().first) return tail_slope_right;
    auto it = std::upper_bound(bp.begin(), bp.end(), u,
                               [](double x, const auto& p) { return x < p.first; });
    const auto& [u1, a1] = *it;
    const auto& [u0, a0] = *(it - 1);
    return (a1 - a0) / (u1 - u0);
}

double LipschitzGraph::slope_at(double u) const { return slope_right_of(u); }

bool LipschitzGraph::is_breakpoint(double u, double tol) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), u - tol,
                               [](const auto& p, double x) { return p.first < x; });
    return it != breakpoints.end() && std::abs(it->first - u) <= tol;
}

LipschitzGraph make_flat_graph() {
    return LipschitzGraph{{{0.0, 0.0}}, 0.0, 0.0, 0.0};
}

LipschitzGraph make_wedge_graph(double slope) {
    return LipschitzGraph{{{0.0, 0.0}}, -slope, slope, std::abs(slope)};
}

LipschitzGraph make_zigzag_graph() {
    return LipschitzGraph{{{-1.0, 0.0}, {1.0, -2.0}}, 1.0, 1.0, 1.0};
}

LipschitzGraph make_w_graph() {
    return LipschitzGraph{{{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, -1.0, 1.0, 1.0};
}

const char* to_string(RegionTag tag) {
    switch (tag) {
        case RegionTag::UpperDomain: return "upper";
        case RegionTag::Boundary: return "boundary";
        case RegionTag::LowerDomain: return "lower";
    }
    return "?";
}

CurvePoint eval_curve(const LipschitzGraph& graph, double u) {
    if (!finite(u)) throw Error(Error::Kind::Input, "eval_curve: non-finite u");
    CurvePoint p;
    p.zeta = graph.point(u);
    const double sl = graph.slope_left_of(u);
    const double sr = graph.slope_right_of(u);
    p.derivative_left = Complex(1.0, sl);
    p.derivative_right = Complex(1.0, sr);
    if (sl == sr) p.derivative = Complex(1.0, sr);
    p.arc_density = std::sqrt(1.0 + sr * sr);
    return p;
}

RegionTag classify(const LipschitzGraph& graph, Complex w, double tol) {
    if (!finite(w)) throw Error(Error::Kind::Input, "classify: non-finite point");
    if (tol < 0.0) throw Error(Error::Kind::Input, "classify: negative tolerance");
    const double gap = w.imag() - graph.a(w.real());
    if (gap > tol) return RegionTag::UpperDomain;
    if (gap < -tol) return RegionTag::LowerDomain;
    return RegionTag::Boundary;
}

NTCone make_cone(const LipschitzGraph& graph, double u0, double phi) {
    if (!(phi > 0.0 && phi < M_PI / 2))
        throw Error(Error::Kind::Input, "cone half-angle must lie in (0, pi/2)");
    const CurvePoint p = eval_curve(graph, u0);
    double phi0;
    if (p.derivative) {
        phi0 = std::arg(*p.derivative);
    } else {
        // Chord-average angle at a corner; callers own the semantics there.
        phi0 = 0.5 * (std::arg(p.derivative_left) + std::arg(p.derivative_right));
    }
    return NTCone{u0, phi0, phi};
}

namespace {

// Relative angle theta - phi0 reduced to (-pi, pi].
double reduced_angle(double theta, double phi0) {
    double d = theta - phi0;
    while (d <= -M_PI) d += 2 * M_PI;
    while (d > M_PI) d -= 2 * M_PI;
    return d;
}

bool angle_in_cone(const NTCone& cone, double theta) {
    const double d = reduced_angle(theta, cone.tangent_angle_phi0);
    return d > cone.half_angle_phi && d < M_PI - cone.half_angle_phi;
}

}  // namespace

ConeQuery cone_contains(const NTCone& cone, const LipschitzGraph& graph, Complex w) {
    const Complex zeta0 = graph.point(cone.vertex_u);
    if (w == zeta0)
        throw Error(Error::Kind::Input, "cone_contains: direction undefined at the vertex");
    if (!finite(w)) throw Error(Error::Kind::Input, "cone_contains: non-finite point");

    ConeQuery out;
    out.inside_cone = angle_in_cone(cone, std::arg(w - zeta0));

    // Golden-ratio sweep of cone directions, dyadic radii. Halve the
    // candidate until every sample enters Omega+ (and its reflection
    // Omega-). The returned delta is what the sweep actually checked.
    constexpr double kGolden = 0.6180339887498949;
    constexpr int kAngles = 48;
    constexpr int kRadii = 10;
    const double span = M_PI - 2 * cone.half_angle_phi;
    double delta = 1.0;
    for (int attempt = 0; attempt < 48; ++attempt) {
        bool ok = true;
        for (int m = 1; m <= kAngles && ok; ++m) {
            const double frac = std::fmod(m * kGolden, 1.0);
            const double theta =
                cone.tangent_angle_phi0 + cone.half_angle_phi + frac * span;
            const Complex dir = std::polar(1.0, theta);
            for (int i = 0; i < kRadii; ++i) {
                const double r = delta * std::ldexp(1.0, -i);
                const Complex z = r * dir;
                if (classify(graph, zeta0 + z) != RegionTag::UpperDomain ||
                    classify(graph, zeta0 - z) != RegionTag::LowerDomain) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            out.entry_radius_delta = delta;
            return out;
        }
        delta *= 0.5;
    }
    out.entry_radius_delta = 0.0;
    return out;
}

double direction_radius(const LipschitzGraph& graph, double u0, double phi0,
                        double phi1, double initial) {
    const Complex zeta0 = graph.point(u0);
    double delta = initial;
    for (int attempt = 0; attempt < 60; ++attempt) {
        bool ok = true;
        const int n = 257;
        for (int i = 0; i < n && ok; ++i) {
            const double u = u0 + (2.0 * i / (n - 1) - 1.0) * 2.0 * delta;
            if (u == u0) continue;
            const Complex d = graph.point(u) - zeta0;
            if (d == Complex(0, 0)) { ok = false; break; }
            // Fold the chord direction onto (-pi/2, pi/2] around phi0.
            double rel = reduced_angle(std::arg(d), phi0);
            if (rel > M_PI / 2) rel -= M_PI;
            if (rel <= -M_PI / 2) rel += M_PI;
            if (std::abs(rel) >= phi1) ok = false;
        }
        if (ok) return delta;
        delta *= 0.5;
    }
    return 0.0;
}

namespace {

double point_segment_distance(Complex p, Complex s0, Complex s1) {
    const Complex d = s1 - s0;
    const double len2 = std::norm(d);
    double t = len2 > 0 ? ((p - s0) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (s0 + t * d));
}

double point_ray_distance(Complex p, Complex origin, Complex dir) {
    const double len2 = std::norm(dir);
    double t = ((p - origin) * std::conj(dir)).real() / len2;
    t = std::max(t, 0.0);
    return std::abs(p - (origin + t * dir));
}

}  // namespace

double distance_to_graph(const LipschitzGraph& graph, Complex w) {
    double best = std::numeric_limits<double>::infinity();
    const auto& bp = graph.breakpoints;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        best = std::min(best, point_segment_distance(w, Complex(bp[k].first, bp[k].second),
                                                     Complex(bp[k + 1].first, bp[k + 1].second)));
    }
    const Complex left(bp.front().first, bp.front().second);
    const Complex right(bp.back().first, bp.back().second);
    best = std::min(best, point_ray_distance(w, left, Complex(-1.0, -graph.tail_slope_left)));
    best = std::min(best, point_ray_distance(w, right, Complex(1.0, graph.tail_slope_right)));
    return best;
}

LipschitzGraph polygonal_approximation(const LipschitzGraph& graph, int j,
                                       std::size_t max_nodes) {
    if (j < 1) throw Error(Error::Kind::Input, "polygonal_approximation: j must be >= 1");
    const double h = std::ldexp(1.0, -j);          // 2^-j
    const long long kmax = static_cast<long long>(j) << j;  // j * 2^j
    const unsigned long long count = 2ull * static_cast<unsigned long long>(kmax) + 1ull;
    if (count > max_nodes)
        throw Error(Error::Kind::Resource, "polygonal_approximation: node count over limit");

    const double M = graph.lipschitz_M;
    const double lift = 2.0 * M * h;
    LipschitzGraph out;
    out.lipschitz_M = M;
    out.tail_slope_left = -M;
    out.tail_slope_right = M;
    out.breakpoints.reserve(static_cast<std::size_t>(count));
    for (long long k = -kmax; k <= kmax; ++k) {
        const double u = k * h;
        out.breakpoints.emplace_back(u, graph.a(u) + lift);
    }
    out.validate();
    return out;
}

}  // namespace hardylip
