#include "hardylip/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "hardylip/kernels.hpp"

namespace hardylip {

namespace {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK dqk15 coefficients).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi;
    Complex value;
    double err;
};

Panel gk15(const std::function<Complex(double)>& g, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const Complex fc = g(c);
    Complex resk = kWgk[7] * fc;
    Complex resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Complex f1 = g(c - dx);
        const Complex f2 = g(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = resk * h;
    p.err = std::abs((resk - resg) * h);
    return p;
}

// Neumaier-compensated sums over the panel list keep the final value
// independent of the accumulation order.
Complex compensated_total(const std::vector<Panel>& panels) {
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    auto add = [](double& s, double& comp, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    };
    for (const Panel& p : panels) {
        add(sr, cr, p.value.real());
        add(si, ci, p.value.imag());
    }
    return {sr + cr, si + ci};
}

double total_error(const std::vector<Panel>& panels) {
    double e = 0.0;
    for (const Panel& p : panels) e += p.err;
    return e;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(truncation_radius > 0.0))
        throw Error(Error::Kind::Input, "quadrature: truncation_radius must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw Error(Error::Kind::Input, "quadrature: tolerances must be > 0");
    if (max_panels < 4)
        throw Error(Error::Kind::Input, "quadrature: max_panels must be >= 4");
    if (!(tail_decay_exponent > 1.0))
        throw Error(Error::Kind::Input, "quadrature: tail_decay_exponent must be > 1");
}

double QuadratureSpec::radius_for_tail(double coefficient, double k, double budget) {
    if (!(budget > 0.0) || !(k > 1.0)) return 1e6;
    // Int_R^inf K t^-k dt = K R^(1-k)/(k-1), both sides.
    const double r = std::pow(2.0 * coefficient / ((k - 1.0) * budget), 1.0 / (k - 1.0));
    return std::clamp(r, 16.0, 1e12);
}

IntegralResult adaptive_segments(const std::function<Complex(double)>& g,
                                 const std::vector<double>& boundaries,
                                 double rel_tol, double abs_tol, int max_panels) {
    if (boundaries.size() < 2)
        throw Error(Error::Kind::Input, "adaptive_segments: need at least one segment");

    std::vector<Panel> panels;
    panels.reserve(boundaries.size() + 16);
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        if (boundaries[i + 1] <= boundaries[i]) continue;  // collapsed split point
        panels.push_back(gk15(g, boundaries[i], boundaries[i + 1]));
    }

    auto tol_of = [&](Complex v) {
        return std::max(abs_tol, rel_tol * std::abs(v));
    };

    // running (uncompensated) totals steer the refinement; the returned
    // value is recomputed with compensated summation at the end
    Complex value(0.0, 0.0);
    double err = 0.0;
    for (const Panel& p : panels) {
        value += p.value;
        err += p.err;
    }
    while (err > tol_of(value) && static_cast<int>(panels.size()) < max_panels) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        const Panel parent = panels[worst];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (mid <= parent.lo || mid >= parent.hi) break;  // interval exhausted
        panels[worst] = gk15(g, parent.lo, mid);
        panels.push_back(gk15(g, mid, parent.hi));
        value += panels[worst].value + panels.back().value - parent.value;
        err += panels[worst].err + panels.back().err - parent.err;
        err = std::max(err, 0.0);
    }

    IntegralResult out;
    out.value = compensated_total(panels);
    out.error_estimate = total_error(panels);
    out.panels_used = static_cast<int>(panels.size());
    out.converged = out.error_estimate <= tol_of(out.value);
    return out;
}

namespace {

// Window boundaries: ends, interior breakpoints, a dyadic ladder out from
// the center (so decaying integrands over wide windows start resolved),
// and any caller-supplied peak locations.
std::vector<double> window_boundaries(const LipschitzGraph& graph, double center,
                                      double radius, const std::vector<double>& extra) {
    const double lo = center - radius;
    const double hi = center + radius;
    std::set<double> b{lo, hi, std::clamp(center, lo, hi)};
    for (const auto& [u, a] : graph.breakpoints)
        if (u > lo && u < hi) b.insert(u);
    for (double step = 0.0625; step < radius; step *= 2.0) {
        if (center + step < hi) b.insert(center + step);
        if (center - step > lo) b.insert(center - step);
    }
    for (double u : extra) {
        if (u > lo && u < hi) b.insert(u);
    }
    return {b.begin(), b.end()};
}

double tail_coefficient(const std::function<Complex(double)>& g, double center,
                        double radius, double k, int side) {
    static constexpr double kProbes[4] = {1.0, 1.3, 1.7, 2.2};
    double coeff = 0.0;
    for (double m : kProbes) {
        const double u = center + side * radius * m;
        const double gu = std::abs(g(u));
        if (std::isfinite(gu)) coeff = std::max(coeff, gu * std::pow(radius * m, k));
    }
    return coeff;
}

}  // namespace

IntegralResult integrate_curve(const LipschitzGraph& graph, const CurveFunction& integrand,
                               const QuadratureSpec& spec, double center_u,
                               CurveMeasure measure, const std::vector<double>& extra_points) {
    spec.validate();
    auto g = [&](double u) -> Complex {
        const double s = graph.slope_at(u);
        const Complex w = measure == CurveMeasure::ComplexDz
                              ? Complex(1.0, s)
                              : Complex(std::sqrt(1.0 + s * s), 0.0);
        return integrand(graph.point(u)) * w;
    };

    const double R = spec.truncation_radius;
    auto boundaries = window_boundaries(graph, center_u, R, extra_points);
    IntegralResult res =
        adaptive_segments(g, boundaries, spec.rel_tol, spec.abs_tol, spec.max_panels);

    const double k = spec.tail_decay_exponent;
    const double coeff = tail_coefficient(g, center_u, R, k, +1) +
                         tail_coefficient(g, center_u, R, k, -1);
    res.tail_estimate = coeff * std::pow(R, 1.0 - k) / (k - 1.0);

    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value));
    if (!res.converged && res.panels_used >= spec.max_panels &&
        res.error_estimate > tol)
        throw ConvergenceError("integrate_curve: panel budget exhausted", res);
    res.converged = res.error_estimate + res.tail_estimate <= tol;
    return res;
}

IntegralResult integrate_curve_auto(const LipschitzGraph& graph,
                                    const CurveFunction& integrand,
                                    QuadratureSpec spec, double center_u,
                                    CurveMeasure measure, std::vector<double> extra_points,
                                    double tail_budget) {
    IntegralResult res;
    for (;;) {
        res = integrate_curve(graph, integrand, spec, center_u, measure, extra_points);
        if (res.tail_estimate <= tail_budget || spec.truncation_radius >= 1e9) break;
        spec.truncation_radius *= 4.0;
    }
    return res;
}

Complex cauchy_integral(const LipschitzGraph& graph, const CurveFunction& boundary_fn,
                        Complex w, const QuadratureSpec& spec, double boundary_tol) {
    if (classify(graph, w, boundary_tol) == RegionTag::Boundary)
        throw Error(Error::Kind::Proximity, "cauchy_integral: w lies on the curve");
    const double d = distance_to_graph(graph, w);
    if (d < 1e-13 * (1.0 + std::abs(w)))
        throw Error(Error::Kind::Proximity, "cauchy_integral: w unresolvably close to the curve");

    // Pre-split around the projection of w so the peak panel width starts
    // near the distance scale; node spacing there is then well under d.
    std::vector<double> peaks;
    for (int m = 0; m <= 12; ++m) {
        peaks.push_back(w.real() + d * std::ldexp(1.0, m));
        peaks.push_back(w.real() - d * std::ldexp(1.0, m));
    }
    peaks.push_back(w.real());

    const Complex two_pi_i(0.0, 2.0 * M_PI);
    auto f = [&](Complex zeta) { return boundary_fn(zeta) / (zeta - w); };
    IntegralResult res = integrate_curve(graph, f, spec, w.real(),
                                         CurveMeasure::ComplexDz, peaks);
    return res.value / two_pi_i;
}

Complex k_transform(const LipschitzGraph& graph, const CurveFunction& boundary_fn,
                    Complex zeta0, Complex z, const QuadratureSpec& spec) {
    if (classify(graph, zeta0 + z) != RegionTag::UpperDomain)
        throw Error(Error::Kind::Region, "k_transform: zeta0 + z must lie in Omega+");
    if (classify(graph, zeta0 - z) != RegionTag::LowerDomain)
        throw Error(Error::Kind::Region, "k_transform: zeta0 - z must lie in Omega-");

    const double d = std::min(distance_to_graph(graph, zeta0 + z),
                              distance_to_graph(graph, zeta0 - z));
    std::vector<double> peaks;
    for (Complex pole : {zeta0 + z, zeta0 - z}) {
        peaks.push_back(pole.real());
        for (int m = 0; m <= 12; ++m) {
            peaks.push_back(pole.real() + d * std::ldexp(1.0, m));
            peaks.push_back(pole.real() - d * std::ldexp(1.0, m));
        }
    }
    auto f = [&](Complex zeta) {
        return k_kernel_difference(zeta, zeta0, z) * boundary_fn(zeta);
    };
    IntegralResult res = integrate_curve(graph, f, spec, zeta0.real(),
                                         CurveMeasure::ComplexDz, peaks);
    return res.value;
}

HardyNormEstimate hardy_norm(const LipschitzGraph& graph, const CurveFunction& F,
                             double p, const std::vector<double>& tau_grid,
                             const QuadratureSpec& spec) {
    if (!(p > 1.0)) throw Error(Error::Kind::Input, "hardy_norm: p must be > 1");
    if (tau_grid.empty()) throw Error(Error::Kind::Input, "hardy_norm: empty tau grid");
    for (double tau : tau_grid)
        if (!(tau > 0.0)) throw Error(Error::Kind::Input, "hardy_norm: tau must be > 0");

    HardyNormEstimate out;
    out.per_tau.reserve(tau_grid.size());
    const Complex shift(0.0, 1.0);
    for (double tau : tau_grid) {
        auto f = [&](Complex zeta) -> Complex {
            const Complex v = F(zeta + shift * tau);
            return std::pow(std::abs(v), p);
        };
        IntegralResult res =
            integrate_curve(graph, f, spec, 0.0, CurveMeasure::ArcLength);
        const double m = std::pow(res.value.real(), 1.0 / p);
        out.per_tau.push_back(m);
        out.sup_estimate = std::max(out.sup_estimate, m);
    }
    return out;
}

LimitProbe nontangential_limit_probe(const LipschitzGraph& graph, const CurveFunction& F,
                                     const NTCone& cone, const std::vector<double>& radii,
                                     double direction_theta) {
    if (radii.size() < 3)
        throw Error(Error::Kind::Input, "limit probe: need at least three radii");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] > radii[i + 1] && radii[i + 1] > 0.0))
            throw Error(Error::Kind::Input, "limit probe: radii must decrease to 0");

    double theta = direction_theta;
    if (std::isnan(theta)) theta = cone.tangent_angle_phi0 + M_PI / 2;
    const Complex zeta0 = graph.point(cone.vertex_u);
    const Complex dir = std::polar(1.0, theta);

    const ConeQuery q = cone_contains(cone, graph, zeta0 + radii.front() * dir);
    if (!q.inside_cone)
        throw Error(Error::Kind::Precondition, "limit probe: ray not inside the cone");
    if (!(radii.front() < q.entry_radius_delta))
        throw Error(Error::Kind::Precondition,
                    "limit probe: radii exceed the certified entry radius");

    LimitProbe out;
    out.values.reserve(radii.size());
    for (double r : radii) {
        const Complex w = zeta0 + r * dir;
        if (classify(graph, w) != RegionTag::UpperDomain)
            throw Error(Error::Kind::Region, "limit probe: point left Omega+");
        out.values.push_back(F(w));
    }

    // Lagrange extrapolation of the last three samples to r = 0.
    const std::size_t n = radii.size();
    const double r0 = radii[n - 3], r1 = radii[n - 2], r2 = radii[n - 1];
    const Complex v0 = out.values[n - 3], v1 = out.values[n - 2], v2 = out.values[n - 1];
    out.extrapolated_limit = v0 * (r1 * r2) / ((r0 - r1) * (r0 - r2)) +
                             v1 * (r0 * r2) / ((r1 - r0) * (r1 - r2)) +
                             v2 * (r0 * r1) / ((r2 - r0) * (r2 - r1));

    out.converged = true;
    for (std::size_t i = 2; i < n; ++i) {
        const double prev = std::abs(out.values[i - 1] - out.values[i - 2]);
        const double cur = std::abs(out.values[i] - out.values[i - 1]);
        if (cur > prev) out.converged = false;
    }
    return out;
}

}  // namespace hardylip
