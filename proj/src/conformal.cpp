#include "hardylip/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hardylip {

namespace {

constexpr double kPathRelTol = 1e-12;
constexpr double kPathAbsTol = 1e-14;
constexpr int kPathPanels = 600;

Complex phi_prime_raw(const SchwarzChristoffelMap& map, Complex z) {
    Complex log_sum(0.0, map.rotation_gamma);
    for (std::size_t j = 0; j < map.prevertices.size(); ++j) {
        Complex d = z - map.prevertices[j];
        if (d.imag() == 0.0) d = Complex(d.real(), +0.0);  // keep arg in [0, pi]
        log_sum += map.exponents[j] * std::log(d);
    }
    return map.scale * std::exp(log_sum);
}

// Phi' at c_pivot + offset with the singular factor taken from the exact
// offset; avoids the absorption c + offset == c for offsets below one ulp.
Complex phi_prime_offset(const SchwarzChristoffelMap& map, std::size_t pivot,
                         Complex offset) {
    Complex log_sum(0.0, map.rotation_gamma);
    for (std::size_t j = 0; j < map.prevertices.size(); ++j) {
        Complex d = j == pivot
                        ? offset
                        : Complex(map.prevertices[pivot] - map.prevertices[j], 0.0) +
                              offset;
        if (d.imag() == 0.0) d = Complex(d.real(), +0.0);
        log_sum += map.exponents[j] * std::log(d);
    }
    return map.scale * std::exp(log_sum);
}

double min_prevertex_gap(const SchwarzChristoffelMap& map) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < map.prevertices.size(); ++j)
        g = std::min(g, map.prevertices[j + 1] - map.prevertices[j]);
    return g;
}

std::optional<std::size_t> prevertex_near(const SchwarzChristoffelMap& map, Complex z,
                                          double tol) {
    for (std::size_t j = 0; j < map.prevertices.size(); ++j) {
        const double c = map.prevertices[j];
        if (std::abs(z - c) <= tol * (1.0 + std::abs(c))) return j;
    }
    return std::nullopt;
}

// Straight-segment integral of Phi' (or |Phi'| with `absolute`). Endpoints
// may coincide with prevertices; the branch-point factor is removed by the
// substitution rho = s^(1/(1+gamma)) on the approach.
Complex leg_integral(const SchwarzChristoffelMap& map, Complex z0, Complex z1,
                     bool absolute = false) {
    if (z0 == z1) return {0.0, 0.0};

    auto pv0 = prevertex_near(map, z0, 1e-14);
    auto pv1 = prevertex_near(map, z1, 1e-14);
    if (pv0 && pv1) {
        // both ends inside the same guard ball: the sliver carries
        // O(|z1-z0|^(1+gamma)) mass, below every tolerance in use
        if (*pv0 == *pv1) return {0.0, 0.0};
        const Complex mid = 0.5 * (z0 + z1);
        return leg_integral(map, z0, mid, absolute) + leg_integral(map, mid, z1, absolute);
    }
    if (pv0) {
        // integrate away from the corner; arc length is orientation-free
        const Complex v = leg_integral(map, z1, z0, absolute);
        return absolute ? v : -v;
    }

    auto eval = [&](Complex t) -> Complex {
        const Complex v = phi_prime_raw(map, t);
        return absolute ? Complex(std::abs(v), 0.0) : v;
    };

    if (pv1) {
        const std::size_t pivot = *pv1;
        const double c = map.prevertices[pivot];
        const double g = map.exponents[pivot];
        const Complex dir = z0 - Complex(c, 0.0);
        const double P = std::abs(dir);
        const Complex e = dir / P;
        const double q = 1.0 / (1.0 + g);
        const double s_max = std::pow(P, 1.0 + g);
        auto sub = [&](double s) -> Complex {
            const double rho = std::pow(s, q);
            const Complex v = phi_prime_offset(map, pivot, rho * e);
            const Complex vv = absolute ? Complex(std::abs(v), 0.0) : v;
            return vv * q * std::pow(s, q - 1.0);
        };
        std::vector<double> bounds;
        bounds.push_back(0.0);
        for (int m = 24; m >= 1; --m) bounds.push_back(s_max * std::ldexp(1.0, -m));
        bounds.push_back(s_max);
        IntegralResult r =
            adaptive_segments(sub, bounds, kPathRelTol, kPathAbsTol, kPathPanels);
        if (absolute) return Complex(r.value.real(), 0.0);
        return -e * r.value;  // Int_{z0}^{c} = -e * Int_0^P Phi'(c + rho e) d rho
    }

    const Complex d = z1 - z0;
    auto g = [&](double t) { return eval(z0 + t * d) * d; };
    std::vector<double> bounds{0.0};
    const double len = std::abs(d);
    const double clearance = std::min(z0.imag(), z1.imag());
    const bool near_axis = clearance < 0.1 * (len + 1.0);
    if (near_axis) {
        for (int m = 20; m >= 2; --m) bounds.push_back(std::ldexp(1.0, -m));
    }
    bounds.push_back(0.5);
    if (near_axis) {
        for (int m = 2; m <= 20; ++m) bounds.push_back(1.0 - std::ldexp(1.0, -m));
    }
    bounds.push_back(1.0);
    IntegralResult r = adaptive_segments(g, bounds, kPathRelTol, kPathAbsTol, kPathPanels);
    return absolute ? Complex(std::abs(r.value), 0.0) : r.value;
}

}  // namespace

double SchwarzChristoffelMap::exponent_sum() const {
    double s = 0.0;
    for (double g : exponents) s += g;
    return s;
}

void SchwarzChristoffelMap::validate() const {
    if (prevertices.size() != exponents.size())
        throw Error(Error::Kind::Input, "sc map: prevertex/exponent size mismatch");
    if (prevertices.empty())
        throw Error(Error::Kind::Input, "sc map: needs at least one prevertex");
    for (std::size_t j = 0; j + 1 < prevertices.size(); ++j)
        if (!(prevertices[j] < prevertices[j + 1]))
            throw Error(Error::Kind::Input, "sc map: prevertices not increasing");
    if (!(scale > 0.0)) throw Error(Error::Kind::Input, "sc map: scale must be > 0");
    if (!(base_point.imag() > 0.0))
        throw Error(Error::Kind::Input, "sc map: base point must lie in C_+");
    const double theta0 = std::atan(lipschitz_M);
    const double slack = 1e-9;
    double arg = rotation_gamma;  // right of c_N
    if (std::abs(arg) > theta0 + slack)
        throw Error(Error::Kind::Input, "sc map: boundary argument outside [-theta0, theta0]");
    for (std::size_t j = prevertices.size(); j-- > 0;) {
        arg += M_PI * exponents[j];
        if (std::abs(arg) > theta0 + slack)
            throw Error(Error::Kind::Input,
                        "sc map: boundary argument outside [-theta0, theta0]");
    }
}

Complex sc_derivative(const SchwarzChristoffelMap& map, Complex z) {
    if (z.imag() < 0.0)
        throw Error(Error::Kind::Input, "sc_derivative: z below the real axis");
    if (prevertex_near(map, z, 1e-13))
        throw Error(Error::Kind::BranchPoint, "sc_derivative: z is a prevertex");
    return phi_prime_raw(map, z);
}

Complex sc_derivative2(const SchwarzChristoffelMap& map, Complex z) {
    Complex s1(0.0, 0.0);
    for (std::size_t j = 0; j < map.prevertices.size(); ++j)
        s1 += map.exponents[j] / (z - map.prevertices[j]);
    return sc_derivative(map, z) * s1;
}

Complex sc_derivative3(const SchwarzChristoffelMap& map, Complex z) {
    Complex s1(0.0, 0.0), s2(0.0, 0.0);
    for (std::size_t j = 0; j < map.prevertices.size(); ++j) {
        const Complex d = z - map.prevertices[j];
        s1 += map.exponents[j] / d;
        s2 += map.exponents[j] / (d * d);
    }
    return sc_derivative(map, z) * (s1 * s1 - s2);
}

Complex sc_map(const SchwarzChristoffelMap& map, Complex z, double altitude) {
    if (z.imag() < 0.0)
        throw Error(Error::Kind::Input, "sc_map: z below the real axis");
    if (z == map.base_point) return map.base_value;

    double H = std::isnan(altitude) ? 1.0 : altitude;
    H = std::max({H, map.base_point.imag(), z.imag()});
    const Complex top0(map.base_point.real(), H);
    const Complex top1(z.real(), H);

    Complex value = map.base_value;
    value += leg_integral(map, map.base_point, top0);
    value += leg_integral(map, top0, top1);
    value += leg_integral(map, top1, z);
    return value;
}

double sc_side_length(const SchwarzChristoffelMap& map, std::size_t j) {
    if (j + 1 >= map.prevertices.size())
        throw Error(Error::Kind::Input, "sc_side_length: side index out of range");
    const Complex a(map.prevertices[j], 0.0);
    const Complex b(map.prevertices[j + 1], 0.0);
    return leg_integral(map, a, b, /*absolute=*/true).real();
}

Complex sc_segment_integral(const SchwarzChristoffelMap& map, Complex z0, Complex z1) {
    if (z0.imag() < 0.0 || z1.imag() < 0.0)
        throw Error(Error::Kind::Input, "sc_segment_integral: endpoint below the real axis");
    return leg_integral(map, z0, z1);
}

namespace {

double graph_max_height(const LipschitzGraph& graph, double u_lo, double u_hi) {
    double m = std::max(graph.a(u_lo), graph.a(u_hi));
    for (const auto& [u, a] : graph.breakpoints)
        if (u >= u_lo && u <= u_hi) m = std::max(m, a);
    return m;
}

// One Newton solve from a known (z, Phi(z)) anchor; Phi is tracked
// incrementally along the iterate path.
struct NewtonState {
    Complex z;
    Complex phi;
};

bool newton_from(const SchwarzChristoffelMap& map, Complex w, NewtonState& st,
                 double tol, int max_iter = 40) {
    for (int it = 0; it < max_iter; ++it) {
        const Complex f = st.phi - w;
        if (std::abs(f) <= tol * (1.0 + std::abs(w))) return true;
        if (prevertex_near(map, st.z, 1e-13)) return false;
        const Complex dphi = phi_prime_raw(map, st.z);
        if (!(std::abs(dphi) > 0.0)) return false;
        Complex step = -f / dphi;
        // stay inside C_+
        double damping = 1.0;
        while (damping > 1e-6 && (st.z + damping * step).imag() <= 0.0) damping *= 0.5;
        if (damping <= 1e-6) return false;
        const Complex z_next = st.z + damping * step;
        const Complex phi_next = st.phi + leg_integral(map, st.z, z_next);
        st.z = z_next;
        st.phi = phi_next;
    }
    return false;
}

}  // namespace

MapInverter::MapInverter(const SchwarzChristoffelMap& map, double tol)
    : map_(map), tol_(tol) {}

InverseResult MapInverter::invert(Complex w) {
    NewtonState st;
    if (anchors_.empty()) {
        st = {map_.base_point, map_.base_value};
        anchors_.emplace_back(map_.base_value, map_.base_point);
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < anchors_.size(); ++i)
            if (std::abs(anchors_[i].first - w) < std::abs(anchors_[best].first - w))
                best = i;
        st = {anchors_[best].second, anchors_[best].first};
    }

    NewtonState direct = st;
    if (newton_from(map_, w, direct, tol_)) {
        if (anchors_.size() < 96) anchors_.emplace_back(w, direct.z);
        return {direct.z, 1.0 / phi_prime_raw(map_, direct.z)};
    }

    // Polyline continuation inside Omega_+: up from the anchor image, across
    // above the curve, then down to w. Each waypoint is solved by Newton
    // from the previous solution; failures shrink the step.
    const Complex w_start = st.phi;
    std::vector<Complex> path;
    {
        // Crest altitude: both endpoints sit above the curve, so lifting by
        // M * span + margin keeps the horizontal leg inside Omega_+.
        const double span = std::abs(w_start.real() - w.real());
        const double crest = std::max(w_start.imag(), w.imag()) +
                             map_.lipschitz_M * span + 2.0;
        path.push_back(Complex(w_start.real(), crest));
        path.push_back(Complex(w.real(), crest));
        path.push_back(w);
    }
    for (Complex target : path) {
        Complex from = st.phi;
        double t = 1.0;
        double done = 0.0;
        int guard = 0;
        while (done < 1.0) {
            if (++guard > 400)
                throw Error(Error::Kind::Inversion, "invert_map: continuation stalled");
            const double next = std::min(1.0, done + t);
            const Complex w_mid = from + next * (target - from);
            NewtonState trial = st;
            if (newton_from(map_, w_mid, trial, tol_)) {
                st = trial;
                done = next;
                t = std::min(1.0, 2.0 * t);
            } else {
                t *= 0.5;
                if (t < 1e-8)
                    throw Error(Error::Kind::Inversion, "invert_map: Newton failed to track");
            }
        }
    }
    if (std::abs(st.phi - w) > 1e3 * tol_ * (1.0 + std::abs(w)))
        throw Error(Error::Kind::Inversion, "invert_map: residual above tolerance");
    if (anchors_.size() < 96) anchors_.emplace_back(w, st.z);
    return {st.z, 1.0 / phi_prime_raw(map_, st.z)};
}

InverseResult invert_map(const SchwarzChristoffelMap& map, Complex w,
                         std::optional<Complex> initial_guess, double tol) {
    if (initial_guess) {
        NewtonState st{*initial_guess, sc_map(map, *initial_guess)};
        if (newton_from(map, w, st, tol))
            return {st.z, 1.0 / phi_prime_raw(map, st.z)};
    }
    MapInverter inv(map, tol);
    return inv.invert(w);
}

namespace {

struct CornerData {
    std::vector<Complex> vertices;   // kept corners
    std::vector<double> exponents;   // matching gamma_j
    double gamma;                    // right-tail direction angle
};

CornerData extract_corners(const LipschitzGraph& target, double collinear_tol) {
    target.validate();
    const auto& bp = target.breakpoints;
    const std::size_t n = bp.size();
    std::vector<double> theta(n + 1);
    theta[0] = std::atan(target.tail_slope_left);
    for (std::size_t k = 0; k + 1 < n; ++k)
        theta[k + 1] = std::atan((bp[k + 1].second - bp[k].second) /
                                 (bp[k + 1].first - bp[k].first));
    theta[n] = std::atan(target.tail_slope_right);

    CornerData out;
    out.gamma = theta[n];
    for (std::size_t k = 0; k < n; ++k) {
        const double g = (theta[k] - theta[k + 1]) / M_PI;
        if (std::abs(g) > collinear_tol) {
            out.vertices.emplace_back(bp[k].first, bp[k].second);
            out.exponents.push_back(g);
        }
    }
    if (out.vertices.empty()) {
        // straight line: keep one marker vertex with zero exponent
        out.vertices.emplace_back(bp.front().first, bp.front().second);
        out.exponents.push_back(0.0);
    }
    return out;
}

// Map with prevertices from pinned gaps, scale 1, anchored in nothing yet.
SchwarzChristoffelMap shape_map(const CornerData& corners, const std::vector<double>& gaps,
                                double lipschitz_M) {
    SchwarzChristoffelMap m;
    m.rotation_gamma = corners.gamma;
    m.exponents = corners.exponents;
    m.lipschitz_M = lipschitz_M;
    m.scale = 1.0;
    m.prevertices.resize(corners.vertices.size());
    m.prevertices[0] = 0.0;
    for (std::size_t j = 0; j + 1 < m.prevertices.size(); ++j)
        m.prevertices[j + 1] = m.prevertices[j] + gaps[j];
    m.base_point = Complex(0.0, 1.0);
    m.base_value = Complex(0.0, 1.0);  // provisional
    return m;
}

void solve_dense(std::vector<std::vector<double>>& A, std::vector<double>& b) {
    const std::size_t n = A.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        if (std::abs(A[k][k]) < 1e-300)
            throw SolverError("sc_solve: singular normal equations", b);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) b[k] -= A[k][j] * b[j];
        b[k] /= A[k][k];
    }
}

}  // namespace

SchwarzChristoffelMap sc_solve(const LipschitzGraph& target, const ScSolveOptions& options) {
    const CornerData corners = extract_corners(target, options.collinear_tol);
    const std::size_t N = corners.vertices.size();
    const double M = target.lipschitz_M;

    std::vector<double> lengths(N >= 1 ? N - 1 : 0);
    for (std::size_t j = 0; j + 1 < N; ++j)
        lengths[j] = std::abs(corners.vertices[j + 1] - corners.vertices[j]);

    // Phase 1: shape. Gap 1 is pinned to 1; remaining log-gaps solved so
    // side-length ratios match the target.
    std::vector<double> gaps(N >= 1 ? N - 1 : 0, 1.0);
    if (N >= 3) {
        const std::size_t nvar = N - 2;
        std::vector<double> x(nvar, 0.0);  // log gaps 2..N-1

        auto residuals = [&](const std::vector<double>& xv) {
            std::vector<double> g(N - 1, 1.0);
            for (std::size_t i = 0; i < nvar; ++i) g[i + 1] = std::exp(xv[i]);
            SchwarzChristoffelMap m = shape_map(corners, g, M);
            if (min_prevertex_gap(m) < 1e-12)
                throw Error(Error::Kind::Crowding, "sc_solve: prevertices crowded");
            std::vector<double> r(nvar);
            const double s1 = sc_side_length(m, 0);
            for (std::size_t i = 0; i < nvar; ++i) {
                const double si = sc_side_length(m, i + 1);
                r[i] = std::log(si / s1) - std::log(lengths[i + 1] / lengths[0]);
            }
            return r;
        };

        std::vector<double> r = residuals(x);
        auto norm2 = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double e : v) s += e * e;
            return s;
        };
        double fx = norm2(r);
        bool done = false;
        for (int iter = 0; iter < options.max_iterations && !done; ++iter) {
            double rmax = 0.0;
            for (double e : r) rmax = std::max(rmax, std::abs(e));
            if (rmax <= options.side_tol) { done = true; break; }

            const double h = 1e-6;
            std::vector<std::vector<double>> J(nvar, std::vector<double>(nvar));
            for (std::size_t j = 0; j < nvar; ++j) {
                std::vector<double> xp = x;
                xp[j] += h;
                const std::vector<double> rp = residuals(xp);
                for (std::size_t i = 0; i < nvar; ++i) J[i][j] = (rp[i] - r[i]) / h;
            }
            // normal equations J^T J d = -J^T r
            std::vector<std::vector<double>> A(nvar, std::vector<double>(nvar, 0.0));
            std::vector<double> b(nvar, 0.0);
            for (std::size_t i = 0; i < nvar; ++i)
                for (std::size_t j = 0; j < nvar; ++j) {
                    for (std::size_t k = 0; k < nvar; ++k) A[i][j] += J[k][i] * J[k][j];
                }
            for (std::size_t i = 0; i < nvar; ++i) {
                for (std::size_t k = 0; k < nvar; ++k) b[i] -= J[k][i] * r[k];
                A[i][i] *= 1.0 + 1e-12;
            }
            solve_dense(A, b);

            double step = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 24; ++ls) {
                std::vector<double> xt = x;
                for (std::size_t i = 0; i < nvar; ++i) xt[i] += step * b[i];
                try {
                    std::vector<double> rt = residuals(xt);
                    if (norm2(rt) < fx) {
                        x = xt;
                        r = rt;
                        fx = norm2(rt);
                        accepted = true;
                        break;
                    }
                } catch (const Error&) {
                    // crowded trial step; shrink
                }
                step *= 0.5;
            }
            if (!accepted)
                throw SolverError("sc_solve: line search failed", r);
        }
        if (!done) {
            double rmax = 0.0;
            for (double e : r) rmax = std::max(rmax, std::abs(e));
            if (rmax > options.side_tol)
                throw SolverError("sc_solve: did not reach side tolerance", r);
        }
        for (std::size_t i = 0; i < nvar; ++i) gaps[i + 1] = std::exp(x[i]);
    }

    SchwarzChristoffelMap map = shape_map(corners, gaps, M);
    if (min_prevertex_gap(map) < 1e-12)
        throw Error(Error::Kind::Crowding, "sc_solve: prevertices crowded");

    // Scale and anchor: match the first finite side (if any), pin the first
    // vertex image.
    if (N >= 2) {
        const double s1 = sc_side_length(map, 0);
        map.scale = lengths[0] / s1;
    }
    // Provisional base: Phi(c_1 + i), anchored by the first vertex image.
    map.base_point = Complex(map.prevertices[0], 1.0);
    map.base_value = corners.vertices[0] +
                     leg_integral(map, Complex(map.prevertices[0], 0.0), map.base_point);

    // Phase 2: Moebius renormalization so Phi(i) = w0.
    const double a0 = target.a(0.0);
    const Complex w0 = options.base_value.value_or(Complex(0.0, a0 + 1.0));
    if (classify(target, w0) != RegionTag::UpperDomain)
        throw Error(Error::Kind::Input, "sc_solve: base value not inside the domain");
    MapInverter inv(map);
    const InverseResult zs = inv.invert(w0);
    const double a = zs.z.imag();
    const double b = zs.z.real();
    if (!(a > 0.0))
        throw Error(Error::Kind::Inversion, "sc_solve: renormalization left C_+");
    for (double& c : map.prevertices) c = (c - b) / a;
    map.scale *= std::pow(a, 1.0 + map.exponent_sum());
    map.base_point = Complex(0.0, 1.0);
    map.base_value = w0;

    map.validate();
    return map;
}

std::vector<VertexResidual> vertex_residuals(const SchwarzChristoffelMap& map,
                                             const LipschitzGraph& target,
                                             const ScSolveOptions& options) {
    const CornerData corners = extract_corners(target, options.collinear_tol);
    std::vector<VertexResidual> out;
    if (corners.vertices.size() != map.prevertices.size()) return out;
    for (std::size_t j = 0; j < corners.vertices.size(); ++j) {
        VertexResidual vr;
        vr.prevertex = map.prevertices[j];
        vr.target = corners.vertices[j];
        vr.image = sc_map(map, Complex(vr.prevertex, 0.0));
        vr.residual = std::abs(vr.image - vr.target);
        out.push_back(vr);
    }
    return out;
}

SectorCertificate sector_certificate(const SchwarzChristoffelMap& map, int n_samples,
                                     unsigned seed, double tolerance) {
    std::mt19937 rng(seed);
    const double lo = map.prevertices.front();
    const double hi = map.prevertices.back();
    const double span = std::max(hi - lo, 1.0);
    std::uniform_real_distribution<double> ux(lo - 4.0 * span, hi + 4.0 * span);
    std::uniform_real_distribution<double> uy(0.0, 1.0);

    SectorCertificate cert;
    cert.min_re = std::numeric_limits<double>::infinity();
    cert.samples.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double y = 8.0 * span * std::pow(uy(rng), 3) + 1e-6;
        const Complex z(ux(rng), y);
        const Complex d = sc_derivative(map, z);
        cert.samples.emplace_back(z, d);
        cert.min_re = std::min(cert.min_re, d.real());
        if (d.real() > 0.0)
            cert.worst_ratio = std::max(cert.worst_ratio, std::abs(d.imag()) / d.real());
        else
            cert.worst_ratio = std::numeric_limits<double>::infinity();
    }
    cert.pass = cert.min_re > 0.0 &&
                cert.worst_ratio <= map.lipschitz_M * (1.0 + tolerance) + tolerance;
    return cert;
}

std::vector<BoundaryArgumentStep> boundary_argument_steps(const SchwarzChristoffelMap& map,
                                                          int samples_per_gap, double tol) {
    const std::size_t N = map.prevertices.size();
    const double theta0 = std::atan(map.lipschitz_M);
    std::vector<double> expected(N + 1);
    expected[N] = map.rotation_gamma;
    for (std::size_t j = N; j-- > 0;)
        expected[j] = expected[j + 1] + M_PI * map.exponents[j];

    auto wrap = [](double d) {
        while (d <= -M_PI) d += 2 * M_PI;
        while (d > M_PI) d -= 2 * M_PI;
        return d;
    };

    std::vector<BoundaryArgumentStep> out;
    for (std::size_t gap = 0; gap <= N; ++gap) {
        BoundaryArgumentStep st;
        st.x_lo = gap == 0 ? -std::numeric_limits<double>::infinity()
                           : map.prevertices[gap - 1];
        st.x_hi = gap == N ? std::numeric_limits<double>::infinity()
                           : map.prevertices[gap];
        st.expected = expected[gap];
        st.within_theta0 = std::abs(st.expected) <= theta0 + tol;
        st.max_deviation = 0.0;
        for (int i = 0; i < samples_per_gap; ++i) {
            double x;
            const double t = (i + 1.0) / (samples_per_gap + 1.0);
            if (gap == 0)
                x = map.prevertices.front() - std::pow(4.0, 1.0 + 6.0 * t) / 4.0;
            else if (gap == N)
                x = map.prevertices.back() + std::pow(4.0, 1.0 + 6.0 * t) / 4.0;
            else
                x = st.x_lo + t * (st.x_hi - st.x_lo);
            const Complex d = phi_prime_raw(map, Complex(x, 0.0));
            st.max_deviation =
                std::max(st.max_deviation, std::abs(wrap(std::arg(d) - st.expected)));
        }
        out.push_back(st);
    }
    return out;
}

std::vector<CaratheodoryRow> caratheodory_experiment(const LipschitzGraph& graph,
                                                     const std::vector<int>& j_range,
                                                     const std::vector<Complex>& probes,
                                                     std::optional<Complex> w0_opt) {
    const Complex w0 = w0_opt.value_or(
        Complex(0.0, graph.a(0.0) + graph.lipschitz_M + 1.0));

    std::vector<CaratheodoryRow> rows;
    std::vector<Complex> prev(probes.size(),
                              Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    bool have_prev = false;
    for (int j : j_range) {
        bool solved = true;
        std::string err;
        SchwarzChristoffelMap map;
        try {
            const LipschitzGraph gj = polygonal_approximation(graph, j);
            ScSolveOptions opt;
            opt.base_value = w0;
            map = sc_solve(gj, opt);
        } catch (const std::exception& e) {
            solved = false;
            err = e.what();
        }
        std::vector<Complex> cur(probes.size());
        for (std::size_t p = 0; p < probes.size(); ++p) {
            CaratheodoryRow row;
            row.j = j;
            row.probe = probes[p];
            row.solved = solved;
            row.error = err;
            if (solved) {
                cur[p] = sc_map(map, probes[p]);
                row.value = cur[p];
                row.successive_diff = have_prev ? std::abs(cur[p] - prev[p])
                                               : std::numeric_limits<double>::quiet_NaN();
            } else {
                row.value = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
                row.successive_diff = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
        if (solved) {
            prev = cur;
            have_prev = true;
        }
    }
    return rows;
}

}  // namespace hardylip
