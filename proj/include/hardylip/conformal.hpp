#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hardylip/geometry.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

// Conformal map Phi: C_+ -> Omega_+ for a polygonal Lipschitz graph, in
// derivative form Phi'(z) = scale * e^{i gamma} * prod_j (z - c_j)^{gamma_j}
// with the branch arg(z - c_j) in [0, pi] on the closed upper half-plane.
// Phi itself is recovered by path integration from (base_point, base_value).
struct SchwarzChristoffelMap {
    double rotation_gamma = 0.0;
    std::vector<double> prevertices;  // c_1 < ... < c_N
    std::vector<double> exponents;    // gamma_j = (theta_left - theta_right)/pi
    Complex base_point{0.0, 1.0};
    Complex base_value{0.0, 1.0};
    double scale = 1.0;
    double lipschitz_M = 0.0;  // slope bound of the image graph

    double exponent_sum() const;
    void validate() const;
};

Complex sc_derivative(const SchwarzChristoffelMap& map, Complex z);
Complex sc_derivative2(const SchwarzChristoffelMap& map, Complex z);  // Phi''
Complex sc_derivative3(const SchwarzChristoffelMap& map, Complex z);  // Phi'''

// Phi(z) by adaptive path integration of Phi' from the base point. z may
// lie in C_+ or on the real axis (prevertices included; the integrable
// branch-point factor is absorbed by substitution on the final approach).
// A non-NaN `altitude` forces the high leg of the integration path, which
// lets callers check path independence.
Complex sc_map(const SchwarzChristoffelMap& map, Complex z,
               double altitude = std::numeric_limits<double>::quiet_NaN());

// Arc length of the image of [c_j, c_{j+1}] (0-based j).
double sc_side_length(const SchwarzChristoffelMap& map, std::size_t j);

// Straight-segment integral of Phi' between points of the closed upper
// half-plane: Phi(z1) - Phi(z0). Endpoints may be prevertices (the
// integrable branch-point factor is removed by substitution).
Complex sc_segment_integral(const SchwarzChristoffelMap& map, Complex z0, Complex z1);

struct InverseResult {
    Complex z;     // Psi(w)
    Complex dpsi;  // Psi'(w) = 1/Phi'(z)
};

// Psi(w) by Newton iteration with polyline continuation inside Omega_+.
InverseResult invert_map(const SchwarzChristoffelMap& map, Complex w,
                         std::optional<Complex> initial_guess = std::nullopt,
                         double tol = 1e-12);

// Repeated inversions with anchor reuse: each solved (w, z) pair seeds
// later solves, so sweeps along curves cost a few Newton steps per point.
// Not thread-safe; create one per sweep.
class MapInverter {
public:
    explicit MapInverter(const SchwarzChristoffelMap& map, double tol = 1e-12);
    InverseResult invert(Complex w);

private:
    const SchwarzChristoffelMap& map_;
    double tol_;
    std::vector<std::pair<Complex, Complex>> anchors_;  // (w, z)
};

struct ScSolveOptions {
    // Phi(i) = base_value; defaults to i*(a(0) + 1) for the target graph.
    std::optional<Complex> base_value;
    double side_tol = 1e-12;   // relative side-length residual target
    int max_iterations = 80;
    double collinear_tol = 1e-13;  // |exponent| below this is not a corner
};

// Solves the parameter problem for a polygonal target: exponents from the
// edge angles, prevertex gaps from damped Gauss-Newton on log side-length
// ratios, then a Moebius renormalization so that Phi(i) = base_value.
SchwarzChristoffelMap sc_solve(const LipschitzGraph& target,
                               const ScSolveOptions& options = {});

struct VertexResidual {
    double prevertex;
    Complex target;
    Complex image;
    double residual;
};

std::vector<VertexResidual> vertex_residuals(const SchwarzChristoffelMap& map,
                                             const LipschitzGraph& target,
                                             const ScSolveOptions& options = {});

struct SectorCertificate {
    std::vector<std::pair<Complex, Complex>> samples;  // (z, Phi'(z))
    double worst_ratio = 0.0;  // max |Im Phi'| / Re Phi'
    double min_re = 0.0;
    bool pass = false;
};

// Random-sample check that Phi' maps into the sector
// {x + iy : x > 0, |y| <= M x}.
SectorCertificate sector_certificate(const SchwarzChristoffelMap& map,
                                     int n_samples = 1000, unsigned seed = 12345,
                                     double tolerance = 1e-9);

struct BoundaryArgumentStep {
    double x_lo, x_hi;       // prevertex gap (infinite ends use +-inf)
    double expected;         // gamma + pi * sum_{k > j} gamma_k
    double max_deviation;    // sup over samples of |arg Phi'(x) - expected|
    bool within_theta0;      // |expected| <= arctan(M) + tol
};

std::vector<BoundaryArgumentStep> boundary_argument_steps(
    const SchwarzChristoffelMap& map, int samples_per_gap = 9, double tol = 1e-9);

struct CaratheodoryRow {
    int j;
    Complex probe;
    Complex value;
    double successive_diff;  // |Phi_j(probe) - Phi_{j-1}(probe)|; NaN on first row
    bool solved;
    std::string error;
};

// Maps of the dyadic polygonal approximations under a common normalization
// Phi_j(i) = w0 (default i*(a(0)+M+1)); reports probe values per level and
// successive differences.
std::vector<CaratheodoryRow> caratheodory_experiment(
    const LipschitzGraph& graph, const std::vector<int>& j_range,
    const std::vector<Complex>& probes,
    std::optional<Complex> w0 = std::nullopt);

}  // namespace hardylip
