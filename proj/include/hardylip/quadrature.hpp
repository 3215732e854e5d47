#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hardylip/geometry.hpp"

namespace hardylip {

// Controls for integration over the unbounded curve: a truncation window
// |u - center| <= truncation_radius plus a power-law model for what lies
// beyond (|integrand| <= K/|u-center|^k with k = tail_decay_exponent,
// K fitted from samples just outside the window).
struct QuadratureSpec {
    double truncation_radius = 1e6;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    int max_panels = 4000;
    double tail_decay_exponent = 2.0;

    void validate() const;

    // Window wide enough that the modeled tail stays below `budget`,
    // given a coefficient estimate for the decay model.
    static double radius_for_tail(double coefficient, double k, double budget);
};

struct IntegralResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    double tail_estimate = 0.0;
    int panels_used = 0;
    bool converged = false;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, IntegralResult partial)
        : Error(Kind::Convergence, msg), partial_(partial) {}
    const IntegralResult& partial() const noexcept { return partial_; }

private:
    IntegralResult partial_;
};

using CurveFunction = std::function<Complex(Complex)>;

enum class CurveMeasure { ComplexDz, ArcLength };

// Adaptive Gauss-Kronrod integration of integrand(zeta) over the curve,
// with d zeta (default) or arc-length weight. Breakpoints are always panel
// boundaries; extra split points may be supplied (peaks the caller knows
// about). Throws ConvergenceError when the panel budget runs out while the
// in-window error is still above tolerance.
IntegralResult integrate_curve(const LipschitzGraph& graph, const CurveFunction& integrand,
                               const QuadratureSpec& spec, double center_u = 0.0,
                               CurveMeasure measure = CurveMeasure::ComplexDz,
                               const std::vector<double>& extra_points = {});

// (1/(2 pi i)) Int_Gamma f(zeta)/(zeta - w) d zeta. Requires w off the
// curve: classify(w, tol) must not be Boundary.
Complex cauchy_integral(const LipschitzGraph& graph, const CurveFunction& boundary_fn,
                        Complex w, const QuadratureSpec& spec,
                        double boundary_tol = 1e-12);

// Int_Gamma K_z(zeta, zeta0) f(zeta) d zeta. Requires zeta0 + z in Omega+
// and zeta0 - z in Omega-; with f == 1 this is the kernel mass (= 1).
Complex k_transform(const LipschitzGraph& graph, const CurveFunction& boundary_fn,
                    Complex zeta0, Complex z, const QuadratureSpec& spec);

struct HardyNormEstimate {
    std::vector<double> per_tau;  // m(F, tau) = (Int_{Gamma_tau} |F|^p ds)^(1/p)
    double sup_estimate = 0.0;    // grid max; a lower estimate of the true sup
};

// Shifted-curve norms m(F, tau) for each tau in the grid. F is evaluated
// at zeta(u) + i tau.
HardyNormEstimate hardy_norm(const LipschitzGraph& graph, const CurveFunction& F,
                             double p, const std::vector<double>& tau_grid,
                             const QuadratureSpec& spec);

struct LimitProbe {
    std::vector<Complex> values;
    Complex extrapolated_limit{0.0, 0.0};
    bool converged = false;
};

// Values of F along a ray into the domain from the cone vertex, with
// polynomial extrapolation of the last three values to radius zero.
// direction_theta defaults to the cone bisector (NaN selects the default).
LimitProbe nontangential_limit_probe(const LipschitzGraph& graph, const CurveFunction& F,
                                     const NTCone& cone, const std::vector<double>& radii,
                                     double direction_theta =
                                         std::numeric_limits<double>::quiet_NaN());

// Low-level adaptive engine over a real interval; exposed for reuse by the
// conformal module and tests. Boundaries must be sorted and >= 2 entries.
IntegralResult adaptive_segments(const std::function<Complex(double)>& g,
                                 const std::vector<double>& boundaries,
                                 double rel_tol, double abs_tol, int max_panels);

// integrate_curve with the window grown (up to 1e9) until the modeled tail
// fits the budget.
IntegralResult integrate_curve_auto(const LipschitzGraph& graph,
                                    const CurveFunction& integrand,
                                    QuadratureSpec spec, double center_u,
                                    CurveMeasure measure, std::vector<double> extra_points,
                                    double tail_budget);

}  // namespace hardylip
