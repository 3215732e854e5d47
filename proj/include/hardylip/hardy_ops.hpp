#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hardylip/certificates.hpp"
#include "hardylip/conformal.hpp"
#include "hardylip/geometry.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

struct RationalTerm {
    Complex pole;
    int order = 1;
    Complex coefficient{1.0, 0.0};
};

// Sum of c/(w - alpha)^k terms; vanishes at infinity by construction.
struct RationalFunction {
    std::vector<RationalTerm> terms;

    Complex operator()(Complex w) const;
    static RationalFunction simple_pole(Complex alpha, Complex c = {1.0, 0.0});
};

// Evaluatable holomorphic function handle: a rational function, a pullback
// of another handle under Phi or Psi with the (.)^(1/p) weight, or the
// Cauchy extension of boundary data.
class HardyFunction {
public:
    static HardyFunction rational(RationalFunction F);
    // TF(z) = inner(Phi(z)) * (Phi'(z))^(1/p), defined on C_+.
    static HardyFunction pullback_to_half_plane(SchwarzChristoffelMap map,
                                                HardyFunction inner, double p);
    // T^{-1}f(w) = inner(Psi(w)) * (Psi'(w))^(1/p), defined on Omega_+.
    static HardyFunction pullback_to_domain(SchwarzChristoffelMap map,
                                            HardyFunction inner, double p);
    static HardyFunction cauchy_extension(LipschitzGraph graph, CurveFunction data,
                                          QuadratureSpec spec);
    static HardyFunction from_function(std::function<Complex(Complex)> f);

    Complex operator()(Complex w) const { return eval_(w); }
    const RationalFunction* as_rational() const { return rational_ ? &*rational_ : nullptr; }

private:
    HardyFunction() = default;
    std::function<Complex(Complex)> eval_;
    std::optional<RationalFunction> rational_;
};

struct PoleMembership {
    Complex pole;
    int order;
    double vertical_distance;  // d = |alpha_2 - a(alpha_1)|
    RegionTag region;
    double norm_bound;  // |c| * B(d, k p)^(1/p); +inf when M = 0
};

struct MembershipCertificate {
    bool member = false;            // all poles strictly below the curve
    double measured_norm_sup = 0.0; // grid sup of the Gamma_tau norms
    double norm_bound = 0.0;        // Minkowski sum of per-term bounds
    bool bound_degenerate = false;  // M = 0: the closed-form bound blows up
    bool pass = false;
    std::vector<PoleMembership> poles;
};

// Closed-form bound for Int_{Gamma_tau} |w - alpha|^(-P) |dw| with
// d the vertical gap below the curve: d^(1-P) M^(-1) (2(1+M^2)^(P/2) + 2 M^P/(P-1)).
double rational_power_bound(double d, double P, double lipschitz_M);

MembershipCertificate rational_in_hp(const LipschitzGraph& graph,
                                     const RationalFunction& F, double p,
                                     const std::vector<double>& tau_grid = {},
                                     const QuadratureSpec& spec = {});

// TF(z) = F(Phi(z)) (Phi'(z))^(1/p), principal power branch (safe: Phi'
// takes values in the sector with positive real part).
Complex apply_T(const SchwarzChristoffelMap& map, const HardyFunction& F, double p,
                Complex z);

// T^{-1}f(w) = f(Psi(w)) (Psi'(w))^(1/p).
Complex apply_T_inverse(const SchwarzChristoffelMap& map, const HardyFunction& f,
                        double p, Complex w);

// Int_Gamma F(zeta) G(zeta) d zeta; zero for dual-exponent Hardy pairs.
// Rational handles have their poles membership-checked first.
Complex pairing_orthogonality(const LipschitzGraph& graph, const HardyFunction& F,
                              double p, const HardyFunction& G, double q,
                              const QuadratureSpec& spec);

// Int_Gamma F(zeta)/(zeta - alpha) d zeta: the annihilation functional.
Complex annihilation_value(const LipschitzGraph& graph, const HardyFunction& F,
                           Complex alpha, const QuadratureSpec& spec);

// h(z) = (Psi'(w0))^(1/p)/(z - Psi(w0)) - (Phi'(z))^(1/q)/(Phi(z) - w0),
// w0 = Phi(z0); removable at z0 with value
// (1/2)(1/p - 1/q) Phi''(z0) / (Phi'(z0))^(1 + 1/p).
// Inside switch_radius a first-order series at z0 is used.
Complex aux_h_function(const SchwarzChristoffelMap& map, Complex z0, double p,
                       Complex z, double switch_radius = 1e-4);
Complex aux_h_limit(const SchwarzChristoffelMap& map, Complex z0, double p);

// H(w) = (Psi'(w0))^(-1/p)/(w - w0) - (Psi'(w))^(1/q)/(Psi(w) - Psi(w0)),
// removable at w0 with value (1/2 - 1/q) Psi''(w0) / (Psi'(w0))^(1 + 1/p).
Complex aux_H_function(const SchwarzChristoffelMap& map, Complex w0, double p,
                       Complex w, double switch_radius = 1e-4);
Complex aux_H_limit(const SchwarzChristoffelMap& map, Complex w0, double p);

// (a) exterior-pole half-plane bound: for alpha outside the closed domain,
// g(z) = (Phi'(z))^(1/q)/(Phi(z) - alpha) satisfies
// Int_R |g(t+iy)|^q dt <= 2^(q+1) sqrt(1+M^2) / ((q-1) eps^(q-1)).
Certificate exterior_pole_hq_certificate(const LipschitzGraph& graph,
                                         const SchwarzChristoffelMap& map,
                                         Complex alpha, double q, double y);

// (b) pointwise growth: |F(zeta + i tau)| <= (2(1+M^2)/pi)^(1/p) ||F|| tau^(-1/p).
Certificate growth_certificate(const LipschitzGraph& graph, const HardyFunction& F,
                               double p, double tau, double hardy_norm_estimate);

// (c) domain-side bound for G(w) = (Psi'(w))^(1/q)/(Psi(w) - alpha) with
// alpha outside the closed upper half-plane.
Certificate domain_pole_hq_certificate(const LipschitzGraph& graph,
                                       const SchwarzChristoffelMap& map,
                                       Complex alpha, double q, double tau);

struct NormIdentityResult {
    double half_plane_side = 0.0;  // Int |TF(x)|^p dx over [-X, X]
    double domain_side = 0.0;      // Int |F|^p |d zeta| over the image window
    double rel_diff = 0.0;
    double window = 0.0;
};

// Boundary-norm identity behind ||T|| <= 1: both sides evaluated by
// independent quadratures over windows matched under the map (x in [-X, X]
// against the curve between Phi(-X) and Phi(X)), so the truncation is
// identical on both sides.
NormIdentityResult boundary_norm_identity(const LipschitzGraph& graph,
                                          const SchwarzChristoffelMap& map,
                                          const HardyFunction& F, double p,
                                          double window_X = 30.0);

}  // namespace hardylip
