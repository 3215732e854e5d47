#include <doctest.h>

#include <cmath>
#include <random>

#include "hardylip/conformal.hpp"
#include "hardylip/json_io.hpp"

using namespace hardylip;
using C = Complex;

namespace {

// closed form for the wedge a(u) = |u|: Phi(z) = e^{i pi/4} sqrt(z)
C wedge_closed_form(C z) { return std::polar(1.0, M_PI / 4) * std::sqrt(z); }

SchwarzChristoffelMap wedge_map() {
    SchwarzChristoffelMap m;
    m.rotation_gamma = M_PI / 4;
    m.prevertices = {0.0};
    m.exponents = {-0.5};
    m.scale = 0.5;
    m.base_point = C(0, 1);
    m.base_value = C(0, 1);
    m.lipschitz_M = 1.0;
    return m;
}

SchwarzChristoffelMap identity_map() {
    SchwarzChristoffelMap m;
    m.rotation_gamma = 0.0;
    m.prevertices = {0.0};
    m.exponents = {0.0};
    m.scale = 1.0;
    m.base_point = C(0, 1);
    m.base_value = C(0, 1);
    m.lipschitz_M = 0.0;
    return m;
}

}  // namespace

TEST_CASE("sc_derivative closed forms") {
    const auto wm = wedge_map();
    CHECK(std::abs(sc_derivative(wm, C(0, 1)) - 0.5) <= 1e-15);

    const auto im = identity_map();
    for (C z : {C(0, 1), C(2, 0.5), C(-3, 2)})
        CHECK(std::abs(sc_derivative(im, z) - 1.0) <= 1e-15);

    CHECK_THROWS_AS(sc_derivative(wm, C(0, 0)), Error);
    CHECK_THROWS_AS(sc_derivative(wm, C(0, -1)), Error);
}

TEST_CASE("sc_derivative matches central differences of sc_map") {
    const auto wm = wedge_map();
    const double h = 1e-5;
    for (C z : {C(0, 1), C(1, 0.5), C(-2, 2), C(0.5, 3)}) {
        const C fd = (sc_map(wm, z + h) - sc_map(wm, z - h)) / (2.0 * h);
        CHECK(std::abs(fd - sc_derivative(wm, z)) <= 1e-9);
    }
}

TEST_CASE("second and third derivatives against finite differences") {
    const auto wm = wedge_map();
    const double h = 1e-4;
    for (C z : {C(0, 1), C(1.2, 0.8)}) {
        const C d2 = (sc_derivative(wm, z + h) - sc_derivative(wm, z - h)) / (2.0 * h);
        CHECK(std::abs(d2 - sc_derivative2(wm, z)) <=
              1e-6 * std::max(1.0, std::abs(d2)));
        const C d3 = (sc_derivative2(wm, z + h) - sc_derivative2(wm, z - h)) / (2.0 * h);
        CHECK(std::abs(d3 - sc_derivative3(wm, z)) <=
              1e-5 * std::max(1.0, std::abs(d3)));
    }
}

TEST_CASE("sc_map wedge closed form") {
    const auto wm = wedge_map();
    CHECK(std::abs(sc_map(wm, C(0, 1)) - C(0, 1)) <= 1e-12);
    CHECK(std::abs(sc_map(wm, C(0, 2)) - wedge_closed_form(C(0, 2))) <= 1e-11);
    // boundary point: Phi(1) = e^{i pi/4} lies on the curve |u| = v
    const C b = sc_map(wm, C(1, 0));
    CHECK(std::abs(b - wedge_closed_form(C(1, 0))) <= 1e-11);
    CHECK(std::abs(b.real() - b.imag()) <= 1e-11);
    // vertex image
    CHECK(std::abs(sc_map(wm, C(0, 0))) <= 1e-12);
}

TEST_CASE("sc_map path independence") {
    const auto wm = wedge_map();
    for (C z : {C(1.5, 0.3), C(-2, 1), C(0.2, 4)}) {
        const C a = sc_map(wm, z, 2.0);
        const C b = sc_map(wm, z, 7.0);
        CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("sc_solve recovers the wedge map") {
    const auto wedge = make_wedge_graph(1.0);
    ScSolveOptions opt;
    opt.base_value = C(0, 1);
    const auto map = sc_solve(wedge, opt);

    CHECK(map.exponents.size() == 1);
    CHECK(map.exponents[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(map.rotation_gamma == doctest::Approx(M_PI / 4).epsilon(1e-12));
    CHECK(map.scale == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(map.prevertices[0]) <= 1e-10);

    for (const auto& vr : vertex_residuals(map, wedge)) CHECK(vr.residual <= 1e-8);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    std::uniform_real_distribution<double> uy(0.05, 4.0);
    for (int k = 0; k < 20; ++k) {
        const C z(ux(rng), uy(rng));
        CHECK(std::abs(sc_map(map, z) - wedge_closed_form(z)) <= 1e-6);
    }
}

TEST_CASE("sc_solve on the flat graph is affine") {
    const auto flat = make_flat_graph();
    const auto map = sc_solve(flat);
    for (double e : map.exponents) CHECK(std::abs(e) <= 1e-13);
    const C d0 = sc_derivative(map, C(0, 1));
    for (C z : {C(2, 0.1), C(-1, 3)})
        CHECK(std::abs(sc_derivative(map, z) - d0) <= 1e-12);
    // identity up to the normalization Phi(i) = i(a(0)+1) = i
    CHECK(std::abs(sc_map(map, C(0, 1)) - C(0, 1)) <= 1e-10);
    CHECK(std::abs(sc_map(map, C(2, 1)) - C(2, 1)) <= 1e-9);
}

TEST_CASE("sc_solve zigzag targets") {
    for (const auto& g : {make_zigzag_graph(), make_w_graph()}) {
        const auto map = sc_solve(g);
        for (const auto& vr : vertex_residuals(map, g)) CHECK(vr.residual <= 1e-6);
        const auto sect = sector_certificate(map, 400, 99);
        CHECK(sect.pass);
        CHECK(sect.min_re > 0.0);
    }
}

TEST_CASE("asymmetric targets solve, and iteration starvation reports residuals") {
    // unequal side lengths: the symmetric initial guess is wrong
    LipschitzGraph skew{{{-1.0, 0.0}, {0.0, 1.0}, {2.0, -1.0}}, -1.0, 1.0, 1.0};
    skew.validate();

    const auto map = sc_solve(skew);
    for (const auto& vr : vertex_residuals(map, skew)) CHECK(vr.residual <= 1e-6);

    ScSolveOptions opt;
    opt.max_iterations = 0;
    CHECK_THROWS_AS(static_cast<void>(sc_solve(skew, opt)), SolverError);
}

TEST_CASE("invert_map on the wedge") {
    const auto wm = wedge_map();
    const InverseResult r = invert_map(wm, C(0, 1));
    CHECK(std::abs(r.z - C(0, 1)) <= 1e-11);
    CHECK(std::abs(r.dpsi - 2.0) <= 1e-11);
}

TEST_CASE("round trips on a solved zigzag map") {
    const auto zig = make_zigzag_graph();
    const auto map = sc_solve(zig);
    MapInverter inv(map);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uu(-3.0, 3.0);
    std::uniform_real_distribution<double> uh(0.2, 4.0);
    for (int k = 0; k < 15; ++k) {
        const double u = uu(rng);
        const C w(u, zig.a(u) + uh(rng));
        const InverseResult r = inv.invert(w);
        CHECK(r.z.imag() > 0.0);
        CHECK(std::abs(sc_map(map, r.z) - w) <= 1e-9 * (1.0 + std::abs(w)));
        CHECK(std::abs(sc_derivative(map, r.z) * r.dpsi - 1.0) <= 1e-9);
        // Psi' lands in the sector
        CHECK(r.dpsi.real() > 0.0);
        CHECK(std::abs(r.dpsi.imag()) <= zig.lipschitz_M * r.dpsi.real() * (1.0 + 1e-9));
    }
}

TEST_CASE("boundary argument steps") {
    const auto zig = make_zigzag_graph();
    const auto map = sc_solve(zig);
    const double theta0 = std::atan(zig.lipschitz_M);
    const auto steps = boundary_argument_steps(map);
    REQUIRE(steps.size() == map.prevertices.size() + 1);
    for (const auto& st : steps) {
        CHECK(st.max_deviation <= 1e-9);
        CHECK(st.within_theta0);
        CHECK(std::abs(st.expected) <= theta0 + 1e-9);
    }
    // gaps map to edge direction angles: +pi/4, -pi/4, +pi/4
    CHECK(steps[0].expected == doctest::Approx(M_PI / 4).epsilon(1e-12));
    CHECK(steps[1].expected == doctest::Approx(-M_PI / 4).epsilon(1e-12));
    CHECK(steps[2].expected == doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("boundary derivative is tangent to the image curve") {
    // at x off prevertices arg Phi'(x) equals the local edge angle:
    // left tail, two finite edges, right tail for the W graph
    const auto wg = make_w_graph();
    const auto map = sc_solve(wg);
    const auto steps = boundary_argument_steps(map);
    REQUIRE(steps.size() == 4);
    CHECK(steps[0].expected == doctest::Approx(std::atan(-1.0)).epsilon(1e-9));
    CHECK(steps[1].expected == doctest::Approx(std::atan(1.0)).epsilon(1e-9));
    CHECK(steps[2].expected == doctest::Approx(std::atan(-1.0)).epsilon(1e-9));
    CHECK(steps[3].expected == doctest::Approx(std::atan(1.0)).epsilon(1e-9));
}

TEST_CASE("boundary derivative has vertical-ray limits off prevertices") {
    const auto zig = make_zigzag_graph();
    const auto map = sc_solve(zig);
    for (double x : {map.prevertices[0] - 1.3,
                     0.5 * (map.prevertices[0] + map.prevertices[1]),
                     map.prevertices[1] + 2.1}) {
        const C at_boundary = sc_derivative(map, C(x, 0.0));
        CHECK(std::abs(at_boundary) > 0.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double y : {0.1, 0.01, 0.001}) {
            const double dev = std::abs(sc_derivative(map, C(x, y)) - at_boundary);
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev <= 1e-2 * std::abs(at_boundary));
    }
}

TEST_CASE("fundamental theorem along the boundary") {
    const auto zig = make_zigzag_graph();
    const auto map = sc_solve(zig);
    const C v0 = sc_map(map, C(map.prevertices[0], 0.0));
    const C v1 = sc_map(map, C(map.prevertices[1], 0.0));
    const C seg = sc_segment_integral(map, C(map.prevertices[0], 0.0),
                                      C(map.prevertices[1], 0.0));
    CHECK(std::abs((v1 - v0) - seg) <= 1e-9);
}

TEST_CASE("sector certificate across solved maps") {
    for (const auto& g : {make_wedge_graph(1.0), make_zigzag_graph(), make_w_graph()}) {
        const auto map = sc_solve(g);
        const auto cert = sector_certificate(map, 1000, 2024);
        CHECK(cert.pass);
        CHECK(cert.min_re > 0.0);
        CHECK(cert.worst_ratio <= g.lipschitz_M * (1.0 + 1e-9) + 1e-9);
    }
}

TEST_CASE("caratheodory experiment") {
    SUBCASE("flat graph: approximations change nothing") {
        const auto rows = caratheodory_experiment(make_flat_graph(), {2, 3, 4},
                                                  {C(0, 2), C(1, 1)});
        for (const auto& row : rows) {
            CHECK(row.solved);
            if (!std::isnan(row.successive_diff)) CHECK(row.successive_diff <= 1e-10);
        }
    }

    SUBCASE("wedge: probe differences decrease monotonically") {
        const auto rows =
            caratheodory_experiment(make_wedge_graph(1.0), {2, 3, 4, 5}, {C(0, 2)});
        std::vector<double> diffs;
        for (const auto& row : rows) {
            CHECK(row.solved);
            if (!std::isnan(row.successive_diff)) diffs.push_back(row.successive_diff);
        }
        REQUIRE(diffs.size() == 3);
        CHECK(diffs[0] > diffs[1]);
        CHECK(diffs[1] > diffs[2]);
        // shifted-wedge closed form halves the gap per level
        CHECK(diffs[0] / diffs[1] == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("pinned normalization") {
        const auto wedge = make_wedge_graph(1.0);
        const C w0(0.0, 2.0);
        for (int j : {2, 4}) {
            ScSolveOptions opt;
            opt.base_value = w0;
            const auto mj = sc_solve(polygonal_approximation(wedge, j), opt);
            CHECK(std::abs(sc_map(mj, C(0, 1)) - w0) <= 1e-10);
        }
    }
}

TEST_CASE("map json round trip") {
    const auto map = sc_solve(make_zigzag_graph());
    const auto back = map_from_json(map_to_json(map));
    CHECK(back.prevertices == map.prevertices);
    CHECK(back.exponents == map.exponents);
    CHECK(back.scale == map.scale);
    CHECK(back.base_value == map.base_value);
    // same map evaluations
    CHECK(std::abs(sc_map(back, C(0.3, 0.7)) - sc_map(map, C(0.3, 0.7))) <= 1e-12);
}

TEST_CASE("map invariant validation") {
    SchwarzChristoffelMap bad = wedge_map();
    bad.rotation_gamma = 1.5;  // beyond arctan(1)
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = wedge_map();
    bad.scale = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = wedge_map();
    bad.prevertices = {1.0, 0.0};
    bad.exponents = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), Error);
}
