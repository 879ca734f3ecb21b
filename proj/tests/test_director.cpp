#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "frankdefect/director.hpp"
#include "frankdefect/quadrature.hpp"

using namespace frankdefect;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double splitmix(unsigned long long& s) {
    s += 0x9E3779B97F4A7C15ull;
    unsigned long long z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return (double)(z >> 11) * 0x1.0p-53;
}

Vec3 random_point(unsigned long long& s) {
    // generic points over a radius band; axis cases are exercised explicitly elsewhere
    double z = 2.0 * splitmix(s) - 1.0;
    double phi = 2.0 * kPi * splitmix(s);
    double r = 0.4 + 1.8 * splitmix(s);
    double st = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3{r * st * std::cos(phi), r * st * std::sin(phi), r * z};
}

double frob2(const Mat3& g) {
    double s = 0.0;
    for (int i = 0; i < 9; ++i) s += g.a[i] * g.a[i];
    return s;
}

}  // namespace

TEST_CASE("hedgehog factory and profile-built hedgehog both give x over |x|") {
    DirectorField exact = DirectorField::hedgehog();
    DirectorField solved = build_director(solve_profile(2.0, 1.0, kPi / 2));
    unsigned long long s = 7;
    for (int i = 0; i < 200; ++i) {
        Vec3 p = random_point(s);
        Vec3 want = normalized(p);
        CHECK(norm(exact(p) - want) < 1e-14);
        CHECK(norm(solved(p) - want) < 1e-10);
    }
    CHECK(norm(exact(Vec3{0.0, 0.0, 2.0}) - Vec3{0.0, 0.0, 1.0}) < 1e-15);
    CHECK(norm(exact(Vec3{0.0, 0.0, -2.0}) - Vec3{0.0, 0.0, -1.0}) < 1e-15);
}

TEST_CASE("constant factory is e3 everywhere") {
    DirectorField f = DirectorField::constant_e3();
    unsigned long long s = 11;
    for (int i = 0; i < 50; ++i) {
        Vec3 p = random_point(s);
        CHECK(norm(f(p) - Vec3{0.0, 0.0, 1.0}) < 1e-15);
    }
    CHECK_THROWS_AS(f(Vec3{0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("equal-constant solve matches the rational closed-form field") {
    double t = 1.0;
    DirectorField f = build_director(solve_profile(2.5, 2.5, t));
    unsigned long long s = 13;
    for (int i = 0; i < 200; ++i) {
        Vec3 p = random_point(s);
        double theta = std::atan2(std::hypot(p.x, p.y), p.z);
        double phi = std::atan2(p.y, p.x);
        double den = 1.0 + std::cos(t) * std::cos(theta);
        double sp = std::sin(t) * std::sin(theta) / den;
        double cp = (std::cos(t) + std::cos(theta)) / den;
        Vec3 want{sp * std::cos(phi), sp * std::sin(phi), cp};
        CHECK(norm(f(p) - want) < 1e-8);
    }
}

TEST_CASE("analytic gradient agrees with finite differences and is tangent") {
    DirectorField f = build_director(solve_profile(4.0, 1.0, 1.0));
    auto sampler = f.sampler();
    unsigned long long s = 17;
    for (int i = 0; i < 60; ++i) {
        Vec3 p = random_point(s);
        DirectorState st = f.state(p);
        CHECK(std::abs(norm(st.u) - 1.0) < 1e-14);
        CHECK(st.tangency_defect() < 1e-12);
        Mat3 fd = fd_gradient(sampler, p, 1e-4 * norm(p));
        for (int e = 0; e < 9; ++e) CHECK(std::abs(st.grad.a[e] - fd.a[e]) < 2e-6);
    }
}

TEST_CASE("zero-homogeneity and gradient scaling") {
    DirectorField f = build_director(solve_profile(1.0, 4.0, 2.0));
    unsigned long long s = 23;
    for (int i = 0; i < 50; ++i) {
        Vec3 p = random_point(s);
        double lam = 0.3 + 3.0 * splitmix(s);
        CHECK(norm(f(p * lam) - f(p)) < 1e-13);
        DirectorState a = f.state(p), b = f.state(p * lam);
        for (int e = 0; e < 9; ++e) CHECK(std::abs(b.grad.a[e] * lam - a.grad.a[e]) < 1e-11);
    }
}

TEST_CASE("squared gradient norm: closed forms and Frobenius identity") {
    DirectorField h = DirectorField::hedgehog();
    CHECK(std::abs(h.grad_norm_sq(1.0, 0.7) - 2.0) < 1e-15);
    CHECK(std::abs(h.grad_norm_sq(2.0, 2.1) - 0.5) < 1e-15);
    CHECK(DirectorField::constant_e3().grad_norm_sq(1.5, 1.0) == 0.0);

    DirectorField f = build_director(solve_profile(4.0, 1.0, 1.0));
    const ProfileSolution* prof = f.profile();
    REQUIRE(prof != nullptr);
    // theta -> 0 limit is 2 c0^2 (both slope and ratio tend to the axis rate)
    CHECK(std::abs(f.grad_norm_sq(1.0, 0.0) - 2.0 * prof->c0 * prof->c0) < 1e-12);
    unsigned long long s = 29;
    for (int i = 0; i < 50; ++i) {
        Vec3 p = random_point(s);
        double r = norm(p), theta = std::atan2(std::hypot(p.x, p.y), p.z);
        CHECK(f.grad_norm_sq(r, theta) == doctest::Approx(frob2(f.state(p).grad)).epsilon(1e-12));
    }
}

TEST_CASE("sphere integral of the gradient norm matches direct finite differences") {
    DirectorField f = build_director(solve_profile(4.0, 1.0, 1.0));
    auto sampler = f.sampler();
    Rule1D gauss = gauss_legendre(96, 0.0, kPi);
    double analytic = 0.0, direct = 0.0;
    for (std::size_t i = 0; i < gauss.nodes.size(); ++i) {
        double th = gauss.nodes[i], w = gauss.weights[i] * std::sin(gauss.nodes[i]);
        analytic += w * f.grad_norm_sq(1.0, th);
        Vec3 p{std::sin(th), 0.0, std::cos(th)};  // phi = 0 suffices by symmetry
        direct += w * frob2(fd_gradient(sampler, p, 1e-4));
    }
    CHECK(std::abs(direct - analytic) < 1e-6 * std::abs(analytic));
}

TEST_CASE("lift round trip recovers the solved profile") {
    ProfileSolution sol = solve_profile(4.0, 1.0, 1.0);
    DirectorField f = build_director(sol);
    EquivariantSamples s = sample_equivariant(f, {0.7, 1.0, 1.3}, sol.theta_nodes);
    LiftResult lift = lift_equivariant(s);
    CHECK(lift.max_transverse < 1e-14);
    CHECK(lift.axis_class == 1);
    CHECK(lift.axis_defect < 1e-16);
    std::size_t nth = sol.theta_nodes.size();
    for (std::size_t i = 0; i < s.r.size(); ++i)
        for (std::size_t j = 0; j < nth; ++j)
            CHECK(std::abs(lift.psi[i * nth + j] - sol.psi[j]) < 1e-12);
}

TEST_CASE("lift classifies hedgehog, constant, negative, and shifted families") {
    std::vector<double> th;
    for (int i = 0; i <= 200; ++i) th.push_back(kPi * i / 200.0);

    LiftResult h = lift_equivariant(sample_equivariant(DirectorField::hedgehog(), {1.0}, th));
    CHECK(h.axis_class == 1);
    for (std::size_t j = 0; j < th.size(); ++j) CHECK(std::abs(h.psi[j] - th[j]) < 1e-14);

    LiftResult z = lift_equivariant(sample_equivariant(DirectorField::constant_e3(), {1.0}, th));
    CHECK(z.axis_class == 0);
    for (double v : z.psi) CHECK(std::abs(v) < 1e-15);

    LiftResult n = lift_equivariant(
        sample_equivariant(build_director(solve_branch(1.0, 1.0, -1.0)), {1.0}, th));
    CHECK(n.axis_class == -1);

    // the lifted antipodal hedgehog runs from -pi up to 0: one net half-turn, so the
    // class count is +1 even though its mapping degree is -1
    LiftResult a =
        lift_equivariant(sample_equivariant(DirectorField::antipodal_hedgehog(), {1.0}, th));
    CHECK(a.axis_class == 1);
    CHECK(std::abs(a.psi.front() + kPi) < 1e-14);
}

TEST_CASE("shifted-branch samples lift to the shifted window") {
    ProfileSolution sol = solve_branch(4.0, 1.0, 2.0 * kPi + 0.7);
    DirectorField f = build_director(sol);
    EquivariantSamples s = sample_equivariant(f, {1.0}, sol.theta_nodes);
    LiftResult lift = lift_equivariant(s);
    // the lift anchors at the equator inside (-pi, pi]; the stored profile sits one full
    // turn up, so the recovered field is the profile minus 2 pi
    std::size_t nth = sol.theta_nodes.size();
    for (std::size_t j = 0; j < nth; ++j)
        CHECK(std::abs(lift.psi[j] - (sol.psi[j] - 2.0 * kPi)) < 1e-12);
    CHECK(lift.axis_class == 1);
}

TEST_CASE("lift rejects non-equivariant and under-resolved samples") {
    EquivariantSamples bad;
    bad.r = {1.0};
    bad.theta = {0.5, 1.0, 1.5};
    bad.u = {Vec3{0.0, 0.0, 1.0}, Vec3{0.0, 1.0, 0.0}, Vec3{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(lift_equivariant(bad), std::runtime_error);  // transverse component

    EquivariantSamples coarse;
    coarse.r = {1.0};
    coarse.theta = {1.0, 2.0};
    double p0 = 0.2, p1 = 0.2 + kPi;  // exactly half a turn apart: ambiguous
    coarse.u = {Vec3{std::sin(p0), 0.0, std::cos(p0)}, Vec3{std::sin(p1), 0.0, std::cos(p1)}};
    CHECK_THROWS_AS(lift_equivariant(coarse), std::runtime_error);

    EquivariantSamples tiny;
    tiny.r = {1.0};
    tiny.theta = {1.0};
    tiny.u = {Vec3{0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(lift_equivariant(tiny), std::invalid_argument);

    EquivariantSamples notunit;
    notunit.r = {1.0};
    notunit.theta = {1.0, 2.0};
    notunit.u = {Vec3{0.0, 0.0, 2.0}, Vec3{0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(lift_equivariant(notunit), std::invalid_argument);
}

TEST_CASE("symmetry residuals vanish for ansatz fields and expose a broken field") {
    for (auto [k1, k3, t] : {std::tuple{4.0, 1.0, 1.0}, std::tuple{1.0, 10.0, 0.6}}) {
        EquivarianceResidual r =
            equivariance_residual(build_director(solve_profile(k1, k3, t)).sampler(), 300);
        CHECK(r.max_rot < 1e-12);
        CHECK(r.max_ref < 1e-12);
    }
    EquivarianceResidual h = equivariance_residual(DirectorField::hedgehog().sampler(), 300);
    CHECK(h.max_rot < 1e-15);
    CHECK(h.max_ref < 1e-15);

    auto skew = [](const Vec3& p) { return normalized(cross(p, Vec3{0.0, 0.0, 1.0}) + p); };
    EquivarianceResidual broken = equivariance_residual(skew, 300);
    CHECK(broken.max_ref > 0.1);
}

TEST_CASE("degree of the reference fields") {
    DirectorField h = DirectorField::hedgehog();
    DegreeResult dh = degree([&](double th, double ph) { return h.at_angles(th, ph); });
    CHECK(dh.value == 1);
    CHECK(std::abs(dh.raw - 1.0) < 1e-9);

    DirectorField e = DirectorField::constant_e3();
    DegreeResult de = degree([&](double th, double ph) { return e.at_angles(th, ph); });
    CHECK(de.value == 0);
    CHECK(std::abs(de.raw) < 1e-12);

    // antipodal map on the two-sphere reverses orientation
    DirectorField a = DirectorField::antipodal_hedgehog();
    DegreeResult da = degree([&](double th, double ph) { return a.at_angles(th, ph); });
    CHECK(da.value == -1);
    CHECK(std::abs(da.raw + 1.0) < 1e-9);

    CHECK(degree(h).value == 1);
    CHECK(degree(e).value == 0);
    CHECK(degree(a).value == -1);
}

TEST_CASE("degree one for solved profiles across the anisotropy range") {
    double tuples[][3] = {{4.0, 1.0, 1.0}, {0.5, 4.0, 2.4}, {1.0, 10.0, 0.6}, {1.0, 1.0, 2.0}};
    for (auto& q : tuples) {
        DegreeResult d = degree(build_director(solve_profile(q[0], q[1], q[2])));
        CHECK(d.value == 1);
        CHECK(std::abs(d.raw - 1.0) < 1e-6);
    }
    // the negative family still surrounds the origin once
    DegreeResult n = degree(build_director(solve_branch(1.0, 1.0, -1.0)));
    CHECK(n.value == 1);
    CHECK(std::abs(n.raw - 1.0) < 1e-6);
}

TEST_CASE("degree flags a field that stops between integers") {
    // psi(pi) = pi/2 leaves the raw integral at one half
    auto half = [](double th, double ph) {
        double p = 0.5 * th;
        return Vec3{std::sin(p) * std::cos(ph), std::sin(p) * std::sin(ph), std::cos(p)};
    };
    CHECK_THROWS_AS(degree(half), std::runtime_error);
}
