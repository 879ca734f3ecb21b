#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "frankdefect/profile.hpp"

using namespace frankdefect;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Independent fixed-step classical fourth-order integrator from the equator anchor.
// Used as a cross-check on the adaptive path; at 60000 steps its own error is far below
// the tolerances asserted here.
double rk4_from_equator(double k1, double k3, double t, double theta_target, int nsteps) {
    double th = kPi / 2, ps = t;
    double h = (theta_target - kPi / 2) / nsteps;
    for (int i = 0; i < nsteps; ++i) {
        double a = profile_rhs(th, ps, k1, k3);
        double b = profile_rhs(th + 0.5 * h, ps + 0.5 * h * a, k1, k3);
        double c = profile_rhs(th + 0.5 * h, ps + 0.5 * h * b, k1, k3);
        double d = profile_rhs(th + h, ps + h * c, k1, k3);
        ps += h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
        th += h;
    }
    return ps;
}

double sup_second_divided_difference(const std::vector<double>& x, const std::vector<double>& f) {
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        double d1 = (f[i] - f[i - 1]) / (x[i] - x[i - 1]);
        double d2 = (f[i + 1] - f[i]) / (x[i + 1] - x[i]);
        sup = std::max(sup, std::abs(2.0 * (d2 - d1) / (x[i + 1] - x[i - 1])));
    }
    return sup;
}

}  // namespace

TEST_CASE("hedgehog data keeps the profile on the diagonal") {
    double pairs[][2] = {{1.0, 2.0}, {2.0, 1.0}, {1.0, 10.0}, {10.0, 1.0}};
    for (auto& p : pairs) {
        ProfileSolution sol = solve_profile(p[0], p[1], kPi / 2);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.theta_nodes.size(); ++i)
            worst = std::max(worst, std::abs(sol.psi[i] - sol.theta_nodes[i]));
        CHECK(worst < 1e-12);
        CHECK(std::abs(sol.c0 - 1.0) < 1e-10);
        CHECK(std::abs(sol.cpi - 1.0) < 1e-10);
        sol.validate();
    }
}

TEST_CASE("equal constants reproduce the closed form for any common value") {
    for (double kv : {1.0, 2.5}) {
        for (double t : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
            ProfileSolution sol = solve_profile(kv, kv, t);
            double worst = 0.0;
            for (std::size_t i = 0; i < sol.theta_nodes.size(); ++i)
                worst = std::max(worst,
                                 std::abs(sol.psi[i] - closed_form_one_constant(t, sol.theta_nodes[i])));
            CHECK(worst < 1e-9);
            // axis rates of the closed form; the fit error tracks the solver tolerance
            CHECK(std::abs(sol.c0 - std::tan(0.5 * t)) < 1e-9);
            CHECK(std::abs(sol.cpi - 1.0 / std::tan(0.5 * t)) < 1e-9);
        }
    }
    // a tighter tolerance sharpens the fitted rates accordingly
    ProfileSolution sharp = solve_profile(1.0, 1.0, kPi / 4, 1e-13);
    CHECK(std::abs(sharp.c0 - std::tan(kPi / 8)) < 1e-10);
    CHECK(std::abs(sharp.cpi - 1.0 / std::tan(kPi / 8)) < 1e-10);
}

TEST_CASE("adaptive solution matches a fixed-step cross-check") {
    double tuples[][3] = {{4.0, 1.0, 1.0}, {0.5, 4.0, 2.4}, {1.0, 10.0, 0.6}, {10.0, 1.0, 2.0}};
    for (auto& q : tuples) {
        ProfileSolution sol = solve_profile(q[0], q[1], q[2]);
        for (double probe : {0.3, 1.0, 2.0, 2.8}) {
            // compare stored node values: off-node evaluation adds interpolation
            // truncation, which for boundary-layer profiles (axis rate ~5e2 at
            // k3/k1 = 10) dominates the integration error
            auto it = std::lower_bound(sol.theta_nodes.begin(), sol.theta_nodes.end(), probe);
            std::size_t i = (std::size_t)(it - sol.theta_nodes.begin());
            double want = rk4_from_equator(q[0], q[1], q[2], sol.theta_nodes[i], 60000);
            CHECK(std::abs(sol.psi[i] - want) < 3e-9);
            double want_probe = rk4_from_equator(q[0], q[1], q[2], probe, 60000);
            CHECK(std::abs(sol.psi_at(probe) - want_probe) < 5e-8);
        }
    }
}

TEST_CASE("frozen interior value") {
    ProfileSolution sol = solve_profile(4.0, 1.0, 1.0);
    CHECK(std::abs(sol.psi_at(2.0) - 1.4657699184152250832) < 1e-8);
}

TEST_CASE("anchoring at an interior sample reproduces the curve") {
    ProfileSolution base = solve_profile(4.0, 1.0, 1.0);
    ProfileSolution again = solve_profile_at(4.0, 1.0, 2.0, base.psi_at(2.0));
    CHECK(again.branch.kind == BranchKind::IncreasingZeroToPi);
    CHECK(std::abs(again.t - 1.0) < 1e-8);
    double worst = 0.0;
    for (std::size_t i = 0; i < base.theta_nodes.size(); ++i)
        worst = std::max(worst, std::abs(base.psi[i] - again.psi[i]));
    CHECK(worst < 1e-8);
}

TEST_CASE("falling branch between 2pi and pi") {
    ProfileSolution sol = solve_branch(2.0, 1.0, 3 * kPi / 2);
    CHECK(sol.branch.kind == BranchKind::DecreasingTwoPiToPi);
    CHECK(sol.branch.shift == 1);
    CHECK(std::abs(sol.psi.front() - 2 * kPi) < 1e-8);
    CHECK(std::abs(sol.psi.back() - kPi) < 1e-8);
    for (std::size_t i = 0; i + 1 < sol.psi.size(); ++i) CHECK(sol.psi[i + 1] < sol.psi[i]);
    CHECK(sol.c0 < 0.0);
    CHECK(sol.cpi < 0.0);
    sol.validate();
}

TEST_CASE("negative family for equal constants mirrors the rising one") {
    ProfileSolution neg = solve_branch(1.0, 1.0, -0.8);
    CHECK(neg.branch.kind == BranchKind::NegativeMirror);
    ProfileSolution pos = solve_profile(1.0, 1.0, 0.8);
    double worst = 0.0;
    for (std::size_t i = 0; i < neg.psi.size(); ++i)
        worst = std::max(worst, std::abs(neg.psi[i] + pos.psi[i]));
    CHECK(worst < 1e-9);
    CHECK(std::abs(neg.psi.back() + kPi) < 1e-8);
}

TEST_CASE("negative family is genuinely asymmetric for unequal constants") {
    ProfileSolution neg = solve_branch(4.0, 1.0, -1.0);
    ProfileSolution pos = solve_profile(4.0, 1.0, 1.0);
    neg.validate();
    double worst = 0.0;
    for (std::size_t i = 0; i < neg.psi.size(); ++i)
        worst = std::max(worst, std::abs(neg.psi[i] + pos.psi[i]));
    // the sign flip is not a symmetry of the anisotropic equation
    CHECK(worst > 1e-4);
    CHECK(std::abs(neg.psi.front()) < 1e-10);
    CHECK(std::abs(neg.psi.back() + kPi) < 1e-8);
}

TEST_CASE("integer multiples of pi give constant profiles") {
    ProfileSolution sol = solve_branch(2.0, 1.0, kPi);
    CHECK(sol.branch.kind == BranchKind::Constant);
    for (double v : sol.psi) CHECK(v == kPi);
    for (double v : sol.psi_prime) CHECK(v == 0.0);
    for (double v : sol.chi) CHECK(v == 0.0);
    sol.validate();
    ProfileSolution zero = solve_branch(2.0, 1.0, 0.0);
    CHECK(zero.branch.kind == BranchKind::Constant);
}

TEST_CASE("shifted branches are vertical translates") {
    ProfileSolution up = solve_branch(2.0, 1.0, 2 * kPi + 0.7);
    CHECK(up.branch.kind == BranchKind::ShiftedBy2LPi);
    CHECK(up.branch.shift == 1);
    ProfileSolution base = solve_profile(2.0, 1.0, 0.7);
    double worst = 0.0;
    for (std::size_t i = 0; i < up.psi.size(); ++i)
        worst = std::max(worst, std::abs((up.psi[i] - 2 * kPi) - base.psi[i]));
    CHECK(worst < 1e-9);
    CHECK(std::abs(up.c0 - base.c0) < 1e-10);
}

TEST_CASE("reflection through the equator maps t to pi - t") {
    ProfileSolution a = solve_profile(4.0, 1.0, 1.0);
    ProfileSolution b = solve_profile(4.0, 1.0, kPi - 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.theta_nodes.size(); ++i) {
        double mirrored = kPi - a.psi_at(kPi - b.theta_nodes[i]);
        worst = std::max(worst, std::abs(b.psi[i] - mirrored));
    }
    CHECK(worst < 5e-9);
    CHECK(std::abs(b.c0 - a.cpi) < 1e-9);
    CHECK(std::abs(b.cpi - a.c0) < 1e-9);
}

TEST_CASE("log-tangent bracket holds at every interior node") {
    double tuples[][3] = {{4.0, 1.0, 1.0}, {1.0, 4.0, 2.0}, {9.0, 0.5, 0.6}};
    for (auto& q : tuples) {
        ProfileSolution sol = solve_profile(q[0], q[1], q[2]);
        for (std::size_t i = 0; i < sol.theta_nodes.size(); ++i) {
            double th = sol.theta_nodes[i];
            if (th <= 0.0 || th >= kPi) continue;
            auto [lo, hi] = bracket_bounds(q[2], th, q[0], q[1]);
            double val = std::log(std::tan(0.5 * sol.psi[i]));
            CHECK(val >= lo - 1e-9);
            CHECK(val <= hi + 1e-9);
        }
    }
}

TEST_CASE("axis data is exact and chi carries the rate limits") {
    ProfileSolution sol = solve_profile(4.0, 1.0, 1.0);
    CHECK(sol.theta_nodes.front() == 0.0);
    CHECK(sol.theta_nodes.back() == kPi);
    CHECK(sol.psi.front() == 0.0);
    CHECK(std::abs(sol.psi.back() - kPi) < 1e-12);
    CHECK(sol.chi.front() == sol.c0);
    CHECK(sol.chi.back() == sol.cpi);
    CHECK(sol.psi_prime.front() == sol.c0);
    CHECK(sol.psi_prime.back() == sol.cpi);
    // interior chi is literally sin(psi)/sin(theta)
    for (std::size_t i = 1; i + 1 < sol.theta_nodes.size(); ++i) {
        double direct = std::sin(sol.psi[i]) / std::sin(sol.theta_nodes[i]);
        CHECK(std::abs(sol.chi[i] - direct) < 1e-13);
    }
    CHECK(sol.rhs_evaluations > 0);
}

TEST_CASE("chi second differences stay bounded under refinement") {
    double tuples[][3] = {{4.0, 1.0, 1.0}, {1.0, 4.0, 2.4}};
    for (auto& q : tuples) {
        ProfileSolution coarse =
            solve_profile_on(q[0], q[1], q[2], 1e-10, default_theta_grid(513));
        ProfileSolution fine =
            solve_profile_on(q[0], q[1], q[2], 1e-10, default_theta_grid(1025));
        double sc = sup_second_divided_difference(coarse.theta_nodes, coarse.chi);
        double sf = sup_second_divided_difference(fine.theta_nodes, fine.chi);
        double ratio = sf / sc;
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
    }
}

TEST_CASE("csv and json outputs round trip") {
    ProfileSolution sol = solve_profile_on(2.0, 1.0, 1.1, 1e-10, default_theta_grid(65));

    std::ostringstream csv;
    sol.write_csv(csv);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "theta,psi,psi_prime,chi");
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == sol.theta_nodes.size());

    std::ostringstream js;
    sol.write_json(js);
    nlohmann::json j = nlohmann::json::parse(js.str());
    CHECK(j["k1"].get<double>() == 2.0);
    CHECK(j["t"].get<double>() == 1.1);
    CHECK(j["branch"]["name"].get<std::string>() == "increasing");
    auto psi = j["psi"].get<std::vector<double>>();
    REQUIRE(psi.size() == sol.psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(psi[i] == sol.psi[i]);
}

TEST_CASE("endpoint rate fits agree with the stored patches") {
    ProfileSolution sol = solve_profile(4.0, 1.0, 1.0);
    auto [c0, cpi] = endpoint_rates(sol);
    CHECK(std::abs(c0 - sol.c0) < 1e-8 * (1.0 + std::abs(sol.c0)));
    CHECK(std::abs(cpi - sol.cpi) < 1e-8 * (1.0 + std::abs(sol.cpi)));
    ProfileSolution neg = solve_branch(4.0, 1.0, -1.0);
    CHECK_THROWS_AS(endpoint_rates(neg), std::domain_error);
}

TEST_CASE("invalid requests are rejected") {
    CHECK_THROWS_AS(solve_profile(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(solve_profile(1.0, 1.0, kPi), std::domain_error);
    CHECK_THROWS_AS(solve_profile(1.0, 1.0, 1.0, 1e-15), std::domain_error);
    CHECK_THROWS_AS(solve_profile(1.0, 1.0, 1.0, 1e-5), std::domain_error);
    CHECK_THROWS_AS(solve_profile(0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(solve_profile(1.0, -2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(solve_profile_on(1.0, 1.0, 1.0, 1e-10, {0.3, 0.2, 0.1}),
                    std::domain_error);
    CHECK_THROWS_AS(solve_profile_at(1.0, 1.0, 0.5, 2 * kPi), std::domain_error);
    CHECK_THROWS_AS(solve_profile_at(1.0, 1.0, 0.0, 0.5), std::domain_error);
}
