#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "frankdefect/grid2d.hpp"
#include "frankdefect/profile.hpp"

namespace frankdefect {

// Rectangle in (r, theta) outside which a perturbation vanishes identically.
// Must satisfy 0 < r_lo < r_hi <= 1 and 0 < theta_lo < theta_hi < pi; keep
// r_hi < 1 for directions meant to respect a fixed boundary trace.
struct SupportBox {
    double r_lo = 0.2;
    double r_hi = 0.8;
    double theta_lo = 0.5;
    double theta_hi = 2.5;
};

// A compactly supported tilt direction, normalized so the quadratic form
// below equals 1 on its own grid.
struct Perturbation {
    Field2D values;
    SupportBox support;
    std::uint64_t seed = 0;
    int n_modes = 0;
    double x0_norm = 0.0;
};

// The admissibility form
//   int [ (d_r phi)^2 + (d_theta phi)^2 / r^2 + phi^2 / (r^2 sin^2 theta) ] r^2 sin(theta)
// summed with the grid's quadrature weights. Scales quadratically; zero only
// for a field vanishing at every node. The grid sum is finite regardless of
// whether the axis term would converge in the continuum, so only fields
// vanishing near both axes carry grid-independent values.
double x0_norm(const Field2D& phi);
inline double x0_norm(const Perturbation& phi) { return phi.values.values().empty() ? 0.0 : x0_norm(phi.values); }

// Seeded smooth direction: n_modes products of C^2 polynomial windows in r and
// theta (degree six, cubic contact at the window edges) with one of the modes
// {1, sin theta, sin 2theta}, each mode on its own sub-window of the box so
// different seeds explore genuinely different shapes. The result vanishes with
// its first derivatives outside the box and is normalized to x0_norm = 1.
// Deterministic per (seed, n_modes, box, grid). Throws std::domain_error for a
// degenerate or out-of-range box, n_modes < 1, or a box so small that no grid
// node sees it.
Perturbation make_perturbation(std::shared_ptr<const Grid2D> grid, std::uint64_t seed,
                               int n_modes, const SupportBox& support);

struct ProbePoint {
    double epsilon = 0.0;
    double delta_j = 0.0;  // J[profile + epsilon phi] - J[profile], same-grid quadrature
};

// Energy differences along a direction. phi must vanish on the r = 1 grid row
// (the minimality statement fixes the boundary trace); otherwise
// std::invalid_argument. delta_j at epsilon = 0 is exactly 0.
std::vector<ProbePoint> minimality_probe(const ProfileSolution& prof, const Perturbation& phi,
                                         const std::vector<double>& epsilons);

struct DescentResult {
    Field2D field;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    double energy = 0.0;  // full reduced energy of the returned field
};

// Minimize the discrete reduced energy over node values with the r = 1 row
// pinned to the boundary profile's trace (the initial field's own r = 1 row is
// replaced by that trace before the first step). Steps go along the negative
// discrete gradient with curvature-fitted step lengths and a nonmonotone
// backtracking guard; convergence is declared when the Euclidean gradient norm
// over the free nodes drops below tol * (1 + |J|). A field that starts
// converged returns after zero iterations. Throws std::runtime_error reporting
// the final gradient norm when max_iters steps do not get there.
DescentResult descent_minimize(const Field2D& initial, const ProfileSolution& boundary,
                               std::size_t max_iters = 5000, double tol = 1e-8);

struct AxisTrace {
    double trace0 = 0.0;    // sup over r of |cos^2 psi - 1| extrapolated to theta -> 0
    double trace_pi = 0.0;  // the same at theta -> pi
};

// Axis admissibility of a tilt field: on each r-row, cos^2(psi) - 1 is
// extrapolated to the axis through the three nearest interior nodes. Fields in
// the admissible class give traces at round-off scale; a field whose tilt
// misses a multiple of pi at an axis shows the order-one defect directly.
AxisTrace axis_trace_check(const Field2D& psi);

}  // namespace frankdefect
