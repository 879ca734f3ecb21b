#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "frankdefect/frank_constants.hpp"
#include "frankdefect/grid2d.hpp"

namespace frankdefect {

class DirectorField;
struct ProfileSolution;

// Sign of the r = 1 boundary term in the reduced functional. Fixed once by
// requiring agreement with direct 3D quadrature on the radial unit field
// (total 8 pi k1); the energy-agreement tests pin it for every parameter set.
inline constexpr double kBoundarySign = -1.0;

// The reduced energy split into its bulk summands and the boundary term.
// total is always the sum of the five parts.
struct EnergyBreakdown {
    double bulk_rr = 0.0;        // (k1 sin^2 + k3 cos^2)(psi-theta) (d_r psi)^2
    double bulk_tt = 0.0;        // (k1 cos^2 + k3 sin^2)(psi-theta) (d_theta psi)^2 / r^2
    double bulk_cross = 0.0;     // -2(k1-k3) sin(psi-theta)cos(psi-theta) d_r psi d_theta psi / r
    double bulk_singular = 0.0;  // k1 csc^2(theta) sin^2(psi) / r^2
    double boundary = 0.0;       // signed r = 1 line term, sign kBoundarySign
    double total = 0.0;

    void write_json(std::ostream& os) const;
};

// Quadrature of the reduced functional over the field's grid, volume weight
// r^2 sin(theta) and prefactor pi. Throws std::runtime_error when the grid is
// too coarse to resolve the csc^2-theta term (its near-axis partial sums grow
// toward the axis instead of decaying).
EnergyBreakdown reduced_energy(const Field2D& psi, double k1, double k3);

// r-independent specialization for solved profiles: the radial integral is
// exact, the polar one composite Gauss over the solver's own step intervals,
// so steep axis layers cost nothing in accuracy.
EnergyBreakdown reduced_energy(const ProfileSolution& prof);

struct DirectResolution {
    int n_r = 24;            // Gauss order in r on (0,1)
    int n_phi = 16;          // trapezoid count in the azimuth
    int theta_octaves = 20;  // geometric panel halvings toward each axis
    int panel_order = 16;    // Gauss order per polar panel
};

// Independent oracle: 3D spherical quadrature of the Oseen-Frank density over
// the unit ball. Panels refine geometrically into both poles, so integrable
// axis singularities converge; a density whose near-axis octave contributions
// stop decaying raises std::runtime_error.
double direct_energy(const DirectorField& field, const FrankConstants& k,
                     const DirectResolution& res = DirectResolution{});

// Axisymmetric-with-mirror-symmetry ansatz for r-dependent tilt fields: the
// director at spherical point (r, theta, phi) has polar angle psi(r, theta)
// and azimuth phi. Callables take (r, theta).
struct EquivariantAnsatz {
    std::function<double(double, double)> psi;
    std::function<double(double, double)> psi_r;
    std::function<double(double, double)> psi_theta;
};

// Same 3D quadrature for an r-dependent ansatz field.
double direct_energy(const EquivariantAnsatz& ansatz, const FrankConstants& k,
                     const DirectResolution& res = DirectResolution{});

// Kernel pair (A, B)(s, theta) with d/dtheta B = -A. Pairs of this shape move
// mixed first-order bulk integrals onto boundary data.
struct KernelPair {
    std::function<double(double, double)> A;
    std::function<double(double, double)> B;
};

// The sine kernels behind the r = 1 boundary term.
KernelPair boundary_kernel_pair();

// The weighted kernels behind the completed-square constant.
KernelPair completed_square_kernel_pair(double k1, double k3);

// Right side of the two-sided identity: the A-antiderivative through the
// r = 1 trace of psi plus the B line integral at theta = pi for axis class j.
// Verifies d/dtheta B = -A at sample points first; throws std::invalid_argument
// when the pair is incompatible.
double abcd_boundary_value(const KernelPair& ab, const Field2D& psi, int j);

// Companion left side: grid quadrature of r A(psi) d_r psi + B(psi) d_theta psi
// in the flat measure dtheta dr.
double abcd_bulk_value(const KernelPair& ab, const Field2D& psi);

struct ProfileResidual {
    std::vector<double> theta;  // interior nodes of the profile grid
    std::vector<double> values;
    double sup = 0.0;
};

// Residual of the profile equation in conservation form,
//   d/dtheta[sin(theta) sqrt(Q2) psi'] - k1 csc(theta) Q2^{-1/2} sin(psi)cos(psi),
// with the flux differentiated numerically from node data.
ProfileResidual el_residual_profile(const ProfileSolution& prof);

// sin^2(theta) Q2(psi-theta) psi'^2 - k1 sin^2(psi) per interior node, with
// psi' re-derived from the stored psi values rather than taken from the solver.
// Identically zero along admissible critical profiles.
ProfileResidual first_integral(const ProfileSolution& prof);

struct Residual2D {
    std::vector<double> values;  // grid layout
    double l2 = 0.0;             // root mean square in the r^2 sin(theta) volume weights
    double sup = 0.0;
};

// Divergence-form residual of the 2D criticality equation, fluxes differenced
// by nonuniform 7-point windows along each grid line (in mu = ln tan(theta/2)
// where the windows sit tight there, in plain theta toward the axes).
Residual2D el_residual_2d(const Field2D& psi, double k1, double k3);

struct CompletedSquare {
    double deficit_rr = 0.0;  // weighted square of the radial defect
    double deficit_tt = 0.0;  // weighted square of the polar defect
    double constant_part = 0.0;

    double total() const { return deficit_rr + deficit_tt + constant_part; }
};

// Sum-of-squares split of the reduced energy around a critical profile:
// total() reproduces reduced_energy(psi).total, both deficits are nonnegative,
// and they vanish exactly at the profile itself. Requires psi to match the
// profile on r = 1 within boundary_tol (throws std::invalid_argument).
CompletedSquare completed_square_energy(const Field2D& psi, const ProfileSolution& target,
                                        double boundary_tol = 1e-8);

// Convenience overload: solves the target profile for (k1, k3, t) first.
CompletedSquare completed_square_energy(const Field2D& psi, double k1, double k3, double t,
                                        double boundary_tol = 1e-8);

}  // namespace frankdefect
