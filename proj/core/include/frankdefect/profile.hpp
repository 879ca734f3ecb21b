#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace frankdefect {

// Right-hand side of the profile equation,
//   psi' = sqrt(k1) sin(psi) / (sin(theta) sqrt(k1 cos^2(psi-theta) + k3 sin^2(psi-theta))).
// Smooth on (0,pi) x R; the endpoints are regular singular points with exponent 1.
double profile_rhs(double theta, double psi, double k1, double k3);

enum class BranchKind {
    Constant,             // midpoint value is an integer multiple of pi; psi is constant
    IncreasingZeroToPi,   // t in (0,pi): psi rises 0 -> pi
    DecreasingTwoPiToPi,  // t - 2l*pi in (-pi,0), l != 0: psi falls 2l*pi -> (2l-1)*pi
    ShiftedBy2LPi,        // t - 2l*pi in (0,pi), l != 0: 2l*pi + rising profile
    NegativeMirror,       // t in (-pi,0): psi falls 0 -> -pi
};

std::string branch_name(BranchKind kind);

struct Branch {
    BranchKind kind = BranchKind::IncreasingZeroToPi;
    // psi = 2*pi*shift + fundamental profile, where the fundamental midpoint value
    // reduced_t = t - 2*pi*shift lies in (-pi,0) or (0,pi). Both are 0 for Constant.
    long shift = 0;
    double reduced_t = 0.0;
};

// Profile psi on a theta-grid over [0,pi] together with derivative data.
// chi = sin(psi)/sin(theta) carries the axis limits chi(0) = psi'(0), chi(pi) = psi'(pi).
struct ProfileSolution {
    double k1 = 1.0;
    double k3 = 1.0;
    double t = 0.0;  // psi(pi/2)
    double tol = 1e-10;
    Branch branch;

    std::vector<double> theta_nodes;
    std::vector<double> psi;
    std::vector<double> psi_prime;
    std::vector<double> chi;

    double c0 = 0.0;   // lim psi/theta at 0 (fundamental part); equals chi(0) and psi'(0)
    double cpi = 0.0;  // lim chi at pi; equals psi'(pi) (negative on decreasing branches)

    // Endpoint expansions of the fundamental part f = psi - 2*pi*shift: inside an axis
    // distance seam0 of theta = 0, f = c0 theta + cubic0 theta^3; inside seam_pi of pi,
    // f = pi - (|cpi| y + cubic_pi y^3) with y = pi - theta on rising branches, and the
    // negative mirror of that on falling ones. Node values inside the seams are stored
    // from these expansions, and the accessors below evaluate them directly there.
    double seam0 = 0.0;
    double seam_pi = 0.0;
    double cubic0 = 0.0;
    double cubic_pi = 0.0;

    // diagnostics from the endpoint patches
    double patch_misfit0 = 0.0;   // rate-fit Richardson discrepancy at theta = 0
    double patch_misfit_pi = 0.0; // same at theta = pi
    std::size_t rhs_evaluations = 0;

    // Exact at node hits, full accuracy through resolved boundary layers: windowed
    // barycentric interpolation through the stored nodes outside the seams, the
    // endpoint expansions inside them. (Interpolation windows reaching from a seam
    // into an axis node cluster would amplify round-off by the window's Lebesgue
    // constant over the cluster/gap scale ratio; the closed form has no such term.)
    double psi_at(double theta) const;
    double psi_prime_at(double theta) const;
    double chi_at(double theta) const;

    // Structural invariant check; throws std::runtime_error naming the violated invariant.
    void validate() const;

    // CSV columns theta,psi,psi_prime,chi at 17 significant digits.
    void write_csv(std::ostream& os) const;
    // JSON object with the header fields and the four node arrays.
    void write_json(std::ostream& os) const;
};

// Clustered default grid on [0,pi] (Chebyshev-Lobatto points), endpoints included.
std::vector<double> default_theta_grid(std::size_t n = 513);

// Solve for t in (0,pi) on the default grid. tol in [1e-14, 1e-6].
// Throws std::domain_error for t outside (0,pi) (use solve_branch for other data) and
// std::runtime_error when the endpoint patching fails to converge.
ProfileSolution solve_profile(double k1, double k3, double t, double tol = 1e-10);

// Same, but record the solution on a caller-supplied ascending grid inside [0,pi].
ProfileSolution solve_profile_on(double k1, double k3, double t, double tol,
                                 std::vector<double> theta_nodes);

// Any real midpoint value: multiples of pi give the constant profile; other data reduce
// to a fundamental solve shifted by a multiple of 2*pi, with the branch tagged.
ProfileSolution solve_branch(double k1, double k3, double t, double tol = 1e-10);
ProfileSolution solve_branch_on(double k1, double k3, double t, double tol,
                                std::vector<double> theta_nodes);

// Re-solve anchored at psi(theta_star) = psi_star for theta_star inside (0,pi).
// Used to confirm that any interior sample reproduces the same curve.
ProfileSolution solve_profile_at(double k1, double k3, double theta_star, double psi_star,
                                 double tol = 1e-10);

// arccos((cos t + cos theta)/(1 + cos t cos theta)): the equal-constant profile.
double closed_form_one_constant(double t, double theta);

// Ordered bounds {lower, upper} on ln tan(psi(theta)/2) for the rising branch:
// ln tan(psi/2) - ln tan(t/2) lies between p1*ln tan(theta/2) and p2*ln tan(theta/2)
// with p1 = sqrt(k1)/max(sqrt(k1),sqrt(k3)), p2 = sqrt(k1)/min(sqrt(k1),sqrt(k3)).
std::pair<double, double> bracket_bounds(double t, double theta, double k1, double k3);

// Fitted axis rates (c0, cpi) of a rising profile: psi ~ c0*theta at 0 and
// pi - psi ~ cpi*(pi - theta) at pi. Throws std::runtime_error if the stored grid data
// near the axes disagree with the fitted linear rates beyond tolerance.
std::pair<double, double> endpoint_rates(const ProfileSolution& profile);

}  // namespace frankdefect
