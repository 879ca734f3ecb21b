#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "frankdefect/frank_core.hpp"
#include "frankdefect/linalg.hpp"
#include "frankdefect/profile.hpp"

namespace frankdefect {

// Zero-homogeneous unit vector field with rotational and mirror symmetry about the z-axis,
// assembled from a polar profile psi(theta). All near-axis evaluation goes through the
// regularized ratio chi = sin(psi)/sin(theta), which stays C^{1,1} up to the axis; the
// in-plane components are chi * sin(theta) * (cos phi, sin phi), never a division.
class DirectorField {
public:
    // u = x/|x|; profile psi = theta
    static DirectorField hedgehog();
    // u = -x/|x|; profile psi = theta - pi
    static DirectorField antipodal_hedgehog();
    // u = e3 everywhere; profile psi = 0
    static DirectorField constant_e3();

    // Unit director at spherical angles; the radius never enters (zero-homogeneity).
    Vec3 at_angles(double theta, double phi) const;
    // Unit director at a Cartesian point away from the origin.
    Vec3 operator()(const Vec3& p) const;
    // Director and its analytic Cartesian gradient at p:
    //   grad u = (psi'/r) m (x) e_theta + (chi/r) e_phi (x) e_phi,  m = du/dpsi.
    DirectorState state(const Vec3& p) const;

    // |grad u|^2 = (psi'^2 + chi^2) / r^2; finite at the axes through chi.
    double grad_norm_sq(double r, double theta) const;

    double psi(double theta) const { return psi_(theta); }
    double psi_prime(double theta) const { return prime_(theta); }
    double chi(double theta) const { return chi_(theta); }

    // Largest axis slope scale, >= 1; steers quadrature panel sizes near the axes.
    double axis_rate_scale() const { return rate_scale_; }

    // The solved profile behind the field, or nullptr for the closed-form factories.
    const ProfileSolution* profile() const { return prof_.get(); }

    // A plain Cartesian sampler, for code that takes arbitrary fields.
    std::function<Vec3(const Vec3&)> sampler() const;

private:
    DirectorField() = default;
    friend DirectorField build_director(ProfileSolution profile);

    std::function<double(double)> psi_, prime_, chi_;
    double rate_scale_ = 1.0;
    std::shared_ptr<const ProfileSolution> prof_;
};

// Wrap a solved profile as a director field.
DirectorField build_director(ProfileSolution profile);

// Unit-vector samples on an (r, theta) grid in the phi = 0 half-plane, u stored row-major
// with the r index slow.
struct EquivariantSamples {
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<Vec3> u;
};

EquivariantSamples sample_equivariant(const DirectorField& field, std::vector<double> r,
                                      std::vector<double> theta);

// Lifted angle field psi with u = sin(psi) e_phi^perp + cos(psi) e3, plus how far the
// samples are from admitting that form at all.
struct LiftResult {
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<double> psi;  // row-major, r slow
    double max_transverse = 0.0;  // worst |u . e_phi|; nonzero breaks the mirror symmetry
    double axis_defect = 0.0;     // worst 1 - cos^2(psi) at the boundary theta columns
    long axis_class = 0;          // j with psi(., pi) - psi(., 0) = j pi, from the first row
};

// Continuous unwrapping of atan2(u . e_phi^perp, u . e3) along each r-row, anchored so the
// value at the node nearest theta = pi/2 lies in (-pi, pi]. Throws if any |u . e_phi|
// exceeds tol (field not equivariant) or a neighboring pair is ambiguous (|jump| >= pi).
LiftResult lift_equivariant(const EquivariantSamples& samples, double tol = 1e-8);

struct EquivarianceResidual {
    double max_rot = 0.0;  // sup |u(R_eta x) - R_eta u(x)|
    double max_ref = 0.0;  // sup |u(Jx) - J u(x)|, J = diag(-1,1,1)
};

EquivarianceResidual equivariance_residual(const std::function<Vec3(const Vec3&)>& field,
                                           int n_samples, unsigned long long seed = 2024);

struct DegreeResult {
    long value = 0;
    double raw = 0.0;
};

// Degree of a C^1 unit field over the unit sphere: (1/4pi) oint u . (d_theta u x d_phi u).
// The angle sampler form uses five-point finite differences with step h_fd; theta outside
// [0, pi] is folded back through the chart extension u(-theta, phi) = u(theta, phi + pi).
// Throws when the raw integral is farther than 0.01 from every integer.
DegreeResult degree(const std::function<Vec3(double, double)>& at_angles, int n_theta = 128,
                    int n_phi = 16, double h_fd = 1e-3);
// Director-field overload: uses the field's own analytic partials, with quadrature panels
// sized by the axis rate so boundary-layer profiles keep full accuracy.
DegreeResult degree(const DirectorField& field);

}  // namespace frankdefect
