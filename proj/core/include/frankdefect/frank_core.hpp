#pragma once

#include <functional>

#include "frankdefect/frank_constants.hpp"
#include "frankdefect/linalg.hpp"

namespace frankdefect {

// Pointwise state of a director field: unit vector u and gradient matrix
// grad(i,j) = d_j u_i. For states sampled from an exact unit field the columns
// of grad are tangent to the sphere at u, i.e. u^T grad = 0.
struct DirectorState {
    Vec3 u;
    Mat3 grad;

    // Largest |u . d_j u| over columns j; zero for exact unit fields.
    double tangency_defect() const;
};

double divergence(const Mat3& grad);
Vec3 curl_of(const Mat3& grad);
// tr(grad^2) - (div)^2; integrates to a boundary quantity for any smooth field.
double null_lagrangian_term(const Mat3& grad);

// Frank energy density
//   2 W = k1 (div u)^2 + k2 (u . curl u)^2 + k3 |u x curl u|^2
//       + (k2 + k4) [tr((grad u)^2) - (div u)^2]
// Throws std::domain_error when | |u| - 1 | > unit_tol.
double energy_density(const DirectorState& s, const FrankConstants& k,
                      double unit_tol = 1e-10);

// Cartesian sampler of a unit field.
using FieldSampler = std::function<Vec3(const Vec3&)>;

// Full Euler-Lagrange operator applied to the field at `point`, projected off
// the direction u. All derivatives are nested fourth-order central differences
// of the sampler; pass h = 0 for the default 1e-4 * |point|.
// The operator is
//   -k1 grad(div u) + k3 curl(curl u)
//   + (k2 - k3) [ curl((u . curl u) u) + (u . curl u) curl u ]
// minus its component along u (which carries the pointwise multiplier).
// Throws std::domain_error when the stencil would reach within h of the origin.
Vec3 full_el_residual(const FieldSampler& field, const Vec3& point,
                      const FrankConstants& k, double h = 0.0);

// Gradient of a sampler by fourth-order central differences, column j = d_j u.
Mat3 fd_gradient(const FieldSampler& field, const Vec3& point, double h);

}  // namespace frankdefect
