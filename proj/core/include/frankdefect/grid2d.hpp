#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace frankdefect {

struct ProfileSolution;

// Tensor-product quadrature grid on the half-disc section (0,1] x (0,pi):
// Gauss-Radau in r so the boundary r = 1 carries nodes for trace data,
// Gauss-Legendre in theta so the open axis stays clear of csc^2-theta
// integrands. Node data is indexed r-major: index(ir, it) = ir*nt + it.
class Grid2D {
public:
    static std::shared_ptr<const Grid2D> make(std::size_t n_r = 128, std::size_t n_theta = 256);

    std::size_t nr() const { return r_nodes_.size(); }
    std::size_t nt() const { return theta_nodes_.size(); }
    std::size_t size() const { return nr() * nt(); }
    std::size_t index(std::size_t ir, std::size_t it) const { return ir * nt() + it; }

    const std::vector<double>& r_nodes() const { return r_nodes_; }
    const std::vector<double>& theta_nodes() const { return theta_nodes_; }
    const std::vector<double>& r_weights() const { return r_weights_; }
    const std::vector<double>& theta_weights() const { return theta_weights_; }

    // Quadrature weight for the flat measure dtheta dr.
    double weight(std::size_t ir, std::size_t it) const {
        return r_weights_[ir] * theta_weights_[it];
    }

    // Node indices along the r = 1 boundary, ascending in theta.
    std::vector<std::size_t> boundary_trace() const;

    // sum of weight * r^2 sin(theta) over all nodes; the measure of the domain
    // in the volume weight r^2 sin(theta), exactly 2/3 up to quadrature error.
    double mass() const;

    // Spectral partial derivatives of node data, same layout in and out.
    std::vector<double> d_r(const std::vector<double>& f) const;
    std::vector<double> d_theta(const std::vector<double>& f) const;

    // Transpose applications of the same derivative matrices; these carry
    // weighted residuals back onto value nodes when differentiating a
    // quadrature of derivative data in the node values.
    std::vector<double> d_r_adjoint(const std::vector<double>& f) const;
    std::vector<double> d_theta_adjoint(const std::vector<double>& f) const;

private:
    Grid2D() = default;
    std::vector<double> r_nodes_, theta_nodes_;
    std::vector<double> r_weights_, theta_weights_;
    std::vector<double> dmat_r_, dmat_theta_;  // row-major nr x nr and nt x nt
};

// Scalar field sampled on a Grid2D with both partial derivatives cached at
// construction, so energy quadratures never re-differentiate.
class Field2D {
public:
    // Partials by spectral differentiation of the sampled values.
    static Field2D from_function(std::shared_ptr<const Grid2D> grid,
                                 const std::function<double(double, double)>& f);

    // Partials supplied in closed form; preferred when f is known analytically.
    static Field2D from_callables(std::shared_ptr<const Grid2D> grid,
                                  const std::function<double(double, double)>& f,
                                  const std::function<double(double, double)>& df_dr,
                                  const std::function<double(double, double)>& df_dtheta);

    // r-independent extension psi(r, theta) = profile(theta); the theta
    // derivative comes from the solver, not from re-differentiating samples.
    static Field2D from_profile(std::shared_ptr<const Grid2D> grid, const ProfileSolution& prof);

    // Node values given directly (grid layout); partials by spectral
    // differentiation, as in from_function.
    static Field2D from_values(std::shared_ptr<const Grid2D> grid, std::vector<double> values);

    const Grid2D& grid() const { return *grid_; }
    std::shared_ptr<const Grid2D> grid_ptr() const { return grid_; }

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& dr() const { return dr_; }
    const std::vector<double>& dtheta() const { return dtheta_; }

    double value(std::size_t ir, std::size_t it) const { return values_[grid_->index(ir, it)]; }

    // this += c * other, including the cached partials. Grids must be the same object.
    Field2D& add_scaled(const Field2D& other, double c);

private:
    std::shared_ptr<const Grid2D> grid_;
    std::vector<double> values_, dr_, dtheta_;
};

}  // namespace frankdefect
