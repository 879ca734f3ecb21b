#include "frankdefect/grid2d.hpp"

#include <cmath>
#include <stdexcept>

#include "frankdefect/profile.hpp"
#include "frankdefect/quadrature.hpp"

namespace frankdefect {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::shared_ptr<const Grid2D> Grid2D::make(std::size_t n_r, std::size_t n_theta) {
    if (n_r < 2 || n_theta < 2) throw std::invalid_argument("Grid2D: need at least 2 nodes per axis");
    auto grid = std::shared_ptr<Grid2D>(new Grid2D());
    Rule1D rr = gauss_radau_right((int)n_r, 0.0, 1.0);
    Rule1D rt = gauss_legendre((int)n_theta, 0.0, kPi);
    grid->r_nodes_ = std::move(rr.nodes);
    grid->r_weights_ = std::move(rr.weights);
    grid->theta_nodes_ = std::move(rt.nodes);
    grid->theta_weights_ = std::move(rt.weights);
    grid->dmat_r_ = differentiation_matrix(grid->r_nodes_, barycentric_weights(grid->r_nodes_));
    grid->dmat_theta_ =
        differentiation_matrix(grid->theta_nodes_, barycentric_weights(grid->theta_nodes_));
    return grid;
}

std::vector<std::size_t> Grid2D::boundary_trace() const {
    std::vector<std::size_t> idx(nt());
    for (std::size_t it = 0; it < nt(); ++it) idx[it] = index(nr() - 1, it);
    return idx;
}

double Grid2D::mass() const {
    double acc = 0.0;
    for (std::size_t ir = 0; ir < nr(); ++ir) {
        double rw = r_weights_[ir] * r_nodes_[ir] * r_nodes_[ir];
        for (std::size_t it = 0; it < nt(); ++it)
            acc += rw * theta_weights_[it] * std::sin(theta_nodes_[it]);
    }
    return acc;
}

std::vector<double> Grid2D::d_r(const std::vector<double>& f) const {
    if (f.size() != size()) throw std::invalid_argument("Grid2D::d_r: size mismatch");
    std::vector<double> out(size(), 0.0);
    for (std::size_t i = 0; i < nr(); ++i)
        for (std::size_t j = 0; j < nr(); ++j) {
            double d = dmat_r_[i * nr() + j];
            if (d == 0.0) continue;
            const double* src = f.data() + j * nt();
            double* dst = out.data() + i * nt();
            for (std::size_t it = 0; it < nt(); ++it) dst[it] += d * src[it];
        }
    return out;
}

std::vector<double> Grid2D::d_theta(const std::vector<double>& f) const {
    if (f.size() != size()) throw std::invalid_argument("Grid2D::d_theta: size mismatch");
    std::vector<double> out(size(), 0.0);
    for (std::size_t ir = 0; ir < nr(); ++ir) {
        const double* src = f.data() + ir * nt();
        double* dst = out.data() + ir * nt();
        for (std::size_t i = 0; i < nt(); ++i) {
            double acc = 0.0;
            const double* row = dmat_theta_.data() + i * nt();
            for (std::size_t j = 0; j < nt(); ++j) acc += row[j] * src[j];
            dst[i] = acc;
        }
    }
    return out;
}

std::vector<double> Grid2D::d_r_adjoint(const std::vector<double>& f) const {
    if (f.size() != size()) throw std::invalid_argument("Grid2D::d_r_adjoint: size mismatch");
    std::vector<double> out(size(), 0.0);
    for (std::size_t i = 0; i < nr(); ++i)
        for (std::size_t j = 0; j < nr(); ++j) {
            double d = dmat_r_[j * nr() + i];
            if (d == 0.0) continue;
            const double* src = f.data() + j * nt();
            double* dst = out.data() + i * nt();
            for (std::size_t it = 0; it < nt(); ++it) dst[it] += d * src[it];
        }
    return out;
}

std::vector<double> Grid2D::d_theta_adjoint(const std::vector<double>& f) const {
    if (f.size() != size())
        throw std::invalid_argument("Grid2D::d_theta_adjoint: size mismatch");
    std::vector<double> out(size(), 0.0);
    for (std::size_t ir = 0; ir < nr(); ++ir) {
        const double* src = f.data() + ir * nt();
        double* dst = out.data() + ir * nt();
        for (std::size_t i = 0; i < nt(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < nt(); ++j) acc += dmat_theta_[j * nt() + i] * src[j];
            dst[i] = acc;
        }
    }
    return out;
}

Field2D Field2D::from_function(std::shared_ptr<const Grid2D> grid,
                               const std::function<double(double, double)>& f) {
    Field2D field;
    field.grid_ = std::move(grid);
    const Grid2D& g = *field.grid_;
    field.values_.resize(g.size());
    for (std::size_t ir = 0; ir < g.nr(); ++ir)
        for (std::size_t it = 0; it < g.nt(); ++it)
            field.values_[g.index(ir, it)] = f(g.r_nodes()[ir], g.theta_nodes()[it]);
    field.dr_ = g.d_r(field.values_);
    field.dtheta_ = g.d_theta(field.values_);
    return field;
}

Field2D Field2D::from_callables(std::shared_ptr<const Grid2D> grid,
                                const std::function<double(double, double)>& f,
                                const std::function<double(double, double)>& df_dr,
                                const std::function<double(double, double)>& df_dtheta) {
    Field2D field;
    field.grid_ = std::move(grid);
    const Grid2D& g = *field.grid_;
    field.values_.resize(g.size());
    field.dr_.resize(g.size());
    field.dtheta_.resize(g.size());
    for (std::size_t ir = 0; ir < g.nr(); ++ir)
        for (std::size_t it = 0; it < g.nt(); ++it) {
            std::size_t i = g.index(ir, it);
            double r = g.r_nodes()[ir], th = g.theta_nodes()[it];
            field.values_[i] = f(r, th);
            field.dr_[i] = df_dr(r, th);
            field.dtheta_[i] = df_dtheta(r, th);
        }
    return field;
}

Field2D Field2D::from_profile(std::shared_ptr<const Grid2D> grid, const ProfileSolution& prof) {
    prof.validate();
    Field2D field;
    field.grid_ = std::move(grid);
    const Grid2D& g = *field.grid_;
    std::vector<double> v(g.nt()), q(g.nt());
    for (std::size_t it = 0; it < g.nt(); ++it) {
        v[it] = prof.psi_at(g.theta_nodes()[it]);
        q[it] = prof.psi_prime_at(g.theta_nodes()[it]);
    }
    field.values_.resize(g.size());
    field.dr_.assign(g.size(), 0.0);
    field.dtheta_.resize(g.size());
    for (std::size_t ir = 0; ir < g.nr(); ++ir)
        for (std::size_t it = 0; it < g.nt(); ++it) {
            field.values_[g.index(ir, it)] = v[it];
            field.dtheta_[g.index(ir, it)] = q[it];
        }
    return field;
}

Field2D Field2D::from_values(std::shared_ptr<const Grid2D> grid, std::vector<double> values) {
    Field2D field;
    field.grid_ = std::move(grid);
    const Grid2D& g = *field.grid_;
    if (values.size() != g.size())
        throw std::invalid_argument("Field2D::from_values: size mismatch");
    field.values_ = std::move(values);
    field.dr_ = g.d_r(field.values_);
    field.dtheta_ = g.d_theta(field.values_);
    return field;
}

Field2D& Field2D::add_scaled(const Field2D& other, double c) {
    if (grid_.get() != other.grid_.get())
        throw std::invalid_argument("Field2D::add_scaled: fields live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += c * other.values_[i];
        dr_[i] += c * other.dr_[i];
        dtheta_[i] += c * other.dtheta_[i];
    }
    return *this;
}

}  // namespace frankdefect
