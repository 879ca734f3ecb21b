#include "frankdefect/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "frankdefect/reduced_energy.hpp"

namespace frankdefect {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Bulk part of the reduced energy as a function of the node values, with the
// partials taken spectrally. The r = 1 boundary line term is omitted: descent
// holds that row fixed, so it shifts every energy by the same constant.
// When grad is non-null it receives the exact derivative of this discrete sum
// in each node value (quadrature weights frozen, chain rule through both
// differentiation matrices).
double bulk_j(const Grid2D& g, const std::vector<double>& v, double k1, double k3,
              std::vector<double>* grad) {
    const double kap = k1 - k3;
    std::vector<double> p = g.d_r(v);
    std::vector<double> q = g.d_theta(v);
    std::vector<double> a, b;
    if (grad) {
        grad->assign(v.size(), 0.0);
        a.assign(v.size(), 0.0);
        b.assign(v.size(), 0.0);
    }
    double j = 0.0;
    for (std::size_t ir = 0; ir < g.nr(); ++ir) {
        double r = g.r_nodes()[ir];
        for (std::size_t it = 0; it < g.nt(); ++it) {
            std::size_t i = g.index(ir, it);
            double th = g.theta_nodes()[it];
            double st = std::sin(th);
            double w = g.weight(ir, it) * r * r * st;
            double x = v[i] - th;
            double sx = std::sin(x), cx = std::cos(x);
            double q1 = k1 * sx * sx + k3 * cx * cx;
            double q2 = k1 * cx * cx + k3 * sx * sx;
            double cross = -2.0 * kap / r * sx * cx;
            double sv = std::sin(v[i]);
            j += w * (q1 * p[i] * p[i] + q2 * q[i] * q[i] / (r * r) + cross * p[i] * q[i] +
                      k1 * sv * sv / (r * r * st * st));
            if (grad) {
                double s2 = 2.0 * sx * cx, c2 = cx * cx - sx * sx;
                (*grad)[i] = kPi * w *
                             (kap * s2 * (p[i] * p[i] - q[i] * q[i] / (r * r)) -
                              2.0 * kap / r * c2 * p[i] * q[i] +
                              k1 * std::sin(2.0 * v[i]) / (r * r * st * st));
                a[i] = kPi * w * (2.0 * q1 * p[i] + cross * q[i]);
                b[i] = kPi * w * (2.0 * q2 * q[i] / (r * r) + cross * p[i]);
            }
        }
    }
    if (grad) {
        std::vector<double> ar = g.d_r_adjoint(a);
        std::vector<double> bt = g.d_theta_adjoint(b);
        for (std::size_t i = 0; i < grad->size(); ++i) (*grad)[i] += ar[i] + bt[i];
    }
    return kPi * j;
}

double euclid(const std::vector<double>& x) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return std::sqrt(s);
}

}  // namespace

double x0_norm(const Field2D& phi) {
    const Grid2D& g = phi.grid();
    double acc = 0.0;
    for (std::size_t ir = 0; ir < g.nr(); ++ir) {
        double r = g.r_nodes()[ir];
        for (std::size_t it = 0; it < g.nt(); ++it) {
            std::size_t i = g.index(ir, it);
            double st = std::sin(g.theta_nodes()[it]);
            double val = phi.values()[i];
            double p = phi.dr()[i];
            double q = phi.dtheta()[i];
            acc += g.weight(ir, it) * r * r * st *
                   (p * p + q * q / (r * r) + val * val / (r * r * st * st));
        }
    }
    return acc;
}

Perturbation make_perturbation(std::shared_ptr<const Grid2D> grid, std::uint64_t seed,
                               int n_modes, const SupportBox& box) {
    if (!(box.r_lo > 0.0 && box.r_lo < box.r_hi && box.r_hi <= 1.0 && box.theta_lo > 0.0 &&
          box.theta_lo < box.theta_hi && box.theta_hi < kPi))
        throw std::domain_error(
            "make_perturbation: support box must be a nondegenerate rectangle inside "
            "(0,1] x (0,pi)");
    if (n_modes < 1) throw std::domain_error("make_perturbation: n_modes must be at least 1");

    struct Mode {
        double c, rlo, rhi, tlo, thi;
        int trig;
    };
    std::mt19937_64 rng(seed);
    // keep the draw order fixed: it is part of the determinism contract
    auto u01 = [&rng] { return (double)(rng() >> 11) * 0x1.0p-53; };
    std::vector<Mode> modes((std::size_t)n_modes);
    for (Mode& m : modes) {
        m.c = 2.0 * u01() - 1.0;
        double wr = box.r_hi - box.r_lo, wt = box.theta_hi - box.theta_lo;
        double lo = 0.25 * u01(), hi = 0.25 * u01();
        m.rlo = box.r_lo + lo * wr;
        m.rhi = box.r_hi - hi * wr;
        lo = 0.25 * u01();
        hi = 0.25 * u01();
        m.tlo = box.theta_lo + lo * wt;
        m.thi = box.theta_hi - hi * wt;
        m.trig = (int)(rng() % 3);
    }

    // cubic-contact window s^3 (1-s)^3: two continuous derivatives across the
    // edges, so global Gauss quadratures of products keep high-order accuracy
    auto win = [](double x, double lo, double hi) {
        if (x <= lo || x >= hi) return 0.0;
        double s = (x - lo) / (hi - lo);
        double u = s * (1.0 - s);
        return u * u * u;
    };
    auto dwin = [](double x, double lo, double hi) {
        if (x <= lo || x >= hi) return 0.0;
        double h = hi - lo;
        double s = (x - lo) / h;
        double u = s * (1.0 - s);
        return 3.0 * u * u * (1.0 - 2.0 * s) / h;
    };
    auto trig = [](int kind, double th) {
        return kind == 0 ? 1.0 : kind == 1 ? std::sin(th) : std::sin(2.0 * th);
    };
    auto dtrig = [](int kind, double th) {
        return kind == 0 ? 0.0 : kind == 1 ? std::cos(th) : 2.0 * std::cos(2.0 * th);
    };

    auto f = [modes, win, trig](double r, double th) {
        double acc = 0.0;
        for (const Mode& m : modes)
            acc += m.c * win(r, m.rlo, m.rhi) * win(th, m.tlo, m.thi) * trig(m.trig, th);
        return acc;
    };
    auto f_r = [modes, win, dwin, trig](double r, double th) {
        double acc = 0.0;
        for (const Mode& m : modes)
            acc += m.c * dwin(r, m.rlo, m.rhi) * win(th, m.tlo, m.thi) * trig(m.trig, th);
        return acc;
    };
    auto f_t = [modes, win, dwin, trig, dtrig](double r, double th) {
        double acc = 0.0;
        for (const Mode& m : modes)
            acc += m.c * win(r, m.rlo, m.rhi) *
                   (dwin(th, m.tlo, m.thi) * trig(m.trig, th) +
                    win(th, m.tlo, m.thi) * dtrig(m.trig, th));
        return acc;
    };

    Field2D raw = Field2D::from_callables(grid, f, f_r, f_t);
    double n2 = x0_norm(raw);
    if (!(n2 > 0.0))
        throw std::domain_error("make_perturbation: no grid node sees the support box");

    // scale through add_scaled so the cached closed-form partials survive;
    // respectral differentiation would smear the window edges
    auto zero = [](double, double) { return 0.0; };
    Field2D scaled = Field2D::from_callables(grid, zero, zero, zero);
    scaled.add_scaled(raw, 1.0 / std::sqrt(n2));

    Perturbation out;
    out.values = std::move(scaled);
    out.support = box;
    out.seed = seed;
    out.n_modes = n_modes;
    out.x0_norm = x0_norm(out.values);
    return out;
}

std::vector<ProbePoint> minimality_probe(const ProfileSolution& prof, const Perturbation& phi,
                                         const std::vector<double>& epsilons) {
    prof.validate();
    auto gp = phi.values.grid_ptr();
    const Grid2D& g = *gp;
    double sup_all = 0.0, sup_trace = 0.0;
    for (double v : phi.values.values()) sup_all = std::max(sup_all, std::abs(v));
    for (std::size_t it = 0; it < g.nt(); ++it)
        sup_trace = std::max(sup_trace, std::abs(phi.values.value(g.nr() - 1, it)));
    if (sup_trace > 1e-12 * (1.0 + sup_all))
        throw std::invalid_argument(
            "minimality_probe: direction does not vanish on the r = 1 boundary row");

    Field2D base = Field2D::from_profile(gp, prof);
    double j0 = reduced_energy(base, prof.k1, prof.k3).total;
    std::vector<ProbePoint> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) {
        if (eps == 0.0) {
            out.push_back({0.0, 0.0});
            continue;
        }
        Field2D f = base;
        f.add_scaled(phi.values, eps);
        out.push_back({eps, reduced_energy(f, prof.k1, prof.k3).total - j0});
    }
    return out;
}

DescentResult descent_minimize(const Field2D& initial, const ProfileSolution& boundary,
                               std::size_t max_iters, double tol) {
    boundary.validate();
    auto gp = initial.grid_ptr();
    const Grid2D& g = *gp;
    const double k1 = boundary.k1, k3 = boundary.k3;

    std::vector<double> v = initial.values();
    const std::size_t last = g.nr() - 1;
    for (std::size_t it = 0; it < g.nt(); ++it)
        v[g.index(last, it)] = boundary.psi_at(g.theta_nodes()[it]);
    auto pin = [&](std::vector<double>& grad) {
        for (std::size_t it = 0; it < g.nt(); ++it) grad[g.index(last, it)] = 0.0;
    };

    std::vector<double> grad;
    double j = bulk_j(g, v, k1, k3, &grad);
    pin(grad);
    double gnorm = euclid(grad);

    std::vector<double> recent{j};  // nonmonotone guard window
    std::vector<double> vprev, gprev, trial(v.size());
    double alpha = 1.0 / (1.0 + gnorm);
    std::size_t iter = 0;
    while (gnorm >= tol * (1.0 + std::abs(j))) {
        if (iter >= max_iters) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "descent_minimize: gradient norm %.3e after %zu iterations "
                          "(needed %.3e)",
                          gnorm, iter, tol * (1.0 + std::abs(j)));
            throw std::runtime_error(msg);
        }
        if (!vprev.empty()) {
            // curvature-fitted step from the last move
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                double s = v[i] - vprev[i];
                double y = grad[i] - gprev[i];
                ss += s * s;
                sy += s * y;
            }
            if (sy > 0.0) alpha = ss / sy;
        }
        double jref = *std::max_element(recent.begin(), recent.end());
        double step = alpha;
        double jt = 0.0;
        for (int back = 0;; ++back) {
            if (back > 60)
                throw std::runtime_error("descent_minimize: line search failed to descend");
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] - step * grad[i];
            jt = bulk_j(g, trial, k1, k3, nullptr);
            if (jt <= jref - 1e-4 * step * gnorm * gnorm) break;
            step *= 0.5;
        }
        vprev = v;
        v.swap(trial);
        gprev = std::move(grad);
        j = bulk_j(g, v, k1, k3, &grad);
        pin(grad);
        gnorm = euclid(grad);
        recent.push_back(j);
        if (recent.size() > 10) recent.erase(recent.begin());
        ++iter;
    }

    DescentResult out;
    out.field = Field2D::from_values(gp, std::move(v));
    out.iterations = iter;
    out.gradient_norm = gnorm;
    out.energy = reduced_energy(out.field, k1, k3).total;
    return out;
}

AxisTrace axis_trace_check(const Field2D& psi) {
    const Grid2D& g = psi.grid();
    if (g.nt() < 3)
        throw std::invalid_argument("axis_trace_check: need at least three theta nodes");
    auto defect = [&](std::size_t ir, std::size_t i0, std::size_t i1, std::size_t i2,
                      bool at_pi) {
        double x0 = g.theta_nodes()[i0], x1 = g.theta_nodes()[i1], x2 = g.theta_nodes()[i2];
        if (at_pi) {
            x0 = kPi - x0;
            x1 = kPi - x1;
            x2 = kPi - x2;
        }
        auto w = [&](std::size_t it) {
            double c = std::cos(psi.value(ir, it));
            return c * c - 1.0;
        };
        double l0 = x1 * x2 / ((x1 - x0) * (x2 - x0));
        double l1 = x0 * x2 / ((x0 - x1) * (x2 - x1));
        double l2 = x0 * x1 / ((x0 - x2) * (x1 - x2));
        return std::abs(l0 * w(i0) + l1 * w(i1) + l2 * w(i2));
    };
    AxisTrace out;
    std::size_t n = g.nt();
    for (std::size_t ir = 0; ir < g.nr(); ++ir) {
        out.trace0 = std::max(out.trace0, defect(ir, 0, 1, 2, false));
        out.trace_pi = std::max(out.trace_pi, defect(ir, n - 1, n - 2, n - 3, true));
    }
    return out;
}

}  // namespace frankdefect
