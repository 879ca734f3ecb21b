#include "frankdefect/director.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "frankdefect/quadrature.hpp"

namespace frankdefect {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double uniform01(unsigned long long& state) {
    state += 0x9E3779B97F4A7C15ull;
    unsigned long long z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return (double)(z >> 11) * 0x1.0p-53;
}

void spherical_of(const Vec3& p, double& r, double& theta, double& phi) {
    r = norm(p);
    if (!(r > 0.0)) throw std::domain_error("director: field is singular at the origin");
    theta = std::atan2(std::hypot(p.x, p.y), p.z);
    phi = std::atan2(p.y, p.x);
}

long nearest_integer_or_throw(double raw) {
    double nearest = std::round(raw);
    if (std::abs(raw - nearest) > 0.01) {
        char msg[120];
        std::snprintf(msg, sizeof msg,
                      "degree: integral %.6f is not near an integer; field under-resolved", raw);
        throw std::runtime_error(msg);
    }
    return (long)nearest;
}

}  // namespace

Vec3 DirectorField::at_angles(double theta, double phi) const {
    double sp = chi_(theta) * std::sin(theta);  // sin(psi), stable at the axes
    double cp = std::cos(psi_(theta));
    return normalized(Vec3{sp * std::cos(phi), sp * std::sin(phi), cp});
}

Vec3 DirectorField::operator()(const Vec3& p) const {
    double r, theta, phi;
    spherical_of(p, r, theta, phi);
    return at_angles(theta, phi);
}

DirectorState DirectorField::state(const Vec3& p) const {
    double r, theta, phi;
    spherical_of(p, r, theta, phi);
    double st = std::sin(theta), ct = std::cos(theta);
    double cf = std::cos(phi), sf = std::sin(phi);
    double ch = chi_(theta), pr = prime_(theta);
    double sp = ch * st, cp = std::cos(psi_(theta));

    DirectorState out;
    out.u = normalized(Vec3{sp * cf, sp * sf, cp});
    Vec3 m{cp * cf, cp * sf, -sp};  // du/dpsi
    Vec3 e_theta{ct * cf, ct * sf, -st};
    Vec3 e_phi{-sf, cf, 0.0};
    out.grad = outer(m, e_theta) * (pr / r) + outer(e_phi, e_phi) * (ch / r);
    return out;
}

double DirectorField::grad_norm_sq(double r, double theta) const {
    if (!(r > 0.0)) throw std::domain_error("director: field is singular at the origin");
    double pr = prime_(theta), ch = chi_(theta);
    return (pr * pr + ch * ch) / (r * r);
}

std::function<Vec3(const Vec3&)> DirectorField::sampler() const {
    DirectorField copy = *this;
    return [copy](const Vec3& p) { return copy(p); };
}

DirectorField DirectorField::hedgehog() {
    DirectorField f;
    f.psi_ = [](double th) { return th; };
    f.prime_ = [](double) { return 1.0; };
    f.chi_ = [](double) { return 1.0; };
    return f;
}

DirectorField DirectorField::antipodal_hedgehog() {
    DirectorField f;
    f.psi_ = [](double th) { return th - kPi; };
    f.prime_ = [](double) { return 1.0; };
    f.chi_ = [](double) { return -1.0; };
    return f;
}

DirectorField DirectorField::constant_e3() {
    DirectorField f;
    f.psi_ = [](double) { return 0.0; };
    f.prime_ = [](double) { return 0.0; };
    f.chi_ = [](double) { return 0.0; };
    return f;
}

DirectorField build_director(ProfileSolution profile) {
    profile.validate();
    DirectorField f;
    auto p = std::make_shared<const ProfileSolution>(std::move(profile));
    f.prof_ = p;
    f.psi_ = [p](double th) { return p->psi_at(th); };
    f.prime_ = [p](double th) { return p->psi_prime_at(th); };
    f.chi_ = [p](double th) { return p->chi_at(th); };
    f.rate_scale_ = std::max({1.0, std::abs(p->c0), std::abs(p->cpi)});
    return f;
}

EquivariantSamples sample_equivariant(const DirectorField& field, std::vector<double> r,
                                      std::vector<double> theta) {
    EquivariantSamples s;
    s.r = std::move(r);
    s.theta = std::move(theta);
    s.u.reserve(s.r.size() * s.theta.size());
    for (std::size_t i = 0; i < s.r.size(); ++i)
        for (double th : s.theta) s.u.push_back(field.at_angles(th, 0.0));
    return s;
}

LiftResult lift_equivariant(const EquivariantSamples& samples, double tol) {
    const std::size_t nr = samples.r.size(), nth = samples.theta.size();
    if (nr == 0 || nth < 2 || samples.u.size() != nr * nth)
        throw std::invalid_argument("lift: need nr >= 1, ntheta >= 2, and nr*ntheta samples");
    for (const Vec3& v : samples.u)
        if (std::abs(norm(v) - 1.0) > 1e-6)
            throw std::invalid_argument("lift: samples must be unit vectors");

    LiftResult out;
    out.r = samples.r;
    out.theta = samples.theta;
    out.psi.assign(nr * nth, 0.0);

    // in the phi = 0 half-plane: e_phi^perp = e1, e_phi = e2
    for (const Vec3& v : samples.u) out.max_transverse = std::max(out.max_transverse, std::abs(v.y));
    if (out.max_transverse > tol) {
        char msg[120];
        std::snprintf(msg, sizeof msg,
                      "lift: samples are not equivariant (|u.e_phi| up to %.3e)", out.max_transverse);
        throw std::runtime_error(msg);
    }

    std::size_t anchor = 0;
    for (std::size_t j = 1; j < nth; ++j)
        if (std::abs(samples.theta[j] - kPi / 2) < std::abs(samples.theta[anchor] - kPi / 2))
            anchor = j;

    auto raw = [&](std::size_t i, std::size_t j) {
        const Vec3& v = samples.u[i * nth + j];
        return std::atan2(v.x, v.z);
    };
    auto continue_from = [&](double prev, double value) {
        double d = value - prev;
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        if (std::abs(d) >= kPi * (1.0 - 1e-12))
            throw std::runtime_error("lift: ambiguous unwrapping; neighboring samples are half a turn apart");
        return prev + d;
    };

    for (std::size_t i = 0; i < nr; ++i) {
        double* row = out.psi.data() + i * nth;
        row[anchor] = raw(i, anchor);  // atan2 already lands in (-pi, pi]
        for (std::size_t j = anchor + 1; j < nth; ++j) row[j] = continue_from(row[j - 1], raw(i, j));
        for (std::size_t j = anchor; j-- > 0;) row[j] = continue_from(row[j + 1], raw(i, j));
        for (std::size_t j : {std::size_t{0}, nth - 1}) {
            double b = samples.u[i * nth + j].z;
            out.axis_defect = std::max(out.axis_defect, 1.0 - b * b);
        }
    }
    out.axis_class = (long)std::llround((out.psi[nth - 1] - out.psi[0]) / kPi);
    return out;
}

EquivarianceResidual equivariance_residual(const std::function<Vec3(const Vec3&)>& field,
                                           int n_samples, unsigned long long seed) {
    if (n_samples < 1) throw std::invalid_argument("equivariance_residual: n_samples < 1");
    EquivarianceResidual out;
    unsigned long long state = seed;
    const Mat3 J = reflection_x();
    for (int s = 0; s < n_samples; ++s) {
        Mat3 R = random_rotation(state);
        double radius = 0.5 + 1.5 * uniform01(state);
        Vec3 x = matvec(R, Vec3{0.0, 0.0, radius});
        double eta = 2.0 * kPi * uniform01(state);
        Mat3 Rz = rotation_z(eta);
        out.max_rot = std::max(out.max_rot, norm(field(matvec(Rz, x)) - matvec(Rz, field(x))));
        out.max_ref = std::max(out.max_ref, norm(field(matvec(J, x)) - matvec(J, field(x))));
    }
    return out;
}

DegreeResult degree(const std::function<Vec3(double, double)>& at_angles, int n_theta,
                    int n_phi, double h_fd) {
    if (n_theta < 2 || n_phi < 3 || !(h_fd > 0.0))
        throw std::invalid_argument("degree: need n_theta >= 2, n_phi >= 3, h_fd > 0");
    // chart extension: crossing a pole flips the azimuth by half a turn
    auto eval = [&](double th, double ph) {
        if (th < 0.0) {
            th = -th;
            ph += kPi;
        } else if (th > kPi) {
            th = 2.0 * kPi - th;
            ph += kPi;
        }
        return at_angles(th, ph);
    };
    auto d5 = [&](auto&& f, double x, double h) {
        return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
    };
    Rule1D gauss = gauss_legendre(n_theta, 0.0, kPi);
    double sum = 0.0;
    const double dphi = 2.0 * kPi / n_phi;
    for (std::size_t i = 0; i < gauss.nodes.size(); ++i) {
        double th = gauss.nodes[i];
        for (int j = 0; j < n_phi; ++j) {
            double ph = j * dphi;
            Vec3 u0 = eval(th, ph);
            Vec3 dth = d5([&](double x) { return eval(x, ph); }, th, h_fd);
            Vec3 dph = d5([&](double x) { return eval(th, x); }, ph, h_fd);
            sum += gauss.weights[i] * dphi * dot(u0, cross(dth, dph));
        }
    }
    DegreeResult out;
    out.raw = sum / (4.0 * kPi);
    out.value = nearest_integer_or_throw(out.raw);
    return out;
}

DegreeResult degree(const DirectorField& field) {
    // Analytic partials of the symmetric ansatz over the band where the grid resolves the
    // profile; the axis caps (layers of width ~1/rate live there) are integrated exactly,
    // since after the azimuthal average the integrand is d/dtheta of -cos(psi). Asking the
    // grid interpolant for layer derivatives would cap the accuracy near 1e-5.
    auto integrand = [&](double th, double ph) {
        double st = std::sin(th);
        double cf = std::cos(ph), sf = std::sin(ph);
        double ch = field.chi(th), pr = field.psi_prime(th);
        double sp = ch * st, cp = std::cos(field.psi(th));
        Vec3 u{sp * cf, sp * sf, cp};
        Vec3 dth = Vec3{cp * cf, cp * sf, -sp} * pr;
        Vec3 dph = Vec3{-sf, cf, 0.0} * sp;
        return dot(u, cross(dth, dph));
    };
    double cut = std::min(10.0 / field.axis_rate_scale(), 0.3);
    double caps = (std::cos(field.psi(0.0)) - std::cos(field.psi(cut))) +
                  (std::cos(field.psi(kPi - cut)) - std::cos(field.psi(kPi)));
    const int n_phi = 8;
    const double dphi = 2.0 * kPi / n_phi;
    double sum = 0.0;
    Rule1D gauss = gauss_legendre(128, cut, kPi - cut);
    for (std::size_t i = 0; i < gauss.nodes.size(); ++i)
        for (int j = 0; j < n_phi; ++j)
            sum += gauss.weights[i] * dphi * integrand(gauss.nodes[i], j * dphi);
    DegreeResult out;
    out.raw = 0.5 * caps + sum / (4.0 * kPi);
    out.value = nearest_integer_or_throw(out.raw);
    return out;
}

}  // namespace frankdefect
