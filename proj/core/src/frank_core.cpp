#include "frankdefect/frank_core.hpp"

#include <cmath>
#include <stdexcept>

namespace frankdefect {

Mat3 rotation_z(double eta) {
    Mat3 r = Mat3::identity();
    double c = std::cos(eta), s = std::sin(eta);
    r(0, 0) = c; r(0, 1) = -s;
    r(1, 0) = s; r(1, 1) = c;
    return r;
}

Mat3 reflection_x() {
    Mat3 r = Mat3::identity();
    r(0, 0) = -1.0;
    return r;
}

namespace {
// splitmix64: tiny, deterministic across platforms
inline unsigned long long next_u64(unsigned long long& state) {
    unsigned long long z = (state += 0x9E3779B97f4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
inline double next_unit(unsigned long long& state) {
    return (next_u64(state) >> 11) * 0x1.0p-53;
}
}  // namespace

Mat3 random_rotation(unsigned long long& state) {
    // uniform quaternion
    double u1 = next_unit(state), u2 = next_unit(state), u3 = next_unit(state);
    const double twopi = 2.0 * std::acos(-1.0);
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    double q0 = a * std::sin(twopi * u2), q1 = a * std::cos(twopi * u2);
    double q2 = b * std::sin(twopi * u3), q3 = b * std::cos(twopi * u3);
    Mat3 r;
    r(0, 0) = 1 - 2 * (q2 * q2 + q3 * q3);
    r(0, 1) = 2 * (q1 * q2 - q0 * q3);
    r(0, 2) = 2 * (q1 * q3 + q0 * q2);
    r(1, 0) = 2 * (q1 * q2 + q0 * q3);
    r(1, 1) = 1 - 2 * (q1 * q1 + q3 * q3);
    r(1, 2) = 2 * (q2 * q3 - q0 * q1);
    r(2, 0) = 2 * (q1 * q3 - q0 * q2);
    r(2, 1) = 2 * (q2 * q3 + q0 * q1);
    r(2, 2) = 1 - 2 * (q1 * q1 + q2 * q2);
    return r;
}

double DirectorState::tangency_defect() const {
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        double s = u.x * grad(0, j) + u.y * grad(1, j) + u.z * grad(2, j);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

double divergence(const Mat3& g) { return trace(g); }

Vec3 curl_of(const Mat3& g) {
    // (curl u)_i = eps_ijk d_j u_k with g(i,j) = d_j u_i
    return {g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1)};
}

double null_lagrangian_term(const Mat3& g) {
    double tr2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tr2 += g(i, j) * g(j, i);
    double d = trace(g);
    return tr2 - d * d;
}

double energy_density(const DirectorState& s, const FrankConstants& k, double unit_tol) {
    k.validate();
    double n = norm(s.u);
    if (std::abs(n - 1.0) > unit_tol)
        throw std::domain_error("energy_density: director is not unit length");
    double d = divergence(s.grad);
    Vec3 c = curl_of(s.grad);
    double m = dot(s.u, c);
    Vec3 uxc = cross(s.u, c);
    double twoW = k.k1 * d * d + k.k2 * m * m + k.k3 * dot(uxc, uxc) +
                  (k.k2 + k.k4) * null_lagrangian_term(s.grad);
    return 0.5 * twoW;
}

namespace {

// fourth-order central first derivative of a scalar-valued lambda along axis
template <typename F>
double d1(const F& f, const Vec3& x, int axis, double h) {
    Vec3 e{};
    e[axis] = 1.0;
    return (-f(x + e * (2 * h)) + 8.0 * f(x + e * h) - 8.0 * f(x - e * h) + f(x - e * (2 * h))) /
           (12.0 * h);
}

template <typename F>
Vec3 grad_scalar(const F& f, const Vec3& x, double h) {
    return {d1(f, x, 0, h), d1(f, x, 1, h), d1(f, x, 2, h)};
}

template <typename F>
Vec3 curl_vec(const F& f, const Vec3& x, double h) {
    auto comp = [&](int i) { return [&f, i](const Vec3& p) { return f(p)[i]; }; };
    double d2u3 = d1(comp(2), x, 1, h), d3u2 = d1(comp(1), x, 2, h);
    double d3u1 = d1(comp(0), x, 2, h), d1u3 = d1(comp(2), x, 0, h);
    double d1u2 = d1(comp(1), x, 0, h), d2u1 = d1(comp(0), x, 1, h);
    return {d2u3 - d3u2, d3u1 - d1u3, d1u2 - d2u1};
}

}  // namespace

Mat3 fd_gradient(const FieldSampler& field, const Vec3& point, double h) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
        Vec3 e{};
        e[j] = 1.0;
        Vec3 col = (field(point + e * (2 * h)) * -1.0 + field(point + e * h) * 8.0 -
                    field(point - e * h) * 8.0 + field(point - e * (2 * h))) /
                   (12.0 * h);
        for (int i = 0; i < 3; ++i) g(i, j) = col[i];
    }
    return g;
}

Vec3 full_el_residual(const FieldSampler& field, const Vec3& point, const FrankConstants& k,
                      double h) {
    k.validate();
    double r = norm(point);
    if (h <= 0.0) h = 1e-4 * r;
    // nested stencils reach 4h from `point` along each axis
    if (r <= 4.0 * h)
        throw std::domain_error("full_el_residual: point too close to the origin for the stencil");

    auto div_at = [&](const Vec3& x) { return divergence(fd_gradient(field, x, h)); };
    auto curl_at = [&](const Vec3& x) { return curl_vec(field, x, h); };
    auto twist_at = [&](const Vec3& x) { return dot(field(x), curl_at(x)); };
    auto twisted_field = [&](const Vec3& x) { return field(x) * twist_at(x); };

    Vec3 term1 = grad_scalar(div_at, point, h) * (-k.k1);
    Vec3 term2 = curl_vec(curl_at, point, h) * k.k3;
    Vec3 term3{};
    if (k.k2 != k.k3) {
        Vec3 c = curl_at(point);
        term3 = (curl_vec(twisted_field, point, h) + c * twist_at(point)) * (k.k2 - k.k3);
    }
    Vec3 L = term1 + term2 + term3;
    Vec3 u = field(point);
    return L - u * (dot(u, L) / dot(u, u));
}

}  // namespace frankdefect
