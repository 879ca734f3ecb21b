#include "frankdefect/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frankdefect {

namespace {

// Legendre P_n(x) and derivative by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    // (1-x^2) P_n' = n (P_{n-1} - x P_n)
    dp = n * (p0 - x * p1) / (1.0 - x * x);
}

double legendre_value(int n, double x) {
    double p, dp;
    legendre(n, x, p, dp);
    return p;
}

// Roots of f on (-1,1) by sign-change scan on a Chebyshev-angle grid plus
// bisection and a Newton polish. Robust for the smooth orthogonal-polynomial
// combinations used below.
std::vector<double> roots_in_open_interval(const std::function<double(double)>& f,
                                           int expected, int scan_factor) {
    int m = std::max(64, scan_factor * expected);
    std::vector<double> xs(m + 1), fs(m + 1);
    const double pi = std::acos(-1.0);
    for (int i = 0; i <= m; ++i) {
        // interior angles only, avoids the +-1 endpoints
        xs[i] = -std::cos(pi * (i + 0.5) / (m + 1));
        fs[i] = f(xs[i]);
    }
    std::vector<double> roots;
    for (int i = 0; i < m; ++i) {
        if (fs[i] == 0.0) { roots.push_back(xs[i]); continue; }
        if (fs[i] * fs[i + 1] < 0.0) {
            double a = xs[i], b = xs[i + 1], fa = fs[i];
            for (int it = 0; it < 80; ++it) {
                double c = 0.5 * (a + b), fc = f(c);
                if (fc == 0.0) { a = b = c; break; }
                if (fa * fc < 0.0) b = c; else { a = c; fa = fc; }
            }
            roots.push_back(0.5 * (a + b));
        }
    }
    if ((int)roots.size() != expected)
        throw std::runtime_error("quadrature: root scan found wrong count");
    return roots;
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");
    std::vector<double> x(n), w(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        // Tricomi-style initial guess, then Newton.
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p, dp;
            legendre(n, t, p, dp);
            double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p, dp;
        legendre(n, t, p, dp);
        x[n - 1 - i] = t;
        w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * x[i];
        r.weights[i] = half * w[i];
    }
    return r;
}

Rule1D gauss_radau_right(int n, double a, double b) {
    if (n < 2) throw std::invalid_argument("gauss_radau_right: n < 2");
    if (!(b > a)) throw std::invalid_argument("gauss_radau_right: empty interval");
    // Left-Radau on [-1,1] fixes x = -1; the free nodes are the roots of
    // (P_{n-1} + P_n)/(1+x). Mirror to get the right-endpoint rule.
    auto h = [n](double x) {
        return (legendre_value(n - 1, x) + legendre_value(n, x)) / (1.0 + x);
    };
    std::vector<double> free_nodes = roots_in_open_interval(h, n - 1, 8);

    std::vector<double> x(n), w(n);
    x[0] = -1.0;
    w[0] = 2.0 / double(n) / double(n);
    for (int i = 0; i < n - 1; ++i) {
        double xi = free_nodes[i];
        double pm = legendre_value(n - 1, xi);
        x[i + 1] = xi;
        w[i + 1] = (1.0 - xi) / (double(n) * double(n) * pm * pm);
    }
    // Mirror: right-endpoint rule has nodes -x, same weights. Keep ascending order.
    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        double xm = -x[n - 1 - i];
        r.nodes[i] = mid + half * xm;
        r.weights[i] = half * w[n - 1 - i];
    }
    r.nodes[n - 1] = b;  // exact endpoint
    return r;
}

std::vector<double> chebyshev_lobatto(int n, double a, double b) {
    if (n < 2) throw std::invalid_argument("chebyshev_lobatto: n < 2");
    std::vector<double> out(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        double c = 0.5 * (1.0 - std::cos(pi * i / (n - 1)));
        out[i] = a + (b - a) * c;
    }
    out[0] = a;
    out[n - 1] = b;
    return out;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth, int max_depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth >= max_depth)
        throw std::runtime_error("adaptive_simpson: depth cap reached before tolerance");
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) { std::swap(a, b); sign = -1.0; }
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return sign * adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth);
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    int n = (int)nodes.size();
    if (n < 2) throw std::invalid_argument("barycentric_weights: need >= 2 nodes");
    // log-magnitude accumulation; weights only matter up to a common scale
    std::vector<double> logw(n, 0.0);
    std::vector<double> sign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = nodes[i] - nodes[j];
            if (d == 0.0) throw std::invalid_argument("barycentric_weights: repeated node");
            logw[i] -= std::log(std::abs(d));
            if (d < 0.0) sign[i] = -sign[i];
        }
    }
    double mx = *std::max_element(logw.begin(), logw.end());
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = sign[i] * std::exp(logw[i] - mx);
    return w;
}

double barycentric_eval(const std::vector<double>& nodes, const std::vector<double>& bw,
                        const std::vector<double>& values, double x) {
    int n = (int)nodes.size();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = x - nodes[i];
        if (d == 0.0) return values[i];
        double t = bw[i] / d;
        num += t * values[i];
        den += t;
    }
    return num / den;
}

std::vector<double> differentiation_matrix(const std::vector<double>& nodes,
                                           const std::vector<double>& bw) {
    int n = (int)nodes.size();
    std::vector<double> D(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double v = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
            D[i * n + j] = v;
            rowsum += v;
        }
        D[i * n + i] = -rowsum;  // negative-sum trick
    }
    return D;
}

namespace {

// 12-node stencil around x. A single global polynomial through hundreds of nodes
// picks up wiggle from steep features elsewhere in the data; a short window keeps
// full accuracy wherever the grid resolves the function locally.
struct Window {
    std::size_t lo = 0;
    std::size_t m = 0;
    double w[12];
};

Window pick_window(const std::vector<double>& nodes, double x) {
    Window win;
    const std::size_t n = nodes.size();
    win.m = std::min<std::size_t>(12, n);
    std::size_t c = (std::size_t)(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    win.lo = c > win.m / 2 ? c - win.m / 2 : 0;
    if (win.lo + win.m > n) win.lo = n - win.m;
    for (std::size_t i = 0; i < win.m; ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < win.m; ++j)
            if (j != i) p *= nodes[win.lo + i] - nodes[win.lo + j];
        win.w[i] = 1.0 / p;
    }
    return win;
}

}  // namespace

double windowed_interp(const std::vector<double>& nodes, const std::vector<double>& values,
                       double x) {
    Window win = pick_window(nodes, x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < win.m; ++i) {
        double d = x - nodes[win.lo + i];
        if (d == 0.0) return values[win.lo + i];
        double q = win.w[i] / d;
        num += q * values[win.lo + i];
        den += q;
    }
    return num / den;
}

double windowed_derivative(const std::vector<double>& nodes, const std::vector<double>& values,
                           double x) {
    Window win = pick_window(nodes, x);
    // Node hit: use the differentiation-matrix row for that node.
    for (std::size_t j = 0; j < win.m; ++j) {
        if (x != nodes[win.lo + j]) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < win.m; ++i) {
            if (i == j) continue;
            double dji = (win.w[i] / win.w[j]) / (nodes[win.lo + j] - nodes[win.lo + i]);
            acc += dji * (values[win.lo + i] - values[win.lo + j]);
        }
        return acc;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < win.m; ++i) {
        double q = win.w[i] / (x - nodes[win.lo + i]);
        num += q * values[win.lo + i];
        den += q;
    }
    double p = num / den;
    double acc = 0.0;
    for (std::size_t i = 0; i < win.m; ++i) {
        double d = x - nodes[win.lo + i];
        acc += win.w[i] / (d * d) * (p - values[win.lo + i]);
    }
    return acc / den;
}

}  // namespace frankdefect
