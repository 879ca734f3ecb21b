#pragma once

#include <functional>
#include <vector>

namespace frankdefect {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on (a,b), exact through degree 2n-1.
Rule1D gauss_legendre(int n, double a, double b);

// Gauss-Radau on (a,b] with the right endpoint b as a node, exact through degree 2n-2.
Rule1D gauss_radau_right(int n, double a, double b);

// Chebyshev-Lobatto points mapped to [a,b], clustered at both ends, ascending.
// n is the number of nodes (>= 2), endpoints included.
std::vector<double> chebyshev_lobatto(int n, double a, double b);

// Adaptive Simpson. Throws std::runtime_error if the depth cap is hit before tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

// Barycentric Lagrange interpolation utilities on arbitrary distinct nodes.
// Weights are computed with log-scaling so node counts in the hundreds are safe.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

double barycentric_eval(const std::vector<double>& nodes, const std::vector<double>& bw,
                        const std::vector<double>& values, double x);

// Dense differentiation matrix D with (Df)_i = f'(x_i) for polynomial interpolants.
// Row-major n x n.
std::vector<double> differentiation_matrix(const std::vector<double>& nodes,
                                           const std::vector<double>& bw);

// Barycentric interpolation through a short window of nodes surrounding x
// (ascending nodes required). Exact at node hits. Unlike a global interpolant,
// the window is immune to wiggle imported from steep features elsewhere.
double windowed_interp(const std::vector<double>& nodes, const std::vector<double>& values,
                       double x);

// Derivative of the same windowed interpolant at x.
double windowed_derivative(const std::vector<double>& nodes, const std::vector<double>& values,
                           double x);

}  // namespace frankdefect
