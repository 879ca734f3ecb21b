#include "frankdefect/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "frankdefect/quadrature.hpp"

namespace frankdefect {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Widest allowed rate-fit near station, measured from the axis; it moves inward when the
// axis rate is large so the cubic patch model stays valid. The fit error is even in the
// station distance, so one Richardson step across the 1:2 station pair removes the
// leading term.
constexpr double kFitNear = 1e-4;
constexpr std::size_t kEvalBudget = 2000000;

double q2_factor(double x, double k1, double k3) {
    double c = std::cos(x), s = std::sin(x);
    return k1 * c * c + k3 * s * s;
}

// Cubic coefficient of the odd axis expansion psi = c x + a3 x^3 + O(x^5).
// eps = +1 when the anisotropy factor carries (c - 1)^2 in the x^2 term, -1 for (c + 1)^2
// (the latter occurs for the falling family mirrored about theta = pi).
double series_a3(double c, double eps, double k1, double k3) {
    double d = c - eps;
    double q = (k3 - k1) / (2.0 * k1) * d * d;
    return c * (1.0 - c * c) / 12.0 - 0.5 * c * q;
}

// Solve value = c x + a3(c) x^3 for c by direct iteration; the correction is O(x^2), so a
// handful of passes settle to rounding for any station well inside the expansion's radius.
double fit_rate(double x, double value, double eps, double k1, double k3) {
    double c = value / x;
    for (int pass = 0; pass < 40; ++pass) {
        double next = (value - series_a3(c, eps, k1, k3) * x * x * x) / x;
        if (std::abs(next - c) <= 1e-15 * (1.0 + std::abs(next))) return next;
        c = next;
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "profile: axis rate fit did not settle (station %.3e, value %.17g)", x, value);
    throw std::runtime_error(msg);
}

struct Stop {
    double theta = 0.0;
    int node = -1;     // index into the output grid, or -1
    int station = -1;  // index into the station table, or -1
};

// One adaptive sweep from (theta0, psi0) through the listed stops, which must be sorted in
// the direction of travel. Dormand-Prince 5(4) with first-same-as-last stage reuse; steps
// clip to land exactly on each stop, and a clipped step leaves the free step length alone.
template <typename Record>
void sweep(double k1, double k3, double tol, double theta0, double psi0,
           const std::vector<Stop>& stops, std::size_t& evals, Record&& record) {
    if (stops.empty()) return;
    auto f = [&](double th, double ps) {
        if (++evals > kEvalBudget)
            throw std::runtime_error("profile: integration budget exhausted");
        return profile_rhs(th, ps, k1, k3);
    };
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-15 * (1.0 + std::abs(b)); };

    const double dir = (stops.back().theta >= theta0) ? 1.0 : -1.0;
    double theta = theta0, psi = psi0;
    double fsal = f(theta, psi);

    std::size_t next = 0;
    while (next < stops.size() && near(stops[next].theta, theta)) {
        record(stops[next], psi, fsal);
        ++next;
    }

    double h = dir * 1e-2;
    while (next < stops.size()) {
        double htry = h;
        // Approach the axes geometrically: the equation is singular at 0 and pi, and a
        // station landed on with a long step carries that step's full error undamped.
        double cap = 0.5 * std::min(theta, kPi - theta);
        if (std::abs(htry) > cap) htry = dir * cap;
        bool landing = false;
        double remaining = stops[next].theta - theta;
        if ((remaining - htry) * dir <= 0.0) {
            htry = remaining;
            landing = true;
        }
        if (std::abs(htry) < 1e-14 * (1.0 + std::abs(theta)))
            throw std::runtime_error("profile: integrator stalled");

        double K1 = fsal;
        double K2 = f(theta + htry * (1.0 / 5.0), psi + htry * (1.0 / 5.0) * K1);
        double K3 = f(theta + htry * (3.0 / 10.0),
                      psi + htry * (3.0 / 40.0 * K1 + 9.0 / 40.0 * K2));
        double K4 = f(theta + htry * (4.0 / 5.0),
                      psi + htry * (44.0 / 45.0 * K1 - 56.0 / 15.0 * K2 + 32.0 / 9.0 * K3));
        double K5 = f(theta + htry * (8.0 / 9.0),
                      psi + htry * (19372.0 / 6561.0 * K1 - 25360.0 / 2187.0 * K2 +
                                    64448.0 / 6561.0 * K3 - 212.0 / 729.0 * K4));
        double K6 = f(theta + htry,
                      psi + htry * (9017.0 / 3168.0 * K1 - 355.0 / 33.0 * K2 +
                                    46732.0 / 5247.0 * K3 + 49.0 / 176.0 * K4 -
                                    5103.0 / 18656.0 * K5));
        double y5 = psi + htry * (35.0 / 384.0 * K1 + 500.0 / 1113.0 * K3 +
                                  125.0 / 192.0 * K4 - 2187.0 / 6784.0 * K5 +
                                  11.0 / 84.0 * K6);
        double K7 = f(theta + htry, y5);
        double y4 = psi + htry * (5179.0 / 57600.0 * K1 + 7571.0 / 16695.0 * K3 +
                                  393.0 / 640.0 * K4 - 92097.0 / 339200.0 * K5 +
                                  187.0 / 2100.0 * K6 + 1.0 / 40.0 * K7);

        double err = std::abs(y5 - y4);
        double sc = tol * (1.0 + std::max(std::abs(psi), std::abs(y5)));
        if (err <= sc) {
            theta = landing ? stops[next].theta : theta + htry;
            psi = y5;
            fsal = K7;
            if (landing) {
                record(stops[next], psi, fsal);
                ++next;
                while (next < stops.size() && near(stops[next].theta, theta)) {
                    record(stops[next], psi, fsal);
                    ++next;
                }
            }
            if (!landing) {
                double grow = err > 0.0 ? 0.9 * std::pow(sc / err, 0.2) : 5.0;
                h = htry * std::clamp(grow, 0.2, 5.0);
            }
        } else {
            h = htry * std::clamp(0.9 * std::pow(sc / err, 0.2), 0.1, 0.9);
        }
    }
}

struct Fundamental {
    std::vector<double> nodes;  // final grid (the request plus any layer refinement)
    std::vector<double> psi;    // fundamental values on that grid
    double c0 = 0.0, cpi = 0.0;
    double seam0 = 0.0, seam_pi = 0.0;  // axis distances owned by the endpoint expansions
    double a30 = 0.0, a3pi = 0.0;       // their cubic coefficients (mirror frame at pi)
    double misfit0 = 0.0, misfit_pi = 0.0;
    double mid = 0.0;  // fundamental value at pi/2
    std::size_t evals = 0;
};

// Fit the linear axis rate of one end. The end is described in mirror coordinates: x is
// the distance from the axis, value(x) the rising blown-up variable there. `read` maps a
// recorded profile value to that variable. The fit stations adapt to the rate magnitude: a
// probe at distance 1e-3 sizes the rate, and the stations move inward until c * x is small
// enough for the cubic patch model to hold.
struct EndFit {
    double rate = 0.0;
    double misfit = 0.0;
    double seam = 0.0;  // axis distance of the near station; the series owns [0, seam)
};

template <typename ToTheta, typename ReadValue>
EndFit fit_end_rate(double k1, double k3, double tol, double theta_anchor, double psi_anchor,
                    double axis_distance_of_anchor, double eps, std::size_t& evals,
                    ToTheta&& to_theta, ReadValue&& read) {
    double x_probe = std::min(1e-3, 0.5 * axis_distance_of_anchor);
    double probe_value = std::numeric_limits<double>::quiet_NaN();
    double probe_psi = std::numeric_limits<double>::quiet_NaN();
    {
        std::vector<Stop> stops(1);
        stops[0].theta = to_theta(x_probe);
        sweep(k1, k3, tol, theta_anchor, psi_anchor, stops, evals,
              [&](const Stop&, double value, double) {
                  probe_psi = value;
                  probe_value = read(value);
              });
    }
    double c_probe = probe_value / x_probe;
    double x_near = std::min(kFitNear, 1e-3 / std::max(1.0, std::abs(c_probe)));
    x_near = std::max(x_near, 1e-9);
    x_near = std::min(x_near, 0.5 * x_probe);
    double x_far = 2.0 * x_near;

    double val_near = std::numeric_limits<double>::quiet_NaN();
    double val_far = std::numeric_limits<double>::quiet_NaN();
    {
        std::vector<Stop> stops(2);
        stops[0].theta = to_theta(x_far);
        stops[0].station = 0;
        stops[1].theta = to_theta(x_near);
        stops[1].station = 1;
        sweep(k1, k3, tol, to_theta(x_probe), probe_psi, stops, evals,
              [&](const Stop& s, double value, double) {
                  (s.station == 0 ? val_far : val_near) = read(value);
              });
    }
    double ca = fit_rate(x_near, val_near, eps, k1, k3);
    double cb = fit_rate(x_far, val_far, eps, k1, k3);
    EndFit out;
    out.rate = (16.0 * ca - cb) / 15.0;  // the station error is even in x
    out.misfit = std::abs(ca - cb);
    out.seam = x_near;
    return out;
}

// Replace the requested nodes inside one steep axis layer by a geometric
// ladder: uniform steps of ~0.02 in ln x, i.e. in the mu = ln tan(theta/2)
// stretch where the layer is a unit-scale feature. Keeping any sparser
// requested nodes inside the ladder span would poison 12-point windows with
// mixed scales, so they are dropped. The bottom sits just inside the series
// seam: interpolation below the last node leans on the nearest cluster, and
// only the seam's closed-form fill keeps that data smooth enough to lean on.
// It must not go much deeper, though: stored psi sits next to a multiple of
// pi out there, so finite differences of it pick up an ulp(pi)/sin(theta)
// noise floor that a deeper ladder would push past the residual tolerances.
void enrich_layer_end(std::vector<double>& nodes, double rate, double seam, bool pi_end) {
    if (std::abs(rate) <= 25.0) return;
    double x_hi = std::min(0.4, 15.0 / std::abs(rate));
    double x_bot = std::max(0.8 * seam, 1e-6);
    nodes.erase(std::remove_if(nodes.begin(), nodes.end(),
                               [&](double th) {
                                   double x = pi_end ? kPi - th : th;
                                   return th > 0.0 && th < kPi && x < x_hi;
                               }),
                nodes.end());
    for (double x = x_bot; x < x_hi; x *= 1.0202003)
        nodes.push_back(pi_end ? kPi - x : x);
}

// Integrate the fundamental profile (values in (-pi,0) or (0,pi)) through the grid nodes
// from an interior anchor, fit the axis rates, and fill the series regions. The rate fits
// run first and at a much tighter tolerance than the node sweeps: the rate divides a
// station value by its axis distance, so station error is amplified by 1/x. Each fit's
// near station then becomes the seam below which nodes take the series instead of the
// integrator; inside the seam the patch model is accurate to O((c x)^4) relative, and the
// series values are smooth in the node index, which keeps divided differences of chi clean.
// With enrich_layers set, a steep end (|rate| > 25) gets extra output nodes on a geometric
// ladder through its boundary layer, dense enough that windowed interpolation and
// differentiation of the stored data keep full accuracy there.
Fundamental solve_fundamental(double k1, double k3, double theta_anchor, double psi_anchor,
                              double tol, std::vector<double> nodes, bool enrich_layers) {
    if (!(theta_anchor > 0.0 && theta_anchor < kPi))
        throw std::domain_error("profile: anchor angle must lie inside (0,pi)");
    if (!(std::abs(psi_anchor) > 0.0 && std::abs(psi_anchor) < kPi))
        throw std::domain_error("profile: anchored value must lie in (-pi,0) or (0,pi)");

    // Internal safety margins under the requested tolerance: per-step errors compound
    // across a sweep (strong anisotropy amplifies them mid-domain by ~1e2-1e3 before the
    // axis contraction takes over), and the rate fits divide by station distances.
    const double tol_node = std::max(1e-15, 0.01 * tol);
    const double tol_fit = std::max(1e-15, 1e-4 * tol);
    Fundamental out;

    const bool rising = psi_anchor > 0.0;
    double& seam0 = out.seam0;  // axis distances owned by the series patches
    double& seam_pi = out.seam_pi;
    {
        EndFit fit = fit_end_rate(
            k1, k3, tol_fit, theta_anchor, psi_anchor, theta_anchor, +1.0, out.evals,
            [](double x) { return x; }, [](double value) { return value; });
        out.c0 = fit.rate;
        out.misfit0 = fit.misfit;
        seam0 = fit.seam;
    }
    if (rising) {
        // pi - psi(pi - x) solves the same equation; its rate is the limit slope at pi
        EndFit fit = fit_end_rate(
            k1, k3, tol_fit, theta_anchor, psi_anchor, kPi - theta_anchor, +1.0, out.evals,
            [](double x) { return kPi - x; }, [](double value) { return kPi - value; });
        out.cpi = fit.rate;
        out.misfit_pi = fit.misfit;
        seam_pi = fit.seam;
    } else {
        // psi(pi - x) + pi rises from 0 and carries the (c + 1)^2 anisotropy term
        EndFit fit = fit_end_rate(
            k1, k3, tol_fit, theta_anchor, psi_anchor, kPi - theta_anchor, -1.0, out.evals,
            [](double x) { return kPi - x; }, [](double value) { return value + kPi; });
        out.cpi = -fit.rate;
        out.misfit_pi = fit.misfit;
        seam_pi = fit.seam;
    }
    if (!(out.misfit0 <= 1e-6 * (1.0 + std::abs(out.c0))) ||
        !(out.misfit_pi <= 1e-6 * (1.0 + std::abs(out.cpi)))) {
        char msg[200];
        std::snprintf(msg, sizeof msg,
                      "profile: axis patches disagree between stations (0-end %.3e, pi-end %.3e)",
                      out.misfit0, out.misfit_pi);
        throw std::runtime_error(msg);
    }
    if (rising ? !(out.c0 > 0.0 && out.cpi > 0.0) : !(out.c0 < 0.0 && out.cpi < 0.0))
        throw std::runtime_error("profile: axis rates have the wrong sign for the family");

    if (enrich_layers) {
        enrich_layer_end(nodes, out.c0, seam0, false);
        enrich_layer_end(nodes, out.cpi, seam_pi, true);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end(),
                                [](double a, double b) { return b - a < 1e-12; }),
                    nodes.end());
    }
    out.nodes = std::move(nodes);
    out.psi.assign(out.nodes.size(), std::numeric_limits<double>::quiet_NaN());

    bool have_mid = false;
    std::vector<Stop> down, up;
    {
        Stop mid;
        mid.theta = kPi / 2;
        mid.station = 0;
        (mid.theta < theta_anchor ? down : up).push_back(mid);
    }
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        if (out.nodes[i] < seam0 || out.nodes[i] > kPi - seam_pi) continue;  // series region
        Stop stop;
        stop.theta = out.nodes[i];
        stop.node = (int)i;
        (stop.theta < theta_anchor ? down : up).push_back(stop);
    }
    std::sort(down.begin(), down.end(),
              [](const Stop& a, const Stop& b) { return a.theta > b.theta; });
    std::sort(up.begin(), up.end(),
              [](const Stop& a, const Stop& b) { return a.theta < b.theta; });

    auto record = [&](const Stop& s, double value, double) {
        if (s.node >= 0) out.psi[(std::size_t)s.node] = value;
        if (s.station == 0) {
            out.mid = value;
            have_mid = true;
        }
    };
    sweep(k1, k3, tol_node, theta_anchor, psi_anchor, down, out.evals, record);
    sweep(k1, k3, tol_node, theta_anchor, psi_anchor, up, out.evals, record);
    if (!have_mid) throw std::runtime_error("profile: midpoint sweep incomplete");

    const double a30 = out.a30 = series_a3(out.c0, +1.0, k1, k3);
    const double rate_pi = rising ? out.cpi : -out.cpi;  // rate of the mirrored variable
    const double a3p = out.a3pi = series_a3(rate_pi, rising ? +1.0 : -1.0, k1, k3);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        if (!std::isnan(out.psi[i])) continue;
        double x = out.nodes[i];
        if (x <= 0.0) {
            out.psi[i] = 0.0;
        } else if (x >= kPi) {
            out.psi[i] = rising ? kPi : -kPi;
        } else if (x < seam0) {
            out.psi[i] = out.c0 * x + a30 * x * x * x;
        } else {
            double y = kPi - x;
            double mirrored = rate_pi * y + a3p * y * y * y;
            out.psi[i] = rising ? kPi - mirrored : mirrored - kPi;
        }
    }
    return out;
}

void check_constants(double k1, double k3) {
    if (!(k1 > 0.0) || !(k3 > 0.0) || !std::isfinite(k1) || !std::isfinite(k3))
        throw std::domain_error("profile: elastic constants must be positive and finite");
}

void check_tol(double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-6))
        throw std::domain_error("profile: tolerance must lie in [1e-14, 1e-6]");
}

void check_grid(const std::vector<double>& nodes) {
    if (nodes.size() < 2) throw std::domain_error("profile: need at least two grid nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(nodes[i] >= 0.0 && nodes[i] <= kPi))
            throw std::domain_error("profile: grid nodes must lie in [0,pi]");
        if (i && !(nodes[i] > nodes[i - 1]))
            throw std::domain_error("profile: grid nodes must be strictly ascending");
    }
}

Branch classify(double t) {
    Branch b;
    double nearest_pi = std::round(t / kPi) * kPi;
    if (std::abs(t - nearest_pi) <= 1e-12 * std::max(1.0, std::abs(t))) {
        b.kind = BranchKind::Constant;
        b.shift = 0;
        b.reduced_t = 0.0;
        return b;
    }
    long l = (long)std::llround(t / (2.0 * kPi));
    b.shift = l;
    b.reduced_t = t - 2.0 * kPi * (double)l;
    if (b.reduced_t > 0.0)
        b.kind = (l == 0) ? BranchKind::IncreasingZeroToPi : BranchKind::ShiftedBy2LPi;
    else
        b.kind = (l == 0) ? BranchKind::NegativeMirror : BranchKind::DecreasingTwoPiToPi;
    return b;
}

ProfileSolution constant_solution(double k1, double k3, double t, double tol,
                                  std::vector<double> nodes) {
    ProfileSolution out;
    out.k1 = k1;
    out.k3 = k3;
    out.t = t;
    out.tol = tol;
    out.branch.kind = BranchKind::Constant;
    out.theta_nodes = std::move(nodes);
    out.psi.assign(out.theta_nodes.size(), t);
    out.psi_prime.assign(out.theta_nodes.size(), 0.0);
    out.chi.assign(out.theta_nodes.size(), 0.0);
    return out;
}

ProfileSolution assemble(double k1, double k3, double t, double tol, Branch branch,
                         std::vector<double> nodes, const Fundamental& fund) {
    ProfileSolution out;
    out.k1 = k1;
    out.k3 = k3;
    out.t = t;
    out.tol = tol;
    out.branch = branch;
    out.theta_nodes = std::move(nodes);
    std::size_t n = out.theta_nodes.size();
    out.psi.resize(n);
    out.psi_prime.resize(n);
    out.chi.resize(n);
    const double lift = 2.0 * kPi * (double)branch.shift;
    for (std::size_t i = 0; i < n; ++i) {
        double th = out.theta_nodes[i];
        double f = fund.psi[i];
        out.psi[i] = lift + f;
        if (th <= 0.0) {
            out.psi_prime[i] = fund.c0;
            out.chi[i] = fund.c0;
        } else if (th >= kPi) {
            out.psi_prime[i] = fund.cpi;
            out.chi[i] = fund.cpi;
        } else {
            out.psi_prime[i] = profile_rhs(th, f, k1, k3);
            out.chi[i] = std::sin(f) / std::sin(th);
        }
    }
    out.c0 = fund.c0;
    out.cpi = fund.cpi;
    out.seam0 = fund.seam0;
    out.seam_pi = fund.seam_pi;
    out.cubic0 = fund.a30;
    out.cubic_pi = fund.a3pi;
    out.patch_misfit0 = fund.misfit0;
    out.patch_misfit_pi = fund.misfit_pi;
    out.rhs_evaluations = fund.evals;
    return out;
}

}  // namespace

double profile_rhs(double theta, double psi, double k1, double k3) {
    return std::sqrt(k1) * std::sin(psi) /
           (std::sin(theta) * std::sqrt(q2_factor(psi - theta, k1, k3)));
}

std::string branch_name(BranchKind kind) {
    switch (kind) {
        case BranchKind::Constant: return "constant";
        case BranchKind::IncreasingZeroToPi: return "increasing";
        case BranchKind::DecreasingTwoPiToPi: return "decreasing";
        case BranchKind::ShiftedBy2LPi: return "shifted_increasing";
        case BranchKind::NegativeMirror: return "negative_mirror";
    }
    return "unknown";
}

namespace {

// Fundamental-frame endpoint expansion, written with the same expressions used to fill
// the stored nodes inside the seams so that node hits reproduce them bit for bit.
double end_series(const ProfileSolution& p, double theta) {
    if (theta <= 0.0) return 0.0;
    bool rising = p.c0 > 0.0;
    if (theta >= kPi) return rising ? kPi : -kPi;
    if (theta < p.seam0) return p.c0 * theta + p.cubic0 * theta * theta * theta;
    double y = kPi - theta;
    double rate_pi = rising ? p.cpi : -p.cpi;
    double mirrored = rate_pi * y + p.cubic_pi * y * y * y;
    return rising ? kPi - mirrored : mirrored - kPi;
}

bool in_seam(const ProfileSolution& p, double theta) {
    return theta < p.seam0 || theta > kPi - p.seam_pi;
}

}  // namespace

double ProfileSolution::psi_at(double theta) const {
    if (in_seam(*this, theta))
        return 2.0 * kPi * (double)branch.shift + end_series(*this, theta);
    return windowed_interp(theta_nodes, psi, theta);
}

double ProfileSolution::psi_prime_at(double theta) const {
    if (in_seam(*this, theta)) {
        if (theta <= 0.0) return psi_prime.front();
        if (theta >= kPi) return psi_prime.back();
        return profile_rhs(theta, end_series(*this, theta), k1, k3);
    }
    return windowed_interp(theta_nodes, psi_prime, theta);
}

double ProfileSolution::chi_at(double theta) const {
    if (in_seam(*this, theta)) {
        if (theta <= 0.0) return chi.front();
        if (theta >= kPi) return chi.back();
        return std::sin(end_series(*this, theta)) / std::sin(theta);
    }
    return windowed_interp(theta_nodes, chi, theta);
}

void ProfileSolution::validate() const {
    auto fail = [](const char* what) {
        throw std::runtime_error(std::string("profile invariant violated: ") + what);
    };
    std::size_t n = theta_nodes.size();
    if (n < 2 || psi.size() != n || psi_prime.size() != n || chi.size() != n)
        fail("node/value array sizes");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(theta_nodes[i] >= 0.0 && theta_nodes[i] <= kPi)) fail("grid range [0,pi]");
        if (i && !(theta_nodes[i] > theta_nodes[i - 1])) fail("grid strictly ascending");
        if (!std::isfinite(psi[i]) || !std::isfinite(psi_prime[i]) || !std::isfinite(chi[i]))
            fail("finite values");
    }
    if (branch.kind == BranchKind::Constant) {
        for (std::size_t i = 0; i < n; ++i)
            if (psi[i] != t || psi_prime[i] != 0.0 || chi[i] != 0.0)
                fail("constant branch data");
        return;
    }
    const double lift = 2.0 * kPi * (double)branch.shift;
    const bool rising = branch.reduced_t > 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double step = psi[i + 1] - psi[i];
        if (rising ? step <= 0.0 : step >= 0.0) fail("strict monotonicity");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double f = psi[i] - lift;
        double th = theta_nodes[i];
        if (rising ? !(f >= -1e-9 && f <= kPi + 1e-9) : !(f >= -kPi - 1e-9 && f <= 1e-9))
            fail("fundamental range");
        if (th > 0.0 && th < kPi) {
            if (std::abs(chi[i] * std::sin(th) - std::sin(f)) >
                1e-12 * (1.0 + std::abs(std::sin(f))))
                fail("chi consistency");
            double r = profile_rhs(th, f, k1, k3);
            if (std::abs(psi_prime[i] - r) > 1e-9 * (1.0 + std::abs(r)))
                fail("derivative consistency");
        }
    }
    if (theta_nodes.front() <= 0.0) {
        if (std::abs(psi.front() - lift) > 1e-8) fail("value at theta = 0");
        if (std::abs(chi.front() - c0) > 1e-12) fail("chi limit at 0");
    }
    if (theta_nodes.back() >= kPi) {
        double want = lift + (rising ? kPi : -kPi);
        if (std::abs(psi.back() - want) > 1e-8) fail("value at theta = pi");
        if (std::abs(chi.back() - cpi) > 1e-12) fail("chi limit at pi");
    }
    if (rising ? !(c0 > 0.0 && cpi > 0.0) : !(c0 < 0.0 && cpi < 0.0))
        fail("axis rate signs");
}

void ProfileSolution::write_csv(std::ostream& os) const {
    os << "theta,psi,psi_prime,chi\n";
    char line[200];
    for (std::size_t i = 0; i < theta_nodes.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", theta_nodes[i],
                      psi[i], psi_prime[i], chi[i]);
        os << line;
    }
}

void ProfileSolution::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["k1"] = k1;
    j["k3"] = k3;
    j["t"] = t;
    j["tol"] = tol;
    j["branch"] = {{"name", branch_name(branch.kind)},
                   {"shift", branch.shift},
                   {"reduced_t", branch.reduced_t}};
    j["c0"] = c0;
    j["cpi"] = cpi;
    j["seam0"] = seam0;
    j["seam_pi"] = seam_pi;
    j["cubic0"] = cubic0;
    j["cubic_pi"] = cubic_pi;
    j["patch_misfit0"] = patch_misfit0;
    j["patch_misfit_pi"] = patch_misfit_pi;
    j["rhs_evaluations"] = rhs_evaluations;
    j["theta"] = theta_nodes;
    j["psi"] = psi;
    j["psi_prime"] = psi_prime;
    j["chi"] = chi;
    os << j.dump(2) << '\n';
}

std::vector<double> default_theta_grid(std::size_t n) {
    if (n < 2) throw std::domain_error("profile: grid needs at least two nodes");
    return chebyshev_lobatto((int)n, 0.0, kPi);
}

namespace {

// Shared by the fixed-grid entries (no refinement: the caller's grid is the
// contract) and the default-grid entries (steep layers get extra nodes).
ProfileSolution solve_profile_impl(double k1, double k3, double t, double tol,
                                   std::vector<double> theta_nodes, bool enrich_layers) {
    check_constants(k1, k3);
    check_tol(tol);
    check_grid(theta_nodes);
    if (!(t > 0.0 && t < kPi))
        throw std::domain_error("profile: midpoint value must lie in (0,pi)");
    Branch b;
    b.kind = BranchKind::IncreasingZeroToPi;
    b.shift = 0;
    b.reduced_t = t;
    Fundamental f =
        solve_fundamental(k1, k3, kPi / 2, t, tol, std::move(theta_nodes), enrich_layers);
    return assemble(k1, k3, t, tol, b, std::move(f.nodes), f);
}

ProfileSolution solve_branch_impl(double k1, double k3, double t, double tol,
                                  std::vector<double> theta_nodes, bool enrich_layers) {
    check_constants(k1, k3);
    check_tol(tol);
    check_grid(theta_nodes);
    if (!std::isfinite(t)) throw std::domain_error("profile: midpoint value must be finite");
    Branch b = classify(t);
    if (b.kind == BranchKind::Constant)
        return constant_solution(k1, k3, t, tol, std::move(theta_nodes));
    Fundamental f = solve_fundamental(k1, k3, kPi / 2, b.reduced_t, tol,
                                      std::move(theta_nodes), enrich_layers);
    return assemble(k1, k3, t, tol, b, std::move(f.nodes), f);
}

}  // namespace

ProfileSolution solve_profile(double k1, double k3, double t, double tol) {
    return solve_profile_impl(k1, k3, t, tol, default_theta_grid(), true);
}

ProfileSolution solve_profile_on(double k1, double k3, double t, double tol,
                                 std::vector<double> theta_nodes) {
    return solve_profile_impl(k1, k3, t, tol, std::move(theta_nodes), false);
}

ProfileSolution solve_branch(double k1, double k3, double t, double tol) {
    return solve_branch_impl(k1, k3, t, tol, default_theta_grid(), true);
}

ProfileSolution solve_branch_on(double k1, double k3, double t, double tol,
                                std::vector<double> theta_nodes) {
    return solve_branch_impl(k1, k3, t, tol, std::move(theta_nodes), false);
}

ProfileSolution solve_profile_at(double k1, double k3, double theta_star, double psi_star,
                                 double tol) {
    check_constants(k1, k3);
    check_tol(tol);
    if (!(theta_star > 0.0 && theta_star < kPi))
        throw std::domain_error("profile: anchor angle must lie inside (0,pi)");
    if (!std::isfinite(psi_star))
        throw std::domain_error("profile: anchored value must be finite");
    long l = (long)std::llround(psi_star / (2.0 * kPi));
    double fund_star = psi_star - 2.0 * kPi * (double)l;
    if (std::abs(fund_star) <= 1e-12 || std::abs(std::abs(fund_star) - kPi) <= 1e-12)
        throw std::domain_error("profile: anchored value sits on a constant level");
    Fundamental f =
        solve_fundamental(k1, k3, theta_star, fund_star, tol, default_theta_grid(), true);
    Branch b;
    b.shift = l;
    b.reduced_t = f.mid;
    bool rising = f.mid > 0.0;
    b.kind = rising ? (l == 0 ? BranchKind::IncreasingZeroToPi : BranchKind::ShiftedBy2LPi)
                    : (l == 0 ? BranchKind::NegativeMirror : BranchKind::DecreasingTwoPiToPi);
    double t = 2.0 * kPi * (double)l + f.mid;
    return assemble(k1, k3, t, tol, b, std::move(f.nodes), f);
}

double closed_form_one_constant(double t, double theta) {
    double num = std::cos(t) + std::cos(theta);
    double den = 1.0 + std::cos(t) * std::cos(theta);
    return std::acos(std::clamp(num / den, -1.0, 1.0));
}

std::pair<double, double> bracket_bounds(double t, double theta, double k1, double k3) {
    check_constants(k1, k3);
    if (!(t > 0.0 && t < kPi) || !(theta > 0.0 && theta < kPi))
        throw std::domain_error("bracket_bounds: arguments must lie inside (0,pi)");
    double s1 = std::sqrt(k1), s3 = std::sqrt(k3);
    double p1 = s1 / std::max(s1, s3);
    double p2 = s1 / std::min(s1, s3);
    double base = std::log(std::tan(0.5 * t));
    double growth = std::log(std::tan(0.5 * theta));
    double a = base + p1 * growth;
    double b = base + p2 * growth;
    return {std::min(a, b), std::max(a, b)};
}

std::pair<double, double> endpoint_rates(const ProfileSolution& profile) {
    if (profile.branch.kind != BranchKind::IncreasingZeroToPi &&
        profile.branch.kind != BranchKind::ShiftedBy2LPi)
        throw std::domain_error("endpoint_rates: requires a rising profile");
    const auto& th = profile.theta_nodes;
    std::size_t n = th.size();
    if (n < 5) throw std::domain_error("endpoint_rates: grid too coarse");
    const double lift = 2.0 * kPi * (double)profile.branch.shift;

    // Linear-rate estimates at the two grid nodes nearest each axis; the estimate error is
    // even in the node distance, so one elimination step removes the leading term.
    std::size_t i1 = (th[0] <= 0.0) ? 1 : 0;
    std::size_t i2 = i1 + 1;
    double x1 = th[i1], x2 = th[i2];
    double r1 = (profile.psi[i1] - lift) / x1;
    double r2 = (profile.psi[i2] - lift) / x2;
    double c0 = (x2 * x2 * r1 - x1 * x1 * r2) / (x2 * x2 - x1 * x1);

    std::size_t j1 = (th[n - 1] >= kPi) ? n - 2 : n - 1;
    std::size_t j2 = j1 - 1;
    double y1 = kPi - th[j1], y2 = kPi - th[j2];
    double s1 = (kPi + lift - profile.psi[j1]) / y1;
    double s2 = (kPi + lift - profile.psi[j2]) / y2;
    double cpi = (y2 * y2 * s1 - y1 * y1 * s2) / (y2 * y2 - y1 * y1);

    if (!(std::abs(c0 - profile.c0) <= 1e-6 * (1.0 + std::abs(c0))) ||
        !(std::abs(cpi - profile.cpi) <= 1e-6 * (1.0 + std::abs(cpi))))
        throw std::runtime_error(
            "endpoint_rates: grid data disagree with the fitted axis rates");
    if (!(c0 > 0.0) || !(cpi > 0.0))
        throw std::runtime_error("endpoint_rates: fitted rates must be positive");
    return {c0, cpi};
}

}  // namespace frankdefect
