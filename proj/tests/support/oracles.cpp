#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gklab::oracles {
namespace {

Mat metric_at(const ModelSpace& space, const Vec& x) {
    return metric_matrix(make_point(space, x));
}

// Christoffel symbols Gamma^c_{ab} at x from central differences of g.
std::vector<Mat> christoffel(const ModelSpace& space, const Vec& x, double h) {
    const int n = space.n;
    std::vector<Mat> dg(static_cast<std::size_t>(n));  // dg[a] = d g / d x_a
    for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp(a) += h;
        xm(a) -= h;
        dg[static_cast<std::size_t>(a)] = (metric_at(space, xp) - metric_at(space, xm)) / (2.0 * h);
    }
    const Mat ginv = metric_at(space, x).inverse();
    std::vector<Mat> gam(static_cast<std::size_t>(n), Mat::Zero(n, n));  // gam[c](a,b)
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int d = 0; d < n; ++d)
                    s += ginv(c, d) * (dg[static_cast<std::size_t>(a)](d, b) +
                                       dg[static_cast<std::size_t>(b)](d, a) -
                                       dg[static_cast<std::size_t>(d)](a, b));
                gam[static_cast<std::size_t>(c)](a, b) = 0.5 * s;
            }
    return gam;
}

}  // namespace

double fd_riemann(const ModelSpace& space, const Vec& x, const Vec& u, const Vec& v,
                  const Vec& w, const Vec& z, double h) {
    if (space.kind == SpaceKind::ConstantNegative)
        throw std::invalid_argument("fd_riemann: chart spaces only");
    const int n = space.n;

    // dgam[a] = d Gamma / d x_a, one more central-difference level
    std::vector<std::vector<Mat>> dgam(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp(a) += h;
        xm(a) -= h;
        const auto gp = christoffel(space, xp, h);
        const auto gm = christoffel(space, xm, h);
        auto& slot = dgam[static_cast<std::size_t>(a)];
        slot.resize(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
            slot[static_cast<std::size_t>(c)] =
                (gp[static_cast<std::size_t>(c)] - gm[static_cast<std::size_t>(c)]) / (2.0 * h);
    }
    const auto gam = christoffel(space, x, h);
    const Mat g = metric_at(space, x);

    // riem(a,b,c,d) = component of R(d_a, d_b) d_c along d_d; lowered and
    // contracted below so that r(u,v,u,v) = <R(u,v)v, u> = K |u ^ v|^2
    auto riem = [&](int a, int b, int c, int d) {
        double r = dgam[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)](b, c) -
                   dgam[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)](a, c);
        for (int e = 0; e < n; ++e)
            r += gam[static_cast<std::size_t>(d)](a, e) * gam[static_cast<std::size_t>(e)](b, c) -
                 gam[static_cast<std::size_t>(d)](b, e) * gam[static_cast<std::size_t>(e)](a, c);
        return r;
    };
    double total = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (u(a) == 0.0 && v(a) == 0.0 && u(b) == 0.0 && v(b) == 0.0) continue;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double lowered = 0.0;
                    for (int e = 0; e < n; ++e) lowered += g(d, e) * riem(a, b, c, e);
                    // <R(u,v)z, w>: fourth slot carries w through the metric
                    total += u(a) * v(b) * z(c) * w(d) * lowered;
                }
        }
    return total;
}

double fd_sectional(const ModelSpace& space, const Vec& x, const Vec& u, const Vec& v, double h) {
    const Point p = make_point(space, x);
    const double uu = metric_inner(p, u, u);
    const double vv = metric_inner(p, v, v);
    const double uv = metric_inner(p, u, v);
    const double denom = uu * vv - uv * uv;
    if (denom <= 0.0) throw std::invalid_argument("fd_sectional: degenerate plane");
    return fd_riemann(space, x, u, v, u, v, h) / denom;
}

Point rk4_geodesic(const Point& p, const Vec& v, int steps) {
    if (p.space.kind != SpaceKind::ConstantNegative)
        throw std::invalid_argument("rk4_geodesic: hyperboloid points only");
    const double k = p.space.k;
    Vec x = p.x;
    Vec dx = v;
    auto acc = [k](const Vec& pos, const Vec& vel) -> Vec {
        return (-k * lorentz_inner(vel, vel)) * pos;
    };
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        const Vec k1x = dx, k1v = acc(x, dx);
        const Vec k2x = dx + 0.5 * dt * k1v, k2v = acc(x + 0.5 * dt * k1x, dx + 0.5 * dt * k1v);
        const Vec k3x = dx + 0.5 * dt * k2v, k3v = acc(x + 0.5 * dt * k2x, dx + 0.5 * dt * k2v);
        const Vec k4x = dx + dt * k3v, k4v = acc(x + dt * k3x, dx + dt * k3v);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        dx += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return renormalized(p.space, x);
}

double simplex_search_distance(const Hull& h, const Point& p, Eigen::VectorXd* weights_out) {
    const int m = static_cast<int>(h.vertices.size());
    auto value = [&](const Eigen::VectorXd& lam) { return distance(p, hull_point(h, lam)); };

    // coarse pass: every composition of `grid` into m parts
    const int grid = m <= 4 ? 16 : 10;
    Eigen::VectorXd best;
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(m);
    std::function<void(int, int)> enumerate = [&](int idx, int left) {
        if (idx == m - 1) {
            counts(idx) = left;
            Eigen::VectorXd lam = counts / static_cast<double>(grid);
            const double val = value(lam);
            if (val < best_val) {
                best_val = val;
                best = lam;
            }
            return;
        }
        for (int c = 0; c <= left; ++c) {
            counts(idx) = c;
            enumerate(idx + 1, left - c);
        }
    };
    enumerate(0, grid);

    // pattern search along weight exchanges e_i - e_j
    double step = 0.5 / grid;
    while (step > 1e-9) {
        bool improved = false;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j || best(j) < step) continue;
                Eigen::VectorXd cand = best;
                cand(i) += step;
                cand(j) -= step;
                const double val = value(cand);
                if (val < best_val - 1e-15) {
                    best_val = val;
                    best = cand;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }
    if (weights_out != nullptr) *weights_out = best;
    return best_val;
}

double sphere_volume_recursive(int n) {
    if (n < 1) throw std::invalid_argument("sphere_volume_recursive: n >= 1");
    if (n == 1) return 2.0;
    if (n == 2) return 2.0 * M_PI;
    return 2.0 * M_PI / (n - 2) * sphere_volume_recursive(n - 2);
}

double sphere_kappa_from_area(const ModelSpace& space, double r, const GridSpec& spec, double h) {
    const Point c = space.origin();
    const double ap = area(make_sphere_surface(c, r + h, spec));
    const double am = area(make_sphere_surface(c, r - h, spec));
    return (std::log(ap) - std::log(am)) / (2.0 * h) / (space.n - 1);
}

double gauss_map_total(const Hull& h, const GridSpec& spec, std::vector<double>* vertex_measure) {
    if (h.space.kind != SpaceKind::Euclidean)
        throw std::invalid_argument("gauss_map_total: Euclidean hulls only");
    const RadialGraph dirs = make_sphere_surface(h.space.origin(), 1.0, spec);
    std::vector<double> measure(h.vertices.size(), 0.0);
    double total = 0.0;
    for (int i = 0; i < dirs.size(); ++i) {
        const Vec& d = dirs.directions[static_cast<std::size_t>(i)];
        int arg = 0;
        double sup = -std::numeric_limits<double>::infinity();
        for (std::size_t vtx = 0; vtx < h.vertices.size(); ++vtx) {
            const double s = h.vertices[vtx].x.dot(d);
            if (s > sup) {
                sup = s;
                arg = static_cast<int>(vtx);
            }
        }
        measure[static_cast<std::size_t>(arg)] += dirs.weights[static_cast<std::size_t>(i)];
        total += dirs.weights[static_cast<std::size_t>(i)];
    }
    if (vertex_measure != nullptr) *vertex_measure = std::move(measure);
    return total;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect_root: no sign change");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace gklab::oracles
