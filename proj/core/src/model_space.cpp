#include "gklab/model_space.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace gklab {
namespace {

constexpr double kPoleEps = 1e-12;
constexpr double kGeodesicStep = 1e-3;  // max arc length per RK4 step
constexpr double kLogTol = 1e-10;
constexpr int kLogMaxIter = 100;

// r*cosh(r) - sinh(r), series below 0.1 (direct form cancels to O(r^3)).
double rcosh_minus_sinh(double r) {
    if (std::abs(r) < 0.1) {
        const double r2 = r * r;
        return r * r2 * (1.0 / 3.0 + r2 * (1.0 / 30.0 + r2 * (1.0 / 840.0 + r2 / 45360.0)));
    }
    return r * std::cosh(r) - std::sinh(r);
}

// 1 - (sinh(r)/r)^2, series below 0.1.
double one_minus_sinh_factor_sq(double r) {
    const double r2 = r * r;
    if (std::abs(r) < 0.1) {
        return -r2 * (1.0 / 3.0 + r2 * (2.0 / 45.0 + r2 * (1.0 / 315.0 + r2 * 2.0 / 14175.0)));
    }
    const double s = std::sinh(r) / r;
    return 1.0 - s * s;
}

double cubic_part(double r, double r0, double c) {
    const double t = r - r0;
    return t > 0.0 ? c * t * t * t : 0.0;
}

Vec warp_acceleration(const WarpProfile& w, const Vec& x, const Vec& xd) {
    const int n = static_cast<int>(x.size());
    const double r = x.norm();
    if (r < kPoleEps) return Vec::Zero(n);

    const Vec rho = x / r;
    const double a = w.metric_factor(r);
    const double ap = w.metric_factor_deriv(r);
    const double defi = w.metric_factor_deficit(r);  // (1 - A)/r
    const double rd = rho.dot(xd);
    const double sigma = xd.squaredNorm() - rd * rd;  // >= 0

    // Polar geodesic equations written so every coefficient stays finite at
    // the pole: rdd = sigma*(A/r + A'/2) enters only through (1-A)/r * A.
    Vec acc = (-ap * rd) * xd;
    const double rho_coeff =
        0.5 * ap * sigma + ap * rd * rd - defi * a * sigma - 0.5 * (1.0 - a) * ap * sigma;
    acc += rho_coeff * rho;
    acc /= a;
    return acc;
}

struct GeoState {
    Vec x;
    Vec v;
};

GeoState geo_derivative(const WarpProfile& w, const GeoState& s) {
    return {s.v, warp_acceleration(w, s.x, s.v)};
}

GeoState rk4_geodesic(const WarpProfile& w, GeoState s, double total_time, double speed) {
    const double length = std::abs(total_time) * speed;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(length / kGeodesicStep)));
    const double h = total_time / nsteps;
    for (int i = 0; i < nsteps; ++i) {
        const GeoState k1 = geo_derivative(w, s);
        const GeoState k2 = geo_derivative(w, {s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v});
        const GeoState k3 = geo_derivative(w, {s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v});
        const GeoState k4 = geo_derivative(w, {s.x + h * k3.x, s.v + h * k3.v});
        s.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    }
    return s;
}

// Lift the warped chart to the unit hyperboloid, pretending phi = sinh.
// Exact inside the sinh core, a serviceable first guess outside it.
Vec lift_to_hyperboloid(const Vec& x) {
    const int n = static_cast<int>(x.size());
    Vec out(n + 1);
    const double r = x.norm();
    if (r < kPoleEps) {
        out.setZero();
        out(0) = 1.0;
        return out;
    }
    out(0) = std::cosh(r);
    out.tail(n) = (std::sinh(r) / r) * x;
    return out;
}

double lorentz_inner_ambient(const Vec& a, const Vec& b) {
    double s = -a(0) * b(0);
    for (int i = 1; i < a.size(); ++i) s += a(i) * b(i);
    return s;
}

// Initial velocity guess for the warped log map via the sinh-core
// correspondence with H^n.
Vec warp_log_guess(const Vec& p, const Vec& q) {
    const int n = static_cast<int>(p.size());
    const Vec P = lift_to_hyperboloid(p);
    const Vec Q = lift_to_hyperboloid(q);
    const Vec delta = P - Q;
    const double dd = std::max(0.0, lorentz_inner_ambient(delta, delta));
    const double d = 2.0 * std::asinh(0.5 * std::sqrt(dd));
    if (d < kPoleEps) return Vec::Zero(n);

    const double sh2 = std::sinh(0.5 * d);
    const Vec u = ((Q - P) - (2.0 * sh2 * sh2) * P) / std::sinh(d);
    const Vec w = d * u;

    const double rp = p.norm();
    if (rp < kPoleEps) return w.tail(n).eval();

    const Vec rho = p / rp;
    Vec u_rad(n + 1);
    u_rad(0) = std::sinh(rp);
    u_rad.tail(n) = std::cosh(rp) * rho;
    const double a = lorentz_inner_ambient(w, u_rad);
    const Vec t = w.tail(n) - a * std::cosh(rp) * rho;
    return (a * rho + (rp / std::sinh(rp)) * t).eval();
}

}  // namespace

// -------------------------------------------------------------------------
// WarpProfile

double WarpProfile::value(double r) const { return std::sinh(r) + cubic_part(r, r0, c); }

double WarpProfile::deriv(double r) const {
    const double t = r - r0;
    return std::cosh(r) + (t > 0.0 ? 3.0 * c * t * t : 0.0);
}

double WarpProfile::deriv2(double r) const {
    const double t = r - r0;
    return std::sinh(r) + (t > 0.0 ? 6.0 * c * t : 0.0);
}

double WarpProfile::radial_curvature(double r) const {
    if (r <= r0) return -1.0;  // exactly sinh there
    return -deriv2(r) / value(r);
}

double WarpProfile::tangential_curvature(double r) const {
    if (r <= r0) return -1.0;
    // 1 - phi'^2 = -(phi' - 1)(phi' + 1), with phi' - 1 kept cancellation-free.
    const double t = r - r0;
    const double sh = std::sinh(0.5 * r);
    const double dm1 = 2.0 * sh * sh + 3.0 * c * t * t;  // phi' - 1
    const double phi = value(r);
    return -dm1 * (deriv(r) + 1.0) / (phi * phi);
}

double WarpProfile::metric_factor(double r) const {
    if (r < kPoleEps) return 1.0;
    const double f = value(r) / r;
    return f * f;
}

double WarpProfile::metric_factor_deriv(double r) const {
    if (r < kPoleEps) return 0.0;
    const double t = r - r0;
    double num = rcosh_minus_sinh(r);  // phi' r - phi, sinh part
    if (t > 0.0) num += c * t * t * (3.0 * r - t);
    return 2.0 * (value(r) / r) * num / (r * r);
}

double WarpProfile::metric_factor_deficit(double r) const {
    if (r < kPoleEps) return 0.0;
    double d = one_minus_sinh_factor_sq(r) / r;
    const double q = cubic_part(r, r0, c);
    if (q > 0.0) d -= q * (2.0 * std::sinh(r) / r + q / r) / (r * r);
    return d;
}

// -------------------------------------------------------------------------
// ModelSpace

ModelSpace ModelSpace::euclidean(int n) {
    if (n < 2 || n > kMaxDim) throw DomainError("model dimension out of range");
    ModelSpace s;
    s.kind = SpaceKind::Euclidean;
    s.n = n;
    s.k = 0.0;
    return s;
}

ModelSpace ModelSpace::hyperbolic(int n, double k) {
    if (n < 2 || n > kMaxDim) throw DomainError("model dimension out of range");
    if (!(k < 0.0)) throw DomainError("constant-curvature space needs k < 0");
    ModelSpace s;
    s.kind = SpaceKind::ConstantNegative;
    s.n = n;
    s.k = k;
    return s;
}

ModelSpace ModelSpace::warped(int n, double r0, double c) {
    if (n < 2 || n > kMaxDim) throw DomainError("model dimension out of range");
    if (!(r0 > 0.0)) throw DomainError("warp profile needs r0 > 0");
    if (c < 0.0) throw DomainError("warp profile needs c >= 0");
    ModelSpace s;
    s.kind = SpaceKind::Warped;
    s.n = n;
    s.k = -1.0;  // curvature of the sinh core
    s.warp = {r0, c};
    return s;
}

Point ModelSpace::origin() const {
    Vec x = Vec::Zero(ambient_dim());
    if (kind == SpaceKind::ConstantNegative) x(0) = 1.0 / std::sqrt(-k);
    return {*this, x};
}

bool ModelSpace::operator==(const ModelSpace& o) const {
    return kind == o.kind && n == o.n && k == o.k && warp.r0 == o.warp.r0 && warp.c == o.warp.c;
}

void check_same_space(const ModelSpace& a, const ModelSpace& b, const char* where) {
    if (a != b) throw SpaceMismatchError(std::string("mixed model spaces in ") + where);
}

// -------------------------------------------------------------------------
// Points, tangent vectors, metric

double lorentz_inner(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DomainError("lorentz_inner: size mismatch");
    return lorentz_inner_ambient(a, b);
}

Point renormalized(const ModelSpace& space, Vec x) {
    if (x.size() != space.ambient_dim()) throw DomainError("point has wrong dimension");
    if (space.kind == SpaceKind::ConstantNegative) {
        if (!(x(0) > 0.0)) throw DomainError("hyperboloid point must have x0 > 0");
        const double r2 = -1.0 / space.k;
        x(0) = std::sqrt(r2 + x.tail(space.n).squaredNorm());
    }
    return {space, std::move(x)};
}

Point make_point(const ModelSpace& space, const Vec& chart_coords) {
    if (space.kind == SpaceKind::ConstantNegative) {
        if (chart_coords.size() == space.n) {
            Vec x(space.n + 1);
            x(0) = 1.0;
            x.tail(space.n) = chart_coords;
            return renormalized(space, std::move(x));
        }
        if (chart_coords.size() == space.n + 1) {
            const double want = 1.0 / space.k;
            const double got = lorentz_inner_ambient(chart_coords, chart_coords);
            if (std::abs(got - want) > 1e-6 * std::max(1.0, std::abs(want)))
                throw DomainError("point is not on the hyperboloid sheet");
            return renormalized(space, chart_coords);
        }
        throw DomainError("point has wrong dimension");
    }
    if (chart_coords.size() != space.n) throw DomainError("point has wrong dimension");
    return {space, chart_coords};
}

Mat metric_matrix(const Point& p) {
    const int m = static_cast<int>(p.x.size());
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return Mat::Identity(m, m);
        case SpaceKind::ConstantNegative: {
            Mat g = Mat::Identity(m, m);
            g(0, 0) = -1.0;  // ambient bilinear form; restrict to the tangent space
            return g;
        }
        case SpaceKind::Warped: {
            const double r = p.x.norm();
            if (r < kPoleEps) return Mat::Identity(m, m);
            const Vec rho = p.x / r;
            const double a = p.space.warp.metric_factor(r);
            return (a * Mat::Identity(m, m) + (1.0 - a) * (rho * rho.transpose())).eval();
        }
    }
    throw Error("unreachable");
}

double metric_inner(const Point& p, const Vec& u, const Vec& v) {
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return u.dot(v);
        case SpaceKind::ConstantNegative:
            return lorentz_inner_ambient(u, v);
        case SpaceKind::Warped: {
            const double r = p.x.norm();
            if (r < kPoleEps) return u.dot(v);
            const Vec rho = p.x / r;
            const double a = p.space.warp.metric_factor(r);
            return a * u.dot(v) + (1.0 - a) * rho.dot(u) * rho.dot(v);
        }
    }
    throw Error("unreachable");
}

double metric_norm(const Point& p, const Vec& u) {
    return std::sqrt(std::max(0.0, metric_inner(p, u, u)));
}

Vec project_to_tangent(const Point& p, const Vec& w) {
    if (p.space.kind != SpaceKind::ConstantNegative) return w;
    // subtract the normal component; <p,p>_L = 1/k
    return w - p.space.k * lorentz_inner_ambient(w, p.x) * p.x;
}

double inner(const TangentVector& u, const TangentVector& v) {
    check_same_space(u.base.space, v.base.space, "inner");
    return metric_inner(u.base, u.v, v.v);
}

double norm(const TangentVector& u) { return metric_norm(u.base, u.v); }

// -------------------------------------------------------------------------
// Exponential / logarithm / distance / transport

Point exp_map(const Point& p, const TangentVector& v) {
    check_same_space(p.space, v.base.space, "exp_map");
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return {p.space, p.x + v.v};
        case SpaceKind::ConstantNegative: {
            const double r = 1.0 / std::sqrt(-p.space.k);
            const double s = metric_norm(p, v.v);
            if (s < kPoleEps) return p;
            const Vec y = std::cosh(s / r) * p.x + (r * std::sinh(s / r) / s) * v.v;
            return renormalized(p.space, y);
        }
        case SpaceKind::Warped: {
            const double s = metric_norm(p, v.v);
            if (s < kPoleEps) return p;
            // rays from the pole are unit-speed geodesics of the chart itself
            if (p.x.norm() < kPoleEps) return {p.space, p.x + v.v};
            const GeoState end = rk4_geodesic(p.space.warp, {p.x, v.v}, 1.0, s);
            return {p.space, end.x};
        }
    }
    throw Error("unreachable");
}

GeodesicEnd geodesic_endpoint(const Point& p, const TangentVector& v) {
    check_same_space(p.space, v.base.space, "geodesic_endpoint");
    switch (p.space.kind) {
        case SpaceKind::Euclidean: {
            Point q{p.space, p.x + v.v};
            return {q, {q, v.v}};
        }
        case SpaceKind::ConstantNegative: {
            const double r = 1.0 / std::sqrt(-p.space.k);
            const double s = metric_norm(p, v.v);
            if (s < kPoleEps) return {p, {p, v.v}};
            const Vec u = v.v / s;
            Point q = renormalized(p.space, std::cosh(s / r) * p.x + (r * std::sinh(s / r)) * u);
            Vec vel = (std::sinh(s / r) / r) * p.x + std::cosh(s / r) * u;
            return {q, {q, (s * vel).eval()}};
        }
        case SpaceKind::Warped: {
            const double s = metric_norm(p, v.v);
            if (s < kPoleEps) return {p, {p, v.v}};
            if (p.x.norm() < kPoleEps) {
                Point q{p.space, p.x + v.v};
                return {q, {q, v.v}};
            }
            const GeoState end = rk4_geodesic(p.space.warp, {p.x, v.v}, 1.0, s);
            Point q{p.space, end.x};
            return {q, {q, end.v}};
        }
    }
    throw Error("unreachable");
}

double distance(const Point& p, const Point& q) {
    check_same_space(p.space, q.space, "distance");
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return (q.x - p.x).norm();
        case SpaceKind::ConstantNegative: {
            // chordal form: stays accurate for nearby points where acosh of the
            // inner product loses every significant digit
            const double r = 1.0 / std::sqrt(-p.space.k);
            const Vec delta = p.x - q.x;
            const double dd = std::max(0.0, lorentz_inner_ambient(delta, delta));
            return 2.0 * r * std::asinh(0.5 * std::sqrt(dd) / r);
        }
        case SpaceKind::Warped:
            if (p.x.norm() < kPoleEps) return q.x.norm();
            if (q.x.norm() < kPoleEps) return p.x.norm();
            return norm(log_map(p, q));
    }
    throw Error("unreachable");
}

TangentVector log_map(const Point& p, const Point& q) {
    check_same_space(p.space, q.space, "log_map");
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return {p, q.x - p.x};
        case SpaceKind::ConstantNegative: {
            const double r = 1.0 / std::sqrt(-p.space.k);
            const double d = distance(p, q);
            if (d < kPoleEps) return {p, Vec::Zero(p.x.size())};
            const double sh2 = std::sinh(0.5 * d / r);
            const Vec u = ((q.x - p.x) - (2.0 * sh2 * sh2) * p.x) / (r * std::sinh(d / r));
            return {p, d * u};
        }
        case SpaceKind::Warped: {
            if ((q.x - p.x).norm() < kPoleEps) return {p, Vec::Zero(p.x.size())};
            // from the pole the chart is exactly polar: log is the identity
            if (p.x.norm() < kPoleEps) return {p, q.x - p.x};
            Vec v = warp_log_guess(p.x, q.x);
            Vec f = exp_map(p, {p, v}).x - q.x;
            double fn = f.norm();
            const double tol = kLogTol * (1.0 + q.x.norm());
            const int n = p.space.n;
            for (int iter = 0; iter < kLogMaxIter; ++iter) {
                if (fn <= tol) return {p, v};
                Mat jac(n, n);
                const double h = 1e-7 * (1.0 + v.norm());
                for (int i = 0; i < n; ++i) {
                    Vec vi = v;
                    vi(i) += h;
                    jac.col(i) = (exp_map(p, {p, vi}).x - q.x - f) / h;
                }
                const Vec dv = jac.partialPivLu().solve(-f);
                double alpha = 1.0;
                bool accepted = false;
                for (int back = 0; back < 30; ++back) {
                    const Vec v2 = v + alpha * dv;
                    const Vec f2 = exp_map(p, {p, v2}).x - q.x;
                    if (f2.norm() < fn) {
                        v = v2;
                        f = f2;
                        fn = f2.norm();
                        accepted = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if (!accepted) throw ConvergenceError("log_map: line search stalled", fn);
            }
            if (fn <= tol) return {p, v};
            throw ConvergenceError("log_map: Newton did not converge", fn);
        }
    }
    throw Error("unreachable");
}

TangentVector parallel_transport(const Point& p, const Point& q, const TangentVector& v) {
    check_same_space(p.space, q.space, "parallel_transport");
    check_same_space(p.space, v.base.space, "parallel_transport");
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return {q, v.v};
        case SpaceKind::ConstantNegative: {
            const double r = 1.0 / std::sqrt(-p.space.k);
            const double d = distance(p, q);
            if (d < kPoleEps) return {q, project_to_tangent(q, v.v)};
            const Vec u = log_map(p, q).v / d;
            const double a = lorentz_inner_ambient(v.v, u);
            const Vec w = v.v - a * u;
            const Vec u_out = (std::sinh(d / r) / r) * p.x + std::cosh(d / r) * u;
            return {q, project_to_tangent(q, a * u_out + w)};
        }
        case SpaceKind::Warped: {
            const TangentVector lg = log_map(p, q);
            const double s = norm(lg);
            if (s < kPoleEps) return {q, v.v};
            const WarpProfile& wp = p.space.warp;
            // transport ODE, with Gamma(xdot, w) recovered from the quadratic
            // acceleration by polarization
            Vec x = p.x, xd = lg.v, w = v.v;
            const int nsteps =
                std::max(1, static_cast<int>(std::ceil(s / kGeodesicStep)));
            const double h = 1.0 / nsteps;
            auto deriv = [&wp](const Vec& xx, const Vec& vv, const Vec& ww) {
                const Vec a_sum = warp_acceleration(wp, xx, vv + ww);
                const Vec a_v = warp_acceleration(wp, xx, vv);
                const Vec a_w = warp_acceleration(wp, xx, ww);
                return std::array<Vec, 3>{vv, a_v, 0.5 * (a_sum - a_v - a_w)};
            };
            for (int i = 0; i < nsteps; ++i) {
                const auto k1 = deriv(x, xd, w);
                const auto k2 = deriv(x + 0.5 * h * k1[0], xd + 0.5 * h * k1[1], w + 0.5 * h * k1[2]);
                const auto k3 = deriv(x + 0.5 * h * k2[0], xd + 0.5 * h * k2[1], w + 0.5 * h * k2[2]);
                const auto k4 = deriv(x + h * k3[0], xd + h * k3[1], w + h * k3[2]);
                x += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                xd += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
                w += (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
            }
            return {q, w};
        }
    }
    throw Error("unreachable");
}

// -------------------------------------------------------------------------
// Curvature

double riemann(const Point& p, const Vec& u, const Vec& v, const Vec& w, const Vec& z) {
    switch (p.space.kind) {
        case SpaceKind::Euclidean:
            return 0.0;
        case SpaceKind::ConstantNegative: {
            const double guw = metric_inner(p, u, w), gvz = metric_inner(p, v, z);
            const double guz = metric_inner(p, u, z), gvw = metric_inner(p, v, w);
            return p.space.k * (guw * gvz - guz * gvw);
        }
        case SpaceKind::Warped: {
            const double r = p.x.norm();
            const WarpProfile& wp = p.space.warp;
            const double kt = wp.tangential_curvature(r);
            const double kr = wp.radial_curvature(r);
            const double guw = metric_inner(p, u, w), gvz = metric_inner(p, v, z);
            const double guz = metric_inner(p, u, z), gvw = metric_inner(p, v, w);
            double out = kt * (guw * gvz - guz * gvw);
            if (kr != kt && r >= kPoleEps) {
                // mixed radial/tangential correction; radial components are
                // plain chart dot products because g is block diagonal there
                const Vec rho = p.x / r;
                const double ur = rho.dot(u), vr = rho.dot(v);
                const double wr = rho.dot(w), zr = rho.dot(z);
                const Vec a = ur * (v - vr * rho) - vr * (u - ur * rho);
                const Vec b = wr * (z - zr * rho) - zr * (w - wr * rho);
                const double afac = wp.metric_factor(r);
                out += (kr - kt) * afac * a.dot(b);
            }
            return out;
        }
    }
    throw Error("unreachable");
}

double riemann_component(const FrameField& f, int i, int j, int k, int l) {
    return riemann(f.base, f[i], f[j], f[k], f[l]);
}

double sectional_curvature(const Point& p, const TangentVector& u, const TangentVector& v) {
    check_same_space(p.space, u.base.space, "sectional_curvature");
    check_same_space(p.space, v.base.space, "sectional_curvature");
    const double guu = metric_inner(p, u.v, u.v);
    const double gvv = metric_inner(p, v.v, v.v);
    const double guv = metric_inner(p, u.v, v.v);
    const double det = guu * gvv - guv * guv;
    if (det < 1e-14 * std::max(1.0, guu * gvv))
        throw DomainError("sectional_curvature: degenerate plane");
    return riemann(p, u.v, v.v, u.v, v.v) / det;
}

int wedge_index(int n, int i, int j) {
    if (i < 0 || j <= i || j >= n) throw DomainError("wedge_index: bad pair");
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

WedgeMat curvature_operator_matrix(const FrameField& f) {
    const int n = f.base.space.n;
    const int m = n * (n - 1) / 2;
    WedgeMat op(m, m);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l)
                    op(wedge_index(n, i, j), wedge_index(n, k, l)) =
                        riemann_component(f, i, j, k, l);
    return op;
}

// -------------------------------------------------------------------------
// Frames

namespace {

std::vector<Vec> gram_schmidt(const Point& p, const std::vector<Vec>& candidates, int want) {
    std::vector<Vec> out;
    for (const Vec& cand : candidates) {
        if (static_cast<int>(out.size()) == want) break;
        Vec v = project_to_tangent(p, cand);
        for (const Vec& e : out) v -= metric_inner(p, v, e) * e;
        const double nv = metric_norm(p, v);
        if (nv < 1e-8) continue;
        out.push_back(v / nv);
    }
    if (static_cast<int>(out.size()) != want)
        throw ConvergenceError("could not complete an orthonormal frame");
    return out;
}

std::vector<Vec> axis_candidates(const Point& p) {
    const int m = static_cast<int>(p.x.size());
    std::vector<Vec> axes;
    axes.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) axes.push_back(Vec::Unit(m, i));
    if (p.space.kind == SpaceKind::ConstantNegative) {
        // spatial axes first: at the origin they already span the tangent space
        std::rotate(axes.begin(), axes.begin() + 1, axes.end());
    }
    return axes;
}

}  // namespace

FrameField make_frame(const Point& p, const std::vector<Vec>& vectors) {
    const int n = p.space.n;
    if (static_cast<int>(vectors.size()) != n) throw DomainError("frame has wrong size");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double g = metric_inner(p, vectors[static_cast<std::size_t>(i)],
                                          vectors[static_cast<std::size_t>(j)]);
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw DomainError("frame is not orthonormal");
        }
    return {p, vectors};
}

FrameField orthonormal_frame(const Point& p) {
    return {p, gram_schmidt(p, axis_candidates(p), p.space.n)};
}

FrameField frame_completing(const Point& p, const Vec& last_unit) {
    const double nv = metric_norm(p, last_unit);
    if (nv < 1e-12) throw DomainError("frame_completing: zero direction");
    std::vector<Vec> cands;
    cands.push_back(last_unit / nv);
    for (Vec& a : axis_candidates(p)) cands.push_back(std::move(a));
    std::vector<Vec> ordered = gram_schmidt(p, cands, p.space.n);
    std::rotate(ordered.begin(), ordered.begin() + 1, ordered.end());  // given direction last
    return {p, std::move(ordered)};
}

double unit_sphere_volume(int n) {
    if (n < 1) throw DomainError("unit_sphere_volume: n must be positive");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace gklab
