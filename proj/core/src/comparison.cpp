#include "gklab/comparison.hpp"

#include "gklab/parallel.hpp"
#include "gklab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gklab {
namespace {

constexpr double kGradFloor = 1e-10;

double norm_of_grad(const ScalarField& u, const Point& p) { return norm(u.gradient(p)); }

// |grad u| central difference along e_j at the given step.
double grad_norm_diff(const ScalarField& u, const Point& p, const Vec& ej, double h) {
    const Point plus = exp_map(p, {p, h * ej});
    const Point minus = exp_map(p, {p, -h * ej});
    return (norm_of_grad(u, plus) - norm_of_grad(u, minus)) / (2.0 * h);
}

}  // namespace

InterpolantField::InterpolantField(ConvexBody inner, ConvexBody outer, double lambda)
    : inner_(std::move(inner)), outer_(std::move(outer)), lambda_(lambda) {
    check_same_space(body_space(inner_), body_space(outer_), "InterpolantField");
    if (lambda_ < 0.0) throw DomainError("interpolant weight must be nonnegative");
    check_nested(inner_, outer_);
}

double InterpolantField::value(const Point& p) const {
    const double douter = distance_to(outer_, p);
    return lambda_ * distance_to(inner_, p) + douter * douter;
}

TangentVector InterpolantField::gradient(const Point& p) const {
    TangentVector g = grad_distance_squared(outer_, p);
    if (lambda_ > 0.0) {
        const TangentVector gd = grad_distance(inner_, p);  // throws on/inside D
        g.v += lambda_ * gd.v;
    }
    return g;
}

double InterpolantField::smoothness_radius(const Point& p) const {
    // second derivatives of d_Omega^2 jump across the boundary of Omega;
    // outside it the nearest kink is at distance d_Omega
    const double douter = distance_to(outer_, p);
    if (douter > 0.0) return douter;
    return std::numeric_limits<double>::infinity();
}

AdaptedFrame adapted_frame(const ScalarField& u, const Point& p, double fd_step) {
    const TangentVector grad = u.gradient(p);
    const double gn = norm(grad);
    if (gn < kGradFloor) throw DomainError("adapted_frame: vanishing gradient");

    FrameField raw = frame_completing(p, grad.v);
    const int n = p.space.n;
    const double h = fd_step * (1.0 + distance(p.space.origin(), p));
    const Eigen::MatrixXd shape = shape_operator_matrix(u, p, raw, h);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shape);
    AdaptedFrame out;
    out.grad_norm = gn;
    out.kappas.resize(static_cast<std::size_t>(n - 1));
    std::vector<Vec> vectors(static_cast<std::size_t>(n));
    for (int a = 0; a < n - 1; ++a) {
        const int src = n - 2 - a;  // descending
        out.kappas[static_cast<std::size_t>(a)] = eig.eigenvalues()(src);
        Vec dir = Vec::Zero(p.x.size());
        for (int b = 0; b < n - 1; ++b) dir += eig.eigenvectors()(b, src) * raw[b];
        vectors[static_cast<std::size_t>(a)] = std::move(dir);
    }
    vectors[static_cast<std::size_t>(n - 1)] = raw[n - 1];  // unit normal stays last
    out.frame = make_frame(p, vectors);
    return out;
}

DerivPair grad_norm_derivative(const ScalarField& u, const AdaptedFrame& fr, int j,
                               double fd_step) {
    const Point& p = fr.frame.base;
    const int n = p.space.n;
    if (j < 0 || j >= n - 1) throw DomainError("grad_norm_derivative: tangent index only");
    const double h = clamped_fd_step(u, p, fd_step * (1.0 + distance(p.space.origin(), p)));
    DerivPair out;
    out.coarse = grad_norm_diff(u, p, fr.frame[j], h);
    out.fine = grad_norm_diff(u, p, fr.frame[j], 0.5 * h);
    return out;
}

IntegrandSample comparison_integrands(const ScalarField& u, const Point& p, double fd_step) {
    const AdaptedFrame fr = adapted_frame(u, p, fd_step);
    const int n = p.space.n;
    const int m = n - 1;

    IntegrandSample s;
    s.point = p;
    s.kappas = fr.kappas;
    s.grad_norm = fr.grad_norm;

    s.cofactor_diag.assign(static_cast<std::size_t>(m), 1.0);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l)
            if (l != i) s.cofactor_diag[static_cast<std::size_t>(i)] *= fr.kappas[static_cast<std::size_t>(l)];

    s.cofactor_off = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double prod = 1.0;
            for (int l = 0; l < m; ++l)
                if (l != i && l != j) prod *= fr.kappas[static_cast<std::size_t>(l)];
            s.cofactor_off(i, j) = prod;
        }

    s.grad_norm_derivs.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        s.grad_norm_derivs[static_cast<std::size_t>(j)] = grad_norm_derivative(u, fr, j, fd_step).fine;

    s.r_inin.resize(static_cast<std::size_t>(m));
    s.r_ijin = Eigen::MatrixXd::Zero(m, m);
    const Vec& en = fr.frame[n - 1];
    for (int i = 0; i < m; ++i) {
        s.r_inin[static_cast<std::size_t>(i)] = riemann(p, fr.frame[i], en, fr.frame[i], en);
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            s.r_ijin(i, j) = riemann(p, fr.frame[i], fr.frame[j], fr.frame[i], en);
        }
    }

    s.term1 = 0.0;
    for (int i = 0; i < m; ++i)
        s.term1 += s.cofactor_diag[static_cast<std::size_t>(i)] * s.r_inin[static_cast<std::size_t>(i)];
    s.term2 = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            s.term2 += s.cofactor_off(i, j) *
                       (s.grad_norm_derivs[static_cast<std::size_t>(j)] / s.grad_norm) *
                       s.r_ijin(i, j);
        }
    return s;
}

double f_lambda(const ScalarField& u, const Point& p, double fd_step) {
    if (p.space.n != 3) throw DomainError("f_lambda is defined for n = 3");
    const AdaptedFrame fr = adapted_frame(u, p, fd_step);
    const Vec& en = fr.frame[2];
    double out = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double dj = grad_norm_derivative(u, fr, j, fd_step).fine / fr.grad_norm;
        for (int i = 0; i < 2; ++i)
            out += dj * riemann(p, fr.frame[i], fr.frame[j], fr.frame[i], en);
    }
    return out;
}

namespace {

// Shared coarea sweep: FVal is double or std::pair<double, double>, summed
// componentwise with the quadrature weight applied to each component.
template <class FVal, class Scale, class Accum>
void region_sweep(const ModelSpace& space, const Point& base,
                  const std::shared_ptr<const ScalarField>& field, double lo, double hi,
                  const GridSpec& grid, int level_order,
                  const std::function<FVal(const Point&)>& f, int workers, const Scale& scale,
                  const Accum& accum) {
    if (!(hi > lo)) return;
    const GaussLegendre gl = gauss_legendre(level_order, lo, hi);

    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const RadialGraph surf =
            make_level_surface(space, base, field, gl.nodes[q], grid, workers);
        const int m = surf.size();
        std::vector<FVal> slot(static_cast<std::size_t>(m));
        parallel_for(m, workers, [&](int i) {
            const std::size_t ix = static_cast<std::size_t>(i);
            const Point& x = surf.points[ix];
            const TangentVector g = field->gradient(x);
            const double gn = norm(g);
            if (gn < kGradFloor) throw DomainError("region_integral: vanishing gradient");
            const double align = metric_inner(x, g.v / gn, surf.radial_units[ix]);
            if (align < 1e-10) throw DomainError("region_integral: ray not transversal");
            const double prof = radial_profile(space, surf.radii[ix]);
            const double area_el = std::pow(prof, space.n - 1) / align;
            slot[ix] = scale(f(x), surf.weights[ix] * area_el / gn);
        });
        for (int i = 0; i < m; ++i) accum(slot[static_cast<std::size_t>(i)], gl.weights[q]);
    }
}

}  // namespace

double region_integral(const ModelSpace& space, const Point& base,
                       const std::shared_ptr<const ScalarField>& field, double lo, double hi,
                       const GridSpec& grid, int level_order,
                       const std::function<double(const Point&)>& f, int workers) {
    double total = 0.0;
    region_sweep<double>(
        space, base, field, lo, hi, grid, level_order, f, workers,
        [](double v, double w) { return v * w; },
        [&total](double v, double w) { total += w * v; });
    return total;
}

std::pair<double, double> region_integral(
    const ModelSpace& space, const Point& base, const std::shared_ptr<const ScalarField>& field,
    double lo, double hi, const GridSpec& grid, int level_order,
    const std::function<std::pair<double, double>(const Point&)>& f, int workers) {
    double first = 0.0, second = 0.0;
    region_sweep<std::pair<double, double>>(
        space, base, field, lo, hi, grid, level_order, f, workers,
        [](std::pair<double, double> v, double w) {
            return std::pair<double, double>{v.first * w, v.second * w};
        },
        [&first, &second](const std::pair<double, double>& v, double w) {
            first += w * v.first;
            second += w * v.second;
        });
    return {first, second};
}

ComparisonReport comparison_identity_report(const ModelSpace& space, const Point& base,
                                            const std::shared_ptr<const ScalarField>& field,
                                            double level_lo, double level_hi,
                                            const GridSpec& finest_grid, int refinements,
                                            int level_order, int workers) {
    if (!(level_hi > level_lo)) throw DomainError("comparison levels must be increasing");
    if (refinements < 1) throw DomainError("need at least one refinement level");

    ComparisonReport rep;
    for (int r = refinements - 1; r >= 0; --r) {
        GridSpec grid = finest_grid;
        grid.polar = std::max(4, finest_grid.polar >> r);
        grid.azimuth = std::max(8, finest_grid.azimuth >> r);
        grid.fd_step = finest_grid.fd_step * static_cast<double>(1 << r);
        const int order = std::max(4, level_order >> r);

        const double g_hi = total_curvature(
            make_level_surface(space, base, field, level_hi, grid, workers), workers);
        const double g_lo = total_curvature(
            make_level_surface(space, base, field, level_lo, grid, workers), workers);
        const double lhs = g_hi - g_lo;

        const double fd = grid.fd_step;
        const auto [t1, t2] = region_integral(
            space, base, field, level_lo, level_hi, grid, order,
            std::function<std::pair<double, double>(const Point&)>([&](const Point& x) {
                const IntegrandSample s = comparison_integrands(*field, x, fd);
                return std::pair<double, double>{s.term1, s.term2};
            }),
            workers);

        rep.lhs = lhs;
        rep.rhs_term1 = t1;
        rep.rhs_term2 = t2;
        rep.residual = std::abs(lhs - (-t1 + t2));
        rep.inequality_margin = lhs - t2;
        rep.refinement_history.push_back({grid.polar, grid.azimuth, grid.fd_step, rep.residual});
    }
    return rep;
}

EstimateSample n3_estimate_sample(const InterpolantField& u, const Point& p, double fd_step) {
    if (p.space.n != 3) throw DomainError("n3_estimate_sample is defined for n = 3");
    EstimateSample s;
    s.d_inner = u.inner_distance(p);
    s.d_outer = u.outer_distance(p);
    if (!(s.d_outer > 0.0))
        throw DomainError("estimate samples must lie strictly outside the outer body");

    const TangentVector go = grad_distance(u.outer(), p);
    const TangentVector gi = grad_distance(u.inner(), p);
    s.dot = metric_inner(p, go.v, gi.v);

    s.grad_norm = norm(u.gradient(p));
    const double lam = u.lambda();
    const double expected =
        4.0 * s.d_outer * s.d_outer + lam * lam + 4.0 * lam * s.d_outer * s.dot;
    s.norm_identity_residual = std::abs(s.grad_norm * s.grad_norm - expected);

    const AdaptedFrame fr = adapted_frame(u, p, fd_step);
    for (int j = 0; j < 2; ++j) {
        const DerivPair d = grad_norm_derivative(u, fr, j, fd_step);
        s.max_grad_norm_deriv = std::max(s.max_grad_norm_deriv, std::abs(d.fine));
        s.max_richardson_gap = std::max(s.max_richardson_gap, std::abs(d.coarse - d.fine));
    }
    return s;
}

}  // namespace gklab
