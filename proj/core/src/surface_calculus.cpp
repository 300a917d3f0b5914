#include "gklab/surface_calculus.hpp"

#include "gklab/parallel.hpp"
#include "gklab/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>

namespace gklab {
namespace {

constexpr double kLevelTol = 1e-10;
constexpr double kGradFloor = 1e-10;

void fill_direction_grid(RadialGraph& g) {
    const int n = g.space.n;
    const FrameField frame = orthonormal_frame(g.base);
    if (n == 2) {
        const int na = g.spec.azimuth;
        if (na < 8) throw DomainError("direction grid too coarse");
        g.directions.reserve(static_cast<std::size_t>(na));
        g.weights.assign(static_cast<std::size_t>(na), 2.0 * M_PI / na);
        for (int j = 0; j < na; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / na;
            g.directions.push_back(std::cos(th) * frame[0] + std::sin(th) * frame[1]);
        }
        return;
    }
    if (n == 3) {
        const int np = g.spec.polar, na = g.spec.azimuth;
        if (np < 4 || na < 8) throw DomainError("direction grid too coarse");
        const GaussLegendre gl = gauss_legendre(np);
        g.directions.reserve(static_cast<std::size_t>(np * na));
        g.weights.reserve(static_cast<std::size_t>(np * na));
        for (int i = 0; i < np; ++i) {
            const double u = gl.nodes[static_cast<std::size_t>(i)];
            const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int j = 0; j < na; ++j) {
                const double ph = 2.0 * M_PI * (j + 0.5) / na;
                g.directions.push_back(su * std::cos(ph) * frame[0] +
                                       su * std::sin(ph) * frame[1] + u * frame[2]);
                g.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * 2.0 * M_PI / na);
            }
        }
        return;
    }
    throw DomainError("direction grids are defined for n = 2 and n = 3 only");
}

void check_surface_base(const ModelSpace& space, const Point& base) {
    check_same_space(space, base.space, "surface base");
    if (space.kind == SpaceKind::Warped && base.x.norm() > 1e-12)
        throw DomainError("warped-space surfaces must be based at the pole");
}

// Root of u(exp_base(s w)) = level along one ray: bracket by growth, narrow by
// bisection, finish with safeguarded Newton on the exact radial derivative.
struct RayHit {
    double radius;
    Point point;
    Vec radial_unit;
};

RayHit march_ray(const RadialGraph& g, const Vec& w) {
    const ScalarField& u = *g.field;
    const double c = g.level;
    const double tol = kLevelTol * (1.0 + std::abs(c));

    auto at = [&](double s) { return geodesic_endpoint(g.base, {g.base, s * w}); };

    double lo = 0.0, hi = 1e-2;
    double val_hi = u.value(at(hi).point) - c;
    int grow = 0;
    while (val_hi < 0.0) {
        lo = hi;
        hi *= 1.6;
        if (++grow > 120) throw ConvergenceError("level-set ray never crossed the level", val_hi);
        val_hi = u.value(at(hi).point) - c;
    }

    while (hi - lo > 1e-6 * (1.0 + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (u.value(at(mid).point) - c < 0.0)
            lo = mid;
        else
            hi = mid;
    }

    double s = 0.5 * (lo + hi);
    GeodesicEnd end = at(s);
    double val = u.value(end.point) - c;
    for (int it = 0; it < 20; ++it) {
        if (std::abs(val) <= tol) break;
        if (val < 0.0)
            lo = s;
        else
            hi = s;
        const double slope = metric_inner(end.point, u.gradient(end.point).v, end.velocity.v) / s;
        double next = s - val / slope;
        if (!(slope > 0.0) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        s = next;
        end = at(s);
        val = u.value(end.point) - c;
    }
    if (std::abs(val) > tol)
        throw ConvergenceError("level-set ray polish did not reach tolerance", std::abs(val));
    return {s, end.point, (end.velocity.v / s).eval()};
}

void fill_exact_radius(RadialGraph& g, double radius) {
    const int m = g.size();
    g.radii.assign(static_cast<std::size_t>(m), radius);
    g.points.resize(static_cast<std::size_t>(m));
    g.radial_units.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Vec& w = g.directions[static_cast<std::size_t>(i)];
        const GeodesicEnd end = geodesic_endpoint(g.base, {g.base, radius * w});
        g.points[static_cast<std::size_t>(i)] = end.point;
        g.radial_units[static_cast<std::size_t>(i)] = end.velocity.v / radius;
    }
}

template <class PerPoint>
double reduce_over_surface(const RadialGraph& g, int workers, const PerPoint& term) {
    const int m = g.size();
    std::vector<double> slot(static_cast<std::size_t>(m), 0.0);
    parallel_for(m, workers, [&](int i) { slot[static_cast<std::size_t>(i)] = term(i); });
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += slot[static_cast<std::size_t>(i)];
    return acc;
}

}  // namespace

TangentVector SphereDistanceField::gradient(const Point& p) const {
    const double d = distance(center_, p);
    if (d < kGradFloor) throw DomainError("sphere distance gradient at the center");
    return {p, (-1.0 / d) * log_map(p, center_).v};
}

double radial_profile(const ModelSpace& space, double r) {
    switch (space.kind) {
        case SpaceKind::Euclidean:
            return r;
        case SpaceKind::ConstantNegative: {
            const double a = std::sqrt(-space.k);
            return std::sinh(a * r) / a;
        }
        case SpaceKind::Warped:
            return space.warp.value(r);
    }
    throw Error("unreachable");
}

double radial_profile_deriv(const ModelSpace& space, double r) {
    switch (space.kind) {
        case SpaceKind::Euclidean:
            return 1.0;
        case SpaceKind::ConstantNegative:
            return std::cosh(std::sqrt(-space.k) * r);
        case SpaceKind::Warped:
            return space.warp.deriv(r);
    }
    throw Error("unreachable");
}

double radial_profile_integral(const ModelSpace& space, double r) {
    switch (space.kind) {
        case SpaceKind::Euclidean:
            return 0.5 * r * r;
        case SpaceKind::ConstantNegative: {
            const double a2 = -space.k;
            const double sh = std::sinh(0.5 * std::sqrt(a2) * r);
            return 2.0 * sh * sh / a2;  // (cosh(a r) - 1)/a^2
        }
        case SpaceKind::Warped: {
            const double sh = std::sinh(0.5 * r);
            const double t = r - space.warp.r0;
            double out = 2.0 * sh * sh;
            if (t > 0.0) out += 0.25 * space.warp.c * t * t * t * t;
            return out;
        }
    }
    throw Error("unreachable");
}

RadialGraph make_level_surface(const ModelSpace& space, const Point& base,
                               std::shared_ptr<const ScalarField> field, double level,
                               const GridSpec& spec, int workers) {
    check_surface_base(space, base);
    if (!field) throw DomainError("level surface needs a field");
    if (!(field->value(base) < level))
        throw DomainError("surface base must lie strictly inside the level set");

    RadialGraph g;
    g.space = space;
    g.base = base;
    g.field = std::move(field);
    g.level = level;
    g.spec = spec;
    fill_direction_grid(g);

    const int m = g.size();
    g.radii.resize(static_cast<std::size_t>(m));
    g.points.resize(static_cast<std::size_t>(m));
    g.radial_units.resize(static_cast<std::size_t>(m));
    parallel_for(m, workers, [&](int i) {
        RayHit hit = march_ray(g, g.directions[static_cast<std::size_t>(i)]);
        g.radii[static_cast<std::size_t>(i)] = hit.radius;
        g.points[static_cast<std::size_t>(i)] = std::move(hit.point);
        g.radial_units[static_cast<std::size_t>(i)] = std::move(hit.radial_unit);
    });
    return g;
}

RadialGraph make_sphere_surface(const Point& center, double radius, const GridSpec& spec) {
    if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
    check_surface_base(center.space, center);
    RadialGraph g;
    g.space = center.space;
    g.base = center;
    g.field = std::make_shared<SphereDistanceField>(center);
    g.level = radius;
    g.spec = spec;
    fill_direction_grid(g);
    fill_exact_radius(g, radius);
    return g;
}

RadialGraph parallel_hypersurface(const Ball& body, double t, const GridSpec& spec,
                                  int workers) {
    (void)workers;
    if (!(t > 0.0)) throw DomainError("parallel surface offset must be positive");
    RadialGraph g;
    g.space = body.center.space;
    g.base = body.center;
    g.field = std::make_shared<BallDistanceField>(body);
    g.level = t;
    g.spec = spec;
    check_surface_base(g.space, g.base);
    fill_direction_grid(g);
    fill_exact_radius(g, body.radius + t);  // rays from the center hit at r + t
    return g;
}

RadialGraph parallel_hypersurface(const Hull& body, double t, const GridSpec& spec,
                                  int workers) {
    if (!(t > 0.0)) throw DomainError("parallel surface offset must be positive");
    const int m = static_cast<int>(body.vertices.size());
    const Point base = hull_point(body, Eigen::VectorXd::Constant(m, 1.0 / m));
    auto field = std::make_shared<HullDistanceField>(body);
    return make_level_surface(body.space, base, std::move(field), t, spec, workers);
}

double clamped_fd_step(const ScalarField& u, const Point& p, double h) {
    const double radius = u.smoothness_radius(p);
    if (!std::isfinite(radius)) return h;
    return std::min(h, std::max(0.5 * radius, 1e-5));
}

Eigen::MatrixXd shape_operator_matrix(const ScalarField& u, const Point& x,
                                      const FrameField& frame, double h) {
    const int n = x.space.n;
    h = clamped_fd_step(u, x, h);

    // S(e_j) = covariant derivative of the unit normal field along e_j, by
    // central differences along geodesics with transport back to x
    Eigen::MatrixXd shape(n - 1, n - 1);
    for (int j = 0; j < n - 1; ++j) {
        Vec cols[2];
        for (int sgn = 0; sgn < 2; ++sgn) {
            const double step = (sgn == 0 ? h : -h);
            const Point xs = exp_map(x, {x, step * frame[j]});
            const TangentVector gs = u.gradient(xs);
            const double gsn = norm(gs);
            if (gsn < kGradFloor) throw DomainError("vanishing gradient near the surface");
            cols[sgn] = parallel_transport(xs, x, {xs, gs.v / gsn}).v;
        }
        const Vec deriv = (cols[0] - cols[1]) / (2.0 * h);
        for (int i = 0; i < n - 1; ++i) shape(i, j) = metric_inner(x, frame[i], deriv);
    }
    return 0.5 * (shape + shape.transpose()).eval();
}

namespace {

SurfacePointData point_data_at(const RadialGraph& g, const Point& x, double radius,
                               const Vec& radial_unit) {
    const int n = g.space.n;

    SurfacePointData out;
    out.point = x;
    const TangentVector grad = g.field->gradient(x);
    const double gn = norm(grad);
    if (gn < kGradFloor) throw DomainError("vanishing gradient on the surface");
    out.normal = {x, grad.v / gn};

    const FrameField frame = frame_completing(x, out.normal.v);
    const double h = g.spec.fd_step * (1.0 + radius);
    const Eigen::MatrixXd shape = shape_operator_matrix(*g.field, x, frame, h);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shape);
    out.principal_curvatures.resize(static_cast<std::size_t>(n - 1));
    out.principal_directions.resize(static_cast<std::size_t>(n - 1));
    out.gk = 1.0;
    for (int a = 0; a < n - 1; ++a) {
        const int src = n - 2 - a;  // descending order
        const double kap = eig.eigenvalues()(src);
        out.principal_curvatures[static_cast<std::size_t>(a)] = kap;
        out.gk *= kap;
        Vec dir = Vec::Zero(x.x.size());
        for (int b = 0; b < n - 1; ++b) dir += eig.eigenvectors()(b, src) * frame[b];
        out.principal_directions[static_cast<std::size_t>(a)] = std::move(dir);
    }

    const double align = metric_inner(x, out.normal.v, radial_unit);
    if (align < 1e-10) throw DomainError("surface normal lost transversality to the rays");
    const double prof = radial_profile(g.space, radius);
    out.area_element = std::pow(prof, n - 1) / align;
    return out;
}

}  // namespace

SurfacePointData surface_point_data(const RadialGraph& g, int index) {
    if (index < 0 || index >= g.size()) throw DomainError("surface index out of range");
    const std::size_t ix = static_cast<std::size_t>(index);
    return point_data_at(g, g.points[ix], g.radii[ix], g.radial_units[ix]);
}

double area(const RadialGraph& g, int workers) {
    return reduce_over_surface(g, workers, [&](int i) {
        return g.weights[static_cast<std::size_t>(i)] * surface_point_data(g, i).area_element;
    });
}

double total_curvature(const RadialGraph& g, int workers) {
    return reduce_over_surface(g, workers, [&](int i) {
        const SurfacePointData d = surface_point_data(g, i);
        return g.weights[static_cast<std::size_t>(i)] * d.gk * d.area_element;
    });
}

template <class Body>
CurvatureLimit total_curvature_limit(const Body& body, double t0, const GridSpec& spec,
                                     double tol, int max_halvings, int workers) {
    if (!(t0 > 0.0)) throw DomainError("offset start must be positive");
    CurvatureLimit out;
    double t = t0;
    for (int j = 0; j <= max_halvings; ++j, t *= 0.5) {
        const double gtot = total_curvature(parallel_hypersurface(body, t, spec, workers), workers);
        out.t_values.push_back(t);
        out.curvatures.push_back(gtot);
        const std::size_t m = out.curvatures.size();
        if (m >= 2) {
            const double prev = out.curvatures[m - 2];
            if (gtot > prev + 1e-6 * std::max(1.0, std::abs(prev))) out.monotone = false;
            out.value = 2.0 * gtot - prev;  // first-order extrapolation to t = 0
            if (std::abs(gtot - prev) <= tol * std::max(1.0, std::abs(gtot))) {
                out.converged = true;
                return out;
            }
        } else {
            out.value = gtot;
        }
    }
    return out;
}

template CurvatureLimit total_curvature_limit<Ball>(const Ball&, double, const GridSpec&, double,
                                                    int, int);
template CurvatureLimit total_curvature_limit<Hull>(const Hull&, double, const GridSpec&, double,
                                                    int, int);

double hausdorff_distance(const RadialGraph& a, const RadialGraph& b, int workers) {
    check_same_space(a.space, b.space, "hausdorff_distance");

    // Against a metric-distance level set the gap is |field - level| exactly;
    // otherwise fall back to the nearest sampled node, which overestimates by
    // the target's sampling gap.
    const bool exact_to_b = b.field && b.field->metric_distance();
    const bool exact_to_a = a.field && a.field->metric_distance();
    const auto directed = [workers](const RadialGraph& from, const RadialGraph& to, bool exact) {
        const int m = from.size();
        std::vector<double> best(static_cast<std::size_t>(m));
        parallel_for(m, workers, [&](int i) {
            const Point& p = from.points[static_cast<std::size_t>(i)];
            if (exact) {
                const double f = to.field->value(p);
                if (f > 0.0) {
                    best[static_cast<std::size_t>(i)] = std::abs(f - to.level);
                    return;
                }
            }
            double low = std::numeric_limits<double>::infinity();
            switch (from.space.kind) {
                case SpaceKind::Euclidean:
                    for (const Point& q : to.points)
                        low = std::min(low, (p.x - q.x).squaredNorm());
                    low = std::sqrt(low);
                    break;
                case SpaceKind::ConstantNegative: {
                    // chordal Lorentz distance is monotone in the true one
                    for (const Point& q : to.points) {
                        const Vec d = p.x - q.x;
                        low = std::min(low, std::max(0.0, lorentz_inner(d, d)));
                    }
                    const double r = 1.0 / std::sqrt(-from.space.k);
                    low = 2.0 * r * std::asinh(0.5 * std::sqrt(low) / r);
                    break;
                }
                case SpaceKind::Warped:
                    for (const Point& q : to.points) low = std::min(low, distance(p, q));
                    break;
            }
            best[static_cast<std::size_t>(i)] = low;
        });
        return *std::max_element(best.begin(), best.end());
    };

    return std::max(directed(a, b, exact_to_b), directed(b, a, exact_to_a));
}

namespace {

// kappa * (arc length per unit angle) of the curve along a fresh ray
double turning_density(const RadialGraph& g, const FrameField& frame, double theta) {
    const Vec w = std::cos(theta) * frame[0] + std::sin(theta) * frame[1];
    const RayHit hit = march_ray(g, w);
    const SurfacePointData d = point_data_at(g, hit.point, hit.radius, hit.radial_unit);
    return d.gk * d.area_element;
}

// Adaptive Simpson with Richardson correction.  Offset curves of polygons
// have curvature jumps at the arc/edge junctions; endpoint sampling matters
// here, because the pair of samples bracketing a jump always disagrees, so
// the recursion cannot accept a cell whose interior hides one.  It splits the
// jump cell until the depth cap, leaving an error of jump size times 2^-38
// of a cell width.
double refine_turning_cell(const RadialGraph& g, const FrameField& frame, double a, double b,
                           double fa, double fm, double fb, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double fl = turning_density(g, frame, 0.5 * (a + mid));
    const double fr = turning_density(g, frame, 0.5 * (mid + b));
    const double s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double sl = (mid - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double sr = (b - mid) / 6.0 * (fm + 4.0 * fr + fb);
    const double s2 = sl + sr;
    if (depth >= 38 || std::abs(s2 - s1) <= tol) return s2 + (s2 - s1) / 15.0;
    return refine_turning_cell(g, frame, a, mid, fa, fl, fm, 0.5 * tol, depth + 1) +
           refine_turning_cell(g, frame, mid, b, fm, fr, fb, 0.5 * tol, depth + 1);
}

double adaptive_turning(const RadialGraph& g, int workers) {
    const FrameField frame = orthonormal_frame(g.base);
    const int m = g.size();
    const double cell_tol = 1e-5 / m;
    std::vector<double> fend(static_cast<std::size_t>(m) + 1, 0.0);
    parallel_for(m, workers, [&](int i) {
        fend[static_cast<std::size_t>(i)] = turning_density(g, frame, 2.0 * M_PI * i / m);
    });
    fend[static_cast<std::size_t>(m)] = fend[0];
    std::vector<double> slot(static_cast<std::size_t>(m), 0.0);
    parallel_for(m, workers, [&](int i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        const SurfacePointData d = surface_point_data(g, i);
        const double a = 2.0 * M_PI * i / m;
        const double b = 2.0 * M_PI * (i + 1) / m;
        slot[ix] = refine_turning_cell(g, frame, a, b, fend[ix], d.gk * d.area_element,
                                       fend[ix + 1], cell_tol, 0);
    });
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += slot[static_cast<std::size_t>(i)];
    return acc;
}

}  // namespace

CurveReport curve_report(const RadialGraph& g, int workers) {
    if (g.space.n != 2) throw DomainError("curve reports are for n = 2 surfaces");
    CurveReport rep;
    rep.turning = adaptive_turning(g, workers);
    rep.curvature_integral = reduce_over_surface(g, workers, [&](int i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        return g.weights[ix] * (1.0 - radial_profile_deriv(g.space, g.radii[ix]));
    });
    rep.enclosed_area = reduce_over_surface(g, workers, [&](int i) {
        const std::size_t ix = static_cast<std::size_t>(i);
        return g.weights[ix] * radial_profile_integral(g.space, g.radii[ix]);
    });
    rep.gauss_bonnet_defect = rep.turning + rep.curvature_integral - 2.0 * M_PI;
    return rep;
}

}  // namespace gklab
