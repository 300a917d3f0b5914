#include "gklab/convex_body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>
#include <utility>

namespace gklab {
namespace {

constexpr double kOnBodyTol = 1e-12;
constexpr int kMaxHullVertices = 32;

// weight vectors live on the stack; hulls are capped at kMaxHullVertices
using LamVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxHullVertices, 1>;
using LamMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                             kMaxHullVertices, kMaxHullVertices>;

// acosh(w)/sqrt(w^2 - 1): derivative factor of acosh^2/2.  The direct form
// is 0/0 at w = 1, where the function tends to 1.
double acosh_ratio(double w) {
    const double eps = w - 1.0;
    if (eps < 1e-4) return 1.0 - eps / 3.0 + (2.0 / 15.0) * eps * eps;
    return std::acosh(w) / std::sqrt(w * w - 1.0);
}

template <class VecT>
VecT simplex_project_impl(VecT y) {
    const Eigen::Index m = y.size();
    VecT u = y;
    std::sort(u.data(), u.data() + m, std::greater<double>());
    double running = 0.0;
    double tau = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        running += u(j);
        const double t = (running - 1.0) / static_cast<double>(j + 1);
        if (j + 1 < m && u(j + 1) > t) continue;
        tau = t;
        break;
    }
    for (Eigen::Index i = 0; i < m; ++i) y(i) = std::max(0.0, y(i) - tau);
    return y;
}

struct SimplexSolve {
    LamVec lambda;
    double value = 0.0;
    double residual = 0.0;
    bool converged = false;
    bool on_body = false;
};

// Line search alone cannot push the stationarity residual to 1e-10: once the
// iterate is within ~1e-8 of the minimizer, objective differences drown in
// round-off and Armijo stalls.  Two escapes close the gap.  When the query is
// on the body, `on_body` certifies it (the stall radius is far inside the
// certificate's band) and the solve ends with distance zero.  Otherwise the
// support found by the simplex projection is handed to `face_solve`, which
// minimizes over that face in closed form; the polished point is accepted only
// if the full stationarity residual actually meets the tolerance.
template <class Obj>
SimplexSolve run_projected_gradient(const Obj& obj, LamVec lambda, int max_iters, double tol) {
    double f = obj.value(lambda);
    double step = 1.0;
    double residual = std::numeric_limits<double>::infinity();

    const auto finish = [&obj](LamVec lam, double val, double res, bool ok) -> SimplexSolve {
        SimplexSolve out{std::move(lam), val, res, ok, false};
        if (obj.on_body(out.lambda)) {
            out.on_body = true;
            out.converged = true;
            out.value = 0.0;
            out.residual = 0.0;
        }
        return out;
    };
    const auto polish = [&](LamVec& lam) -> bool {
        LamVec cand = lam;
        if (!obj.face_solve(cand)) return false;
        const LamVec gc = obj.grad(cand);
        const double rc = (cand - simplex_project_impl<LamVec>(cand - gc)).norm();
        const double fc = obj.value(cand);
        if (rc <= tol) {
            lam = std::move(cand);
            f = fc;
            residual = rc;
            return true;
        }
        if (fc < f) {  // not stationary yet, but a better iterate to continue from
            lam = std::move(cand);
            f = fc;
        }
        return false;
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        if (obj.on_body(lambda)) return finish(std::move(lambda), 0.0, 0.0, true);
        const LamVec g = obj.grad(lambda);
        residual = (lambda - simplex_project_impl<LamVec>(lambda - g)).norm();
        if (residual <= tol) return finish(std::move(lambda), f, residual, true);
        if (iter % 4 == 0 && polish(lambda)) return finish(std::move(lambda), f, residual, true);

        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const LamVec trial = simplex_project_impl<LamVec>(lambda - step * g);
            const LamVec dir = trial - lambda;
            if (dir.norm() < 1e-18) break;
            const double ft = obj.value(trial);
            if (ft <= f + 1e-4 * g.dot(dir)) {
                lambda = trial;
                f = ft;
                step = std::min(step * 1.5, 1e6);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            if (polish(lambda)) return finish(std::move(lambda), f, residual, true);
            return finish(std::move(lambda), f, residual, false);
        }
    }
    if (polish(lambda)) return finish(std::move(lambda), f, residual, true);
    residual = (lambda - simplex_project_impl<LamVec>(lambda - obj.grad(lambda))).norm();
    return finish(std::move(lambda), f, residual, residual <= tol);
}

// Active set of a simplex point; projection writes exact zeros, so a strict
// sign test is enough.
inline int support_of(const LamVec& lam, std::array<int, kMaxHullVertices>& idx) {
    int q = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > 0.0) idx[static_cast<std::size_t>(q++)] = static_cast<int>(i);
    return q;
}

// Lawson-Hanson active-set minimization over the face lattice of the simplex.
// The working set starts from the support of `lam`, capped at `cap` (the most
// vertices a hull face can hold independently) by keeping the heaviest
// weights; a wrong cut is repaired by the entering step below.  Each pass
// solves the stationarity system on the working face in closed form; if that
// point leaves the simplex, the feasible iterate walks toward it only as far
// as the boundary and the clipped vertex leaves the set.  The ratio test is
// what makes every pass decrease the objective (the objective is convex along
// weight segments), which rules out cycling through faces; jumping straight
// to the face solution does not have that property.  At a face minimizer the
// gradient is constant across the working set, so a vertex outside whose
// component undercuts that level can still improve the objective: it enters
// and the loop repeats.  The caller re-checks the full stationarity residual
// on whatever comes back, so the budget fallback returning the best face
// found so far is safe.
template <class Obj>
bool active_set_solve(const Obj& obj, LamVec& lam, const int cap) {
    std::array<int, kMaxHullVertices> idx{};
    int q = support_of(lam, idx);
    if (q == 0) return false;
    if (q > cap) {
        std::sort(idx.begin(), idx.begin() + q,
                  [&lam](int a, int b) { return lam(a) > lam(b); });
        q = cap;
    }
    const int m = static_cast<int>(lam.size());
    LamVec z = LamVec::Zero(m);
    double zsum = 0.0;
    for (int r = 0; r < q; ++r) zsum += lam(idx[static_cast<std::size_t>(r)]);
    if (!(zsum > 0.0)) return false;
    for (int r = 0; r < q; ++r) {
        const int i = idx[static_cast<std::size_t>(r)];
        z(i) = lam(i) / zsum;
    }

    Eigen::VectorXd x;
    bool have = false;
    int last_in = -1;
    for (int pass = 0; pass < 2 * m + 4; ++pass) {
        bool solved = false;
        while (q > 0) {
            bool consistent = true;
            if (!obj.face_system(idx, q, x, consistent)) return false;
            const double xsum = x.sum();
            if (!consistent || !(xsum > 0.0)) {
                // Degenerate face: retire the least committed vertex, sparing
                // the one that just entered.
                int drop = -1;
                for (int r = 0; r < q; ++r) {
                    if (idx[static_cast<std::size_t>(r)] == last_in) continue;
                    if (drop < 0 || std::abs(x(r)) < std::abs(x(drop))) drop = r;
                }
                if (drop < 0) break;
                z(idx[static_cast<std::size_t>(drop)]) = 0.0;
                for (int r = drop; r + 1 < q; ++r)
                    idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r + 1)];
                --q;
                continue;
            }
            x /= xsum;  // the stationary point in sum-to-one coordinates
            const double floor = -1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff());
            int drop = -1;
            double alpha = 1.0;
            for (int r = 0; r < q; ++r) {
                if (x(r) >= floor) continue;
                const double zr = z(idx[static_cast<std::size_t>(r)]);
                const double a = zr / (zr - x(r));
                if (drop < 0 || a < alpha) {
                    alpha = a;
                    drop = r;
                }
            }
            if (drop < 0) {
                for (int r = 0; r < q; ++r)
                    z(idx[static_cast<std::size_t>(r)]) = std::max(0.0, x(r));
                solved = true;
                break;
            }
            for (int r = 0; r < q; ++r) {
                const int i = idx[static_cast<std::size_t>(r)];
                z(i) = std::max(0.0, z(i) + alpha * (x(r) - z(i)));
            }
            z(idx[static_cast<std::size_t>(drop)]) = 0.0;
            for (int r = drop; r + 1 < q; ++r)
                idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r + 1)];
            --q;
        }
        if (!solved || q == 0) break;
        const double s = z.sum();
        if (!(s > 0.0)) break;
        z /= s;
        have = true;
        if (obj.on_body(z)) break;  // distance zero: nothing left to improve
        const LamVec g = obj.grad(z);
        double nu = 0.0;
        for (int r = 0; r < q; ++r) nu += g(idx[static_cast<std::size_t>(r)]);
        nu /= q;
        int enter = -1;
        for (int j = 0; j < m; ++j) {
            bool active = false;
            for (int r = 0; r < q; ++r)
                if (idx[static_cast<std::size_t>(r)] == j) {
                    active = true;
                    break;
                }
            if (!active && (enter < 0 || g(j) < g(enter))) enter = j;
        }
        if (enter < 0 || g(enter) >= nu - 1e-12 * (1.0 + std::abs(nu))) break;
        idx[static_cast<std::size_t>(q++)] = enter;
        last_in = enter;
    }
    if (have) lam = z;
    return have;
}

struct EuclideanObjective {
    const Eigen::MatrixXd& v;
    Vec target;

    double value(const LamVec& lam) const {
        const Vec r = v * lam - target;
        return 0.5 * r.squaredNorm();
    }
    LamVec grad(const LamVec& lam) const {
        const Vec r = v * lam - target;
        return v.transpose() * r;
    }
    bool on_body(const LamVec& lam) const {
        const Vec r = v * lam - target;
        return r.norm() <= 1e-7 * (1.0 + target.norm());
    }
    // Foot of the perpendicular onto the affine span of the face vertices:
    // bordered least-squares system for the weights and the multiplier of the
    // sum-to-one constraint.
    bool face_system(const std::array<int, kMaxHullVertices>& idx, int q, Eigen::VectorXd& x,
                     bool& consistent) const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(q + 1, q + 1);
        Eigen::VectorXd rhs(q + 1);
        for (int r = 0; r < q; ++r) {
            for (int c = 0; c < q; ++c)
                a(r, c) = v.col(idx[static_cast<std::size_t>(r)])
                              .dot(v.col(idx[static_cast<std::size_t>(c)]));
            a(r, q) = 1.0;
            a(q, r) = 1.0;
            rhs(r) = v.col(idx[static_cast<std::size_t>(r)]).dot(target);
        }
        rhs(q) = 1.0;
        const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
        if (!sol.allFinite()) return false;
        x = sol.head(q);
        consistent = (a * sol - rhs).norm() <= 1e-8 * (1.0 + rhs.norm());
        return true;
    }
    // A face holds at most n + 1 affinely independent vertices.
    bool face_solve(LamVec& lam) const {
        return active_set_solve(*this, lam, static_cast<int>(v.rows()) + 1);
    }
};

// With y = V lam, s = -<y,y>_L and w = -<p,y>_L/(R sqrt(s)), the squared
// distance to the normalized combination is R^2 acosh(w)^2.
struct HyperbolicObjective {
    LamMat gram;  // V^T J V
    LamVec b;     // V^T J p
    double radius;
    int face_cap;  // ambient dimension: linear independence bound for a face

    double value(const LamVec& lam) const {
        const double s = -lam.dot(gram * lam);
        const double w = std::max(1.0, -b.dot(lam) / (radius * std::sqrt(s)));
        const double d = radius * std::acosh(w);
        return 0.5 * d * d;
    }
    LamVec grad(const LamVec& lam) const {
        const LamVec glam = gram * lam;
        const double s = -lam.dot(glam);
        const double sq = std::sqrt(s);
        const double py = b.dot(lam);
        const double w = std::max(1.0, -py / (radius * sq));
        const LamVec dw = (-1.0 / (radius * sq)) * b - (py / (radius * s * sq)) * glam;
        return (radius * radius * acosh_ratio(w)) * dw;
    }
    // w - 1 = dist^2 / (2 R^2) to leading order, and its round-off floor is a
    // couple orders below this band, so the certificate is decidable.
    bool on_body(const LamVec& lam) const {
        const double s = -lam.dot(gram * lam);
        if (!(s > 0.0)) return false;
        return -b.dot(lam) / (radius * std::sqrt(s)) - 1.0 <= 4e-12;
    }
    // The objective is scale-free in lam, so stationarity on the face spanned
    // by the active vertices reads G_S x = c b_S with c > 0: one linear solve,
    // with the scale c absorbed by the caller's normalization.
    bool face_system(const std::array<int, kMaxHullVertices>& idx, int q, Eigen::VectorXd& x,
                     bool& consistent) const {
        Eigen::MatrixXd gs(q, q);
        Eigen::VectorXd bs(q);
        for (int r = 0; r < q; ++r) {
            for (int c = 0; c < q; ++c)
                gs(r, c) = gram(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
            bs(r) = b(idx[static_cast<std::size_t>(r)]);
        }
        x = gs.fullPivLu().solve(bs);
        if (!x.allFinite()) return false;
        consistent = (gs * x - bs).norm() <= 1e-8 * (1.0 + bs.norm());
        return true;
    }
    bool face_solve(LamVec& lam) const { return active_set_solve(*this, lam, face_cap); }
};

ProjectionResult on_body_result(const Point& p, const LamVec& lambda) {
    ProjectionResult out;
    out.lambda = lambda;
    out.foot = p;
    out.dist = 0.0;
    out.grad = {p, Vec::Zero(p.x.size())};
    return out;
}

ProjectionResult assemble(const Hull& h, const Point& p, const LamVec& lambda) {
    ProjectionResult out;
    out.lambda = lambda;
    out.foot = hull_point(h, out.lambda);
    out.dist = distance(p, out.foot);
    if (out.dist > kOnBodyTol) {
        const TangentVector lg = log_map(p, out.foot);
        out.grad = {p, (-1.0 / out.dist) * lg.v};
    } else {
        out.grad = {p, Vec::Zero(p.x.size())};
    }
    return out;
}

template <class Obj>
ProjectionResult solve_projection(const Obj& obj, const Hull& h, const Point& p,
                                  const ProjectOptions& opts) {
    const int m = static_cast<int>(h.vertices.size());

    if (opts.hint != nullptr && opts.hint->size() == m) {
        LamVec seed = simplex_project_impl<LamVec>(LamVec(*opts.hint));
        SimplexSolve warm =
            run_projected_gradient(obj, std::move(seed), opts.max_iterations, opts.tolerance);
        if (warm.converged)
            return warm.on_body ? on_body_result(p, warm.lambda) : assemble(h, p, warm.lambda);
    }

    // Deterministic multi-start: barycenter plus each vertex, a short budget
    // apiece, then the best start is polished to tolerance.
    constexpr int kBudgetIters = 12;
    SimplexSolve best;
    best.value = std::numeric_limits<double>::infinity();
    for (int s = -1; s < m; ++s) {
        LamVec start = LamVec::Zero(m);
        if (s < 0)
            start.setConstant(1.0 / m);
        else
            start(s) = 1.0;
        SimplexSolve r = run_projected_gradient(obj, std::move(start), kBudgetIters,
                                                opts.tolerance);
        if (r.converged)
            return r.on_body ? on_body_result(p, r.lambda) : assemble(h, p, r.lambda);
        if (r.value < best.value) best = std::move(r);
    }
    SimplexSolve polished = run_projected_gradient(obj, std::move(best.lambda),
                                                   opts.max_iterations, opts.tolerance);
    if (!polished.converged)
        throw ConvergenceError("hull projection did not converge", polished.residual);
    return polished.on_body ? on_body_result(p, polished.lambda)
                            : assemble(h, p, polished.lambda);
}

}  // namespace

Eigen::VectorXd simplex_projection(const Eigen::VectorXd& y) {
    return simplex_project_impl<Eigen::VectorXd>(y);
}

Ball make_ball(const Point& center, double radius) {
    if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
    return {center, radius};
}

Hull make_hull(const ModelSpace& space, const std::vector<Point>& vertices) {
    if (space.kind == SpaceKind::Warped)
        throw DomainError("hulls are supported in Euclidean and constant-curvature spaces only");
    if (vertices.empty()) throw DomainError("hull needs at least one vertex");
    if (vertices.size() > kMaxHullVertices)
        throw DomainError("hull supports at most 32 vertices");
    for (const Point& v : vertices) check_same_space(space, v.space, "make_hull");
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (distance(vertices[i], vertices[j]) < 1e-10)
                throw DomainError("hull has coincident vertices");

    const int ad = space.ambient_dim();
    const int m = static_cast<int>(vertices.size());
    Eigen::MatrixXd v(ad, m);
    for (int j = 0; j < m; ++j) v.col(j) = vertices[static_cast<std::size_t>(j)].x;

    // Full-dimensionality: hyperboloid hulls need a full cone over the vertex
    // rays; Euclidean hulls need affinely independent spans.
    if (space.kind == SpaceKind::ConstantNegative) {
        if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(v).rank() < ad)
            throw DomainError("hull is not full-dimensional");
    } else {
        Eigen::MatrixXd diffs(ad, std::max(1, m - 1));
        for (int j = 1; j < m; ++j) diffs.col(j - 1) = v.col(j) - v.col(0);
        if (m - 1 < ad || Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(diffs).rank() < ad)
            throw DomainError("hull is not full-dimensional");
    }

    Eigen::MatrixXd gram;
    if (space.kind == SpaceKind::ConstantNegative) {
        Eigen::MatrixXd jv = v;
        jv.row(0) *= -1.0;
        gram = v.transpose() * jv;
    } else {
        gram = v.transpose() * v;
    }
    return {space, vertices, std::move(v), std::move(gram)};
}

Point hull_point(const Hull& h, const Eigen::VectorXd& lambda) {
    if (lambda.size() != h.vertex_matrix.cols()) throw DomainError("weight vector has wrong size");
    const Vec y = h.vertex_matrix * lambda;
    if (h.space.kind == SpaceKind::Euclidean) return make_point(h.space, y);
    const double s = -lorentz_inner(y, y);
    if (!(s > 0.0)) throw DomainError("degenerate hull combination");
    const double radius = 1.0 / std::sqrt(-h.space.k);
    return renormalized(h.space, (radius / std::sqrt(s)) * y);
}

ProjectionResult project(const Ball& b, const Point& p) {
    check_same_space(b.center.space, p.space, "project");
    const double d0 = distance(b.center, p);
    ProjectionResult out;
    if (d0 <= b.radius + kOnBodyTol) {
        out.foot = p;
        out.dist = 0.0;
        out.grad = {p, Vec::Zero(p.x.size())};
        return out;
    }
    const TangentVector toward_center = log_map(p, b.center);
    out.foot = exp_map(b.center, {b.center, (b.radius / d0) * log_map(b.center, p).v});
    out.dist = d0 - b.radius;
    out.grad = {p, (-1.0 / d0) * toward_center.v};
    return out;
}

ProjectionResult project(const Hull& h, const Point& p, const ProjectOptions& opts) {
    check_same_space(h.space, p.space, "project");
    if (h.space.kind == SpaceKind::Euclidean) {
        return solve_projection(EuclideanObjective{h.vertex_matrix, p.x}, h, p, opts);
    }
    HyperbolicObjective obj{LamMat(h.gram), LamVec(h.vertex_matrix.cols()),
                            1.0 / std::sqrt(-h.space.k),
                            static_cast<int>(h.vertex_matrix.rows())};
    Vec jp = p.x;
    jp(0) = -jp(0);
    obj.b = h.vertex_matrix.transpose() * jp;
    return solve_projection(obj, h, p, opts);
}

double distance_to(const Ball& b, const Point& p) {
    return std::max(0.0, distance(b.center, p) - b.radius);
}

double distance_to(const Hull& h, const Point& p, const ProjectOptions& opts) {
    return project(h, p, opts).dist;
}

bool contains(const Ball& b, const Point& p, double tol) {
    return distance_to(b, p) <= tol;
}

bool contains(const Hull& h, const Point& p, double tol) {
    return distance_to(h, p) <= tol;
}

TangentVector grad_distance(const Ball& b, const Point& p) {
    check_same_space(b.center.space, p.space, "grad_distance");
    const double d0 = distance(b.center, p);
    if (d0 <= b.radius + kOnBodyTol)
        throw DomainError("grad_distance: point is on or inside the body");
    return {p, (-1.0 / d0) * log_map(p, b.center).v};
}

TangentVector grad_distance(const Hull& h, const Point& p, const ProjectOptions& opts) {
    ProjectionResult r = project(h, p, opts);
    if (r.dist <= kOnBodyTol)
        throw DomainError("grad_distance: point is on or inside the body");
    return r.grad;
}

TangentVector grad_distance_squared(const Ball& b, const Point& p) {
    check_same_space(b.center.space, p.space, "grad_distance_squared");
    const double d0 = distance(b.center, p);
    if (d0 <= b.radius + kOnBodyTol) return {p, Vec::Zero(p.x.size())};
    return {p, (-2.0 * (d0 - b.radius) / d0) * log_map(p, b.center).v};
}

TangentVector grad_distance_squared(const Hull& h, const Point& p, const ProjectOptions& opts) {
    ProjectionResult r = project(h, p, opts);
    if (r.dist <= kOnBodyTol) return {p, Vec::Zero(p.x.size())};
    return {p, (2.0 * r.dist) * r.grad.v};
}

double diameter(const Hull& h) {
    double d = 0.0;
    for (std::size_t i = 0; i < h.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < h.vertices.size(); ++j)
            d = std::max(d, distance(h.vertices[i], h.vertices[j]));
    return d;
}

const ModelSpace& body_space(const ConvexBody& b) {
    return std::visit(
        [](const auto& body) -> const ModelSpace& {
            if constexpr (std::is_same_v<std::decay_t<decltype(body)>, Ball>)
                return body.center.space;
            else
                return body.space;
        },
        b);
}

Point interior_anchor(const ConvexBody& b) {
    if (const Ball* ball = std::get_if<Ball>(&b)) return ball->center;
    const Hull& h = std::get<Hull>(b);
    const int m = static_cast<int>(h.vertices.size());
    return hull_point(h, Eigen::VectorXd::Constant(m, 1.0 / m));
}

double distance_to(const ConvexBody& b, const Point& p) {
    return std::visit([&p](const auto& body) { return distance_to(body, p); }, b);
}

TangentVector grad_distance(const ConvexBody& b, const Point& p) {
    return std::visit([&p](const auto& body) { return grad_distance(body, p); }, b);
}

TangentVector grad_distance_squared(const ConvexBody& b, const Point& p) {
    return std::visit([&p](const auto& body) { return grad_distance_squared(body, p); }, b);
}

bool contains(const ConvexBody& b, const Point& p, double tol) {
    return std::visit([&](const auto& body) { return contains(body, p, tol); }, b);
}

void check_nested(const ConvexBody& inner, const ConvexBody& outer) {
    check_same_space(body_space(inner), body_space(outer), "check_nested");
    const char* msg = "inner body is not contained in the outer body";

    if (const Ball* bi = std::get_if<Ball>(&inner)) {
        if (const Ball* bo = std::get_if<Ball>(&outer)) {
            if (distance(bi->center, bo->center) + bi->radius > bo->radius + 1e-9)
                throw DomainError(msg);
            return;
        }
        // ball in hull: spot-check a deterministic sample of the ball's boundary
        const FrameField f = orthonormal_frame(bi->center);
        const int n = bi->center.space.n;
        constexpr int kSamples = 128;
        for (int a = 0; a < kSamples; ++a) {
            Vec dir = Vec::Zero(bi->center.x.size());
            for (int i = 0; i < n; ++i)
                dir += std::cos(2.0 * M_PI * std::fmod(0.61803398875 * (a + 1) * (i + 1), 1.0)) *
                       f[i];
            const double nn = metric_norm(bi->center, dir);
            if (nn < 1e-12) continue;
            const Point bd = exp_map(bi->center, {bi->center, (bi->radius / nn) * dir});
            if (!contains(outer, bd, 1e-8)) throw DomainError(msg);
        }
        return;
    }
    for (const Point& v : std::get<Hull>(inner).vertices)
        if (!contains(outer, v, 1e-8)) throw DomainError(msg);
}

LipschitzStats lipschitz_ratio_sweep(
    const std::function<TangentVector(const Point&)>& field,
    const std::function<Point(std::uint64_t)>& sampler, std::int64_t pairs) {
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(pairs));
    LipschitzStats stats;
    for (std::int64_t i = 0; i < pairs; ++i) {
        const Point p = sampler(static_cast<std::uint64_t>(2 * i));
        const Point q = sampler(static_cast<std::uint64_t>(2 * i + 1));
        const double d = distance(p, q);
        if (d < 1e-10) {
            ++stats.pairs_skipped;
            continue;
        }
        const TangentVector fp = field(p);
        const TangentVector fq = field(q);
        const TangentVector moved = parallel_transport(q, p, fq);
        const double diff = metric_norm(p, fp.v - moved.v);
        ratios.push_back(diff / d);
    }
    stats.pairs_used = static_cast<std::int64_t>(ratios.size());
    if (ratios.empty()) return stats;

    for (double r : ratios) {
        stats.max_ratio = std::max(stats.max_ratio, r);
        stats.mean_ratio += r;
    }
    stats.mean_ratio /= static_cast<double>(ratios.size());

    constexpr int kBuckets = 20;
    stats.bucket_upper_edges.resize(kBuckets);
    stats.bucket_counts.assign(kBuckets, 0);
    const double top = stats.max_ratio > 0.0 ? stats.max_ratio : 1.0;
    for (int b = 0; b < kBuckets; ++b)
        stats.bucket_upper_edges[static_cast<std::size_t>(b)] = top * (b + 1) / kBuckets;
    for (double r : ratios) {
        int b = static_cast<int>(std::floor(r / top * kBuckets));
        b = std::clamp(b, 0, kBuckets - 1);
        ++stats.bucket_counts[static_cast<std::size_t>(b)];
    }
    return stats;
}

}  // namespace gklab
