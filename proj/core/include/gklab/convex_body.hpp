#pragma once

#include "gklab/model_space.hpp"

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

namespace gklab {

// Nearest-point projection onto a convex body: the foot point, the distance,
// and the unit outward gradient of the distance function (zero-length when the
// query lies on or inside the body).  For hulls, `lambda` carries the simplex
// weights of the foot and can seed the next nearby query.
struct ProjectionResult {
    Point foot;
    double dist = 0.0;
    TangentVector grad;
    Eigen::VectorXd lambda;  // empty for balls
};

// Geodesic ball given by center and radius (radius > 0).
struct Ball {
    Point center;
    double radius = 0.0;
};

// Geodesic convex hull of finitely many points.  In the hyperboloid model the
// hull is the sheet's intersection with the Euclidean convex cone over the
// vertex rays, so membership and projection reduce to optimization over
// simplex weights.  Supported in Euclidean and ConstantNegative spaces only.
struct Hull {
    ModelSpace space;
    std::vector<Point> vertices;
    Eigen::MatrixXd vertex_matrix;  // ambient coords, one column per vertex
    Eigen::MatrixXd gram;           // pairwise inner products of the columns
};

Ball make_ball(const Point& center, double radius);
Hull make_hull(const ModelSpace& space, const std::vector<Point>& vertices);

// Point of the hull with the given simplex weights (Euclidean: affine
// combination; hyperboloid: Lorentz-normalized linear combination).
Point hull_point(const Hull& h, const Eigen::VectorXd& lambda);

struct ProjectOptions {
    const Eigen::VectorXd* hint = nullptr;  // warm-start weights
    int max_iterations = 600;
    double tolerance = 1e-10;  // stationarity residual on the simplex
};

ProjectionResult project(const Ball& b, const Point& p);
ProjectionResult project(const Hull& h, const Point& p, const ProjectOptions& opts = {});

double distance_to(const Ball& b, const Point& p);
double distance_to(const Hull& h, const Point& p, const ProjectOptions& opts = {});

bool contains(const Ball& b, const Point& p, double tol = 1e-9);
bool contains(const Hull& h, const Point& p, double tol = 1e-9);

// Unit outward gradient of the distance function; the query must lie strictly
// outside the body (the distance function is not differentiable on it).
TangentVector grad_distance(const Ball& b, const Point& p);
TangentVector grad_distance(const Hull& h, const Point& p, const ProjectOptions& opts = {});

// Gradient of dist^2, i.e. -2 log_p(foot); defined everywhere, zero on the body.
TangentVector grad_distance_squared(const Ball& b, const Point& p);
TangentVector grad_distance_squared(const Hull& h, const Point& p,
                                    const ProjectOptions& opts = {});

double diameter(const Hull& h);

// Max and distribution of |field(p) - transport(field(q))| / dist(p,q) over
// sampled pairs; the raw material for empirical Lipschitz constants.
struct LipschitzStats {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    std::vector<double> bucket_upper_edges;
    std::vector<std::int64_t> bucket_counts;
    std::int64_t pairs_used = 0;
    std::int64_t pairs_skipped = 0;
};

LipschitzStats lipschitz_ratio_sweep(
    const std::function<TangentVector(const Point&)>& field,
    const std::function<Point(std::uint64_t)>& sampler, std::int64_t pairs);

// Euclidean projection of a vector onto the probability simplex.
Eigen::VectorXd simplex_projection(const Eigen::VectorXd& y);

// Either supported body shape, for code that treats them uniformly.
using ConvexBody = std::variant<Ball, Hull>;

const ModelSpace& body_space(const ConvexBody& b);
Point interior_anchor(const ConvexBody& b);  // ball center / uniform hull point
double distance_to(const ConvexBody& b, const Point& p);
TangentVector grad_distance(const ConvexBody& b, const Point& p);
TangentVector grad_distance_squared(const ConvexBody& b, const Point& p);
bool contains(const ConvexBody& b, const Point& p, double tol = 1e-9);

// Throws unless inner lies inside outer (exact for ball-in-ball and
// hull-vertex containment; ball-in-hull is checked on a boundary sample).
void check_nested(const ConvexBody& inner, const ConvexBody& outer);

}  // namespace gklab
