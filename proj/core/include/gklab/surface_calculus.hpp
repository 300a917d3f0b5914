#pragma once

#include "gklab/convex_body.hpp"
#include "gklab/model_space.hpp"

#include <limits>
#include <memory>
#include <vector>

namespace gklab {

// Scalar function on the model space with a gradient.  Level surfaces of
// convex instances are the hypersurfaces this module works with.
struct ScalarField {
    virtual ~ScalarField() = default;
    virtual double value(const Point& p) const = 0;
    virtual TangentVector gradient(const Point& p) const = 0;

    // Radius of a ball around p on which the gradient is known to be smooth.
    // Finite-difference kernels shrink their step to stay inside it; fields
    // with second-derivative jumps (squared distances across a boundary)
    // override this.
    virtual double smoothness_radius(const Point&) const {
        return std::numeric_limits<double>::infinity();
    }

    // True when `value` is a genuine metric distance (1-Lipschitz with
    // unit-speed level flow): the gap from a point with positive value to the
    // level set {value = c} is then exactly |value - c|.
    virtual bool metric_distance() const { return false; }
};

// Distance to a fixed point (its levels are geodesic spheres).
class SphereDistanceField : public ScalarField {
  public:
    explicit SphereDistanceField(Point center) : center_(std::move(center)) {}
    double value(const Point& p) const override { return distance(center_, p); }
    TangentVector gradient(const Point& p) const override;
    bool metric_distance() const override { return true; }
    const Point& center() const { return center_; }

  private:
    Point center_;
};

// Distance to a convex body (gradient defined off the body only).
class BallDistanceField : public ScalarField {
  public:
    explicit BallDistanceField(Ball b) : body_(std::move(b)) {}
    double value(const Point& p) const override { return distance_to(body_, p); }
    TangentVector gradient(const Point& p) const override { return grad_distance(body_, p); }
    bool metric_distance() const override { return true; }
    const Ball& body() const { return body_; }

  private:
    Ball body_;
};

class HullDistanceField : public ScalarField {
  public:
    explicit HullDistanceField(Hull h) : body_(std::move(h)) {}
    double value(const Point& p) const override { return distance_to(body_, p); }
    TangentVector gradient(const Point& p) const override { return grad_distance(body_, p); }
    bool metric_distance() const override { return true; }
    const Hull& body() const { return body_; }

  private:
    Hull body_;
};

// Quadrature grid on the direction sphere at a base point.  n = 3 uses a
// Gauss-Legendre x uniform product grid in (cos polar, azimuth); n = 2 uses
// uniform angles (`azimuth` many; `polar` is ignored).  fd_step scales the
// finite-difference steps used for shape operators on the resulting surfaces.
struct GridSpec {
    int polar = 64;
    int azimuth = 128;
    double fd_step = 1e-4;
};

// A closed convex hypersurface sampled along geodesic rays from an interior
// base point: the level set {field = level}, star-shaped about the base.
struct RadialGraph {
    ModelSpace space;
    Point base;
    std::shared_ptr<const ScalarField> field;
    double level = 0.0;
    GridSpec spec;
    std::vector<Vec> directions;     // unit tangent vectors at base
    std::vector<double> weights;     // direction-sphere quadrature weights
    std::vector<double> radii;       // geodesic distance from base, per ray
    std::vector<Point> points;       // exp_base(radius * direction)
    std::vector<Vec> radial_units;   // unit radial geodesic velocity at each point

    int size() const { return static_cast<int>(directions.size()); }
};

// Pointwise curvature data of a surface: outward unit normal, principal
// curvatures sorted descending, their directions, the Gauss-Kronecker
// curvature (product), and the area element relative to the grid weight.
struct SurfacePointData {
    Point point;
    TangentVector normal;
    std::vector<double> principal_curvatures;
    std::vector<Vec> principal_directions;
    double gk = 0.0;
    double area_element = 0.0;
};

RadialGraph make_level_surface(const ModelSpace& space, const Point& base,
                               std::shared_ptr<const ScalarField> field, double level,
                               const GridSpec& spec, int workers = 1);

// Geodesic sphere as a radial graph (radii are exact, no root finding).
RadialGraph make_sphere_surface(const Point& center, double radius, const GridSpec& spec);

// Level set {d_body = t}, t > 0, based at the body's natural interior point.
RadialGraph parallel_hypersurface(const Ball& body, double t, const GridSpec& spec,
                                  int workers = 1);
RadialGraph parallel_hypersurface(const Hull& body, double t, const GridSpec& spec,
                                  int workers = 1);

SurfacePointData surface_point_data(const RadialGraph& g, int index);

// Matrix of the level-set shape operator of `u` at x in the given frame
// (normal last): S_ij = <e_i, D_{e_j} (grad u / |grad u|)>, symmetrized.
// The step h is clamped to the field's smoothness radius at x.
Eigen::MatrixXd shape_operator_matrix(const ScalarField& u, const Point& x,
                                      const FrameField& frame, double h);

// Step actually used by the finite-difference kernels at p.
double clamped_fd_step(const ScalarField& u, const Point& p, double h);

// Quadrature totals over the surface.
double area(const RadialGraph& g, int workers = 1);
double total_curvature(const RadialGraph& g, int workers = 1);  // integral of GK

// Total curvature of the parallel surfaces at t, t/2, t/4, ... until two
// consecutive values agree to `tol`, then Richardson-extrapolated to t = 0.
struct CurvatureLimit {
    double value = 0.0;                 // extrapolated limit
    std::vector<double> t_values;
    std::vector<double> curvatures;     // G at each t
    bool monotone = true;               // nondecreasing in t within 1e-6
    bool converged = false;             // consecutive values met the tolerance
};
template <class Body>
CurvatureLimit total_curvature_limit(const Body& body, double t0, const GridSpec& spec,
                                     double tol = 1e-4, int max_halvings = 6, int workers = 1);

// Discrete Hausdorff distance between the two sampled point sets.
double hausdorff_distance(const RadialGraph& a, const RadialGraph& b, int workers = 1);

// Closed-curve diagnostics (n = 2): turning integral of the geodesic
// curvature, the Gauss curvature integral over the enclosed region, the
// enclosed area, and the Gauss-Bonnet defect (zero in the smooth limit).
struct CurveReport {
    double turning = 0.0;             // integral of kappa ds
    double curvature_integral = 0.0;  // integral of K dA over the region
    double enclosed_area = 0.0;
    double gauss_bonnet_defect = 0.0;  // turning + curvature_integral - 2 pi
};
CurveReport curve_report(const RadialGraph& g, int workers = 1);

// Closed forms used as cross-checks: the warped-profile generalization of
// sinh, its derivative, and its antiderivative, specialized per space.
double radial_profile(const ModelSpace& space, double r);        // snh(r)
double radial_profile_deriv(const ModelSpace& space, double r);  // snh'(r)
double radial_profile_integral(const ModelSpace& space, double r);

}  // namespace gklab
