#pragma once

#include "gklab/convex_body.hpp"
#include "gklab/surface_calculus.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace gklab {

// The interpolating function u(p) = lambda * d_D(p) + d_Omega(p)^2 for nested
// convex bodies D inside Omega.  It is convex, vanishes exactly on D, equals
// lambda*d_D on Omega, and picks up the squared-distance term outside Omega.
// The gradient is undefined inside D when lambda > 0.
class InterpolantField : public ScalarField {
  public:
    InterpolantField(ConvexBody inner, ConvexBody outer, double lambda);

    double value(const Point& p) const override;
    TangentVector gradient(const Point& p) const override;
    double smoothness_radius(const Point& p) const override;

    double inner_distance(const Point& p) const { return distance_to(inner_, p); }
    double outer_distance(const Point& p) const { return distance_to(outer_, p); }
    double lambda() const { return lambda_; }
    const ConvexBody& inner() const { return inner_; }
    const ConvexBody& outer() const { return outer_; }

  private:
    ConvexBody inner_;
    ConvexBody outer_;
    double lambda_;
};

// Orthonormal frame adapted to a level set of u: e_1..e_{n-1} are principal
// directions of the level set, the last vector is grad u/|grad u| (outward),
// kappas are the matching principal curvatures.
struct AdaptedFrame {
    FrameField frame;
    std::vector<double> kappas;
    double grad_norm = 0.0;
};

AdaptedFrame adapted_frame(const ScalarField& u, const Point& p, double fd_step = 1e-4);

// Directional derivative of |grad u| along frame vector e_j, as a central
// difference at the clamped step (coarse) and at half that step (fine); the
// spread between the two is the discretization noise estimate.
struct DerivPair {
    double coarse = 0.0;
    double fine = 0.0;
};
DerivPair grad_norm_derivative(const ScalarField& u, const AdaptedFrame& fr, int j,
                               double fd_step = 1e-4);

// Everything the comparison formula consumes at one point.
struct IntegrandSample {
    Point point;
    std::vector<double> kappas;            // principal curvatures of the level set
    std::vector<double> cofactor_diag;     // products of kappas omitting index i
    Eigen::MatrixXd cofactor_off;          // omitting i and j (i != j); 0 on diagonal
    double grad_norm = 0.0;
    std::vector<double> grad_norm_derivs;  // fine-step values, one per tangent index
    std::vector<double> r_inin;            // curvature components R(e_i,e_n,e_i,e_n)
    Eigen::MatrixXd r_ijin;                // R(e_i,e_j,e_i,e_n)
    double term1 = 0.0;  // sum_i cofactor_diag[i] * r_inin[i]
    double term2 = 0.0;  // sum_{i != j} cofactor_off(i,j) * (deriv_j/|grad u|) * r_ijin(i,j)
};

IntegrandSample comparison_integrands(const ScalarField& u, const Point& p,
                                      double fd_step = 1e-4);

// The n = 3 mixed-term scalar: sum over tangent index pairs of
// (|grad u|_j / |grad u|) R(e_i, e_j, e_i, e_n).
double f_lambda(const ScalarField& u, const Point& p, double fd_step = 1e-4);

// Volume integral of f over {lo <= u <= hi} by the coarea formula: a
// Gauss-Legendre rule in the level value, a level-surface quadrature per node.
// The pair overload integrates two integrands over one sweep of the region,
// for integrands that share their expensive per-point state.
double region_integral(const ModelSpace& space, const Point& base,
                       const std::shared_ptr<const ScalarField>& field, double lo, double hi,
                       const GridSpec& grid, int level_order,
                       const std::function<double(const Point&)>& f, int workers = 1);
std::pair<double, double> region_integral(
    const ModelSpace& space, const Point& base, const std::shared_ptr<const ScalarField>& field,
    double lo, double hi, const GridSpec& grid, int level_order,
    const std::function<std::pair<double, double>(const Point&)>& f, int workers = 1);

struct RefinementEntry {
    int polar = 0;
    int azimuth = 0;
    double fd_step = 0.0;
    double residual = 0.0;
};

// Both sides of the total-curvature comparison between the level sets
// {u = level_lo} and {u = level_hi}:
//   lhs  = G(outer level) - G(inner level)
//   rhs  = -rhs_term1 + rhs_term2 (volume integrals of the two sums)
// residual = |lhs - rhs|; inequality_margin = lhs - rhs_term2, nonnegative in
// nonpositive curvature.
struct ComparisonReport {
    double lhs = 0.0;
    double rhs_term1 = 0.0;
    double rhs_term2 = 0.0;
    double residual = 0.0;
    double inequality_margin = 0.0;
    std::vector<RefinementEntry> refinement_history;
};

ComparisonReport comparison_identity_report(const ModelSpace& space, const Point& base,
                                            const std::shared_ptr<const ScalarField>& field,
                                            double level_lo, double level_hi,
                                            const GridSpec& finest_grid, int refinements = 2,
                                            int level_order = 32, int workers = 1);

// Pointwise material for the gradient estimates; the sample point must lie
// strictly outside the outer body.
struct EstimateSample {
    double d_inner = 0.0;
    double d_outer = 0.0;
    double dot = 0.0;        // <grad d_Omega, grad d_D>
    double grad_norm = 0.0;  // |grad u|
    double norm_identity_residual = 0.0;
    double max_grad_norm_deriv = 0.0;  // max_j of |fine-step derivative|
    double max_richardson_gap = 0.0;   // max_j of |coarse - fine|
};

EstimateSample n3_estimate_sample(const InterpolantField& u, const Point& p,
                                  double fd_step = 1e-4);

}  // namespace gklab
