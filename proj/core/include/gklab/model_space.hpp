#pragma once

#include "gklab/base.hpp"

#include <array>
#include <vector>

namespace gklab {

// Radial warp profile phi(r) = sinh(r) + c*(r - r0)_+^3.
//
// For any r0 > 0, c >= 0 this satisfies phi(0) = 0, phi'(0) = 1, phi' >= 1 and
// phi'' >= 0, so the warped space below is Cartan-Hadamard; construction
// rejects parameters outside that family.  Inside {r <= r0} the profile is
// exactly sinh, i.e. the space has constant curvature -1 there.
struct WarpProfile {
    double r0 = 1.0;
    double c = 0.0;

    double value(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;

    double radial_curvature(double r) const;      // -phi''/phi, limit -1 at r=0
    double tangential_curvature(double r) const;  // (1 - phi'^2)/phi^2

    // (phi(r)/r)^2 and its derivative; smooth through r = 0 (series there).
    double metric_factor(double r) const;
    double metric_factor_deriv(double r) const;
    // (1 - metric_factor)/r, finite at r = 0.
    double metric_factor_deficit(double r) const;
};

enum class SpaceKind { Euclidean, ConstantNegative, Warped };

struct Point;

// One of the three nonpositively curved model spaces:
//   Euclidean(n)          chart: R^n, metric delta
//   ConstantNegative(n,k) hyperboloid <x,x>_L = 1/k in R^{n+1}, k < 0
//   Warped(n,phi)         chart: R^n, g = dr^2 + phi(r)^2 dtheta^2 around a pole
// Values are immutable and cheap to copy; points carry their space with them.
struct ModelSpace {
    SpaceKind kind = SpaceKind::Euclidean;
    int n = 3;       // manifold dimension, 2..kMaxDim
    double k = 0.0;  // sectional curvature (ConstantNegative); 0 / core -1 otherwise
    WarpProfile warp;

    static ModelSpace euclidean(int n);
    static ModelSpace hyperbolic(int n, double k = -1.0);
    static ModelSpace warped(int n, double r0, double c);

    int ambient_dim() const { return kind == SpaceKind::ConstantNegative ? n + 1 : n; }
    Point origin() const;

    bool operator==(const ModelSpace& o) const;
    bool operator!=(const ModelSpace& o) const { return !(*this == o); }
};

// Point in chart coordinates.  Hyperboloid points are kept on the sheet
// (<x,x>_L = 1/k, x0 > 0) to 1e-12 and renormalized after every operation.
struct Point {
    ModelSpace space;
    Vec x;
};

// Tangent vector attached to a base point (hyperboloid: Lorentz-orthogonal to
// the base; charts: plain coordinate velocity).
struct TangentVector {
    Point base;
    Vec v;
};

// Orthonormal frame at a point; Gram matrix within 1e-10 of the identity,
// checked at construction.
struct FrameField {
    Point base;
    std::vector<Vec> e;

    const Vec& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(e.size()); }
};

double lorentz_inner(const Vec& a, const Vec& b);

Point make_point(const ModelSpace& space, const Vec& chart_coords);
Point renormalized(const ModelSpace& space, Vec x);

// Riemannian inner product of coordinate vectors u, v at p.
double metric_inner(const Point& p, const Vec& u, const Vec& v);
double metric_norm(const Point& p, const Vec& u);
Mat metric_matrix(const Point& p);

// Orthogonal projection of an ambient/coordinate vector onto T_p M
// (hyperboloid only does real work; charts return the input).
Vec project_to_tangent(const Point& p, const Vec& w);

double inner(const TangentVector& u, const TangentVector& v);
double norm(const TangentVector& u);

Point exp_map(const Point& p, const TangentVector& v);
TangentVector log_map(const Point& p, const Point& q);
double distance(const Point& p, const Point& q);
TangentVector parallel_transport(const Point& p, const Point& q, const TangentVector& v);

// Endpoint and endpoint velocity of t -> exp_p(t v) at t = 1.  The velocity
// has the same length as v (geodesics are constant speed).
struct GeodesicEnd {
    Point point;
    TangentVector velocity;
};
GeodesicEnd geodesic_endpoint(const Point& p, const TangentVector& v);

// Curvature tensor as a quadrilinear form, sign fixed so that
// r(u,v,u,v) / (|u|^2|v|^2 - <u,v>^2) is the sectional curvature.
double riemann(const Point& p, const Vec& u, const Vec& v, const Vec& w, const Vec& z);
double riemann_component(const FrameField& f, int i, int j, int k, int l);
double sectional_curvature(const Point& p, const TangentVector& u, const TangentVector& v);

// Matrix of the curvature operator on Lambda^2 in the wedge basis
// {e_i ^ e_j : i < j}, ordered (0,1),(0,2),...,(n-2,n-1).  Symmetric; equals
// k*I in constant curvature.
WedgeMat curvature_operator_matrix(const FrameField& f);
int wedge_index(int n, int i, int j);

// Deterministic reference frame at p (coordinate axes, Gram-Schmidt).
FrameField orthonormal_frame(const Point& p);
// Frame whose last vector is the given unit direction; the rest completes it.
FrameField frame_completing(const Point& p, const Vec& last_unit);
FrameField make_frame(const Point& p, const std::vector<Vec>& vectors);

// Surface measure of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_volume(int n);

void check_same_space(const ModelSpace& a, const ModelSpace& b, const char* where);

}  // namespace gklab
