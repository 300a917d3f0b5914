#include "gklab/model_space.hpp"
#include "gklab/rng.hpp"

#include "support/oracles.hpp"
#include "support/samplers.hpp"

#include <catch2/catch.hpp>

#include <cmath>

using namespace gklab;
using testing::random_point;
using testing::random_unit_tangent;

namespace {

Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_CASE("euclidean geodesics are straight lines", "[model_space]") {
    const ModelSpace E = ModelSpace::euclidean(3);
    const Point p = make_point(E, vec3(0, 0, 0));
    const Point q = exp_map(p, {p, vec3(1, 0, 0)});
    REQUIRE(q.x.isApprox(vec3(1, 0, 0), 1e-15));
    REQUIRE(distance(p, q) == Approx(1.0).margin(1e-15));

    const Point r = make_point(E, vec3(0.3, -1.2, 2.0));
    const TangentVector back = log_map(r, p);
    REQUIRE((back.v - (p.x - r.x)).norm() < 1e-12);
}

TEST_CASE("hyperboloid geodesics match the standard parametrization", "[model_space]") {
    const ModelSpace H = ModelSpace::hyperbolic(2);
    const Point p = H.origin();  // (1, 0, 0)
    Vec v(3);
    v << 0, 1, 0;
    const Point q = exp_map(p, {p, v});
    REQUIRE(q.x(0) == Approx(std::cosh(1.0)).epsilon(1e-12));
    REQUIRE(q.x(1) == Approx(std::sinh(1.0)).epsilon(1e-12));
    REQUIRE(std::abs(q.x(2)) < 1e-12);

    const TangentVector w = log_map(p, q);
    REQUIRE(norm(w) == Approx(1.0).epsilon(1e-12));
    REQUIRE(w.v(1) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("warped radial geodesics carry chart radius as arclength", "[model_space]") {
    const ModelSpace W = ModelSpace::warped(3, 1.0, 0.05);
    const Point o = W.origin();
    for (double r : {0.4, 1.0, 2.5}) {
        const Point q = exp_map(o, {o, r * vec3(1, 0, 0).normalized()});
        REQUIRE(q.x.norm() == Approx(r).margin(1e-9));
        REQUIRE(distance(o, q) == Approx(r).margin(1e-9));
    }
}

TEST_CASE("exp and log invert each other", "[model_space]") {
    const CounterRng rng(41, "exp-log");
    const std::vector<ModelSpace> spaces = {ModelSpace::euclidean(3), ModelSpace::hyperbolic(3),
                                            ModelSpace::hyperbolic(2, -4.0),
                                            ModelSpace::warped(3, 1.0, 0.05)};
    std::uint64_t ctr = 0;
    for (const ModelSpace& space : spaces) {
        const bool warped = space.kind == SpaceKind::Warped;
        const int trials = warped ? 8 : 60;
        const double vmax = warped ? 4.0 : 10.0;
        for (int t = 0; t < trials; ++t) {
            const Point p = random_point(space, rng, ++ctr, 1.5);
            const Vec dir = random_unit_tangent(p, rng, ++ctr);
            const double len = vmax * rng.uniform(++ctr);
            const TangentVector v{p, len * dir};
            const TangentVector back = log_map(p, exp_map(p, v));
            REQUIRE((back.v - v.v).norm() <= 1e-9 * (1.0 + len));
        }
    }
}

TEST_CASE("hyperboloid endpoints agree with direct geodesic integration", "[model_space]") {
    const ModelSpace H = ModelSpace::hyperbolic(3);
    const CounterRng rng(42, "shoot");
    for (int t = 0; t < 40; ++t) {
        const Point p = random_point(H, rng, static_cast<std::uint64_t>(3 * t), 1.5);
        const Vec dir = random_unit_tangent(p, rng, static_cast<std::uint64_t>(3 * t + 1));
        const double len = 0.1 + 2.9 * rng.uniform(static_cast<std::uint64_t>(3 * t + 2));
        const Point q_lib = exp_map(p, {p, len * dir});
        const Point q_ode = oracles::rk4_geodesic(p, len * dir);
        REQUIRE(distance(q_lib, q_ode) < 1e-9);
        REQUIRE(distance(p, q_ode) == Approx(len).margin(1e-9));
    }
}

TEST_CASE("hyperboloid distance equals the Lorentz closed form", "[model_space]") {
    const ModelSpace H = ModelSpace::hyperbolic(3);
    const CounterRng rng(43, "lorentz");
    for (int t = 0; t < 50; ++t) {
        const Point p = random_point(H, rng, static_cast<std::uint64_t>(2 * t), 2.0);
        const Point q = random_point(H, rng, static_cast<std::uint64_t>(2 * t + 1), 2.0);
        const double inner_pq = lorentz_inner(p.x, q.x);
        const double closed = std::acosh(std::max(1.0, -inner_pq));
        REQUIRE(distance(p, q) == Approx(closed).margin(1e-10));
    }
}

TEST_CASE("rescaling the curvature rescales distances", "[model_space]") {
    const ModelSpace H1 = ModelSpace::hyperbolic(3, -1.0);
    const ModelSpace H4 = ModelSpace::hyperbolic(3, -4.0);
    const CounterRng rng(44, "scale");
    for (int t = 0; t < 30; ++t) {
        // hyperboloid sheets correspond under x -> x/2, i.e. halved spatial parts
        Vec a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            a(i) = 2.0 * rng.normal(static_cast<std::uint64_t>(8 * t + i));
            b(i) = 2.0 * rng.normal(static_cast<std::uint64_t>(8 * t + 4 + i));
        }
        const double d1 = distance(make_point(H1, a), make_point(H1, b));
        const double d4 = distance(make_point(H4, Vec(a / 2)), make_point(H4, Vec(b / 2)));
        REQUIRE(d4 == Approx(d1 / 2.0).margin(1e-10));
    }
}

TEST_CASE("distance satisfies the metric axioms", "[model_space]") {
    const CounterRng rng(45, "axioms");
    const std::vector<ModelSpace> spaces = {ModelSpace::euclidean(3), ModelSpace::hyperbolic(3),
                                            ModelSpace::warped(3, 1.0, 0.05)};
    std::uint64_t ctr = 0;
    for (const ModelSpace& space : spaces) {
        const int trials = space.kind == SpaceKind::Warped ? 10 : 80;
        for (int t = 0; t < trials; ++t) {
            const Point p = random_point(space, rng, ++ctr, 1.8);
            const Point q = random_point(space, rng, ++ctr, 1.8);
            const Point r = random_point(space, rng, ++ctr, 1.8);
            const double pq = distance(p, q);
            REQUIRE(distance(p, p) < 1e-10);
            REQUIRE(pq >= 0.0);
            REQUIRE(distance(q, p) == Approx(pq).margin(1e-10));
            REQUIRE(distance(p, r) <= pq + distance(q, r) + 1e-10);
        }
    }
}

TEST_CASE("parallel transport is an isometry fixing the geodesic tangent", "[model_space]") {
    const CounterRng rng(46, "transport");
    const std::vector<ModelSpace> spaces = {ModelSpace::euclidean(3), ModelSpace::hyperbolic(3),
                                            ModelSpace::warped(3, 1.0, 0.05)};
    std::uint64_t ctr = 0;
    for (const ModelSpace& space : spaces) {
        const int trials = space.kind == SpaceKind::Warped ? 8 : 60;
        for (int t = 0; t < trials; ++t) {
            const Point p = random_point(space, rng, ++ctr, 1.5);
            const Point q = random_point(space, rng, ++ctr, 1.5);
            if (distance(p, q) < 1e-6) continue;
            const TangentVector v{p, random_unit_tangent(p, rng, ++ctr) * 1.7};
            const TangentVector w{p, random_unit_tangent(p, rng, ++ctr)};
            const TangentVector tv = parallel_transport(p, q, v);
            const TangentVector tw = parallel_transport(p, q, w);
            REQUIRE(inner(tv, tw) == Approx(inner(v, w)).margin(1e-9));
            REQUIRE(norm(tv) == Approx(norm(v)).margin(1e-9));

            const TangentVector tangent = log_map(p, q);
            const TangentVector moved = parallel_transport(p, q, tangent);
            const TangentVector arrived = geodesic_endpoint(p, tangent).velocity;
            REQUIRE((moved.v - arrived.v).norm() < 1e-9 * (1.0 + norm(tangent)));

            if (space.kind == SpaceKind::Euclidean) REQUIRE((tv.v - v.v).norm() < 1e-12);
        }
    }
}

TEST_CASE("constant-curvature riemann components take the product form", "[model_space]") {
    const CounterRng rng(47, "riemann");
    std::uint64_t ctr = 0;
    for (double k : {-1.0, -2.0}) {
        const ModelSpace H = ModelSpace::hyperbolic(3, k);
        for (int t = 0; t < 12; ++t) {
            const Point p = random_point(H, rng, ++ctr, 1.5);
            const FrameField f = orthonormal_frame(p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        for (int m = 0; m < 3; ++m) {
                            const double want =
                                k * ((i == l && j == m ? 1.0 : 0.0) -
                                     (i == m && j == l ? 1.0 : 0.0));
                            REQUIRE(riemann_component(f, i, j, l, m) ==
                                    Approx(want).margin(1e-8));
                        }
        }
    }
}

TEST_CASE("riemann has the tensor symmetries", "[model_space]") {
    const CounterRng rng(48, "symm");
    const std::vector<ModelSpace> spaces = {ModelSpace::euclidean(3), ModelSpace::hyperbolic(3),
                                            ModelSpace::warped(3, 1.0, 0.05)};
    std::uint64_t ctr = 0;
    for (const ModelSpace& space : spaces) {
        for (int t = 0; t < 10; ++t) {
            const Point p = random_point(space, rng, ++ctr, 2.0);
            const FrameField f = orthonormal_frame(p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        for (int m = 0; m < 3; ++m) {
                            const double r = riemann_component(f, i, j, l, m);
                            REQUIRE(riemann_component(f, j, i, l, m) == Approx(-r).margin(1e-9));
                            REQUIRE(riemann_component(f, i, j, m, l) == Approx(-r).margin(1e-9));
                            REQUIRE(riemann_component(f, l, m, i, j) == Approx(r).margin(1e-9));
                        }
        }
    }
}

TEST_CASE("warped curvature matches the finite-difference oracle", "[model_space]") {
    const ModelSpace W = ModelSpace::warped(3, 1.0, 0.05);
    const CounterRng rng(49, "warp-fd");
    for (int t = 0; t < 18; ++t) {
        const Point p = random_point(W, rng, static_cast<std::uint64_t>(3 * t), 2.2);
        if (p.x.norm() < 0.2) continue;  // keep the oracle's stencil away from the pole
        const Vec u = random_unit_tangent(p, rng, static_cast<std::uint64_t>(3 * t + 1));
        Vec v = random_unit_tangent(p, rng, static_cast<std::uint64_t>(3 * t + 2));
        v -= metric_inner(p, u, v) * u;
        if (metric_norm(p, v) < 0.3) continue;
        const double lib = sectional_curvature(p, {p, u}, {p, v});
        const double ref = oracles::fd_sectional(W, p.x, u, v, 1e-4);
        REQUIRE(lib == Approx(ref).margin(1e-5));
    }
}

TEST_CASE("warped profile curvatures take the two closed forms", "[model_space]") {
    const ModelSpace W = ModelSpace::warped(3, 1.0, 0.05);
    const double r = 1.5;
    const Point p = exp_map(W.origin(), {W.origin(), r * vec3(1, 0, 0)});
    const Vec radial = vec3(1, 0, 0);
    const Vec tang1 = vec3(0, 1, 0) / std::sqrt(metric_inner(p, vec3(0, 1, 0), vec3(0, 1, 0)));
    const Vec tang2 = vec3(0, 0, 1) / std::sqrt(metric_inner(p, vec3(0, 0, 1), vec3(0, 0, 1)));

    REQUIRE(sectional_curvature(p, {p, radial}, {p, tang1}) ==
            Approx(W.warp.radial_curvature(r)).margin(1e-9));
    REQUIRE(sectional_curvature(p, {p, tang1}, {p, tang2}) ==
            Approx(W.warp.tangential_curvature(r)).margin(1e-9));
    REQUIRE(W.warp.radial_curvature(r) == Approx(oracles::fd_sectional(W, p.x, radial, tang1, 1e-4))
                                              .margin(1e-5));
    REQUIRE(W.warp.tangential_curvature(r) ==
            Approx(oracles::fd_sectional(W, p.x, tang1, tang2, 1e-4)).margin(1e-5));

    // inside the core radius the profile is exactly sinh, so curvature is -1
    const CounterRng rng(50, "core");
    const Point q = exp_map(W.origin(), {W.origin(), 0.6 * vec3(0, 1, 0)});
    const Vec a = random_unit_tangent(q, rng, 1);
    Vec b = random_unit_tangent(q, rng, 2);
    b -= metric_inner(q, a, b) * a;
    REQUIRE(sectional_curvature(q, {q, a}, {q, b}) == Approx(-1.0).margin(1e-9));
}

TEST_CASE("curvature operator is k times the identity in constant curvature", "[model_space]") {
    const ModelSpace H = ModelSpace::hyperbolic(3, -1.5);
    const CounterRng rng(51, "op");
    for (int t = 0; t < 100; ++t) {
        const Point p = random_point(H, rng, static_cast<std::uint64_t>(t), 1.8);
        const FrameField f = orthonormal_frame(p);
        const WedgeMat m = curvature_operator_matrix(f);
        REQUIRE(m.rows() == 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                REQUIRE(m(i, j) == Approx(i == j ? -1.5 : 0.0).margin(1e-8));
    }
}

TEST_CASE("curvature operator transforms by conjugation in the wedge basis", "[model_space]") {
    const ModelSpace W = ModelSpace::warped(3, 1.0, 0.05);
    const CounterRng rng(52, "wedge");
    const Point p = random_point(W, rng, 7, 2.0);
    const FrameField f = orthonormal_frame(p);
    const WedgeMat m = curvature_operator_matrix(f);

    Eigen::Matrix3d noise;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            noise(i, j) = rng.normal(static_cast<std::uint64_t>(100 + 3 * i + j));
    const Eigen::Matrix3d Q = Eigen::HouseholderQR<Eigen::Matrix3d>(noise).householderQ();

    std::vector<Vec> rotated(3);
    for (int j = 0; j < 3; ++j) {
        Vec e = Vec::Zero(p.x.size());
        for (int i = 0; i < 3; ++i) e += Q(i, j) * f[i];
        rotated[static_cast<std::size_t>(j)] = e;
    }
    const WedgeMat mrot = curvature_operator_matrix(make_frame(p, rotated));

    // induced map on wedge pairs: (i,j) column built from 2x2 minors of Q
    const int n = 3;
    WedgeMat wedge = WedgeMat::Zero(3, 3);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    wedge(wedge_index(n, a, b), wedge_index(n, i, j)) =
                        Q(a, i) * Q(b, j) - Q(a, j) * Q(b, i);
    const WedgeMat expect = wedge.transpose() * m * wedge;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(mrot(i, j) == Approx(expect(i, j)).margin(1e-8));
}

TEST_CASE("unit sphere volumes follow the dimension recursion", "[model_space]") {
    REQUIRE(unit_sphere_volume(2) == Approx(2.0 * M_PI).epsilon(1e-14));
    REQUIRE(unit_sphere_volume(3) == Approx(4.0 * M_PI).epsilon(1e-14));
    REQUIRE(unit_sphere_volume(4) == Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
    for (int n = 2; n <= 8; ++n)
        REQUIRE(unit_sphere_volume(n) ==
                Approx(oracles::sphere_volume_recursive(n)).epsilon(1e-12));
}

TEST_CASE("every sampled section is nonpositively curved", "[model_space]") {
    const CounterRng rng(53, "hadamard");
    const std::vector<ModelSpace> spaces = {ModelSpace::euclidean(3), ModelSpace::hyperbolic(3),
                                            ModelSpace::hyperbolic(2, -0.5),
                                            ModelSpace::warped(3, 1.0, 0.05),
                                            ModelSpace::warped(3, 0.5, 2.0)};
    std::uint64_t ctr = 0;
    for (const ModelSpace& space : spaces) {
        for (int t = 0; t < 40; ++t) {
            const Point p = random_point(space, rng, ++ctr, 2.5);
            const Vec u = random_unit_tangent(p, rng, ++ctr);
            Vec v = random_unit_tangent(p, rng, ++ctr);
            v -= metric_inner(p, u, v) * u;
            if (metric_norm(p, v) < 0.2) continue;
            REQUIRE(sectional_curvature(p, {p, u}, {p, v}) <= 1e-8);
        }
    }
}

TEST_CASE("frames are orthonormal and hyperboloid points stay on the sheet", "[model_space]") {
    const ModelSpace H = ModelSpace::hyperbolic(3, -2.0);
    const CounterRng rng(54, "frame");
    for (int t = 0; t < 25; ++t) {
        Point p = random_point(H, rng, static_cast<std::uint64_t>(4 * t), 1.5);
        // churn the point through a few operations and watch the constraint
        for (int hop = 0; hop < 3; ++hop) {
            const Vec dir = random_unit_tangent(p, rng, static_cast<std::uint64_t>(4 * t + hop + 1));
            p = exp_map(p, {p, 0.7 * dir});
        }
        REQUIRE(std::abs(lorentz_inner(p.x, p.x) - 1.0 / H.k) < 1e-12);

        const FrameField f = orthonormal_frame(p);
        REQUIRE(f.size() == 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                REQUIRE(metric_inner(p, f[i], f[j]) == Approx(i == j ? 1.0 : 0.0).margin(1e-10));

        const Vec last = random_unit_tangent(p, rng, static_cast<std::uint64_t>(1000 + t));
        const FrameField g = frame_completing(p, last);
        REQUIRE((g[2] - last).norm() < 1e-9);
    }
}

TEST_CASE("geodesic endpoints carry constant speed", "[model_space]") {
    const CounterRng rng(55, "endpoint");
    const ModelSpace W = ModelSpace::warped(3, 1.0, 0.05);
    for (int t = 0; t < 6; ++t) {
        const Point p = random_point(W, rng, static_cast<std::uint64_t>(3 * t), 1.2);
        const Vec dir = random_unit_tangent(p, rng, static_cast<std::uint64_t>(3 * t + 1));
        const double len = 0.2 + 2.0 * rng.uniform(static_cast<std::uint64_t>(3 * t + 2));
        const TangentVector v{p, len * dir};
        const GeodesicEnd end = geodesic_endpoint(p, v);
        REQUIRE(norm(end.velocity) == Approx(len).margin(1e-9));
        REQUIRE(distance(end.point, exp_map(p, v)) < 1e-9);
    }
}
