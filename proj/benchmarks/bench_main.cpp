#include "gklab/comparison.hpp"
#include "gklab/convex_body.hpp"
#include "gklab/model_space.hpp"
#include "gklab/rng.hpp"
#include "gklab/surface_calculus.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace gklab;

Point hyperbolic_point(const ModelSpace& space, double r, int axis) {
    Vec v = Vec::Zero(space.n);
    v(axis) = r;
    return exp_map(space.origin(), {space.origin(), [&] {
                                        FrameField f = orthonormal_frame(space.origin());
                                        return Vec(r * f[axis]);
                                    }()});
}

void bm_exp_map_hyperbolic(benchmark::State& state) {
    const ModelSpace space = ModelSpace::hyperbolic(3);
    const Point o = space.origin();
    const FrameField f = orthonormal_frame(o);
    const TangentVector v{o, 0.7 * f[0] + 0.2 * f[1]};
    for (auto _ : state) benchmark::DoNotOptimize(exp_map(o, v));
}
BENCHMARK(bm_exp_map_hyperbolic);

void bm_log_map_hyperbolic(benchmark::State& state) {
    const ModelSpace space = ModelSpace::hyperbolic(3);
    const Point o = space.origin();
    const Point q = hyperbolic_point(space, 0.8, 1);
    for (auto _ : state) benchmark::DoNotOptimize(log_map(o, q));
}
BENCHMARK(bm_log_map_hyperbolic);

void bm_exp_map_warped(benchmark::State& state) {
    const ModelSpace space = ModelSpace::warped(3, 1.0, 0.05);
    Vec x = Vec::Zero(3);
    x(0) = 0.4;
    const Point p = make_point(space, x);
    Vec dir = Vec::Zero(3);
    dir(1) = 1.0;
    const TangentVector v{p, project_to_tangent(p, dir)};
    for (auto _ : state) benchmark::DoNotOptimize(exp_map(p, v));
}
BENCHMARK(bm_exp_map_warped);

void bm_log_map_warped(benchmark::State& state) {
    const ModelSpace space = ModelSpace::warped(3, 1.0, 0.05);
    Vec x = Vec::Zero(3);
    x(0) = 0.4;
    const Point p = make_point(space, x);
    Vec y = Vec::Zero(3);
    y(1) = 0.9;
    const Point q = make_point(space, y);
    for (auto _ : state) benchmark::DoNotOptimize(log_map(p, q));
}
BENCHMARK(bm_log_map_warped);

Hull bench_hull(const ModelSpace& space, int m) {
    const CounterRng dirs(7, "bench/dir");
    const CounterRng rads(7, "bench/rad");
    const Point o = space.origin();
    const FrameField f = orthonormal_frame(o);
    std::vector<Point> vs;
    for (int v = 0; v < m; ++v) {
        Vec dir = Vec::Zero(space.ambient_dim());
        for (int j = 0; j < space.n; ++j) dir += dirs.normal(v * 16 + j) * f[j];
        dir /= metric_norm(o, dir);
        const double s = 1.1 * std::pow(rads.uniform(v), 1.0 / space.n);
        vs.push_back(exp_map(o, {o, s * dir}));
    }
    return make_hull(space, vs);
}

void bm_hull_projection(benchmark::State& state) {
    const ModelSpace space = ModelSpace::hyperbolic(3);
    const Hull h = bench_hull(space, static_cast<int>(state.range(0)));
    const Point q = hyperbolic_point(space, 1.9, 2);
    for (auto _ : state) benchmark::DoNotOptimize(project(h, q));
}
BENCHMARK(bm_hull_projection)->Arg(4)->Arg(8)->Arg(16);

void bm_sphere_total_curvature(benchmark::State& state) {
    const ModelSpace space = ModelSpace::hyperbolic(3);
    const GridSpec spec{16, 32, 1e-4};
    const RadialGraph g = make_sphere_surface(space.origin(), 1.0, spec);
    for (auto _ : state) benchmark::DoNotOptimize(total_curvature(g));
}
BENCHMARK(bm_sphere_total_curvature);

void bm_hull_parallel_surface(benchmark::State& state) {
    const ModelSpace space = ModelSpace::hyperbolic(3);
    const Hull h = bench_hull(space, 6);
    const GridSpec spec{16, 32, 1e-4};
    for (auto _ : state)
        benchmark::DoNotOptimize(total_curvature(parallel_hypersurface(h, 0.1, spec)));
}
BENCHMARK(bm_hull_parallel_surface);

}  // namespace

BENCHMARK_MAIN();
