// Serial vs OpenMP kernel comparison: volume subset sums, facet-normal
// enumeration, and vertex candidate enumeration at desk-scale sizes.

#include <benchmark/benchmark.h>

#include "zonofuse/geometry.hpp"
#include "zonofuse/kernels.hpp"
#include "zonofuse/rng.hpp"

using namespace zonofuse;

namespace {

Zonotope instance(Eigen::Index n, Eigen::Index r) {
    NoiseStream s(5150, "bench-kernels");
    Eigen::MatrixXd R(n, r);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < n; ++i) R(i, j) = s.uniform();
    return Zonotope(s.uniform_vec(n), R);
}

kernels::PairedHalfspaces pairs_of(const Zonotope& z, const Zonotope& w) {
    const HalfspaceRep a = halfspace_rep(z, Exec::serial);
    const HalfspaceRep b = halfspace_rep(w, Exec::serial);
    kernels::PairedHalfspaces all;
    const Eigen::Index total = a.pair_count() + b.pair_count();
    all.normals.resize(total, z.dim());
    all.b_plus.resize(total);
    all.b_minus.resize(total);
    all.normals << a.normals(), b.normals();
    all.b_plus << a.b_plus(), b.b_plus();
    all.b_minus << a.b_minus(), b.b_minus();
    return kernels::dedup_pairs(all);
}

void BM_volume(benchmark::State& state, Exec exec) {
    const Zonotope z = instance(4, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::volume_subset_sum(z.generators(), exec));
}

void BM_facets(benchmark::State& state, Exec exec) {
    const Zonotope z = instance(4, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::facet_normals(z.generators(), exec));
}

void BM_vertices(benchmark::State& state, Exec exec) {
    const Zonotope a = instance(4, state.range(0));
    Zonotope b = instance(4, state.range(0));
    b = Zonotope(a.center() + 0.05 * Eigen::VectorXd::Ones(4), b.generators());
    const auto pairs = pairs_of(a, b);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::vertex_candidates(pairs, 1e-9, exec));
}

} // namespace

BENCHMARK_CAPTURE(BM_volume, serial, Exec::serial)->Arg(16)->Arg(24)->Arg(32);
BENCHMARK_CAPTURE(BM_volume, parallel, Exec::parallel)->Arg(16)->Arg(24)->Arg(32);
BENCHMARK_CAPTURE(BM_facets, serial, Exec::serial)->Arg(12)->Arg(20);
BENCHMARK_CAPTURE(BM_facets, parallel, Exec::parallel)->Arg(12)->Arg(20);
BENCHMARK_CAPTURE(BM_vertices, serial, Exec::serial)->Arg(5)->Arg(6);
BENCHMARK_CAPTURE(BM_vertices, parallel, Exec::parallel)->Arg(5)->Arg(6);

BENCHMARK_MAIN();
