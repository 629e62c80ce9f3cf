#include <benchmark/benchmark.h>

#include <map>

#include "crlhls/heisenberg.hpp"
#include "crlhls/random_fields.hpp"
#include "crlhls/ring_transform.hpp"
#include "crlhls/spectral_ops.hpp"

using namespace crlhls;

namespace {

const QuadratureGrid& grid_for(int J) {
  static std::map<int, QuadratureGrid> cache;
  auto it = cache.find(J);
  if (it == cache.end()) it = cache.emplace(J, QuadratureGrid::for_degree(2 * J)).first;
  return it->second;
}

std::vector<double> samples(const QuadratureGrid& g) {
  std::vector<double> f(g.size());
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = 1.0 + 0.5 * std::cos(static_cast<double>(n));
  return f;
}

PlhCoefficients coeffs(int J) {
  auto rng = seeded_engine(1, 0);
  return random_pluriharmonic(rng, J, J);
}

template <PlhCoefficients (*Project)(const QuadratureGrid&, std::span<const double>, int)>
void BM_project(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const QuadratureGrid& g = grid_for(J);
  const auto f = samples(g);
  for (auto _ : state) benchmark::DoNotOptimize(Project(g, f, J));
  state.counters["nodes"] = static_cast<double>(g.size());
}

template <std::vector<double> (*Synth)(const QuadratureGrid&, const PlhCoefficients&)>
void BM_synthesize(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const QuadratureGrid& g = grid_for(J);
  const PlhCoefficients u = coeffs(J);
  for (auto _ : state) benchmark::DoNotOptimize(Synth(g, u));
}

template <Eigen::MatrixXd (*Gram)(const QuadratureGrid&, std::span<const double>, int)>
void BM_gram(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const QuadratureGrid& g = grid_for(J);
  const auto f = samples(g);
  for (auto _ : state) benchmark::DoNotOptimize(Gram(g, f, J));
}

template <double (*Energy)(const HeisGrid&)>
void BM_log_energy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HeisGrid g = HeisGrid::tensor({10.0, 10.0, 100.0}, n, n, n, 3.0, 6.5).sampled(cayley_jacobian);
  for (auto _ : state) benchmark::DoNotOptimize(Energy(g));
  state.counters["nodes"] = static_cast<double>(g.size());
}

}  // namespace

BENCHMARK(BM_project<kernels::project>)->Name("project/kernels")->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project<reference::project>)->Name("project/reference")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize<kernels::synthesize>)->Name("synthesize/kernels")->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize<reference::synthesize>)->Name("synthesize/reference")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram<kernels::conformal_gram>)->Name("gram/kernels")->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram<reference::conformal_gram>)->Name("gram/reference")->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_energy<kernels::log_energy>)->Name("heis_log_energy/kernels")->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_energy<reference::log_energy>)->Name("heis_log_energy/reference")->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
