// Serial reference kernels vs the OpenMP dispatch on a 12-qubit register.
#include <benchmark/benchmark.h>

#include <random>

#include "vqe/pauli.hpp"
#include "vqe/simstate.hpp"

namespace {

constexpr int kQubits = 12;

vqe::StateVector make_state() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0, 1);
    vqe::StateVector s(kQubits);
    for (std::uint64_t i = 0; i < s.dim(); ++i) s[i] = vqe::cplx(g(rng), g(rng));
    s.normalize();
    return s;
}

vqe::PauliSum make_sum() {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> letter(0, 3);
    vqe::PauliSum h(kQubits);
    for (int t = 0; t < 32; ++t) {
        vqe::PauliString p(kQubits);
        for (int k = 0; k < kQubits; ++k) p.set(k, static_cast<vqe::Letter>(letter(rng)));
        h.add(p, 1.0 / (1 + t));
    }
    return h;
}

void BM_apply_string_serial(benchmark::State& state) {
    const auto s = make_state();
    const auto p = vqe::PauliString::parse("XYZXYZXYZXYZ");
    for (auto _ : state) {
        benchmark::DoNotOptimize(vqe::apply_string_serial(p, s));
    }
}
BENCHMARK(BM_apply_string_serial);

void BM_apply_string_parallel(benchmark::State& state) {
    const auto s = make_state();
    const auto p = vqe::PauliString::parse("XYZXYZXYZXYZ");
    for (auto _ : state) {
        benchmark::DoNotOptimize(vqe::apply_string(p, s));
    }
}
BENCHMARK(BM_apply_string_parallel);

void BM_expectation_serial(benchmark::State& state) {
    const auto s = make_state();
    const auto h = make_sum();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vqe::expectation_serial(h, s));
    }
}
BENCHMARK(BM_expectation_serial);

void BM_expectation_parallel(benchmark::State& state) {
    const auto s = make_state();
    const auto h = make_sum();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vqe::expectation(h, s));
    }
}
BENCHMARK(BM_expectation_parallel);

}  // namespace

BENCHMARK_MAIN();
