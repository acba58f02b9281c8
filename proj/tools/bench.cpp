// Benchmarks the OpenMP path loops against the serial reference kernels and
// verifies that both produce bit-identical terminal samples. Thread count is
// whatever OpenMP picks up from the environment (OMP_NUM_THREADS).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fxinv/inversion.hpp"
#include "fxinv/jump_densities.hpp"
#include "fxinv/montecarlo.hpp"
#include "fxinv/pricing.hpp"

namespace {

using fxinv::mc::ExecMode;
using fxinv::mc::McConfig;
using fxinv::mc::TerminalSample;
using Clock = std::chrono::steady_clock;

template <class Run>
double timed(Run&& run, TerminalSample& out) {
    const auto t0 = Clock::now();
    out = run();
    const auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool bit_identical(const TerminalSample& a, const TerminalSample& b) {
    const auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
        return x.size() == y.size() &&
               (x.empty() ||
                std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
    };
    return same(a.values, b.values) && same(a.rn_weights, b.rn_weights) &&
           same(a.control_values, b.control_values) &&
           same(a.control_vol_factors, b.control_vol_factors);
}

int report(const char* name, double t_serial, double t_parallel, bool identical) {
    std::printf("%-14s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                name, t_serial, t_parallel, t_serial / t_parallel,
                identical ? "bit-identical" : "MISMATCH");
    return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t paths = 200000;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (i + 1 < argc && std::string(argv[i]) == "--paths")
            paths = static_cast<std::size_t>(std::stoull(argv[i + 1]));
    }
    if (paths % 2 != 0) ++paths;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel mode falls back to serial\n");
#endif
    std::printf("paths %zu (antithetic)\n\n", paths);

    int failures = 0;

    {
        McConfig cfg;
        cfg.paths = paths;
        cfg.steps = 1;
        cfg.seed = 20260815;
        const fxinv::jumps::CompoundJumpSpec jump{
            std::make_shared<fxinv::jumps::PowerLawCutoffDensity>(2.0, 1.0), 2.0,
            fxinv::Measure::domestic};
        TerminalSample serial, parallel;
        cfg.exec = ExecMode::serial;
        const double ts = timed(
            [&] {
                return fxinv::mc::simulate_jump_gbm_exact(1.0, 0.01, 0.2, jump, 1.0, cfg);
            },
            serial);
        cfg.exec = ExecMode::parallel;
        const double tp = timed(
            [&] {
                return fxinv::mc::simulate_jump_gbm_exact(1.0, 0.01, 0.2, jump, 1.0, cfg);
            },
            parallel);
        failures += report("jump-gbm", ts, tp, bit_identical(serial, parallel));
    }

    {
        McConfig cfg;
        cfg.paths = paths;
        cfg.steps = 64;
        cfg.seed = 20260815;
        const fxinv::pricing::HestonParams p{0.0025, 0.0287, 1.1718, 0.172, 0.0952};
        TerminalSample serial, parallel;
        cfg.exec = ExecMode::serial;
        const double ts = timed(
            [&] { return fxinv::mc::simulate_heston(p, 1.2478, 0.0, 0.25, cfg); }, serial);
        cfg.exec = ExecMode::parallel;
        const double tp = timed(
            [&] { return fxinv::mc::simulate_heston(p, 1.2478, 0.0, 0.25, cfg); },
            parallel);
        failures += report("heston", ts, tp, bit_identical(serial, parallel));
    }

    {
        McConfig cfg;
        cfg.paths = paths;
        cfg.steps = 64;
        cfg.seed = 20260815;
        const fxinv::pricing::SabrParams p{0.0748, 0.5, 0.1435, 0.733, 0.0};
        const auto dyn = fxinv::inversion::inverse_sabr(p, -0.0211159953);
        TerminalSample serial, parallel;
        cfg.exec = ExecMode::serial;
        const double ts = timed(
            [&] { return fxinv::mc::simulate_inverse_sabr(dyn, 1.0 / 1.24122, 0.25, cfg); },
            serial);
        cfg.exec = ExecMode::parallel;
        const double tp = timed(
            [&] { return fxinv::mc::simulate_inverse_sabr(dyn, 1.0 / 1.24122, 0.25, cfg); },
            parallel);
        failures += report("inverse-sabr", ts, tp, bit_identical(serial, parallel));
    }

    if (failures > 0) {
        std::printf("\n%d kernel(s) diverged between serial and parallel runs\n", failures);
        return 1;
    }
    std::printf("\nall kernels bit-identical across execution modes\n");
    return 0;
}
