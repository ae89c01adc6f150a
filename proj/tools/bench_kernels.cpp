// Micro-benchmark comparing the serial oracle enumeration against the
// OpenMP-parallel driver, plus the worst-case DP throughput on a batch of
// seeded instances. Both drivers must report identical optima.

#include <chrono>
#include <cstdio>
#include <vector>

#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/network.hpp"
#include "rmrcpsp/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int main(int argc, char** argv) {
    int count = argc > 1 ? std::atoi(argv[1]) : 60;
    std::vector<rmrcpsp::Instance> batch;
    rmrcpsp::InstanceGen gen(2024);
    for (int i = 0; i < count; ++i) batch.push_back(gen.tiny(5, 2));

    printf("oracle batch: %d instances, gamma = 2\n", count);
#ifdef _OPENMP
    printf("openmp threads: %d\n", omp_get_max_threads());
#else
    printf("openmp: unavailable, parallel driver runs serially\n");
#endif

    long long serial_sum = 0, parallel_sum = 0;
    auto t0 = Clock::now();
    for (const auto& inst : batch) {
        auto gamma = rmrcpsp::BudgetGamma::for_instance(2, inst);
        serial_sum += rmrcpsp::brute_force_solve(inst, gamma).makespan;
    }
    double serial_s = seconds_since(t0);

    t0 = Clock::now();
    for (const auto& inst : batch) {
        auto gamma = rmrcpsp::BudgetGamma::for_instance(2, inst);
        parallel_sum += rmrcpsp::brute_force_solve_parallel(inst, gamma).makespan;
    }
    double parallel_s = seconds_since(t0);

    printf("serial:   %8.3f s (checksum %lld)\n", serial_s, serial_sum);
    printf("parallel: %8.3f s (checksum %lld)\n", parallel_s, parallel_sum);
    printf("speedup:  %8.2fx\n", parallel_s > 0 ? serial_s / parallel_s : 0.0);
    if (serial_sum != parallel_sum) {
        printf("MISMATCH between serial and parallel results\n");
        return 1;
    }

    // DP throughput on a fixed relation batch.
    rmrcpsp::InstanceGen gen2(7);
    rmrcpsp::Instance big = gen2.psplib_style(20);
    auto rel = rmrcpsp::transitive_closure(big.precedences, big.num_activities());
    rmrcpsp::ModeVector modes;
    modes.mode.assign(static_cast<size_t>(big.num_activities()), 0);
    t0 = Clock::now();
    long long dp_sum = 0;
    const int dp_reps = 20000;
    for (int r = 0; r < dp_reps; ++r)
        dp_sum += rmrcpsp::worst_case_longest_path(big, modes, rel,
                                                   rmrcpsp::BudgetGamma::for_instance(5, big))
                      .makespan;
    double dp_s = seconds_since(t0);
    printf("dp: %d evaluations in %.3f s (%.0f/s, checksum %lld)\n", dp_reps, dp_s,
           dp_reps / dp_s, dp_sum);
    return 0;
}
