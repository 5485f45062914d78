// Benchmark comparing the serial reference kernels with their OpenMP variants.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "commwit/henselift.hpp"
#include "commwit/wordmaps.hpp"

using namespace commwit;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F> double time_ms(F&& f, int reps) {
    // one warmup, then best of reps
    f();
    double best = 1e100;
    for (int i = 0; i < reps; ++i) {
        auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-42s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    int jobs = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    std::printf("kernel benchmark: serial reference vs OpenMP (%d workers)\n", jobs);
    std::printf("%-42s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        auto G = FiniteGroupTable::build(2, 11);
        Word comm = Word::commutator_xy();
        row("commutator image, SL_2(F_11), |G|^2 tuples",
            time_ms([&] { image_of_word(G, comm, 5'000'000, 1); }, 3),
            time_ms([&] { image_of_word(G, comm, 5'000'000, jobs); }, 3));
        Word sq = Word::parse("x1^2*x2^3");
        row("x1^2*x2^3 image, SL_2(F_11)",
            time_ms([&] { image_of_word(G, sq, 5'000'000, 1); }, 3),
            time_ms([&] { image_of_word(G, sq, 5'000'000, jobs); }, 3));
        auto img = image_of_word(G, sq, 5'000'000, 1).image;
        row("product set, SL_2(F_11)",
            time_ms([&] { product_set(G, img, img, 1); }, 3),
            time_ms([&] { product_set(G, img, img, jobs); }, 3));
        row("conjugation closure, SL_2(F_11)",
            time_ms([&] { is_conjugation_closed(G, img, 1); }, 3),
            time_ms([&] { is_conjugation_closed(G, img, jobs); }, 3));
    }
    {
        Ring f5 = Ring::zmod(5, 1);
        RMatrix target = RMatrix::scalar(f5, 2, RingElem(f5, 4));
        row("obstruction scan, SL_2(F_5) pairs",
            time_ms([&] { obstruction_scan(target, 1'000'000, 1); }, 3),
            time_ms([&] { obstruction_scan(target, 1'000'000, jobs); }, 3));
    }
    return 0;
}
