// Compares the serial reference path of the verification suites against the
// OpenMP task pool on identical seeded workloads.
#include <chrono>
#include <iostream>

#include "mqg/parallel.hpp"
#include "mqg/qmatrix.hpp"
#include "mqg/rep.hpp"

using namespace mqg;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double serial, double parallel) {
    std::cout << name << ": serial " << serial << " ms, openmp " << parallel << " ms, speedup "
              << (parallel > 0 ? serial / parallel : 0.0) << "x\n";
}

}  // namespace

int main() {
    std::cout << "threads available: " << max_threads() << "\n";

    FlagAlgebra f4 = build_flag_algebra(4);
    row("confluence Y(4), 2000 trials, len 6",
        time_ms([&] { confluence_check(f4.alg, 6, 2000, 42, false); }),
        time_ms([&] { confluence_check(f4.alg, 6, 2000, 42, true); }));

    MatrixAlgebra m3 = build_matrix_algebra(3);
    row("confluence A(3), 1500 trials, len 6",
        time_ms([&] { confluence_check(m3.alg, 6, 1500, 42, false); }),
        time_ms([&] { confluence_check(m3.alg, 6, 1500, 42, true); }));

    row("coproduct check n=3",
        time_ms([&] { coproduct_check(3, 3, false); }),
        time_ms([&] { coproduct_check(3, 3, true); }));

    row("representation verify n=3, degree 4",
        time_ms([&] { verify_relations(3, 4, false, true, false); }),
        time_ms([&] { verify_relations(3, 4, false, true, true); }));

    row("well-definedness n=3, degree 3",
        time_ms([&] { well_definedness(3, 3, false); }),
        time_ms([&] { well_definedness(3, 3, true); }));
    return 0;
}
