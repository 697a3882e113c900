// Benchmark of the OpenMP tableau kernel and grid scan against the serial
// reference. Both backends follow the same pivot rule, so the verdicts must
// agree; timings show the kernel speedup.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "boxlab/classify.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/lp.hpp"
#include "boxlab/scan.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
    f();  // warm-up: static vertex caches, page faults
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void report(const char* name, double serial_ms, double omp_ms, bool same) {
    std::printf("%-34s %10.2f ms %10.2f ms   x%.2f   %s\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 2;
    if (argc > 1) reps = std::max(1, std::atoi(argv[1]));

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-34s %13s %13s\n", "kernel", "serial", "openmp");

    using boxlab::lp::Backend;

    // Joint TOBL system, infeasible target (16384 columns, 129 rows).
    {
        const boxlab::Box3 g = boxlab::ghz_box();
        const auto probs = boxlab::make_tobl_problems(g);
        boxlab::lp::MembershipResult rs, ro;
        const double ts = time_best_of(
            reps, [&] { rs = boxlab::lp::solve_joint_feasibility(probs, Backend::Serial); });
        const double to = time_best_of(
            reps, [&] { ro = boxlab::lp::solve_joint_feasibility(probs, Backend::OpenMP); });
        report("tobl joint LP (infeasible)", ts, to,
               rs.verdict == ro.verdict && rs.witness == ro.witness);
    }

    // Joint TOBL system, feasible target.
    {
        const boxlab::Box3 box = boxlab::tensor_product(
            boxlab::det_box1(2), boxlab::pr_box(0, 0, 0));
        const auto probs = boxlab::make_tobl_problems(box);
        boxlab::lp::MembershipResult rs, ro;
        const double ts = time_best_of(
            reps, [&] { rs = boxlab::lp::solve_joint_feasibility(probs, Backend::Serial); });
        const double to = time_best_of(
            reps, [&] { ro = boxlab::lp::solve_joint_feasibility(probs, Backend::OpenMP); });
        report("tobl joint LP (feasible)", ts, to,
               rs.verdict == ro.verdict && rs.weights == ro.weights);
    }

    // Hull membership (512 columns).
    {
        const boxlab::Box3 box =
            boxlab::p_eps_alpha(boxlab::EpsParams(0.9), 0.5);
        const auto prob =
            boxlab::make_membership_problem(box, boxlab::HierarchyClass::ATOBL_HULL);
        boxlab::lp::MembershipResult rs, ro;
        const double ts = time_best_of(
            reps, [&] { rs = boxlab::lp::solve_feasibility(prob, Backend::Serial); });
        const double to = time_best_of(
            reps, [&] { ro = boxlab::lp::solve_feasibility(prob, Backend::OpenMP); });
        report("hull membership LP", ts, to,
               rs.verdict == ro.verdict && rs.weights == ro.weights);
    }

    // Grid scan with LP columns.
    {
        boxlab::ScanOptions opt;
        opt.eps_step = 0.25;
        opt.alpha_step = 0.5;
        opt.lp = true;
        std::string cs, co;
        const double ts = time_best_of(reps, [&] {
            opt.backend = Backend::Serial;
            std::ostringstream os;
            boxlab::write_csv(os, boxlab::run_scan(opt), opt);
            cs = os.str();
        });
        const double to = time_best_of(reps, [&] {
            opt.backend = Backend::OpenMP;
            std::ostringstream os;
            boxlab::write_csv(os, boxlab::run_scan(opt), opt);
            co = os.str();
        });
        report("scan 5x3 grid with LP columns", ts, to, cs == co);
    }

    return 0;
}
