// Benchmark of the OpenMP kernels against their serial reference
// implementations.  Both paths must produce bit-identical results (the
// parallel design keys RNG streams per replicate and reduces in a fixed
// order); any mismatch is a hard failure, not a timing note.
//
// Usage: bench_renewal [--quick]
//   --quick  tiny problem sizes, used as a ctest smoke test.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "exrenew/dirichlet.hpp"
#include "exrenew/mc.hpp"
#include "exrenew/model.hpp"

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Row {
    std::string name;
    double serial_ms;
    double parallel_ms;
    bool identical;
};

template <class F>
double time_ms(const F& fn) {
    const double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

    const long mc_replicates = quick ? 2000 : 200000;
    const int sn_n = quick ? 12 : 28;

    std::vector<Row> rows;

    {
        const exrenew::ModelSpec model = exrenew::ErlangGammaModel{3, 2.5};
        const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0, 8.0};
        const exrenew::McOptions opts{mc_replicates, 2026};
        exrenew::RenewalCurve par, ser;
        const double tp = time_ms([&] { par = exrenew::mc_renewal_function(model, grid, opts); });
        const double ts = time_ms([&] { ser = exrenew::mc_renewal_function_serial(model, grid, opts); });
        bool same = par.values == ser.values && par.stderrs == ser.stderrs;
        rows.push_back({"mc_renewal ErlangGamma(3,2.5) R=" + std::to_string(mc_replicates), ts, tp, same});
    }
    {
        const exrenew::ModelSpec model =
            exrenew::DirichletProcessModel{2.0, exrenew::ErlangParams{1, 1.0}};
        const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0};
        const exrenew::McOptions opts{mc_replicates, 7};
        exrenew::RenewalCurve par, ser;
        const double tp = time_ms([&] { par = exrenew::mc_renewal_function(model, grid, opts); });
        const double ts = time_ms([&] { ser = exrenew::mc_renewal_function_serial(model, grid, opts); });
        bool same = par.values == ser.values && par.stderrs == ser.stderrs;
        rows.push_back({"mc_renewal DP(2,Exp(1)) R=" + std::to_string(mc_replicates), ts, tp, same});
    }
    {
        double par = 0.0, ser = 0.0;
        const double tp = time_ms([&] { par = exrenew::sn_cdf(3.0, sn_n, 2.0, 1.0, 48); });
        const double ts = time_ms([&] { ser = exrenew::sn_cdf_serial(3.0, sn_n, 2.0, 1.0, 48); });
        rows.push_back({"sn_cdf n=" + std::to_string(sn_n) + " (p(n) partitions)", ts, tp, par == ser});
    }

    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("%-48s %12s %12s %9s %6s\n", "kernel", "serial ms", "omp ms", "speedup", "match");
    bool all_same = true;
    for (const Row& r : rows) {
        std::printf("%-48s %12.1f %12.1f %8.2fx %6s\n", r.name.c_str(), r.serial_ms, r.parallel_ms,
                    r.serial_ms / (r.parallel_ms > 0 ? r.parallel_ms : 1e-9),
                    r.identical ? "yes" : "NO");
        all_same = all_same && r.identical;
    }
    if (!all_same) {
        std::printf("FAILURE: parallel and serial results differ\n");
        return 1;
    }
    return 0;
}
