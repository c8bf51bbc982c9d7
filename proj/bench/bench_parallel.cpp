// Serial reference vs OpenMP for the three sampling kernels.
// Usage: bench_parallel [--quick]

#include "conic/cancellation.hpp"
#include "conic/setmaps.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

using namespace conic;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double ts, double tp, bool same) {
  std::printf("%-38s %10.4f %10.4f %8.2fx  %s\n", name, ts, tp, ts / tp, same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int reps = quick ? 1 : 3;
  const int sweep_trials = quick ? 50 : 500;
  const int falsify_trials = quick ? 500 : 10000;
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-38s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");
  bool all_same = true;

  for (LawId law : {LawId::conic_radstrom, LawId::star_diff, LawId::nonconvex_rho}) {
    SweepResult a, b;
    const double ts = seconds([&] { a = soundness_sweep(law, sweep_trials, 3, Exec::serial); }, reps);
    const double tp = seconds([&] { b = soundness_sweep(law, sweep_trials, 3, Exec::parallel); }, reps);
    const bool same = a.hypotheses_held == b.hypotheses_held && a.inconsistent == b.inconsistent;
    all_same = all_same && same;
    const std::string name = std::string("sweep ") + to_string(law);
    row(name.c_str(), ts, tp, same);
  }

  {
    // nothing dropped: the search runs every trial
    FalsifyResult a, b;
    const double ts = seconds([&] { a = falsify(LawId::open_cancel, {}, falsify_trials, 7, 2, Exec::serial); }, reps);
    const double tp = seconds([&] { b = falsify(LawId::open_cancel, {}, falsify_trials, 7, 2, Exec::parallel); }, reps);
    const bool same = a.found == b.found && a.trial == b.trial;
    all_same = all_same && same;
    row("falsify OPEN_CANCEL (no drop)", ts, tp, same);
  }

  {
    const Poly f = Poly::affine(Vec::Ones(3) * 0.3) + Poly::monomial(3, 0, 2, -0.4) + Poly::monomial(3, 2, 2, 0.7);
    std::vector<Poly> lo{f, f * 2.0}, hi{f + Poly::constant(3, 1.0), f * 2.0 + Poly::constant(3, 0.5)};
    const BoxMap fm(lo, hi, Vec::Constant(3, -1), Vec::Constant(3, 1));
    const PolyhedralCone k = PolyhedralCone::orthant(2);
    const LinMap t{Mat::Constant(2, 3, 0.3)};
    SubdiffOptions so;
    so.directions = quick ? 64 : 512;
    auto epi = [&](const Vec& z) { return UnionSet(epi_eval(fm, z, k)); };
    SubdiffReport a, b;
    const double ts = seconds([&] { a = subdiff_test_map(epi, Vec::Zero(3), t, SubdiffDirection::lower, so, default_tolerance(), Exec::serial); }, reps);
    const double tp = seconds([&] { b = subdiff_test_map(epi, Vec::Zero(3), t, SubdiffDirection::lower, so, default_tolerance(), Exec::parallel); }, reps);
    const bool same = a.q == b.q && a.verdict == b.verdict;
    all_same = all_same && same;
    row("subdiff lower, R^3 -> R^2", ts, tp, same);
  }
  return all_same ? 0 : 1;
}
