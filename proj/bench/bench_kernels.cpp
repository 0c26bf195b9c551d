// Times the OpenMP kernels against their serial reference implementations
// and verifies the outputs coincide bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "syncorr/slices.hpp"
#include "syncorr/tracial.hpp"
#include "syncorr/universal3.hpp"

using namespace syncorr;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void row(const char* name, double serial_ms, double parallel_ms,
         bool identical) {
  std::printf("%-34s %10.1f %12.1f %8.2fx %10s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  int count = 50000;
  if (argc > 1) count = std::stoi(argv[1]);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-34s %10s %12s %9s %10s\n", "kernel", "serial_ms",
              "parallel_ms", "speedup", "identical");

  {
    std::vector<DqSample> a, b;
    const double s = time_ms([&] { a = sample_dq(3, 4, count, 1, Exec::serial); });
    const double p =
        time_ms([&] { b = sample_dq(3, 4, count, 1, Exec::parallel); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].y == b[i].y && a[i].w == b[i].w;
    const std::string name = "sample_dq(3,4," + std::to_string(count) + ")";
    row(name.c_str(), s, p, same);
  }

  {
    const auto points = random_directions(count / 10, 5);
    std::vector<GridPointCheck> a, b;
    const double s = time_ms([&] { a = verify_grid(points, Exec::serial); });
    const double p = time_ms([&] { b = verify_grid(points, Exec::parallel); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].max_residual == b[i].max_residual &&
             a[i].loser_residual == b[i].loser_residual;
    const std::string name =
        "verify_grid(" + std::to_string(points.size()) + " dirs)";
    row(name.c_str(), s, p, same);
  }

  {
    const auto samples = sample_dq(3, 4, count, 2);
    std::vector<SliceQuery> queries;
    Rng rng(6);
    for (int k = 0; k < 100; ++k) {
      SliceQuery q;
      q.n = 3;
      q.y.resize(3);
      for (int i = 0; i < 3; ++i) q.y(i) = 0.2 + 0.6 * rng.uniform();
      q.x.resize(3);
      for (int e = 0; e < 3; ++e) q.x(e) = -1.5 + 3.0 * rng.uniform();
      q.cls = CorrClass::q;
      q.side = k % 2 ? Side::lower : Side::upper;
      queries.push_back(std::move(q));
    }
    std::vector<DominanceEntry> a, b;
    const double s =
        time_ms([&] { a = dominance_check(samples, queries, 0.05, Exec::serial); });
    const double p = time_ms(
        [&] { b = dominance_check(samples, queries, 0.05, Exec::parallel); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      const bool nan_pair =
          std::isnan(a[i].max_excess) && std::isnan(b[i].max_excess);
      same = a[i].support == b[i].support &&
             (nan_pair || a[i].max_excess == b[i].max_excess);
    }
    const std::string name = "dominance(100q x " +
                             std::to_string(samples.size()) + " samples)";
    row(name.c_str(), s, p, same);
  }
  return 0;
}
