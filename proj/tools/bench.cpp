// Compares the serial reference kernels with the OpenMP ones and checks that
// both produce identical results.

#include <omp.h>

#include <chrono>
#include <iostream>

#include "theon/density.hpp"
#include "theon/peon.hpp"

using namespace theon;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& f) {
  auto t0 = Clock::now();
  f();
  return seconds(t0, Clock::now());
}

void report(const std::string& name, double serial, double parallel, bool match) {
  std::cout << name << ": serial " << serial << " s, parallel " << parallel
            << " s, speedup " << serial / parallel
            << (match ? "" : "  RESULTS DIFFER") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t samples = argc > 1 ? std::stoull(argv[1]) : 200000;
  std::cout << "threads: " << omp_get_max_threads() << "\n";

  {
    EuclideanStructure qr = gallery("qr_graph");
    DistributionTable a, b;
    double ts = timed([&] { a = distribution_mc(qr, VertexSet::range(4), samples, 7, Exec::serial); });
    double tp = timed([&] { b = distribution_mc(qr, VertexSet::range(4), samples, 7, Exec::parallel); });
    report("mc distribution, qr_graph n=4, " + std::to_string(samples) + " samples",
           ts, tp, a.counts == b.counts);
  }
  {
    EuclideanStructure disc = gallery("disc_3hypergraph");
    DistributionTable a, b;
    double ts = timed([&] { a = distribution_mc(disc, VertexSet::range(4), samples, 7, Exec::serial); });
    double tp = timed([&] { b = distribution_mc(disc, VertexSet::range(4), samples, 7, Exec::parallel); });
    report("mc distribution, disc_3hypergraph n=4", ts, tp, a.counts == b.counts);
  }
  {
    EuclideanStructure qr = gallery("qr_graph");
    DistributionTable a, b;
    double ts = timed([&] { a = distribution_exact(qr, VertexSet::range(4), nullptr, Exec::serial); });
    double tp = timed([&] { b = distribution_exact(qr, VertexSet::range(4), nullptr, Exec::parallel); });
    report("exact table, qr_graph n=4", ts, tp, a.probs == b.probs);
  }
  {
    EuclideanStructure o3 = gallery("kqrO_0theon", 3);
    DistributionTable a, b;
    double ts = timed([&] { a = distribution_exact(o3, VertexSet::range(3), nullptr, Exec::serial); });
    double tp = timed([&] { b = distribution_exact(o3, VertexSet::range(3), nullptr, Exec::parallel); });
    report("exact table, kqrO_0theon(3) n=3", ts, tp, a.probs == b.probs);
  }
  return 0;
}
