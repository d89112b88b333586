#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "expfam/errors.hpp"
#include "expfam/families.hpp"
#include "expfam/intervals.hpp"
#include "expfam/numerics/random.hpp"

namespace expfam::intervals {

namespace {

constexpr std::size_t kChunk = 1000;

struct ChunkResult {
  std::size_t hits = 0;
  std::size_t degenerate = 0;
  std::exception_ptr error;
};

}  // namespace

CoverageReport coverage_simulation(const Family& fam, const IntervalOp& op, const NaturalParam& truth, std::size_t m,
                                   double level, std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw DomainError("coverage_simulation: trials must be at least 1");
  if (m == 0) throw DomainError("coverage_simulation: m must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("coverage_simulation: level must lie in (0, 1)");
  if (!in_natural_domain(fam, truth)) throw DomainError("coverage_simulation: true parameter outside Theta");

  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(chunks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < chunks; k = next++) {
      ChunkResult& out = results[k];
      try {
        numerics::RandomStream rng = numerics::rng_stream(seed, k);
        const std::size_t end = std::min(trials, (k + 1) * kChunk);
        std::vector<Vector> data(m);
        for (std::size_t t = k * kChunk; t < end; ++t) {
          for (Vector& x : data) x = families::sample(fam, truth, rng);
          const IntervalResult r = op(ObservationBatch::from_points(data));
          if (r.degenerate) ++out.degenerate;
          if (covers(fam, r, truth)) ++out.hits;
        }
      } catch (...) {
        out.error = std::current_exception();
      }
    }
  };

  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  CoverageReport report;
  for (const ChunkResult& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    report.hits += r.hits;
    report.degenerate += r.degenerate;
  }
  report.trials = trials;
  report.level = level;
  report.empirical_coverage = static_cast<double>(report.hits) / static_cast<double>(trials);
  const double half = 3.0 * std::sqrt(level * (1.0 - level) / static_cast<double>(trials));
  report.band_lower = level - half;
  report.band_upper = level + half;
  return report;
}

}  // namespace expfam::intervals
