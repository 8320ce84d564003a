#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bell {

// Central tolerance record. Every module reads from here; the CLI may
// override via --tol or the BELLSCOPE_TOL environment variable.
struct Tolerances {
  double positivity = 1e-9;     // tol_pos
  double normalization = 1e-9;  // tol_norm
  double no_signaling = 1e-9;   // tol_ns
  double lp_feas = 1e-8;
  double lp_gap = 1e-8;
  double sdp_feas = 1e-7;
  double sdp_gap = 1e-7;
};

inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

class dimension_error : public std::invalid_argument {
 public:
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// Enumeration/iteration caps and solver stalls surface as this type so the
// CLI can report them distinctly (exit code 2) from input errors (1).
class cap_error : public std::runtime_error {
 public:
  explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

// --- deterministic RNG -----------------------------------------------------
//
// All stochastic code takes an explicit generator. Streams derived from a
// master seed use splitmix64 so that parallel restarts are reproducible
// independently of scheduling: seed_i = split_seed(master, i).

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

// xoshiro-free minimal generator: splitmix64 stream. Uniform in [0,1) built
// from the top 53 bits so results are identical across platforms (no reliance
// on std::uniform_real_distribution implementation details).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // in [0, n)
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Marsaglia polar method; platform-independent.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Uniform direction on the unit 2-sphere via normalized Gaussian draws.
  std::array<double, 3> unit_vector3() {
    double x, y, z, n;
    do {
      x = gaussian();
      y = gaussian();
      z = gaussian();
      n = std::sqrt(x * x + y * y + z * z);
    } while (n < 1e-12);
    return {x / n, y / n, z / n};
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// --- tiny parallel helper --------------------------------------------------
//
// Runs fn(i) for i in [0, n). Deterministic results are the caller's job
// (each index writes to its own slot). jobs <= 1 runs inline.
inline void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  int workers = std::min(jobs, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bell
