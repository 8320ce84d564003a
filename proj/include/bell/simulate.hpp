#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bell/common.hpp"
#include "bell/core.hpp"

namespace bell::sim {

// ---------------------------------------------------------------------------
// Werner's local hidden-variable model for the p = 1/2 two-qubit Werner
// state: the hidden variable is a uniform unit vector on the Bloch sphere,
// Alice outputs 0 with probability cos^2(alpha_A / 2), Bob outputs 0 iff
// 2 cos^2(alpha_B / 2) < 1 (ties, a measure-zero set, go to outcome 1).
// ---------------------------------------------------------------------------
struct LhvSample {
  std::array<double, 3> lambda;
  int a, b;
};

LhvSample werner_lhv_sample(const std::array<double, 3>& n_a,
                            const std::array<double, 3>& n_b, Rng& rng);

// Closed-form target: p(00) = 1/4 (1 - cos(alpha)/2), the full 2x2 table
// follows from the +-1/2 correlator and unbiased marginals.
std::array<double, 4> werner_pair_probabilities(const std::array<double, 3>& n_a,
                                                const std::array<double, 3>& n_b);

struct PairReport {
  std::array<double, 4> frequency;  // empirical p(ab), a-major
  std::array<double, 4> target;
  double max_deviation = 0.0;
  double standard_error = 0.0;  // max over entries of sqrt(p(1-p)/N)
};

struct SimulationReport {
  long samples = 0;
  std::uint64_t seed = 0;
  std::vector<PairReport> pairs;
  double max_deviation = 0.0;
  double standard_error = 0.0;
  bool pass = false;  // every deviation <= 5 standard errors
};

SimulationReport werner_lhv_estimate(
    const std::vector<std::pair<std::array<double, 3>, std::array<double, 3>>>&
        directions,
    long samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Detection-loophole faking: local strategies with no-click outcomes whose
// conditional-on-click statistics look like a PR box (CHSH value 4).
// Asymmetric version: Alice clicks iff her input matches a shared guess
// (rate 1/2), Bob always clicks. The symmetrized version mixes the two
// one-sided guessers with a both-guess branch, click rate 2/3 per party.
// ---------------------------------------------------------------------------
struct FakingReport {
  long samples = 0;
  std::uint64_t seed = 0;
  bool symmetrized = false;
  double click_rate_alice = 0.0;
  double click_rate_bob = 0.0;
  Behavior conditional;   // conditional-on-both-click behavior, (2,2,2)
  double conditional_chsh = 0.0;
  double max_deviation_from_pr = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

FakingReport detection_faking_run(long samples, std::uint64_t seed,
                                  bool symmetrized);

// ---------------------------------------------------------------------------
// PR boxes as stateless oracles with transcript logging; every logged
// quadruple satisfies a xor b = x y.
// ---------------------------------------------------------------------------
struct PrBoxUse {
  int x, y, a, b;
};

class PrBoxState {
 public:
  explicit PrBoxState(Rng& rng) : rng_(&rng) {}
  std::pair<int, int> use(int x, int y);
  const std::vector<PrBoxUse>& transcript() const { return transcript_; }

 private:
  Rng* rng_;
  std::vector<PrBoxUse> transcript_;
};

struct VanDamResult {
  int output;                      // equals x . y mod 2
  int message;                     // the single communicated bit
  std::vector<PrBoxUse> transcript;
};

// van Dam's inner-product protocol: n fresh PR boxes, box i fed (x_i, y_i),
// Alice sends c = xor_i a_i, Bob outputs c xor (xor_i b_i).
VanDamResult vandam_inner_product(const std::vector<int>& x,
                                  const std::vector<int>& y, Rng& rng);

struct InfoCausalityResult {
  int guess;  // equals x_k
  int message;
  std::vector<PrBoxUse> transcript;
};

// Information-causality retrieval: Alice inputs x0 xor x1, sends m = a xor
// x0; Bob inputs k and outputs b xor m.
InfoCausalityResult info_causality_retrieval(int x0, int x1, int k, Rng& rng);

// ---------------------------------------------------------------------------
// EPR2 local content: the maximal local weight w such that p = w p_l +
// (1-w) p_ns with p_l local and p_ns no-signaling. LP in Collins-Gisin
// coordinates with the residual's mass as a free scalar.
// ---------------------------------------------------------------------------
double epr2_local_content(const Behavior& b, long cap = 10000000);

// Upper bound from a Bell expression: (S_ns - Q) / (S_ns - S_l).
double epr2_upper_from_inequality(const Behavior& b, const BellExpression& expr);

}  // namespace bell::sim
