#pragma once

#include <cstdint>
#include <vector>

#include "bell/core.hpp"
#include "bell/optim.hpp"

namespace bell::diag {

// ---------------------------------------------------------------------------
// Device-independent randomness bounds for the CHSH scenario.
// ---------------------------------------------------------------------------
struct RandomnessBound {
  double bell_value = 0.0;
  double p_guess = 1.0;
  double min_entropy_bits = 0.0;
  std::string adversary;  // "quantum" | "no-signaling"
};

// p_guess <= 1/2 (1 + sqrt(2 - S^2/4)), clamped to 1 for S <= 2. Rejects S
// above the Tsirelson bound.
RandomnessBound guessing_bound_quantum(double s);
// p_guess <= 3/2 - S/4, clamped to 1; valid up to the algebraic maximum 4.
RandomnessBound guessing_bound_ns(double s);
// Chained-inequality bound p_guess <= 1/d + (d/4) S_chained (bracket-form
// value, nonnegative).
double guessing_bound_chained(int d, int m, double s_chained);

double min_entropy(double p_guess);
// Metadata constant: global min-entropy 1.23 bits at maximal CHSH violation
// (p_guess = 1/4 + sqrt(2)/8).
double chsh_global_minentropy_max();

// ---------------------------------------------------------------------------
// Detection efficiency.
// ---------------------------------------------------------------------------
struct EfficiencyModel {
  std::vector<double> eta;        // per-party efficiency in [0,1]
  std::vector<int> assignment;    // outcome assigned to no-click events
};

// p_eta as the convex combination over click patterns: detected parties
// follow p's marginal, undetected parties output their assigned outcome.
// Exact for no-signaling behaviors (marginals well defined).
Behavior apply_efficiency(const Behavior& b, const EfficiencyModel& e);

// Certified bracket on the critical efficiency: local below, nonlocal above,
// via LP membership at the bisection endpoints. Requires b nonlocal at
// eta = 1 (throws otherwise). Symmetric efficiency on all parties.
optim::Bracket efficiency_threshold(const Behavior& b,
                                    const std::vector<int>& assignment,
                                    double tol);

// (m_A + m_B - 2) / (m_A m_B - 1), the threshold lower bound.
double efficiency_lower_bound(int m_a, int m_b);

// Eberhard scan point: critical efficiency for the partially entangled state
// cos(theta)|00> + sin(theta)|11> with measurements re-optimized by see-saw
// at each efficiency (restarts per the spec's scan recipe).
optim::Bracket eberhard_threshold(double theta, double tol, int restarts = 5,
                                  std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Finite statistics and teleportation.
// ---------------------------------------------------------------------------
double gill_bound(long n, double epsilon);         // 8 exp(-4N (eps/16)^2)
double teleport_fidelity_bound(double s);          // 1/2 (1 + S^2/12)

// ---------------------------------------------------------------------------
// Statistical strength: KL divergence (base 2) from b to the local set under
// uniform inputs, by away-step Frank-Wolfe with the exact vertex oracle.
// ---------------------------------------------------------------------------
struct StrengthResult {
  double bits = 0.0;
  double duality_gap = 0.0;   // final Frank-Wolfe gap
  int iterations = 0;
  bool converged = false;
  Behavior closest_local;
};

StrengthResult statistical_strength(const Behavior& b, double gap_tol = 1e-6,
                                    long cap = 10000000);

}  // namespace bell::diag
