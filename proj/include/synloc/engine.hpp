#ifndef SYNLOC_ENGINE_HPP
#define SYNLOC_ENGINE_HPP

#include <span>
#include <vector>

#include "synloc/gaussian.hpp"
#include "synloc/link_messages.hpp"
#include "synloc/types.hpp"

namespace synloc {

// Per-variable beliefs in engine units: x, y in meters, clock as c*theta in
// meters. Anchors carry exact constants (variance 0).
struct Belief {
  Gaussian1D x, y, clock;
};

// One time slot as seen by the engines: predictions, measurements (z and the
// LOS/NLOS tag only; true biases stay hidden) and the noise parameters.
struct SlotProblem {
  std::vector<Role> roles;
  std::vector<Belief> predictions;
  std::vector<Measurement> measurements;
  double sigma_d = 1.0;
  double bias_rate = 0.38;
  bool nlos_aware = true;
};

struct EngineOptions {
  AlgorithmKind algorithm = AlgorithmKind::kStandardBp;
  Schedule schedule{1, 20};
  // diagnostic hook: processing order of agent updates within an iteration
  // (results must not depend on it)
  const std::vector<int>* update_order = nullptr;
};

struct EstimateTriple {
  double x = 0.0, y = 0.0, clock = 0.0;  // meters
};

struct BiasEstimate {
  int tx = 0, rx = 0;
  Gaussian1D belief;          // meters; mean may be negative
  double clamped_mean = 0.0;  // max(mean, 0), the value used in range terms
};

struct SlotResult {
  std::vector<Belief> beliefs;
  // estimates[k][node] after message update cycle k (k = 0..N_int*N_ext-1)
  std::vector<std::vector<EstimateTriple>> estimates;
  std::vector<long> params_transmitted;  // per node, external rounds only
  long skipped_links = 0;       // singular-geometry skips (per link per round)
  long extrinsic_fallbacks = 0; // degenerate extrinsic divisions (D-BP3)
  std::vector<BiasEstimate> bias_beliefs;  // one per NLOS link when aware
};

// Prediction messages (factor f_i). BP carries the previous belief variance
// forward; VMP keeps only the transition variance.
Belief bp_prediction(const Belief& prev, Role role, const Vec2& velocity, double dt,
                     const NoiseModel& noise, double c);
Belief vmp_prediction(const Belief& prev, Role role, const Vec2& velocity, double dt,
                      const NoiseModel& noise, double c);

// Precision-weighted belief product; with no incoming messages the
// prediction is returned unchanged.
Gaussian1D compute_belief(const Gaussian1D& prediction,
                          std::span<const Gaussian1D> factor_msgs);

// Extrinsic message (belief with one factor divided out); falls back to the
// belief itself on degenerate precision and counts the event.
Gaussian1D extrinsic_message(const Gaussian1D& belief, const Gaussian1D& factor_msg,
                             long& fallback_count);

// Runs one slot under the configured algorithm and two-loop schedule.
// Synchronous (Jacobi) semantics: every message update cycle reads only the
// previous cycle's state; neighbor-derived quantities stay frozen between
// external rounds.
SlotResult run_slot(const SlotProblem& prob, const EngineOptions& opts);

// Plain single-loop runs (schedule {1, n_iter}).
SlotResult run_slot_bp(const SlotProblem& prob, bool broadcast, int n_iter);
SlotResult run_slot_vmp(const SlotProblem& prob, int n_iter);

}  // namespace synloc

#endif
