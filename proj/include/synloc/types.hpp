#ifndef SYNLOC_TYPES_HPP
#define SYNLOC_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "synloc/geometry.hpp"

namespace synloc {

enum class Role { kAnchor, kAgent };

// True state of one node at one time slot. clock_offset is in seconds;
// anchors keep it at 0 and never move.
struct NodeState {
  int id = 0;
  Role role = Role::kAgent;
  Vec2 position;
  Vec2 velocity;           // m/s, the velocity that produced this slot's position
  double clock_offset = 0.0;
};

// One directed TOA-derived range observation. true_bias is hidden from the
// engines; they only see the nlos flag.
struct Measurement {
  int tx = 0;
  int rx = 0;
  int slot = 0;
  double range = 0.0;      // z, meters
  bool nlos = false;
  double true_bias = 0.0;  // b > 0 iff nlos
};

struct NoiseModel {
  double sigma_d = 1.0;        // range noise std, meters (= c * sigma_t)
  double sigma_ux = 1.0;       // position transition std, meters
  double sigma_uy = 1.0;
  double sigma_utheta = 1e-8;  // clock transition std, seconds
  double nlos_rate = 0.38;     // exponential bias rate lambda, 1/m
};

enum class AlgorithmKind { kStandardBp, kBroadcastBp, kVmp };

// Two-loop message passing schedule: n_internal local refinement cycles per
// transmission round; n_internal * n_external message update cycles total.
struct Schedule {
  int n_internal = 1;
  int n_external = 20;
  int total_iterations() const { return n_internal * n_external; }
};

enum class NlosMode { kProbabilistic, kGeometric };

// Axis-aligned obstacle rectangle, meters.
struct Obstacle {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  double bounds_x = 50.0;
  double bounds_y = 50.0;
  std::vector<Vec2> anchor_positions;
  int agent_count = 50;
  double comm_range = 20.0;     // d_max, meters
  double dt = 1.0;              // slot interval, seconds
  int slot_count = 10;

  // priors (D-W4): prior mean = truth + N(0, sigma^2) per component
  double prior_sigma_xy = 10.0;    // meters
  double prior_sigma_clock = 50.0; // meters of c*theta

  // initial clock offsets: c*theta ~ U[0, clock_offset_range] (D-W1), or
  // U[-range, range] when symmetric_clock is set
  double clock_offset_range = 50.0;  // meters
  bool symmetric_clock = false;

  double speed_max = 3.0;  // per-axis velocity redraw upper bound, m/s (D-W2)

  NlosMode nlos_mode = NlosMode::kProbabilistic;
  double nlos_probability = 0.0;
  std::vector<Obstacle> obstacles;

  NoiseModel noise;
  double c = 3.0e8;  // propagation speed, m/s

  AlgorithmKind algorithm = AlgorithmKind::kStandardBp;
  Schedule schedule;
  bool nlos_aware = true;  // false: treat every link as LOS (baseline mode)

  std::uint64_t seed = 1;
  int trials = 1;
};

}  // namespace synloc

#endif
