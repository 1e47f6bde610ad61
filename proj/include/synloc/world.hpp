#ifndef SYNLOC_WORLD_HPP
#define SYNLOC_WORLD_HPP

#include <utility>
#include <vector>

#include "synloc/gaussian.hpp"
#include "synloc/rng.hpp"
#include "synloc/types.hpp"

namespace synloc {

// Communication set Xi for one slot plus per-node neighbor lists.
struct CommSet {
  std::vector<std::pair<int, int>> pairs;       // i < j, sorted
  std::vector<std::vector<int>> neighbors;      // per node, sorted
  int degree(int node) const { return static_cast<int>(neighbors[node].size()); }
};

// Gauss-Markov step (Eqs. x_n = x_{n-1} + v dt + alpha, theta_n = theta_{n-1} + beta).
// The position advances with the state's current velocity; a fresh velocity
// for the next slot is drawn afterwards from U[0, speed_max] per axis.
// Positions are mirrored back into [0,bounds] so states stay in-bounds.
// Anchors are returned unchanged (Dirac transition). Draw order per agent:
// alpha_x, alpha_y, beta, vx, vy.
NodeState step_mobility(const NodeState& state, const NoiseModel& noise, double dt,
                        double bounds_x, double bounds_y, double speed_max, Rng& rng);

CommSet build_comm_set(const std::vector<NodeState>& states, double d_max);

bool segment_intersects_obstacle(const Vec2& a, const Vec2& b, const Obstacle& rect);

// Probabilistic mode: true w.p. p_nlos (one uniform draw). Geometric mode:
// true iff the segment between the endpoints crosses any obstacle.
bool classify_nlos_probabilistic(double p_nlos, Rng& rng);
bool classify_nlos_geometric(const Vec2& a, const Vec2& b,
                             const std::vector<Obstacle>& obstacles);

// z = ||x_tx - x_rx|| + b + c (theta_rx - theta_tx) + zeta. Draw order:
// bias (if nlos), zeta.
Measurement generate_measurement(const NodeState& tx, const NodeState& rx, int slot,
                                 bool nlos, const NoiseModel& noise, double c, Rng& rng);

// Full ground truth + agent priors for one trial.
struct World {
  std::vector<NodeState> states;   // slot-0 states
  // priors in engine units: x, y in meters, clock in meters of c*theta
  struct Prior {
    Gaussian1D x, y, clock;
  };
  std::vector<Prior> priors;       // indexed by node id; anchors exact (variance 0)
};

// Places anchors/agents, draws initial clock offsets and priors (D-W1, D-W4).
World make_world(const ScenarioConfig& cfg, Rng& rng);

// Advances all states one slot and generates this slot's measurements
// (one per unordered pair, transmitter = lower id, anchor-anchor skipped).
struct SlotData {
  std::vector<NodeState> states;
  CommSet comm;
  std::vector<Measurement> measurements;
};
SlotData advance_slot(const std::vector<NodeState>& prev, const ScenarioConfig& cfg,
                      int slot, Rng& rng);

// Reference scenario constructors (Section-IV style setups).
ScenarioConfig make_random_scenario();
ScenarioConfig make_parking_scenario();

}  // namespace synloc

#endif
