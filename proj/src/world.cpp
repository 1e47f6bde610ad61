#include "synloc/world.hpp"

#include <algorithm>
#include <cmath>

namespace synloc {
namespace {

// mirror p into [0, hi]
double reflect(double p, double hi) {
  if (hi <= 0.0) return p;
  const double period = 2.0 * hi;
  double r = std::fmod(p, period);
  if (r < 0.0) r += period;
  return r <= hi ? r : period - r;
}

}  // namespace

NodeState step_mobility(const NodeState& state, const NoiseModel& noise, double dt,
                        double bounds_x, double bounds_y, double speed_max, Rng& rng) {
  if (state.role == Role::kAnchor) {
    return state;
  }
  NodeState next = state;
  next.position.x += state.velocity.x * dt + rng.normal(0.0, noise.sigma_ux);
  next.position.y += state.velocity.y * dt + rng.normal(0.0, noise.sigma_uy);
  next.clock_offset += rng.normal(0.0, noise.sigma_utheta);
  next.position.x = reflect(next.position.x, bounds_x);
  next.position.y = reflect(next.position.y, bounds_y);
  next.velocity.x = rng.uniform(0.0, speed_max);
  next.velocity.y = rng.uniform(0.0, speed_max);
  return next;
}

CommSet build_comm_set(const std::vector<NodeState>& states, double d_max) {
  CommSet out;
  out.neighbors.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (distance(states[i].position, states[j].position) <= d_max) {
        out.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        out.neighbors[i].push_back(static_cast<int>(j));
        out.neighbors[j].push_back(static_cast<int>(i));
      }
    }
  }
  return out;
}

bool segment_intersects_obstacle(const Vec2& a, const Vec2& b, const Obstacle& rect) {
  // Liang-Barsky clip of the segment against the slab intersection.
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - rect.xmin, rect.xmax - a.x, a.y - rect.ymin, rect.ymax - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;  // parallel and outside the slab
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

bool classify_nlos_probabilistic(double p_nlos, Rng& rng) {
  if (p_nlos <= 0.0) return false;
  return rng.uniform() < p_nlos;
}

bool classify_nlos_geometric(const Vec2& a, const Vec2& b,
                             const std::vector<Obstacle>& obstacles) {
  for (const auto& rect : obstacles) {
    if (segment_intersects_obstacle(a, b, rect)) return true;
  }
  return false;
}

Measurement generate_measurement(const NodeState& tx, const NodeState& rx, int slot,
                                 bool nlos, const NoiseModel& noise, double c, Rng& rng) {
  Measurement m;
  m.tx = tx.id;
  m.rx = rx.id;
  m.slot = slot;
  m.nlos = nlos;
  m.true_bias = nlos ? rng.exponential(noise.nlos_rate) : 0.0;
  const double d = distance(tx.position, rx.position);
  m.range = d + m.true_bias + c * (rx.clock_offset - tx.clock_offset) +
            rng.normal(0.0, noise.sigma_d);
  return m;
}

World make_world(const ScenarioConfig& cfg, Rng& rng) {
  World w;
  const int n_anchor = static_cast<int>(cfg.anchor_positions.size());
  const int n = n_anchor + cfg.agent_count;
  w.states.resize(n);
  w.priors.resize(n);
  for (int i = 0; i < n_anchor; ++i) {
    auto& s = w.states[i];
    s.id = i;
    s.role = Role::kAnchor;
    s.position = cfg.anchor_positions[i];
    s.velocity = {0.0, 0.0};
    s.clock_offset = 0.0;
    w.priors[i] = {Gaussian1D{s.position.x, 0.0}, Gaussian1D{s.position.y, 0.0},
                   Gaussian1D{0.0, 0.0}};
  }
  for (int i = n_anchor; i < n; ++i) {
    auto& s = w.states[i];
    s.id = i;
    s.role = Role::kAgent;
    // draw order per agent: x, y, c*theta, vx, vy, prior perturbations (x, y, clock)
    s.position.x = rng.uniform(0.0, cfg.bounds_x);
    s.position.y = rng.uniform(0.0, cfg.bounds_y);
    const double lo = cfg.symmetric_clock ? -cfg.clock_offset_range : 0.0;
    const double ctheta = rng.uniform(lo, cfg.clock_offset_range);
    s.clock_offset = ctheta / cfg.c;
    s.velocity.x = rng.uniform(0.0, cfg.speed_max);
    s.velocity.y = rng.uniform(0.0, cfg.speed_max);
    const double sx = cfg.prior_sigma_xy, sc = cfg.prior_sigma_clock;
    w.priors[i] = {
        Gaussian1D{rng.normal(s.position.x, sx), sx * sx},
        Gaussian1D{rng.normal(s.position.y, sx), sx * sx},
        Gaussian1D{rng.normal(ctheta, sc), sc * sc},
    };
  }
  return w;
}

SlotData advance_slot(const std::vector<NodeState>& prev, const ScenarioConfig& cfg,
                      int slot, Rng& rng) {
  SlotData out;
  out.states.reserve(prev.size());
  for (const auto& s : prev) {
    out.states.push_back(step_mobility(s, cfg.noise, cfg.dt, cfg.bounds_x,
                                       cfg.bounds_y, cfg.speed_max, rng));
  }
  out.comm = build_comm_set(out.states, cfg.comm_range);
  for (const auto& [i, j] : out.comm.pairs) {
    const auto& a = out.states[i];
    const auto& b = out.states[j];
    if (a.role == Role::kAnchor && b.role == Role::kAnchor) {
      continue;  // carries no information, excluded by default
    }
    bool nlos = false;
    if (cfg.nlos_mode == NlosMode::kProbabilistic) {
      nlos = classify_nlos_probabilistic(cfg.nlos_probability, rng);
    } else {
      nlos = classify_nlos_geometric(a.position, b.position, cfg.obstacles);
    }
    out.measurements.push_back(
        generate_measurement(a, b, slot, nlos, cfg.noise, cfg.c, rng));
  }
  return out;
}

ScenarioConfig make_random_scenario() {
  ScenarioConfig cfg;
  cfg.name = "random-network";
  cfg.bounds_x = cfg.bounds_y = 50.0;
  for (double y : {5.0, 25.0, 45.0}) {
    for (double x : {5.0, 25.0, 45.0}) {
      cfg.anchor_positions.push_back({x, y});
    }
  }
  cfg.agent_count = 50;
  cfg.comm_range = 20.0;
  cfg.dt = 1.0;
  cfg.slot_count = 10;
  cfg.prior_sigma_xy = 10.0;
  cfg.prior_sigma_clock = 50.0;
  cfg.clock_offset_range = 50.0;
  cfg.speed_max = 3.0;
  cfg.noise = {1.0, 1.0, 1.0, 1e-8, 0.38};
  cfg.schedule = {1, 20};
  return cfg;
}

ScenarioConfig make_parking_scenario() {
  ScenarioConfig cfg;
  cfg.name = "parking-floor";
  cfg.bounds_x = 80.0;
  cfg.bounds_y = 60.0;
  cfg.anchor_positions = {{0.0, 30.0}, {80.0, 30.0}, {40.0, 0.0}, {40.0, 60.0}};
  cfg.agent_count = 8;
  cfg.comm_range = 50.0;
  cfg.dt = 1.0;
  cfg.slot_count = 30;
  cfg.prior_sigma_xy = 10.0;
  cfg.prior_sigma_clock = 50.0;
  cfg.clock_offset_range = 50.0;
  // per-axis U[0,7] keeps the speed strictly below 10 m/s
  cfg.speed_max = 7.0;
  cfg.noise = {1.0, 1.0, 1.0, 1e-8, 0.38};
  cfg.schedule = {1, 20};
  cfg.nlos_mode = NlosMode::kGeometric;
  // two rows of parked vehicles (2.5 x 5 m stalls with gaps)
  for (int k = 0; k < 6; ++k) {
    const double x0 = 10.0 + 11.0 * k;
    cfg.obstacles.push_back({x0, 20.0, x0 + 5.0, 22.5});
    cfg.obstacles.push_back({x0, 37.5, x0 + 5.0, 40.0});
  }
  return cfg;
}

}  // namespace synloc
