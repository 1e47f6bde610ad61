#include "synloc/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>

namespace synloc {
namespace {

Gaussian1D floor_variance(Gaussian1D g) {
  if (g.variance < kVarianceFloor) g.variance = kVarianceFloor;
  return g;
}

struct Link {
  int node[2];     // [0] = tx, [1] = rx
  double sign[2];  // +1 for the receiver side, -1 for the transmitter side
  double z = 0.0;
  bool nlos = false;
};

struct Incidence {
  int link = 0;
  int side = 0;  // this node's side within the link
};

// Geometry of one link for one external round, from the tx side; the rx side
// negates lambda/gamma.
struct RoundGeometry {
  bool valid = false;
  LinearizedRange lin;  // tx-side perspective
};

constexpr int kVars = 3;  // x, y, clock within a node

Gaussian1D& var_of(Belief& b, int v) { return v == 0 ? b.x : (v == 1 ? b.y : b.clock); }
const Gaussian1D& var_of(const Belief& b, int v) {
  return v == 0 ? b.x : (v == 1 ? b.y : b.clock);
}

}  // namespace

Belief bp_prediction(const Belief& prev, Role role, const Vec2& velocity, double dt,
                     const NoiseModel& noise, double c) {
  if (role == Role::kAnchor) return prev;
  Belief out;
  out.x = floor_variance({prev.x.mean + velocity.x * dt,
                          prev.x.variance + noise.sigma_ux * noise.sigma_ux});
  out.y = floor_variance({prev.y.mean + velocity.y * dt,
                          prev.y.variance + noise.sigma_uy * noise.sigma_uy});
  const double su = c * noise.sigma_utheta;
  out.clock = floor_variance({prev.clock.mean, prev.clock.variance + su * su});
  return out;
}

Belief vmp_prediction(const Belief& prev, Role role, const Vec2& velocity, double dt,
                      const NoiseModel& noise, double c) {
  if (role == Role::kAnchor) return prev;
  Belief out;
  out.x = floor_variance(
      {prev.x.mean + velocity.x * dt, noise.sigma_ux * noise.sigma_ux});
  out.y = floor_variance(
      {prev.y.mean + velocity.y * dt, noise.sigma_uy * noise.sigma_uy});
  const double su = c * noise.sigma_utheta;
  out.clock = floor_variance({prev.clock.mean, su * su});
  return out;
}

Gaussian1D compute_belief(const Gaussian1D& prediction,
                          std::span<const Gaussian1D> factor_msgs) {
  if (factor_msgs.empty()) return prediction;
  double prec = 1.0 / prediction.variance;
  double weighted = prediction.mean / prediction.variance;
  for (const auto& g : factor_msgs) {
    prec += 1.0 / g.variance;
    weighted += g.mean / g.variance;
  }
  const double var = 1.0 / prec;
  return {var * weighted, var};
}

Gaussian1D extrinsic_message(const Gaussian1D& belief, const Gaussian1D& factor_msg,
                             long& fallback_count) {
  if (auto ext = divide(belief, factor_msg)) {
    return floor_variance(*ext);
  }
  ++fallback_count;  // degrade to broadcast for this link (D-BP3)
  return belief;
}

namespace {

class SlotRunner {
 public:
  SlotRunner(const SlotProblem& prob, const EngineOptions& opts)
      : prob_(prob), opts_(opts), n_(static_cast<int>(prob.roles.size())) {
    build_links();
    belief_ = prob_.predictions;
    snap_belief_ = belief_;
    // iteration-1 variable-to-factor messages are the predictions
    out_.assign(links_.size(), {});
    for (std::size_t l = 0; l < links_.size(); ++l) {
      for (int side = 0; side < 2; ++side) {
        const int node = links_[l].node[side];
        out_[l][side] = {prob_.predictions[node].x, prob_.predictions[node].y,
                         prob_.predictions[node].clock};
      }
    }
    snap_out_ = out_;
    factor_.assign(links_.size(), {});
    bias_snap_.assign(links_.size(), 1.0 / prob_.bias_rate);  // prior mean
    bias_next_ = bias_snap_;
    bias_belief_.assign(links_.size(), Gaussian1D{1.0 / prob_.bias_rate, 0.0});
    geom_.assign(links_.size(), {});
    result_.params_transmitted.assign(n_, 0);
  }

  SlotResult run() {
    const bool vmp = opts_.algorithm == AlgorithmKind::kVmp;
    for (int round = 0; round < opts_.schedule.n_external; ++round) {
      exchange();
      for (int inner = 0; inner < opts_.schedule.n_internal; ++inner) {
        const bool first_inner = inner == 0;
        for (int node : agent_order()) {
          if (vmp) {
            update_node_vmp(node);
          } else {
            update_node_bp(node, first_inner);
          }
        }
        record_estimates();
      }
      count_transmissions();
    }
    finish();
    return std::move(result_);
  }

 private:
  void build_links() {
    incidence_.resize(n_);
    for (const auto& m : prob_.measurements) {
      Link l;
      l.node[0] = m.tx;
      l.node[1] = m.rx;
      l.sign[0] = -1.0;
      l.sign[1] = 1.0;
      l.z = m.range;
      l.nlos = prob_.nlos_aware && m.nlos;
      const int idx = static_cast<int>(links_.size());
      links_.push_back(l);
      incidence_[m.tx].push_back({idx, 0});
      incidence_[m.rx].push_back({idx, 1});
    }
    for (auto& inc : incidence_) {
      std::sort(inc.begin(), inc.end(), [&](const Incidence& a, const Incidence& b) {
        const int pa = links_[a.link].node[1 - a.side];
        const int pb = links_[b.link].node[1 - b.side];
        return pa != pb ? pa < pb : a.link < b.link;
      });
    }
    agents_.clear();
    for (int i = 0; i < n_; ++i) {
      if (prob_.roles[i] == Role::kAgent) agents_.push_back(i);
    }
  }

  std::span<const int> agent_order() const {
    if (opts_.update_order) return *opts_.update_order;
    return agents_;
  }

  // External exchange: freeze outgoing messages, belief means and link
  // geometry; VMP bias beliefs refresh here as well.
  void exchange() {
    snap_out_ = out_;
    snap_belief_ = belief_;
    for (std::size_t l = 0; l < links_.size(); ++l) {
      const auto& link = links_[l];
      const Vec2 pa{snap_belief_[link.node[0]].x.mean, snap_belief_[link.node[0]].y.mean};
      const Vec2 pb{snap_belief_[link.node[1]].x.mean, snap_belief_[link.node[1]].y.mean};
      if (auto lin = linearize(pa, pb)) {
        geom_[l] = {true, *lin};
      } else {
        geom_[l] = {false, {}};
        ++result_.skipped_links;
      }
    }
    if (opts_.algorithm == AlgorithmKind::kVmp) {
      bias_snap_ = bias_next_;
    }
  }

  LinkInputs make_bp_inputs(std::size_t l, int side, bool first_inner) const {
    const Link& link = links_[l];
    const int self = link.node[side];
    const int peer = link.node[1 - side];
    LinkInputs in;
    in.z = link.z;
    in.sigma_d2 = prob_.sigma_d * prob_.sigma_d;
    in.sign = link.sign[side];
    in.lin = geom_[l].lin;
    if (side == 1) {  // geometry is stored from the tx side
      in.lin.lambda = -in.lin.lambda;
      in.lin.gamma = -in.lin.gamma;
    }
    in.xhat_i = snap_belief_[self].x.mean;
    in.yhat_i = snap_belief_[self].y.mean;
    in.xhat_j = snap_belief_[peer].x.mean;
    in.yhat_j = snap_belief_[peer].y.mean;
    const bool broadcast = opts_.algorithm == AlgorithmKind::kBroadcastBp;
    // own incoming messages: previous cycle's outgoing (snapshot on the first
    // internal cycle of a round)
    const auto& own = broadcast
                          ? std::array<Gaussian1D, 3>{snap_belief_[self].x,
                                                      snap_belief_[self].y,
                                                      snap_belief_[self].clock}
                          : (first_inner ? snap_out_[l][side] : out_[l][side]);
    const auto& other = broadcast
                            ? std::array<Gaussian1D, 3>{snap_belief_[peer].x,
                                                        snap_belief_[peer].y,
                                                        snap_belief_[peer].clock}
                            : snap_out_[l][1 - side];
    for (int v = 0; v < kVars; ++v) {
      in.in[v] = own[v];
      in.in[kVars + v] = other[v];
    }
    return in;
  }

  void update_node_bp(int node, bool first_inner) {
    const auto& inc = incidence_[node];
    // phase 1: factor-to-variable messages from the previous cycle's state
    std::array<std::vector<Gaussian1D>, kVars> msgs;
    std::vector<std::size_t> valid;
    for (const auto& e : inc) {
      if (!geom_[e.link].valid) continue;
      const LinkInputs in = make_bp_inputs(e.link, e.side, first_inner);
      auto& dst = factor_[e.link][e.side];
      if (links_[e.link].nlos) {
        dst[0] = floor_variance(bp_message_nlos(in, LinkVar::kXi, prob_.bias_rate));
        dst[1] = floor_variance(bp_message_nlos(in, LinkVar::kYi, prob_.bias_rate));
        dst[2] = floor_variance(bp_message_nlos(in, LinkVar::kTaui, prob_.bias_rate));
      } else {
        dst[0] = floor_variance(bp_message_los(in, LinkVar::kXi).value);
        dst[1] = floor_variance(bp_message_los(in, LinkVar::kYi).value);
        dst[2] = floor_variance(bp_message_los(in, LinkVar::kTaui).value);
      }
      for (int v = 0; v < kVars; ++v) msgs[v].push_back(dst[v]);
      valid.push_back(static_cast<std::size_t>(&e - inc.data()));
    }
    // phase 2: belief and outgoing messages
    Belief nb;
    for (int v = 0; v < kVars; ++v) {
      var_of(nb, v) =
          compute_belief(var_of(prob_.predictions[node], v), msgs[v]);
    }
    belief_[node] = nb;
    if (opts_.algorithm == AlgorithmKind::kStandardBp) {
      for (std::size_t k : valid) {
        const auto& e = inc[k];
        for (int v = 0; v < kVars; ++v) {
          out_[e.link][e.side][v] = extrinsic_message(
              var_of(nb, v), factor_[e.link][e.side][v], result_.extrinsic_fallbacks);
        }
      }
    }
  }

  void update_node_vmp(int node) {
    const auto& inc = incidence_[node];
    std::array<std::vector<Gaussian1D>, kVars> msgs;
    for (const auto& e : inc) {
      if (!geom_[e.link].valid) continue;
      const Link& link = links_[e.link];
      const int peer = link.node[1 - e.side];
      VmpInputs in;
      in.z = link.z;
      in.sigma_d2 = prob_.sigma_d * prob_.sigma_d;
      in.sign = link.sign[e.side];
      in.lin = geom_[e.link].lin;
      if (e.side == 1) {
        in.lin.lambda = -in.lin.lambda;
        in.lin.gamma = -in.lin.gamma;
      }
      in.tauhat_i = belief_[node].clock.mean;
      in.xhat_j = snap_belief_[peer].x.mean;
      in.yhat_j = snap_belief_[peer].y.mean;
      in.tauhat_j = snap_belief_[peer].clock.mean;
      in.bias_hat = link.nlos ? std::max(0.0, bias_snap_[e.link]) : 0.0;
      msgs[0].push_back(floor_variance(vmp_message_x(in)));
      msgs[1].push_back(floor_variance(vmp_message_y(in)));
      msgs[2].push_back(floor_variance(vmp_message_tau(in)));
    }
    Belief nb;
    for (int v = 0; v < kVars; ++v) {
      var_of(nb, v) = compute_belief(var_of(prob_.predictions[node], v), msgs[v]);
    }
    belief_[node] = nb;
  }

  // VMP bias beliefs refresh once per external round from the frozen
  // snapshot, so both endpoints agree on the shared link variable.
  void update_vmp_biases() {
    for (std::size_t l = 0; l < links_.size(); ++l) {
      const Link& link = links_[l];
      if (!link.nlos || !geom_[l].valid) continue;
      VmpInputs in;
      in.z = link.z;
      in.sigma_d2 = prob_.sigma_d * prob_.sigma_d;
      in.sign = link.sign[0];
      in.lin = geom_[l].lin;
      in.tauhat_i = snap_belief_[link.node[0]].clock.mean;
      in.tauhat_j = snap_belief_[link.node[1]].clock.mean;
      const Gaussian1D msg = vmp_message_bias(in);
      const Gaussian1D bel = vmp_bias_belief(msg, in.sigma_d2, prob_.bias_rate);
      bias_belief_[l] = bel;
      bias_next_[l] = bel.mean;
    }
  }

  void record_estimates() {
    if (opts_.algorithm == AlgorithmKind::kVmp) update_vmp_biases();
    std::vector<EstimateTriple> row(n_);
    for (int i = 0; i < n_; ++i) {
      row[i] = {belief_[i].x.mean, belief_[i].y.mean, belief_[i].clock.mean};
    }
    result_.estimates.push_back(std::move(row));
  }

  void count_transmissions() {
    for (int i : agents_) {
      const long deg = static_cast<long>(incidence_[i].size());
      switch (opts_.algorithm) {
        case AlgorithmKind::kStandardBp:
          result_.params_transmitted[i] += 6 * deg;
          break;
        case AlgorithmKind::kBroadcastBp:
          result_.params_transmitted[i] += 6;
          break;
        case AlgorithmKind::kVmp:
          result_.params_transmitted[i] += 3;
          break;
      }
    }
    if (opts_.algorithm == AlgorithmKind::kVmp) {
      // one extra parameter per NLOS link, charged to the transmitter end
      for (const auto& link : links_) {
        if (link.nlos && prob_.roles[link.node[0]] == Role::kAgent) {
          result_.params_transmitted[link.node[0]] += 1;
        } else if (link.nlos && prob_.roles[link.node[1]] == Role::kAgent) {
          result_.params_transmitted[link.node[1]] += 1;
        }
      }
    }
  }

  void finish() {
    result_.beliefs = belief_;
    for (std::size_t l = 0; l < links_.size(); ++l) {
      const Link& link = links_[l];
      if (!link.nlos) continue;
      BiasEstimate be;
      be.tx = link.node[0];
      be.rx = link.node[1];
      if (opts_.algorithm == AlgorithmKind::kVmp) {
        be.belief = bias_belief_[l];
      } else if (geom_[l].valid) {
        // BP exposes the moment-matched bias belief from the final messages
        LinkInputs in = make_bp_inputs(l, 0, false);
        be.belief = bp_bias_belief(in, prob_.bias_rate);
      } else {
        be.belief = {1.0 / prob_.bias_rate, 0.0};
      }
      be.clamped_mean = std::max(0.0, be.belief.mean);
      result_.bias_beliefs.push_back(be);
    }
  }

  const SlotProblem& prob_;
  const EngineOptions& opts_;
  int n_;
  std::vector<Link> links_;
  std::vector<std::vector<Incidence>> incidence_;
  std::vector<int> agents_;

  std::vector<Belief> belief_;
  std::vector<Belief> snap_belief_;
  using MsgTriple = std::array<Gaussian1D, kVars>;
  std::vector<std::array<MsgTriple, 2>> out_;
  std::vector<std::array<MsgTriple, 2>> snap_out_;
  std::vector<std::array<MsgTriple, 2>> factor_;
  std::vector<RoundGeometry> geom_;
  std::vector<double> bias_snap_;
  std::vector<double> bias_next_;
  std::vector<Gaussian1D> bias_belief_;

  SlotResult result_;
};

}  // namespace

SlotResult run_slot(const SlotProblem& prob, const EngineOptions& opts) {
  SlotRunner runner(prob, opts);
  return runner.run();
}

SlotResult run_slot_bp(const SlotProblem& prob, bool broadcast, int n_iter) {
  EngineOptions opts;
  opts.algorithm = broadcast ? AlgorithmKind::kBroadcastBp : AlgorithmKind::kStandardBp;
  opts.schedule = {1, n_iter};
  return run_slot(prob, opts);
}

SlotResult run_slot_vmp(const SlotProblem& prob, int n_iter) {
  EngineOptions opts;
  opts.algorithm = AlgorithmKind::kVmp;
  opts.schedule = {1, n_iter};
  return run_slot(prob, opts);
}

}  // namespace synloc
