#ifndef SYNLOC_LINK_MESSAGES_HPP
#define SYNLOC_LINK_MESSAGES_HPP

#include "synloc/gaussian.hpp"
#include "synloc/geometry.hpp"

namespace synloc {

// All link algebra runs in meters; clock offsets enter as tau = c*theta so
// that position and clock precisions stay numerically comparable.
//
// Measurement model for a link between nodes i and j, seen from node i:
//
//   z = ||x_i - x_j|| + b + sign*(tau_i - tau_j) + zeta,  zeta ~ N(0, sigma_d2)
//
// sign = +1 when node i received the packet, -1 when it transmitted.
//
// The likelihood exponent is linearized the usual way for this problem:
// the squared-distance term is kept exact and only the square root is
// replaced by its first-order expansion around the current estimates.
// After that step the factor is exactly a pair of scalar linear-Gaussian
// observations in (x_i, y_i, tau_i, x_j, y_j, tau_j, b):
//
//   along-link:     lambda*p + gamma*q + sign*(tau_i - tau_j) + b
//                     = z - d_hat + (expansion-point terms) + eps1
//   perpendicular:  gamma*p - lambda*q = (expansion-point terms) + eps2
//
// with p = (x_i - xhat_i) - (x_j - xhat_j), q likewise for y, and
// eps1, eps2 ~ N(0, sigma_d2). Messages are the exact Gaussian
// marginalizations of this factor against the incoming messages.

enum class LinkVar { kXi = 0, kYi = 1, kTaui = 2, kXj = 3, kYj = 4, kTauj = 5, kBias = 6 };

struct LinkInputs {
  double z = 0.0;
  double sigma_d2 = 1.0;
  double sign = 1.0;
  LinearizedRange lin;  // from node i's perspective
  double xhat_i = 0.0, yhat_i = 0.0;  // expansion points (previous estimates)
  double xhat_j = 0.0, yhat_j = 0.0;
  // incoming variable-to-factor messages, indexed x_i,y_i,tau_i,x_j,y_j,tau_j;
  // variance 0 marks an exactly known quantity (anchor)
  Gaussian1D in[6];
};

struct BpMessage {
  Gaussian1D value;
  double z_slope = 0.0;  // d mean / d z, used for the NLOS bias shift
};

// LOS factor-to-variable message (bias fixed at zero).
BpMessage bp_message_los(const LinkInputs& link, LinkVar target);

// NLOS message: the exponential bias is integrated against the linearized
// Gaussian likelihood and the result moment-matched. Throws
// MomentMatchFailure on an improper bias posterior.
Gaussian1D bp_message_nlos(const LinkInputs& link, LinkVar target, double bias_rate);

// Gaussian part of the factor-to-bias message (all six variables
// marginalized out).
BpMessage bp_bias_message(const LinkInputs& link);

// Moment-matched bias belief: prior Exp(bias_rate) times the factor-to-bias
// message, restricted to b > 0.
Gaussian1D bp_bias_belief(const LinkInputs& link, double bias_rate);

// ---------------------------------------------------------------------------
// VMP messages use point estimates only; variances are fixed by the
// measurement noise.

struct VmpInputs {
  double z = 0.0;
  double sigma_d2 = 1.0;
  double sign = 1.0;
  LinearizedRange lin;
  double tauhat_i = 0.0;
  double xhat_j = 0.0, yhat_j = 0.0, tauhat_j = 0.0;  // anchor truth or belief means
  double bias_hat = 0.0;  // clamped bias estimate; 0 on LOS links
};

Gaussian1D vmp_message_x(const VmpInputs& link);
Gaussian1D vmp_message_y(const VmpInputs& link);
Gaussian1D vmp_message_tau(const VmpInputs& link);
Gaussian1D vmp_message_bias(const VmpInputs& link);

// Belief of the bias variable: N(m_msg - sigma_d2*rate, sigma_d2). May have
// a negative mean; callers clamp when substituting into range expressions.
Gaussian1D vmp_bias_belief(const Gaussian1D& f_to_bias, double sigma_d2, double bias_rate);

}  // namespace synloc

#endif
