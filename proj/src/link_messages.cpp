#include "synloc/link_messages.hpp"

#include <cmath>

namespace synloc {
namespace {

struct TwoObs {
  double h1[7];
  double h2[7];
  double o1;
  double o2;
};

TwoObs make_obs(const LinkInputs& link) {
  const double lam = link.lin.lambda, gam = link.lin.gamma, s = link.sign;
  TwoObs f;
  f.h1[0] = lam;  f.h1[1] = gam;  f.h1[2] = s;
  f.h1[3] = -lam; f.h1[4] = -gam; f.h1[5] = -s;
  f.h1[6] = 1.0;
  f.h2[0] = gam;  f.h2[1] = -lam; f.h2[2] = 0.0;
  f.h2[3] = -gam; f.h2[4] = lam;  f.h2[5] = 0.0;
  f.h2[6] = 0.0;
  f.o1 = link.z - link.lin.d_hat + lam * link.xhat_i + gam * link.yhat_i -
         lam * link.xhat_j - gam * link.yhat_j;
  f.o2 = gam * link.xhat_i - lam * link.yhat_i - gam * link.xhat_j + lam * link.yhat_j;
  return f;
}

struct Elimination {
  double mean, variance;
  double z_slope;   // d mean / d o1
  double m11, g1;   // bias-weight quadratic: q_perp(b) = const - 2*g1*b + m11*b^2
};

// Marginalize the two-observation factor against the Gaussian inputs on all
// variables except `target`; `bias_known` fixes b at the given value,
// otherwise b must be the target.
Elimination eliminate(const LinkInputs& link, int target, double bias_known) {
  const TwoObs f = make_obs(link);
  double s11 = link.sigma_d2, s12 = 0.0, s22 = link.sigma_d2;
  double r1 = f.o1 - bias_known;  // b enters obs1 as +b on the variable side
  double r2 = f.o2;
  for (int k = 0; k < 6; ++k) {
    if (k == target) continue;
    const double v = link.in[k].variance, m = link.in[k].mean;
    s11 += v * f.h1[k] * f.h1[k];
    s12 += v * f.h1[k] * f.h2[k];
    s22 += v * f.h2[k] * f.h2[k];
    r1 -= f.h1[k] * m;
    r2 -= f.h2[k] * m;
  }
  const double ht1 = (target < 6) ? f.h1[target] : f.h1[6];
  const double ht2 = (target < 6) ? f.h2[target] : f.h2[6];
  const double det = s11 * s22 - s12 * s12;
  // S^{-1} h_t and S^{-1} r
  const double sh1 = (s22 * ht1 - s12 * ht2) / det;
  const double sh2 = (s11 * ht2 - s12 * ht1) / det;
  const double sr1 = (s22 * r1 - s12 * r2) / det;
  const double sr2 = (s11 * r2 - s12 * r1) / det;
  const double prec = ht1 * sh1 + ht2 * sh2;

  Elimination out;
  out.variance = 1.0 / prec;
  out.mean = (ht1 * sr1 + ht2 * sr2) / prec;
  out.z_slope = sh1 / prec;
  // M = S^-1 - S^-1 h h^T S^-1 / prec; only the o1 row/column is needed
  // because b perturbs r only through o1.
  const double s_e1_1 = s22 / det, s_e1_2 = -s12 / det;  // S^-1 e1
  out.m11 = s_e1_1 - sh1 * sh1 / prec;
  out.g1 = (s_e1_1 * r1 + s_e1_2 * r2) - sh1 * (out.mean);
  return out;
}

// Moments of w(b) = exp(-rate*b - (m11*b^2 - 2*g1*b)/2) on b > 0.
Gaussian1D bias_weight_moments(double m11, double g1, double rate) {
  if (m11 > 1e-14) {
    const double var_b = 1.0 / m11;
    const double mean_b = (g1 - rate) * var_b;
    const double sd_b = std::sqrt(var_b);
    // peak of the truncated density, used to keep the integrand representable
    const double peak = std::max(0.0, mean_b);
    const double log_peak = -0.5 * (peak - mean_b) * (peak - mean_b) / var_b;
    MomentIntegrand w;
    w.center = peak;
    w.scale = sd_b;
    w.density = [mean_b, var_b, log_peak](double b) {
      if (b <= 0.0) return 0.0;
      const double d = b - mean_b;
      return std::exp(-0.5 * d * d / var_b - log_peak);
    };
    return moment_match(w);
  }
  // flat quadratic part: pure exponential tilt
  const double eff_rate = rate - g1;
  if (!(eff_rate > 0.0)) {
    throw MomentMatchFailure("bias weight is not integrable");
  }
  MomentIntegrand w;
  w.center = 0.0;
  w.scale = 1.0 / eff_rate;
  w.density = [eff_rate](double b) { return b > 0.0 ? std::exp(-eff_rate * b) : 0.0; };
  return moment_match(w);
}

}  // namespace

BpMessage bp_message_los(const LinkInputs& link, LinkVar target) {
  const Elimination e = eliminate(link, static_cast<int>(target), 0.0);
  return {{e.mean, e.variance}, e.z_slope};
}

Gaussian1D bp_message_nlos(const LinkInputs& link, LinkVar target, double bias_rate) {
  const Elimination e = eliminate(link, static_cast<int>(target), 0.0);
  const Gaussian1D bw = bias_weight_moments(e.m11, e.g1, bias_rate);
  // mixture over b of Gaussians with mean shifted by -z_slope*b
  return {e.mean - e.z_slope * bw.mean,
          e.variance + e.z_slope * e.z_slope * bw.variance};
}

BpMessage bp_bias_message(const LinkInputs& link) {
  const Elimination e = eliminate(link, static_cast<int>(LinkVar::kBias), 0.0);
  return {{e.mean, e.variance}, e.z_slope};
}

Gaussian1D bp_bias_belief(const LinkInputs& link, double bias_rate) {
  const Gaussian1D msg = bp_bias_message(link).value;
  // Exp(rate) * N(m, v) on b > 0 completes the square to a truncated Gaussian
  const double shifted = msg.mean - bias_rate * msg.variance;
  const double sd = std::sqrt(msg.variance);
  const double peak = std::max(0.0, shifted);
  const double log_peak = -0.5 * (peak - shifted) * (peak - shifted) / msg.variance;
  MomentIntegrand w;
  w.center = peak;
  w.scale = sd;
  w.density = [shifted, v = msg.variance, log_peak](double b) {
    if (b <= 0.0) return 0.0;
    const double d = b - shifted;
    return std::exp(-0.5 * d * d / v - log_peak);
  };
  return moment_match(w);
}

Gaussian1D vmp_message_x(const VmpInputs& link) {
  const double corrected = link.z - link.bias_hat -
                           link.sign * (link.tauhat_i - link.tauhat_j);
  return {link.xhat_j + link.lin.lambda * corrected, link.sigma_d2};
}

Gaussian1D vmp_message_y(const VmpInputs& link) {
  const double corrected = link.z - link.bias_hat -
                           link.sign * (link.tauhat_i - link.tauhat_j);
  return {link.yhat_j + link.lin.gamma * corrected, link.sigma_d2};
}

Gaussian1D vmp_message_tau(const VmpInputs& link) {
  return {link.tauhat_j + link.sign * (link.z - link.bias_hat - link.lin.d_hat),
          link.sigma_d2};
}

Gaussian1D vmp_message_bias(const VmpInputs& link) {
  return {link.z - link.lin.d_hat - link.sign * (link.tauhat_i - link.tauhat_j),
          link.sigma_d2};
}

Gaussian1D vmp_bias_belief(const Gaussian1D& f_to_bias, double sigma_d2, double bias_rate) {
  return {f_to_bias.mean - sigma_d2 * bias_rate, sigma_d2};
}

}  // namespace synloc
