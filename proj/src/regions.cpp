#include "relaysim/regions.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {
namespace {

double clamp_unit(double p, const char* what) {
  if (!(p > -1e-13 && p < 1.0 + 1e-13))
    throw std::logic_error(std::string("analytic_probabilities: ") + what +
                           " outside [0,1] beyond rounding");
  return std::clamp(p, 0.0, 1.0);
}

// 1 - (1+x) e^{-x}, accurate for small x where the direct form cancels.
double one_minus_1px_expmx(double x) {
  if (std::abs(x) < 1e-3) {
    // series: x^2/2 - x^3/3 + x^4/8 - x^5/30
    return x * x * (0.5 + x * (-1.0 / 3.0 + x * (0.125 - x / 30.0)));
  }
  return 1.0 - (1.0 + x) * std::exp(-x);
}

}  // namespace

void RegionProbabilities::validate() const {
  const double ps[] = {p_r1, p_r2, p_r3, p_r4, p_r5};
  double sum = 0.0;
  for (double p : ps) {
    if (!(p >= -kProbEps && p <= 1.0 + kProbEps) || !std::isfinite(p))
      throw std::invalid_argument("RegionProbabilities: entry outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("RegionProbabilities: does not sum to 1");
}

RegionProbabilities analytic_probabilities(const SystemParams& params) {
  params.validate();
  const Thresholds thr = make_thresholds(params.rate0);
  const double t = thr.gamma_thr;
  const double s = thr.gamma_thr_sum;
  const double a = 1.0 / (params.omega1 * params.gamma);
  const double b = 1.0 / (params.omega2 * params.gamma);
  const double e1t = std::exp(-a * t);  // P(snr1 > t)
  const double e2t = std::exp(-b * t);  // P(snr2 > t)

  RegionProbabilities out;
  out.p_r3 = e1t * (1.0 - e2t);
  out.p_r4 = e2t * (1.0 - e1t);
  out.p_r5 = (1.0 - e1t) * (1.0 - e2t);

  // P{snr1 > t, snr2 > t, snr1 + snr2 <= s}: integrate the snr1 density over
  // (t, s-t) against the conditional snr2 band. The a = b limit removes the
  // 1/(a-b) singularity.
  const double delta = s - 2.0 * t;  // = gamma_thr^2 > 0 for rate0 > 0
  double p2;
  if (std::abs(a - b) < 1e-9 * std::max(a, b)) {
    p2 = std::exp(-2.0 * a * t) * one_minus_1px_expmx(a * delta);
  } else {
    const double term1 = -e1t * e2t * std::expm1(-a * delta);
    const double term2 =
        a / (a - b) * std::exp(-b * s - (a - b) * t) * std::expm1(-(a - b) * delta);
    p2 = term1 + term2;
  }
  out.p_r2 = clamp_unit(p2, "P_R2");
  out.p_r1 = clamp_unit(e1t * e2t - out.p_r2, "P_R1");
  out.p_r3 = clamp_unit(out.p_r3, "P_R3");
  out.p_r4 = clamp_unit(out.p_r4, "P_R4");
  out.p_r5 = clamp_unit(out.p_r5, "P_R5");
  return out;
}

RegionProbabilities empirical_probabilities(const SystemParams& params,
                                            std::uint64_t n_samples, Rng& rng) {
  params.validate();
  if (n_samples == 0)
    throw std::invalid_argument("empirical_probabilities: n_samples must be >= 1");
  const Thresholds thr = make_thresholds(params.rate0);
  std::uint64_t counts[5] = {0, 0, 0, 0, 0};
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const ChannelDraw d = draw_gains(rng, params);
    counts[static_cast<int>(classify_region(d, thr))]++;
  }
  const double n = static_cast<double>(n_samples);
  RegionProbabilities out;
  out.p_r1 = counts[0] / n;
  out.p_r2 = counts[1] / n;
  out.p_r3 = counts[2] / n;
  out.p_r4 = counts[3] / n;
  // residual keeps the five frequencies summing to one exactly
  out.p_r5 = 1.0 - (out.p_r1 + out.p_r2) - (out.p_r3 + out.p_r4);
  return out;
}

HighSnrPmax high_snr_pmax(const SystemParams& params) {
  params.validate();
  const Thresholds thr = make_thresholds(params.rate0);
  const double omega_min = std::min(params.omega1, params.omega2);
  const double omega_max = std::max(params.omega1, params.omega2);
  HighSnrPmax out;
  out.exact = -std::expm1(-thr.gamma_thr / (omega_min * params.gamma)) *
              std::exp(-thr.gamma_thr / (omega_max * params.gamma));
  out.asymptote = thr.gamma_thr / (omega_min * params.gamma);
  return out;
}

}  // namespace relaysim
