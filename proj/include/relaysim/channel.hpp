#pragma once

#include <cstdint>

#include "relaysim/rng.hpp"

namespace relaysim {

/// Shared absolute tolerance for probability comparisons (branch selection,
/// die validation). Branch boundaries coincide at exact equalities, so every
/// comparison in the library goes through the same epsilon.
inline constexpr double kProbEps = 1e-12;

/// Fixed system configuration: mean fading gains, transmit SNR (linear) and
/// the common transmission rate. SNR is the single knob; power and noise
/// variance are never represented separately.
struct SystemParams {
  double omega1 = 1.0;  ///< mean fading gain of the user1-relay link
  double omega2 = 1.0;  ///< mean fading gain of the user2-relay link
  double gamma = 1.0;   ///< transmit SNR, linear scale
  double rate0 = 1.0;   ///< fixed rate, bits/symbol

  void validate() const;  ///< throws std::invalid_argument unless all > 0 and finite
};

/// SNR decision thresholds derived from the fixed rate.
struct Thresholds {
  double gamma_thr = 0.0;      ///< 2^rate0 - 1
  double gamma_thr_sum = 0.0;  ///< 2^(2*rate0) - 1
};

/// Thresholds for rate0 > 0; rejects non-positive or non-finite rates.
Thresholds make_thresholds(double rate0);

/// One slot's instantaneous link SNRs.
struct ChannelDraw {
  double snr1 = 0.0;
  double snr2 = 0.0;
};

/// The five decodability regions partitioning the (snr1, snr2) quadrant.
enum class SnrRegion : std::uint8_t { R1, R2, R3, R4, R5 };

/// The seven transmission modes. M1/M2: one user to relay; M3: both users to
/// relay; M4/M5: relay to user 1 / user 2; M6: relay broadcast; M7: silent.
enum class Mode : std::uint8_t { M1, M2, M3, M4, M5, M6, M7 };

enum class NodeRole : std::uint8_t { Transmit, Receive, Silent };

struct ModeRoles {
  NodeRole user1, user2, relay;
};

/// Role triple of each mode (half-duplex by construction).
ModeRoles mode_roles(Mode mode);

/// Inverse CDF of the exponential fading gain: u in [0,1) -> gain with mean
/// omega.
double gain_from_uniform(double u, double omega);

/// Draws one slot of block-Rayleigh link SNRs: exponential gains via inverse
/// CDF, one uniform per link, consumed in the fixed order (link 1, link 2).
ChannelDraw draw_gains(Rng& rng, const SystemParams& params);

/// Classifies a draw into its region. Success comparisons are strict, so a
/// draw exactly at a threshold counts as failure (measure zero under
/// continuous fading).
inline SnrRegion classify_region(const ChannelDraw& d, const Thresholds& t) {
  const bool up1 = d.snr1 > t.gamma_thr;
  const bool up2 = d.snr2 > t.gamma_thr;
  if (up1 && up2) {
    return (d.snr1 + d.snr2 > t.gamma_thr_sum) ? SnrRegion::R1 : SnrRegion::R2;
  }
  if (up1) return SnrRegion::R3;
  if (up2) return SnrRegion::R4;
  return SnrRegion::R5;
}

/// Channel-only decodability flag O_k (buffer state ignored).
inline bool decodable(Mode mode, const ChannelDraw& d, const Thresholds& t) {
  const bool up1 = d.snr1 > t.gamma_thr;
  const bool up2 = d.snr2 > t.gamma_thr;
  switch (mode) {
    case Mode::M1:
    case Mode::M4:
      return up1;
    case Mode::M2:
    case Mode::M5:
      return up2;
    case Mode::M3:
      return up1 && up2 && d.snr1 + d.snr2 > t.gamma_thr_sum;
    case Mode::M6:
      return up1 && up2;
    case Mode::M7:
      return true;
  }
  return false;
}

const char* to_string(SnrRegion region);
const char* to_string(Mode mode);

}  // namespace relaysim
