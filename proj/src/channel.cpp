#include "relaysim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaysim {

void SystemParams::validate() const {
  const bool ok = std::isfinite(omega1) && omega1 > 0.0 && std::isfinite(omega2) &&
                  omega2 > 0.0 && std::isfinite(gamma) && gamma > 0.0 &&
                  std::isfinite(rate0) && rate0 > 0.0;
  if (!ok) throw std::invalid_argument("SystemParams: all fields must be finite and > 0");
}

Thresholds make_thresholds(double rate0) {
  if (!std::isfinite(rate0) || rate0 <= 0.0)
    throw std::invalid_argument("make_thresholds: rate0 must be finite and > 0");
  return Thresholds{std::exp2(rate0) - 1.0, std::exp2(2.0 * rate0) - 1.0};
}

ModeRoles mode_roles(Mode mode) {
  using R = NodeRole;
  switch (mode) {
    case Mode::M1: return {R::Transmit, R::Silent, R::Receive};
    case Mode::M2: return {R::Silent, R::Transmit, R::Receive};
    case Mode::M3: return {R::Transmit, R::Transmit, R::Receive};
    case Mode::M4: return {R::Receive, R::Silent, R::Transmit};
    case Mode::M5: return {R::Silent, R::Receive, R::Transmit};
    case Mode::M6: return {R::Receive, R::Receive, R::Transmit};
    case Mode::M7: return {R::Silent, R::Silent, R::Silent};
  }
  return {R::Silent, R::Silent, R::Silent};
}

double gain_from_uniform(double u, double omega) {
  // -log1p(-u) is -ln(1-u) without cancellation near u = 0
  return -omega * std::log1p(-u);
}

ChannelDraw draw_gains(Rng& rng, const SystemParams& params) {
  const double g1 = gain_from_uniform(rng.uniform(), params.omega1);
  const double g2 = gain_from_uniform(rng.uniform(), params.omega2);
  return ChannelDraw{params.gamma * g1, params.gamma * g2};
}

const char* to_string(SnrRegion region) {
  switch (region) {
    case SnrRegion::R1: return "R1";
    case SnrRegion::R2: return "R2";
    case SnrRegion::R3: return "R3";
    case SnrRegion::R4: return "R4";
    case SnrRegion::R5: return "R5";
  }
  return "?";
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::M1: return "M1";
    case Mode::M2: return "M2";
    case Mode::M3: return "M3";
    case Mode::M4: return "M4";
    case Mode::M5: return "M5";
    case Mode::M6: return "M6";
    case Mode::M7: return "M7";
  }
  return "?";
}

}  // namespace relaysim
