#include "relaysim/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "accumulator.hpp"

namespace relaysim {

SlotRecord step(RelayBuffers& buffers, const ChannelDraw& draw, Mode mode,
                const Thresholds& thr) {
  SlotRecord rec;
  rec.mode = mode;
  rec.region = classify_region(draw, thr);
  const bool channel_ok = decodable(mode, draw, thr);
  switch (mode) {
    case Mode::M1:
      if (channel_ok) {
        buffers.q1 += 1;
        rec.stored_1 = true;
      }
      break;
    case Mode::M2:
      if (channel_ok) {
        buffers.q2 += 1;
        rec.stored_2 = true;
      }
      break;
    case Mode::M3:
      if (channel_ok) {
        buffers.q1 += 1;
        buffers.q2 += 1;
        rec.stored_1 = rec.stored_2 = true;
      }
      break;
    case Mode::M4:
      if (channel_ok) {
        if (buffers.q2 >= 1) {
          buffers.q2 -= 1;
          rec.delivered_21 = true;
        } else {
          rec.starved = true;
        }
      }
      break;
    case Mode::M5:
      if (channel_ok) {
        if (buffers.q1 >= 1) {
          buffers.q1 -= 1;
          rec.delivered_12 = true;
        } else {
          rec.starved = true;
        }
      }
      break;
    case Mode::M6:
      if (channel_ok) {
        if (buffers.q1 >= 1 && buffers.q2 >= 1) {
          buffers.q1 -= 1;
          buffers.q2 -= 1;
          rec.delivered_12 = rec.delivered_21 = true;
        } else {
          rec.starved = true;
        }
      }
      break;
    case Mode::M7:
      break;
  }
  return rec;
}

ThroughputReport run(const SystemParams& params, const RunConfig& config) {
  params.validate();
  if (config.n_slots == 0) throw std::invalid_argument("run: n_slots must be >= 1");
  if (config.warmup >= config.n_slots)
    throw std::invalid_argument("run: warmup must be < n_slots");
  if (config.fairness && !(*config.fairness >= 0.0 && *config.fairness <= 1.0))
    throw std::invalid_argument("run: fairness must be in [0,1]");

  const Thresholds thr = make_thresholds(params.rate0);
  const RegionProbabilities probs = analytic_probabilities(params);
  const DiceTable dice = config.fairness ? build_dice(probs, *config.fairness)
                                         : build_dice_max_r12(probs);

  Rng rng = Rng::stream(config.seed, config.stream_index);
  RelayBuffers buffers;
  detail::Accumulator acc(config.n_slots - config.warmup);
  for (std::uint64_t i = 0; i < config.n_slots; ++i) {
    const ChannelDraw draw = draw_gains(rng, params);
    const SnrRegion region = classify_region(draw, thr);
    const Mode mode = select_mode(region, dice, rng);
    SlotRecord rec = step(buffers, draw, mode, thr);
    rec.index = i;
    if (i >= config.warmup) acc.add(rec, buffers);
    if (config.slot_sink) config.slot_sink(rec, draw, buffers);
  }
  return acc.report(params.rate0, buffers);
}

ThroughputReport run_policy_on_trace(std::span<const ChannelDraw> trace,
                                     const SystemParams& params,
                                     const DiceTable& dice, std::uint64_t die_seed,
                                     std::uint64_t warmup) {
  params.validate();
  const Thresholds thr = make_thresholds(params.rate0);
  Rng rng = Rng::stream(die_seed, 1);
  RelayBuffers buffers;
  detail::Accumulator acc(trace.size() - std::min<std::uint64_t>(warmup, trace.size()));
  for (std::uint64_t i = 0; i < trace.size(); ++i) {
    const SnrRegion region = classify_region(trace[i], thr);
    const Mode mode = select_mode(region, dice, rng);
    SlotRecord rec = step(buffers, trace[i], mode, thr);
    rec.index = i;
    if (i >= warmup) acc.add(rec, buffers);
  }
  return acc.report(params.rate0, buffers);
}

std::vector<ChannelDraw> make_trace(const SystemParams& params, std::uint64_t n,
                                    std::uint64_t seed) {
  params.validate();
  Rng rng = Rng::stream(seed, 0);
  std::vector<ChannelDraw> trace;
  trace.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) trace.push_back(draw_gains(rng, params));
  return trace;
}

}  // namespace relaysim
