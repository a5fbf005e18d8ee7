#pragma once

#include <algorithm>
#include <cmath>

#include "relaysim/engine.hpp"

namespace relaysim::detail {

// Rate/outage accounting over a simulation window, with batch means for the
// standard error of r_sum. Shared by the policy engine and the benchmark
// simulator.
struct Accumulator {
  std::uint64_t stored1 = 0, stored2 = 0, del12 = 0, del21 = 0, starved = 0;
  std::uint64_t slots = 0;
  std::int64_t max_queue = 0;

  std::uint64_t batch_len;
  std::uint64_t batch_fill = 0, batch_delivered = 0;
  double batch_sum = 0.0, batch_sum_sq = 0.0;
  std::uint64_t batches = 0;

  explicit Accumulator(std::uint64_t window)
      : batch_len(std::max<std::uint64_t>(1, window / 32)) {}

  void add(const SlotRecord& rec, const RelayBuffers& buffers) {
    ++slots;
    stored1 += rec.stored_1;
    stored2 += rec.stored_2;
    del12 += rec.delivered_12;
    del21 += rec.delivered_21;
    starved += rec.starved;
    max_queue = std::max({max_queue, buffers.q1, buffers.q2});
    batch_delivered += rec.delivered_12 + rec.delivered_21;
    if (++batch_fill == batch_len) {
      const double m = static_cast<double>(batch_delivered) / batch_len;
      batch_sum += m;
      batch_sum_sq += m * m;
      ++batches;
      batch_fill = 0;
      batch_delivered = 0;
    }
  }

  ThroughputReport report(double rate0, const RelayBuffers& final_buffers) const {
    ThroughputReport r;
    const double n = static_cast<double>(std::max<std::uint64_t>(1, slots));
    r.n_slots = slots;
    r.r_1r = stored1 * rate0 / n;
    r.r_2r = stored2 * rate0 / n;
    r.r_r1 = del21 * rate0 / n;
    r.r_r2 = del12 * rate0 / n;
    r.r_12 = r.r_r2;
    r.r_21 = r.r_r1;
    r.r_sum = r.r_12 + r.r_21;
    r.f_12 = 1.0 - r.r_12 / (rate0 / 2.0);
    r.f_21 = 1.0 - r.r_21 / (rate0 / 2.0);
    r.f_sys = 0.5 * (r.f_12 + r.f_21);
    r.starvation_rate = starved / n;
    r.final_buffers = final_buffers;
    r.max_queue = max_queue;
    if (batches >= 2) {
      const double mean = batch_sum / batches;
      const double var =
          std::max(0.0, batch_sum_sq / batches - mean * mean) * batches /
          (batches - 1.0);
      r.r_sum_stderr = rate0 * std::sqrt(var / batches);
    }
    return r;
  }
};

}  // namespace relaysim::detail
