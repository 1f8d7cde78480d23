#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnf/filters.hpp"

namespace gnf {

// Behavioral parameters of the analog comparison chain. Voltages in volts,
// times in seconds, frequencies in hertz. The model is ideal: lossless
// accumulator charging, no leak, exact comparators. Bench constants that do
// not influence the behavioral level (supply rails +/-3 V, Vdd 1 V,
// Vc/Vth 0.6/0.4, C1..C4, R0..R2, transistor geometry, the 2.5% clock pulse
// width) are intentionally not modeled.
struct AnalogParams {
  double v_sine_amp = 3.0;      // sine source amplitude feeding the pulse stage
  double f_sine = 100e3;        // sine frequency; one pulse per period
  double gain = 3.0;            // amplifier volts per unit intensity difference
  double v_ref = 1.12;          // firing threshold of the accumulator
  double charge_rate = 140.0;   // accumulator slope while the pulse is high, V/s
  double clk_freq = 50.0;       // comparison-slot clock
  double slot_duration = 0.02;  // one comparison slot; slot_duration * clk_freq == 1
  double dt = 1e-7;             // simulation step; resolves the sine period 100x

  // Bench defaults with the charge rate set so the firing boundary sits at an
  // intensity difference of 0.3, the operating point used for the hardware.
  static AnalogParams defaults() {
    AnalogParams p;
    const double d_min = std::acos(0.3 * p.gain / p.v_sine_amp) / std::numbers::pi;
    p.charge_rate = p.v_ref / (d_min * p.slot_duration);
    return p;
  }
};

inline void validate(const AnalogParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0))
      throw std::invalid_argument(std::string("AnalogParams: ") + name +
                                  " must be strictly positive");
  };
  positive(p.v_sine_amp, "v_sine_amp");
  positive(p.f_sine, "f_sine");
  positive(p.gain, "gain");
  positive(p.v_ref, "v_ref");
  positive(p.charge_rate, "charge_rate");
  positive(p.clk_freq, "clk_freq");
  positive(p.slot_duration, "slot_duration");
  positive(p.dt, "dt");
  if (p.dt > 1.0 / (20.0 * p.f_sine))
    throw std::invalid_argument("AnalogParams: dt too coarse, need >= 20 steps per sine period");
  if (std::fabs(p.slot_duration * p.clk_freq - 1.0) > 1e-9)
    throw std::invalid_argument("AnalogParams: slot_duration * clk_freq must equal 1");
}

// Rectified difference stage: |center - neighbor| amplified and clamped to the
// sine amplitude rail.
inline double diff_amp(double p_center, double p_neighbor, const AnalogParams& p) {
  return std::clamp(p.gain * std::fabs(p_center - p_neighbor), 0.0, p.v_sine_amp);
}

// Duty cycle of the pulse train: the fraction of a sine period during which a
// sinusoid of amplitude v_sine_amp exceeds the DC level v_diff. Closed form
// arccos(v/A)/pi; 0.5 at zero difference, strictly decreasing, 0 at the rail.
inline double vco_duty(double v_diff, const AnalogParams& p) {
  const double x = std::clamp(v_diff / p.v_sine_amp, 0.0, 1.0);
  return std::acos(x) / std::numbers::pi;
}

// Duty cycle at and above which a slot accumulates to v_ref before it ends.
inline double firing_duty_threshold(const AnalogParams& p) {
  return p.v_ref / (p.charge_rate * p.slot_duration);
}

namespace detail {

// Cumulative pulse-high seconds in [0, t) for a pulse train of the given duty
// whose high interval opens at the start of each period.
inline double high_time_before(double t, double duty, double period) noexcept {
  if (t <= 0.0 || duty <= 0.0) return 0.0;
  const double high = duty * period;
  const double periods = std::floor(t / period);
  // the quotient can round up across a period boundary; keep rem in range
  const double rem = std::max(0.0, t - periods * period);
  return periods * high + std::min(rem, high);
}

// Earliest t with high_time_before(t) >= target; +inf when duty is zero.
inline double first_time_with_high_time(double target, double duty, double period) noexcept {
  if (target <= 0.0) return 0.0;
  const double high = duty * period;
  if (high <= 0.0) return std::numeric_limits<double>::infinity();
  double periods = std::floor(target / high);
  double rem = target - periods * high;
  if (rem == 0.0) {  // lands exactly at the end of a high interval
    periods -= 1.0;
    rem = high;
  }
  return periods * period + rem;
}

inline bool pulse_high_at(double t, double duty, double period) noexcept {
  const double phase = t - std::floor(t / period) * period;
  return phase < duty * period;
}

}  // namespace detail

struct NeuronState {
  double charge_v = 0.0;
  bool fired = false;
  std::optional<double> fire_time_s;  // slot-local, set iff fired
};

struct SlotSample {
  double time_s = 0.0;  // slot-local, strictly increasing in steps of dt
  int vco_out = 0;
  double charge_v = 0.0;
  int neuron_out = 0;
};

using SlotSampleSink = std::function<void(const SlotSample&)>;

// Slot outcome without stepping: the charge trajectory is piecewise linear in
// the cumulative pulse-high time, so the firing instant has a closed form.
// The stepped simulator below reproduces exactly these values sample by
// sample; this is the fast path for bulk window sweeps.
inline NeuronState neuron_slot_outcome(double duty, const AnalogParams& p) {
  if (!(duty >= 0.0 && duty <= 1.0))
    throw std::invalid_argument("neuron_slot_outcome: duty outside [0, 1]");
  const double period = 1.0 / p.f_sine;
  const double high_needed = p.v_ref / p.charge_rate;
  const double t_fire = detail::first_time_with_high_time(high_needed, duty, period);
  NeuronState s;
  if (t_fire <= p.slot_duration) {
    s.fired = true;
    s.fire_time_s = t_fire;
    s.charge_v = p.v_ref;  // held after firing for the remainder of the slot
  } else {
    s.charge_v = p.charge_rate * detail::high_time_before(p.slot_duration, duty, period);
  }
  return s;
}

// Steps one comparison slot from 0 to slot_duration in increments of dt,
// charging at charge_rate during pulse-high intervals. Charging integrates
// the exact pulse overlap of each step rather than sampling the pulse, so
// fire decisions do not depend on dt. One sample per step is delivered to
// the sink; the final sample lands exactly on slot_duration.
inline NeuronState simulate_neuron_slot(double duty, const AnalogParams& p,
                                        const SlotSampleSink& sink) {
  validate(p);
  const NeuronState outcome = neuron_slot_outcome(duty, p);
  if (!sink) return outcome;

  const double period = 1.0 / p.f_sine;
  const long long n_steps = std::max(1LL, static_cast<long long>(
                                              std::llround(p.slot_duration / p.dt)));
  double prev_charge = 0.0;
  for (long long i = 0; i < n_steps; ++i) {
    const double t = (i + 1 == n_steps) ? p.slot_duration : (i + 1) * p.dt;
    const bool post_fire = outcome.fired && t >= *outcome.fire_time_s;
    double charge =
        post_fire ? p.v_ref
                  : std::min(p.charge_rate * detail::high_time_before(t, duty, period),
                             p.v_ref);
    // the closed-form integral can wiggle by an ulp across period boundaries;
    // the physical charge never decreases
    charge = std::max(charge, prev_charge);
    prev_charge = charge;
    SlotSample s;
    s.time_s = t;
    s.vco_out = detail::pulse_high_at(t, duty, period) ? 1 : 0;
    s.charge_v = charge;
    s.neuron_out = post_fire ? 1 : 0;
    sink(s);
  }
  return outcome;
}

struct SlotResult {
  NeuronState state;
  std::vector<SlotSample> samples;
};

inline SlotResult simulate_neuron_slot(double duty, const AnalogParams& p) {
  SlotResult r;
  r.samples.reserve(static_cast<std::size_t>(p.slot_duration / p.dt) + 1);
  r.state = simulate_neuron_slot(duty, p, [&r](const SlotSample& s) {
    r.samples.push_back(s);
  });
  return r;
}

// DC conversion and normalization of the spike train: logic 1 iff the slot's
// neuron fired.
inline int normalize_neuron_output(const NeuronState& s) noexcept {
  return s.fired ? 1 : 0;
}

// Raised when a requested similarity threshold cannot be reached by adjusting
// the charge rate against fixed amplifier gain and sine amplitude.
class CalibrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solves for the charge rate that makes a slot fire exactly for intensity
// differences |d| <= theta. The firing-duty threshold required is
// D = arccos(theta * gain / v_sine_amp) / pi, and charge_rate follows from
// v_ref = charge_rate * D * slot_duration. Differences at or beyond
// v_sine_amp / gain drive the duty to zero and can never fire, so those
// thresholds are infeasible.
inline AnalogParams calibrate(Threshold theta, const AnalogParams& base = AnalogParams::defaults()) {
  validate(base);
  const double max_theta = base.v_sine_amp / base.gain;
  const double t = theta.value();
  if (!(t > 0.0) || t >= max_theta)
    throw CalibrationError(
        "calibrate: threshold " + std::to_string(t) +
        " unreachable with gain " + std::to_string(base.gain) + " and amplitude " +
        std::to_string(base.v_sine_amp) + "; feasible range is (0, " +
        std::to_string(max_theta) + ") exclusive");
  const double d_min = std::acos(t * base.gain / base.v_sine_amp) / std::numbers::pi;
  AnalogParams p = base;
  p.charge_rate = p.v_ref / (d_min * p.slot_duration);
  return p;
}

}  // namespace gnf
