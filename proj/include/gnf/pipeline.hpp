#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gnf/analog.hpp"
#include "gnf/csv.hpp"
#include "gnf/filters.hpp"
#include "gnf/image.hpp"

namespace gnf {

// Serial-in parallel-out storage for the nine per-slot similarity bits.
// Cells are written in comparison order and become readable all at once only
// when the last cell is filled.
struct SipoRegister {
  std::array<std::uint8_t, 9> bits{};
  int filled = 0;
};

inline SipoRegister sipo_shift(SipoRegister reg, int bit) {
  if (reg.filled >= 9)
    throw std::overflow_error("sipo_shift: register already holds 9 bits");
  reg.bits[reg.filled] = bit ? 1 : 0;
  ++reg.filled;
  return reg;
}

inline std::array<std::uint8_t, 9> sipo_read(const SipoRegister& reg) {
  if (reg.filled != 9)
    throw std::logic_error("sipo_read: register not full (" +
                           std::to_string(reg.filled) + "/9 bits)");
  return reg.bits;
}

// Switched averaging network: mean of the window values whose gate is closed.
// With every gate open there is no branch to average, which the pipeline
// cannot produce because the center comparison always fires under calibrated
// parameters.
inline double averaging_circuit(const Window3x3& w,
                                const std::array<std::uint8_t, 9>& gates) {
  return masked_mean(w, gates);
}

// Slot order: the center is compared first, then the eight neighbors in
// row-major order. The order is fixed so traces and goldens are stable; any
// fixed order yields the same mask because the register is read in parallel.
inline constexpr std::array<int, 9> comparison_order{4, 0, 1, 2, 3, 5, 6, 7, 8};

// The slot clock's pulse width, used only to render the clk column of traces.
// Latching itself is modeled as ideal and instantaneous at slot boundaries.
inline constexpr double clk_pulse_fraction = 0.025;

struct TraceSample {
  double time_s = 0.0;  // absolute pipeline time
  int slot = 0;         // 1..9
  double v_diff_v = 0.0;
  int vco_out = 0;
  double charge_v = 0.0;
  int neuron_out = 0;
  int clk = 0;
  std::optional<double> avg_out;  // set from the averaging activation onward
};

using TraceSink = std::function<void(const TraceSample&)>;

struct NeuronTrace {
  std::vector<TraceSample> samples;
};

struct SlotOutcome {
  int window_index = 0;       // which window value this slot compared
  double v_diff_v = 0.0;
  double duty = 0.0;
  bool fired = false;
  double fire_time_s = 0.0;      // absolute, valid iff fired
  double decision_time_s = 0.0;  // absolute; fire time, or slot end if silent
  int bit = 0;
};

struct PipelineResult {
  SimilarityMask mask;
  double output = 0.0;
  std::array<SlotOutcome, 9> slots{};
  double activation_time_s = 0.0;  // when avg_out first becomes available
  double duration_s = 0.0;         // nine slots
  NeuronTrace trace;               // empty unless a trace was collected
};

// Runs the nine comparison slots for one window and assembles mask, averaged
// output and timing. The averaging output activates the moment the ninth
// slot's decision is known: at its fire instant, or at the slot's end when it
// stays silent.
inline PipelineResult pipeline_outcome(const Window3x3& w, const AnalogParams& p) {
  validate(p);
  PipelineResult r;
  SipoRegister reg;
  for (int s = 0; s < 9; ++s) {
    const int j = comparison_order[s];
    const double slot_start = s * p.slot_duration;
    const double v_diff = diff_amp(w.values[4], w.values[j], p);
    const double duty = vco_duty(v_diff, p);
    const NeuronState ns = neuron_slot_outcome(duty, p);
    SlotOutcome& out = r.slots[s];
    out.window_index = j;
    out.v_diff_v = v_diff;
    out.duty = duty;
    out.fired = ns.fired;
    out.fire_time_s = ns.fired ? slot_start + *ns.fire_time_s : 0.0;
    out.decision_time_s = ns.fired ? out.fire_time_s : slot_start + p.slot_duration;
    out.bit = normalize_neuron_output(ns);
    reg = sipo_shift(reg, out.bit);
  }
  const std::array<std::uint8_t, 9> cells = sipo_read(reg);
  for (int s = 0; s < 9; ++s) {
    r.mask.bits[comparison_order[s]] = cells[s];
    r.mask.n += cells[s];
  }
  r.output = averaging_circuit(w, r.mask.bits);
  r.activation_time_s = r.slots[8].decision_time_s;
  r.duration_s = 9 * p.slot_duration;
  return r;
}

// As pipeline_outcome, but additionally replays the slots step by step and
// streams one TraceSample per dt to the sink.
inline PipelineResult run_window_pipeline(const Window3x3& w, const AnalogParams& p,
                                          const TraceSink& sink) {
  PipelineResult r = pipeline_outcome(w, p);
  if (!sink) return r;
  for (int s = 0; s < 9; ++s) {
    const SlotOutcome& out = r.slots[s];
    const double slot_start = s * p.slot_duration;
    simulate_neuron_slot(out.duty, p, [&](const SlotSample& ls) {
      TraceSample ts;
      ts.time_s = slot_start + ls.time_s;
      ts.slot = s + 1;
      ts.v_diff_v = out.v_diff_v;
      ts.vco_out = ls.vco_out;
      ts.charge_v = ls.charge_v;
      ts.neuron_out = ls.neuron_out;
      ts.clk = ls.time_s < clk_pulse_fraction * p.slot_duration ? 1 : 0;
      if (ts.time_s >= r.activation_time_s) ts.avg_out = r.output;
      sink(ts);
    });
  }
  return r;
}

inline PipelineResult run_window_pipeline(const Window3x3& w, const AnalogParams& p) {
  NeuronTrace trace;
  trace.samples.reserve(static_cast<std::size_t>(9 * p.slot_duration / p.dt) + 9);
  PipelineResult r = run_window_pipeline(w, p, [&trace](const TraceSample& ts) {
    trace.samples.push_back(ts);
  });
  r.trace = std::move(trace);
  return r;
}

inline constexpr std::string_view trace_csv_header =
    "time_s,slot,v_diff_v,vco_out,charge_v,neuron_out,clk,avg_out";

// Streams trace rows as CSV; keeps every stride-th sample. avg_out renders
// empty while unset.
class TraceCsvWriter {
 public:
  explicit TraceCsvWriter(std::ostream& os, int stride = 1)
      : os_(os), stride_(stride) {
    if (stride < 1) throw std::invalid_argument("trace stride must be >= 1");
    os_ << trace_csv_header << "\n";
  }

  void operator()(const TraceSample& s) {
    if (index_++ % stride_ != 0) return;
    os_ << format_double(s.time_s) << ',' << s.slot << ','
        << format_double(s.v_diff_v) << ',' << s.vco_out << ','
        << format_double(s.charge_v) << ',' << s.neuron_out << ',' << s.clk << ','
        << (s.avg_out ? format_double(*s.avg_out) : std::string{}) << "\n";
  }

 private:
  std::ostream& os_;
  int stride_;
  long long index_ = 0;
};

inline void write_trace_csv(std::ostream& os, const NeuronTrace& trace, int stride = 1) {
  TraceCsvWriter writer(os, stride);
  for (const TraceSample& s : trace.samples) writer(s);
}

}  // namespace gnf
