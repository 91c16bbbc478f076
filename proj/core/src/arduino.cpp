#include "sortcell/arduino.hpp"

#include <algorithm>
#include <cmath>

namespace sortcell {

std::string_view to_string(LineLevel l) noexcept { return l == LineLevel::Low ? "Low" : "High"; }

ArduinoOutput evaluate(LineLevel input_a, LineLevel input_b) noexcept {
  if (input_a == LineLevel::Low) return {180, Led8{0, 255, 0}};
  if (input_b == LineLevel::Low) return {0, Led8{0, 0, 255}};
  return {90, Led8{255, 0, 0}};
}

ArduinoState step_servo(ArduinoState state, double dt_s, const ArduinoConfig& config) noexcept {
  if (dt_s <= 0.0) return state;
  const double target = state.commanded_angle_deg;
  const double gap = target - state.servo_actual_angle_deg;
  const double reach = config.servo_travel_deg_per_s * dt_s;
  if (std::abs(gap) <= reach) {
    state.servo_actual_angle_deg = target;
  } else {
    state.servo_actual_angle_deg += gap > 0 ? reach : -reach;
  }
  return state;
}

bool servo_settled(const ArduinoState& state) noexcept {
  return std::abs(state.servo_actual_angle_deg - state.commanded_angle_deg) < kServoSettleToleranceDeg;
}

double time_to_settle(const ArduinoState& state, const ArduinoConfig& config) noexcept {
  return std::abs(state.commanded_angle_deg - state.servo_actual_angle_deg) / config.servo_travel_deg_per_s;
}

std::optional<FilterName> filter_at_angle(int angle_deg) noexcept {
  switch (angle_deg) {
    case 90: return FilterName::RedFilter;
    case 180: return FilterName::GreenFilter;
    case 0: return FilterName::BlueFilter;
    default: return std::nullopt;
  }
}

int servo_pulse_us(int angle_deg, const ArduinoConfig& config) noexcept {
  const int a = std::clamp(angle_deg, 0, 180);
  return config.servo_min_us + (config.servo_max_us - config.servo_min_us) * a / 180;
}

ArduinoNode::ArduinoNode(ArduinoConfig config)
    : config_(config), strip_(static_cast<std::size_t>(std::max(config.n_leds, 0))) {
  set_inputs(LineLevel::High, LineLevel::High);
  state_.servo_actual_angle_deg = state_.commanded_angle_deg;
}

bool ArduinoNode::set_inputs(LineLevel a, LineLevel b) {
  state_.input_a = a;
  state_.input_b = b;
  const ArduinoOutput out = evaluate(a, b);
  const bool changed = out.angle_deg != state_.commanded_angle_deg || !(out.led == state_.led_rgb);
  state_.commanded_angle_deg = out.angle_deg;
  state_.led_rgb = out.led;
  std::fill(strip_.begin(), strip_.end(), out.led);
  return changed;
}

FilterPosition ArduinoNode::filter_position(const OpticsParams& optics) const {
  const auto name = filter_at_angle(state_.commanded_angle_deg);
  return {make_filter(name.value_or(FilterName::NoFilter), optics), servo_settled(state_)};
}

}  // namespace sortcell
