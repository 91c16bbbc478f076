#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sortcell/optics.hpp"

namespace sortcell {

enum class LineLevel { Low, High };

std::string_view to_string(LineLevel l) noexcept;

/// Pin map and constants of the filter-wheel/LED sketch.
struct ArduinoConfig {
  int n_leds = 241;
  int led_pin = 6;
  int servo_pin = 9;
  int servo_min_us = 500;
  int servo_max_us = 2500;
  int input1_pin = 2;
  int input2_pin = 3;
  double servo_travel_deg_per_s = 300.0;

  friend bool operator==(const ArduinoConfig&, const ArduinoConfig&) = default;
};

struct ArduinoOutput {
  int angle_deg = 90;
  Led8 led{255, 0, 0};

  friend bool operator==(const ArduinoOutput&, const ArduinoOutput&) = default;
};

/// One pass of the sketch's loop(): input A is tested first, so (Low, Low)
/// resolves to green.
ArduinoOutput evaluate(LineLevel input_a, LineLevel input_b) noexcept;

struct ArduinoState {
  // Pull-ups: a disconnected line reads High.
  LineLevel input_a = LineLevel::High;
  LineLevel input_b = LineLevel::High;
  int commanded_angle_deg = 90;
  Led8 led_rgb{255, 0, 0};
  double servo_actual_angle_deg = 90.0;

  friend bool operator==(const ArduinoState&, const ArduinoState&) = default;
};

/// Wheel counts as settled within this many degrees of the command.
inline constexpr double kServoSettleToleranceDeg = 1.0;

/// Moves the servo toward its command at the configured angular speed.
ArduinoState step_servo(ArduinoState state, double dt_s, const ArduinoConfig& config) noexcept;

bool servo_settled(const ArduinoState& state) noexcept;

/// Seconds until the servo reaches its command from the current state.
double time_to_settle(const ArduinoState& state, const ArduinoConfig& config) noexcept;

/// Filter placed in front of the lens at a wheel angle: 90 red, 180 green,
/// 0 blue. Other angles have no filter aligned.
std::optional<FilterName> filter_at_angle(int angle_deg) noexcept;

/// Servo.write() mapping of an angle in [0,180] to a pulse width.
int servo_pulse_us(int angle_deg, const ArduinoConfig& config) noexcept;

/// Sketch instance: inputs applied, loop() run, outputs latched.
class ArduinoNode {
 public:
  explicit ArduinoNode(ArduinoConfig config = {});

  /// Applies new line levels and runs loop(). Returns true if the commanded
  /// angle or LED color changed.
  bool set_inputs(LineLevel a, LineLevel b);
  void advance(double dt_s) { state_ = step_servo(state_, dt_s, config_); }

  const ArduinoState& state() const noexcept { return state_; }
  const ArduinoConfig& config() const noexcept { return config_; }
  /// All pixels of the strip; the loop writes the same color to each.
  const std::vector<Led8>& strip() const noexcept { return strip_; }

  /// Filter and settle flag as seen by the camera.
  FilterPosition filter_position(const OpticsParams& optics) const;

 private:
  ArduinoConfig config_;
  ArduinoState state_;
  std::vector<Led8> strip_;
};

}  // namespace sortcell
