#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qkick/pauli.hpp"

namespace qkick {

inline constexpr double kPi = 3.14159265358979323846;
/// Area of one information kick: a quarter turn of a coupled node pair.
inline constexpr double kKickArea = kPi / 4.0;

struct Amplitudes {
  double jx = 0.0;
  double jy = 0.0;
  double b = 0.0;

  double of(Channel c) const;
};

/// Boxcar with one active channel.
struct KickSlot {
  Channel channel;
  double start;
  double duration;
  double amplitude;

  double end() const { return start + duration; }
};

struct IdealKicks {
  std::vector<KickSlot> slots;
};

/// J_x(t) = j_max sin(t + pi/4)^m, B(t) = b_max cos(t + pi/4)^m, J_y = 0.
struct SinPower {
  int m;
  double j_max;
  double b_max;
};

/// Constant J_x = j_const with B boxcars of height b_max on
/// [k period, k period + pulse_width) for k = 1 .. pulse_count. The first
/// period carries J_x alone.
struct SquareDelta {
  double delta;
  double j_const;
  double b_max;
  double pulse_width;
  double period;
  int pulse_count;
};

enum class KickScheme { JxJy, JxB };

std::string_view scheme_name(KickScheme s);
KickScheme parse_scheme(std::string_view name);

/// Time -> (J_x, J_y, B) amplitude map on [0, total_time]. Times are in units
/// of 1/J and amplitudes in units of a reference coupling J (hbar = 1).
class PulseSchedule {
 public:
  using Payload = std::variant<IdealKicks, SinPower, SquareDelta>;

  PulseSchedule(int n_sites, double total_time, Payload payload);

  /// No drive at all; every coefficient stays put.
  static PulseSchedule zero(int n_sites, double total_time);

  int n_sites() const { return n_sites_; }
  double total_time() const { return total_time_; }
  const Payload& payload() const { return payload_; }
  std::string_view variant_name() const;

  Amplitudes at(double t) const;
  /// Exact integral of each channel over [t0, t1].
  Amplitudes integral(double t0, double t1) const;
  /// Channel averages over [t0, t1] (the value at t0 when t1 == t0).
  Amplitudes average(double t0, double t1) const;
  /// Discontinuity times strictly inside (0, total_time), sorted, unique.
  std::vector<double> breakpoints() const;

 private:
  int n_sites_;
  double total_time_;
  Payload payload_;
};

/// Boxcar kick train that moves X_N (and Y_N) to the site-1 end of the
/// operator graph: N kicks for JxJy, 2N-1 kicks for JxB, each of area pi/4.
/// The order comes from walking the operator graph.
PulseSchedule ideal_schedule(int n_sites, KickScheme scheme, double kick_duration = 1.0);

/// Channel sequence in time order used by ideal_schedule.
std::vector<Channel> ideal_kick_sequence(int n_sites, KickScheme scheme);

/// A nonnegative pulse shape on a finite window.
struct PulseShape {
  std::string name;
  std::function<double(double)> value;
  double window_start;
  double window_end;
};

/// sin(t)^m over one hump [0, pi].
PulseShape sin_power_hump(int m);
/// Unit boxcar of the given width.
PulseShape boxcar(double width);

struct Calibration {
  double amplitude;
  double shape_integral;
  double residual;  // amplitude * shape_integral - target_area
};

/// Amplitude a with a * integral(shape) = target_area, by adaptive
/// Gauss-Kronrod quadrature.
Calibration calibrate_amplitude(const PulseShape& shape, double target_area = kKickArea);

/// Sinusoidal drive over [0, 2 N pi] with j_max = b_max
/// calibrated so that each hump has area pi/4.
PulseSchedule sin_power_schedule(int n_sites, int m);

/// Constant J_x with square B pulses of width pi/delta over [0, 2 N pi], one
/// at the start of each 2 pi period after the first (N - 1 pulses). Each B
/// pulse and each full period of J_x carries area pi/4, which smears out the
/// ideal Jx, B, Jx, ..., Jx train.
PulseSchedule square_schedule(int n_sites, double delta);

}  // namespace qkick
