#include "qkick/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qkick/error.hpp"
#include "qkick/graph.hpp"

namespace qkick {

double Amplitudes::of(Channel c) const {
  switch (c) {
    case Channel::Jx: return jx;
    case Channel::Jy: return jy;
    case Channel::B: return b;
  }
  return 0.0;
}

std::string_view scheme_name(KickScheme s) { return s == KickScheme::JxJy ? "JxJy" : "JxB"; }

KickScheme parse_scheme(std::string_view name) {
  if (name == "JxJy" || name == "jxjy") return KickScheme::JxJy;
  if (name == "JxB" || name == "jxb") return KickScheme::JxB;
  throw std::invalid_argument("unknown kick scheme '" + std::string(name) + "'");
}

namespace {

void add_channel(Amplitudes& a, Channel c, double v) {
  switch (c) {
    case Channel::Jx: a.jx += v; break;
    case Channel::Jy: a.jy += v; break;
    case Channel::B: a.b += v; break;
  }
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Integral of sin(u)^m from 0 to u for even m >= 0, by the reduction
// S_m = -sin^{m-1} cos / m + (m-1)/m S_{m-2}, S_0 = u.
double sin_power_antiderivative(int m, double u) {
  if (m == 0) return u;
  const double s = std::sin(u);
  return -std::pow(s, m - 1) * std::cos(u) / m +
         static_cast<double>(m - 1) / m * sin_power_antiderivative(m - 2, u);
}

// Integral of sin(u)^m over [u0, u1] for even m. sin^m has period pi, so the
// interval is shifted next to the origin first to keep the linear term small.
double sin_power_integral(int m, double u0, double u1) {
  const double shift = std::floor(u0 / kPi) * kPi;
  return sin_power_antiderivative(m, u1 - shift) - sin_power_antiderivative(m, u0 - shift);
}

void validate(const IdealKicks& k) {
  for (std::size_t i = 0; i < k.slots.size(); ++i) {
    const auto& s = k.slots[i];
    require(std::isfinite(s.start) && std::isfinite(s.duration) && std::isfinite(s.amplitude),
            "kick slot has non-finite fields");
    require(s.duration > 0.0, "kick slot duration must be positive");
    require(s.amplitude >= 0.0, "kick slot amplitude must be nonnegative");
    // Back-to-back slots built as i * duration may overlap by rounding.
    const double slack = 1e-12 * std::max(1.0, std::abs(s.start));
    if (i > 0)
      require(k.slots[i - 1].end() <= s.start + slack, "kick slots must be sorted and disjoint");
  }
}

void validate(const SinPower& s) {
  if (s.m < 2 || s.m % 2 != 0)
    throw std::invalid_argument("sin^m pulses need an even m >= 2");
  require(std::isfinite(s.j_max) && std::isfinite(s.b_max) && s.j_max >= 0.0 && s.b_max >= 0.0,
          "sin^m amplitudes must be finite and nonnegative");
}

void validate(const SquareDelta& s) {
  if (!(s.delta > 1.0)) throw std::invalid_argument("square pulses need delta > 1");
  require(s.period > 0.0 && s.pulse_width > 0.0 && s.pulse_width <= s.period / 2.0,
          "square pulse width must lie in (0, period/2]");
  require(std::isfinite(s.j_const) && std::isfinite(s.b_max) && s.j_const >= 0.0 &&
              s.b_max >= 0.0,
          "square pulse amplitudes must be finite and nonnegative");
  require(s.pulse_count >= 0, "square pulse count must be nonnegative");
}

}  // namespace

PulseSchedule::PulseSchedule(int n_sites, double total_time, Payload payload)
    : n_sites_(n_sites), total_time_(total_time), payload_(std::move(payload)) {
  if (n_sites_ < 2) throw std::invalid_argument("a chain needs N >= 2");
  require(std::isfinite(total_time_) && total_time_ > 0.0, "total_time must be positive");
  std::visit([](const auto& p) { validate(p); }, payload_);
}

PulseSchedule PulseSchedule::zero(int n_sites, double total_time) {
  return PulseSchedule(n_sites, total_time, IdealKicks{});
}

std::string_view PulseSchedule::variant_name() const {
  switch (payload_.index()) {
    case 0: return "ideal_kicks";
    case 1: return "sin_power";
    case 2: return "square_delta";
  }
  return "?";
}

Amplitudes PulseSchedule::at(double t) const {
  Amplitudes a;
  if (const auto* k = std::get_if<IdealKicks>(&payload_)) {
    for (const auto& s : k->slots)
      if (t >= s.start && t < s.end()) add_channel(a, s.channel, s.amplitude);
  } else if (const auto* s = std::get_if<SinPower>(&payload_)) {
    a.jx = s->j_max * std::pow(std::sin(t + kPi / 4.0), s->m);
    a.b = s->b_max * std::pow(std::cos(t + kPi / 4.0), s->m);
  } else {
    const auto& q = std::get<SquareDelta>(payload_);
    a.jx = q.j_const;
    const double k = std::floor(t / q.period);
    if (k >= 1 && k <= q.pulse_count && t - k * q.period < q.pulse_width) a.b = q.b_max;
  }
  return a;
}

Amplitudes PulseSchedule::integral(double t0, double t1) const {
  Amplitudes a;
  if (t1 <= t0) return a;
  if (const auto* k = std::get_if<IdealKicks>(&payload_)) {
    for (const auto& s : k->slots)
      add_channel(a, s.channel, s.amplitude * overlap(t0, t1, s.start, s.end()));
  } else if (const auto* s = std::get_if<SinPower>(&payload_)) {
    // cos(x)^m = sin(x + pi/2)^m
    a.jx = s->j_max * sin_power_integral(s->m, t0 + kPi / 4.0, t1 + kPi / 4.0);
    a.b = s->b_max * sin_power_integral(s->m, t0 + 3.0 * kPi / 4.0, t1 + 3.0 * kPi / 4.0);
  } else {
    const auto& q = std::get<SquareDelta>(payload_);
    a.jx = q.j_const * (t1 - t0);
    const int first = std::max(1, static_cast<int>(std::floor(t0 / q.period)));
    const int last = std::min(q.pulse_count, static_cast<int>(std::floor(t1 / q.period)));
    for (int k = first; k <= last; ++k) {
      const double start = k * q.period;
      a.b += q.b_max * overlap(t0, t1, start, start + q.pulse_width);
    }
  }
  return a;
}

Amplitudes PulseSchedule::average(double t0, double t1) const {
  if (!(t1 > t0)) return at(t0);
  Amplitudes a = integral(t0, t1);
  const double inv = 1.0 / (t1 - t0);
  a.jx *= inv;
  a.jy *= inv;
  a.b *= inv;
  return a;
}

std::vector<double> PulseSchedule::breakpoints() const {
  std::vector<double> out;
  auto push = [&](double t) {
    if (t > 0.0 && t < total_time_) out.push_back(t);
  };
  if (const auto* k = std::get_if<IdealKicks>(&payload_)) {
    for (const auto& s : k->slots) {
      push(s.start);
      push(s.end());
    }
  } else if (const auto* q = std::get_if<SquareDelta>(&payload_)) {
    for (int k = 1; k <= q->pulse_count; ++k) {
      push(k * q->period);
      push(k * q->period + q->pulse_width);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Quarter-kick action on node positions: a kick in `c` moves a node to its
// partner across the c-edge and leaves isolated nodes in place.
int kick_node(const OperatorGraph& g, int node, Channel c) {
  const auto n = g.neighbor(node, c);
  return n ? n->node : node;
}

std::optional<std::vector<Channel>> walk_path(const OperatorGraph& g, int from, int to,
                                              const std::vector<Channel>& allowed) {
  std::map<int, std::pair<int, Channel>> parent;
  std::deque<int> queue{from};
  parent.emplace(from, std::pair{0, Channel::B});
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (Channel c : allowed) {
      const auto n = g.neighbor(v, c);
      if (n && parent.emplace(n->node, std::pair{v, c}).second) queue.push_back(n->node);
    }
  }
  if (!parent.contains(to)) return std::nullopt;
  std::vector<Channel> path;
  for (int v = to; v != from; v = parent.at(v).first) path.push_back(parent.at(v).second);
  std::reverse(path.begin(), path.end());
  return path;
}

bool on_site_one(const OperatorGraph& g, int node) { return g.node(node).first_active_site() == 1; }

}  // namespace

std::vector<Channel> ideal_kick_sequence(int n_sites, KickScheme scheme) {
  if (n_sites < 2) throw std::invalid_argument("a chain needs N >= 2");
  const OperatorGraph g = build_graph(n_sites);
  const Channel second = scheme == KickScheme::JxJy ? Channel::Jy : Channel::B;
  const std::vector<Channel> allowed{Channel::Jx, second};
  const std::size_t kicks =
      scheme == KickScheme::JxJy ? static_cast<std::size_t>(n_sites)
                                 : static_cast<std::size_t>(2 * n_sites - 1);
  const int x_seed = 1;
  const int y_seed = n_sites + 1;
  auto other = [&](Channel c) { return c == Channel::Jx ? second : Channel::Jx; };

  // The Heisenberg operator sees the last kick first, so a graph walk from
  // X_N lists the kicks in reverse time order.
  const PauliString x_end = [&] {
    PauliString p = PauliString::single(n_sites, 1, Pauli::X);
    for (int s = 2; s <= n_sites; ++s) p.set(s, Pauli::Z);
    return p;
  }();
  PauliString y_end = x_end;
  y_end.set(1, Pauli::Y);

  std::vector<std::vector<Channel>> accepted;
  for (const PauliString& target : {x_end, y_end}) {
    const auto target_index = g.index_of(target);
    if (!target_index) continue;
    const auto path = walk_path(g, x_seed, *target_index, allowed);
    if (!path || path->empty()) continue;

    std::vector<std::vector<Channel>> walks;
    if (path->size() == kicks) {
      walks.push_back(*path);
    } else if (path->size() + 1 == kicks) {
      auto front = *path;
      front.insert(front.begin(), other(path->front()));
      walks.push_back(front);
      auto back = *path;
      back.push_back(other(path->back()));
      walks.push_back(back);
    }
    for (const auto& walk : walks) {
      int x = x_seed;
      int y = y_seed;
      for (Channel c : walk) {
        x = kick_node(g, x, c);
        y = kick_node(g, y, c);
      }
      if (x == *target_index && on_site_one(g, y))
        accepted.emplace_back(walk.rbegin(), walk.rend());
    }
  }
  require(!accepted.empty(), "no ideal kick sequence found for this chain");
  // Prefer trains that open with a J_x kick.
  const auto jx_first = std::find_if(accepted.begin(), accepted.end(), [](const auto& s) {
    return s.front() == Channel::Jx;
  });
  return jx_first != accepted.end() ? *jx_first : accepted.front();
}

PulseSchedule ideal_schedule(int n_sites, KickScheme scheme, double kick_duration) {
  if (!(kick_duration > 0.0) || !std::isfinite(kick_duration))
    throw std::invalid_argument("kick duration must be positive");
  const auto sequence = ideal_kick_sequence(n_sites, scheme);
  IdealKicks kicks;
  const double amplitude = kKickArea / kick_duration;
  for (std::size_t i = 0; i < sequence.size(); ++i)
    kicks.slots.push_back({sequence[i], static_cast<double>(i) * kick_duration, kick_duration,
                           amplitude});
  return PulseSchedule(n_sites, static_cast<double>(sequence.size()) * kick_duration,
                       std::move(kicks));
}

PulseShape sin_power_hump(int m) {
  if (m < 1) throw std::invalid_argument("sin^m hump needs m >= 1");
  return {"sin^" + std::to_string(m), [m](double t) { return std::pow(std::sin(t), m); }, 0.0,
          kPi};
}

PulseShape boxcar(double width) {
  if (!(width > 0.0)) throw std::invalid_argument("boxcar width must be positive");
  return {"boxcar", [](double) { return 1.0; }, 0.0, width};
}

Calibration calibrate_amplitude(const PulseShape& shape, double target_area) {
  if (!(target_area > 0.0)) throw std::invalid_argument("target area must be positive");
  require(shape.window_end > shape.window_start, "pulse window is empty");
  double error = 0.0;
  const double area = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      shape.value, shape.window_start, shape.window_end, 20, 1e-15, &error);
  require(std::isfinite(area) && area > 0.0, "pulse shape has zero integral");
  const double amplitude = target_area / area;
  return {amplitude, area, amplitude * area - target_area};
}

PulseSchedule sin_power_schedule(int n_sites, int m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("sin^m pulses need an even m >= 2");
  const double amplitude = calibrate_amplitude(sin_power_hump(m)).amplitude;
  return PulseSchedule(n_sites, 2.0 * n_sites * kPi, SinPower{m, amplitude, amplitude});
}

PulseSchedule square_schedule(int n_sites, double delta) {
  if (!(delta > 1.0)) throw std::invalid_argument("square pulses need delta > 1");
  const double period = 2.0 * kPi;
  const double width = (period / 2.0) / delta;
  SquareDelta q{delta, kKickArea / period, kKickArea / width, width, period, n_sites - 1};
  return PulseSchedule(n_sites, n_sites * period, q);
}

}  // namespace qkick
