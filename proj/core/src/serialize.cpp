#include "qkick/serialize.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qkick/error.hpp"

namespace qkick {

using nlohmann::json;

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  require(ec == std::errc{}, "to_chars failed");
  return std::string(buf.data(), end);
}

json graph_to_json(const OperatorGraph& g) {
  json channels = json::array();
  for (Channel c : g.channels()) channels.push_back(channel_name(c));
  json nodes = json::array();
  for (int i = 1; i <= g.node_count(); ++i) {
    json edges = json::array();
    for (const auto& e : g.edges()) {
      if (e.from == i)
        edges.push_back({{"to", e.to}, {"channel", channel_name(e.channel)}, {"sign", e.sign}});
      else if (e.to == i)
        edges.push_back({{"to", e.from}, {"channel", channel_name(e.channel)}, {"sign", -e.sign}});
    }
    nodes.push_back({{"index", i}, {"string", g.node(i).str()}, {"edges", std::move(edges)}});
  }
  return {{"n_sites", g.n_sites()}, {"channels", std::move(channels)}, {"nodes", std::move(nodes)}};
}

json schedule_to_json(const PulseSchedule& s) {
  json j = {{"variant", s.variant_name()}, {"n_sites", s.n_sites()},
            {"total_time", s.total_time()}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IdealKicks>) {
          json slots = json::array();
          for (const auto& k : p.slots)
            slots.push_back({{"channel", channel_name(k.channel)},
                             {"start", k.start},
                             {"duration", k.duration},
                             {"amplitude", k.amplitude}});
          j["slots"] = std::move(slots);
        } else if constexpr (std::is_same_v<T, SinPower>) {
          j["m"] = p.m;
          j["j_max"] = p.j_max;
          j["b_max"] = p.b_max;
        } else {
          j["delta"] = p.delta;
          j["j_const"] = p.j_const;
          j["b_max"] = p.b_max;
          j["pulse_width"] = p.pulse_width;
          j["period"] = p.period;
          j["pulse_count"] = p.pulse_count;
        }
      },
      s.payload());
  return j;
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for '") + key + "'");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

int integer_field(const json& j, const char* key) {
  const double v = field<double>(j, key);
  if (v != std::floor(v)) throw std::invalid_argument(std::string("'") + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

PulseSchedule schedule_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("schedule must be a JSON object");
  const auto variant = field<std::string>(j, "variant");
  const int n = integer_field(j, "n_sites");

  if (variant == "ideal_kicks") {
    if (!j.contains("slots")) {
      return ideal_schedule(n, parse_scheme(field_or<std::string>(j, "scheme", "JxB")),
                            field_or<double>(j, "kick_duration", 1.0));
    }
    IdealKicks kicks;
    for (const auto& slot : j.at("slots")) {
      kicks.slots.push_back(KickSlot{parse_channel(field<std::string>(slot, "channel")),
                                     field<double>(slot, "start"),
                                     field<double>(slot, "duration"),
                                     field<double>(slot, "amplitude")});
    }
    double end = 0.0;
    for (const auto& k : kicks.slots) end = std::max(end, k.end());
    return PulseSchedule(n, field_or<double>(j, "total_time", end), std::move(kicks));
  }
  if (variant == "sin_power") {
    const int m = integer_field(j, "m");
    const PulseSchedule base = sin_power_schedule(n, m);
    const auto& p = std::get<SinPower>(base.payload());
    return PulseSchedule(n, field_or<double>(j, "total_time", base.total_time()),
                         SinPower{m, field_or<double>(j, "j_max", p.j_max),
                                  field_or<double>(j, "b_max", p.b_max)});
  }
  if (variant == "square_delta") {
    const double delta = field<double>(j, "delta");
    const PulseSchedule base = square_schedule(n, delta);
    const auto& p = std::get<SquareDelta>(base.payload());
    SquareDelta q{delta,
                  field_or<double>(j, "j_const", p.j_const),
                  field_or<double>(j, "b_max", p.b_max),
                  field_or<double>(j, "pulse_width", p.pulse_width),
                  field_or<double>(j, "period", p.period),
                  j.contains("pulse_count") ? integer_field(j, "pulse_count") : p.pulse_count};
    return PulseSchedule(n, field_or<double>(j, "total_time", base.total_time()), q);
  }
  if (variant == "zero") return PulseSchedule::zero(n, field<double>(j, "total_time"));
  throw std::invalid_argument("unknown schedule variant '" + variant + "'");
}

std::string flux_csv(const FluxResult& r, const json& metadata) {
  std::string out;
  if (metadata.is_object()) {
    for (const auto& [key, value] : metadata.items())
      out += "# " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) +
             "\n";
  }
  out += "t";
  for (int j = 1; j <= r.dimension(); ++j) out += ",alpha_" + std::to_string(j);
  out += ",norm\n";
  for (std::size_t k = 0; k < r.size(); ++k) {
    out += format_double(r.times[k]);
    for (int j = 1; j <= r.dimension(); ++j) out += "," + format_double(r.alpha(k, j));
    out += "," + format_double(r.norm(k)) + "\n";
  }
  return out;
}

json transfer_summary_json(const TransferSummary& t) {
  return {{"max_alpha_N", t.peak.value},
          {"t_star", t.peak.time},
          {"fidelity", t.fidelity_max},
          {"fidelity_at_tau", t.fidelity_at_tau},
          {"alpha_N_at_tau", t.alpha_at_tau},
          {"n_steps", t.n_steps}};
}

json state_to_json(const StateVector& psi, double threshold) {
  json out = json::array();
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (std::abs(amps[i]) <= threshold) continue;
    out.push_back({psi.bitstring(i), amps[i].real(), amps[i].imag()});
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,max_alpha,t_star,fidelity_max,fidelity_at_tau\n";
  for (const auto& r : rows) {
    out += format_double(r.param);
    if (r.ok()) {
      out += "," + format_double(r.max_alpha) + "," + format_double(r.t_star) + "," +
             format_double(r.fidelity_max) + "," + format_double(r.fidelity_at_tau) + "\n";
    } else {
      out += ",nan,nan,nan,nan\n";
    }
  }
  return out;
}

json sweep_spec_to_json(const SweepSpec& spec) {
  json j = {{"family", family_name(spec.family)},
            {"parameter", parameter_name(spec.parameter)},
            {"values", spec.values},
            {"n_sites", spec.n_sites},
            {"m", spec.m},
            {"delta", spec.delta},
            {"scheme", scheme_name(spec.scheme)},
            {"kick_duration", spec.kick_duration},
            {"steps_per_pi", spec.steps_per_pi}};
  if (spec.n_steps) j["n_steps"] = *spec.n_steps;
  return j;
}

json sweep_to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  json out_rows = json::array();
  for (const auto& r : rows) {
    json row = {{"param", r.param}, {"n_steps", r.n_steps}};
    if (r.ok()) {
      row["max_alpha"] = r.max_alpha;
      row["t_star"] = r.t_star;
      row["fidelity_max"] = r.fidelity_max;
      row["fidelity_at_tau"] = r.fidelity_at_tau;
    } else {
      row["error"] = r.error;
    }
    out_rows.push_back(std::move(row));
  }
  return {{"tool_version", kToolVersion}, {"spec", sweep_spec_to_json(spec)},
          {"rows", std::move(out_rows)}};
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("bad number '" + text + "' for " + key);
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v)) throw std::invalid_argument(key + " must be an integer");
  return static_cast<int>(v);
}

json key_value_to_json(std::string_view text) {
  json j = json::object();
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "values") {
      json values = json::array();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const std::string v = trim(item);
        if (!v.empty()) values.push_back(parse_number("values", v));
      }
      j[key] = std::move(values);
    } else if (key == "family" || key == "parameter" || key == "scheme") {
      j[key] = value;
    } else {
      j[key] = parse_number(key, value);
    }
  }
  return j;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
  const std::string body = trim(text);
  json j;
  if (!body.empty() && body.front() == '{') {
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("sweep spec: ") + e.what());
    }
  } else {
    j = key_value_to_json(body);
  }

  SweepSpec spec;
  for (const auto& [key, value] : j.items()) {
    const std::string v = value.is_string() ? value.get<std::string>() : value.dump();
    if (key == "family") spec.family = parse_family(v);
    else if (key == "parameter") spec.parameter = parse_parameter(v);
    else if (key == "scheme") spec.scheme = parse_scheme(v);
    else if (key == "values") {
      if (!value.is_array()) throw std::invalid_argument("values must be a list");
      spec.values.clear();
      for (const auto& x : value) {
        if (!x.is_number()) throw std::invalid_argument("values must be numbers");
        spec.values.push_back(x.get<double>());
      }
    } else if (key == "n_sites") spec.n_sites = parse_int(key, v);
    else if (key == "m") spec.m = parse_int(key, v);
    else if (key == "delta") spec.delta = parse_number(key, v);
    else if (key == "kick_duration") spec.kick_duration = parse_number(key, v);
    else if (key == "n_steps") spec.n_steps = parse_int(key, v);
    else if (key == "steps_per_pi") spec.steps_per_pi = parse_number(key, v);
    else if (key == "threads") spec.threads = parse_int(key, v);
    else throw std::invalid_argument("unknown sweep key '" + key + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace qkick
