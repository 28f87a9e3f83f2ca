#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qkick/serialize.hpp"

using namespace qkick;
using nlohmann::json;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(2.0), "2");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(third)), third);
}

TEST(GraphJson, NodesAndEdgeSigns) {
  const auto g = build_graph(3);
  const json j = graph_to_json(g);
  EXPECT_EQ(j["n_sites"], 3);
  ASSERT_EQ(j["nodes"].size(), 6u);
  EXPECT_EQ(j["nodes"][0]["string"], "IIX");
  EXPECT_EQ(j["nodes"][0]["index"], 1);
  const auto k = generator_matrices(g);
  for (const auto& node : j["nodes"]) {
    const int from = node["index"];
    for (const auto& e : node["edges"]) {
      const Channel c = parse_channel(e["channel"].get<std::string>());
      EXPECT_EQ(k.channel(c)(from - 1, e["to"].get<int>() - 1), e["sign"].get<int>());
    }
  }
}

TEST(ScheduleJson, RoundTripsEveryVariant) {
  for (const auto& s : {ideal_schedule(4, KickScheme::JxB, 0.5), sin_power_schedule(5, 4),
                        square_schedule(3, 7.5), PulseSchedule::zero(2, 3.0)}) {
    const json j = schedule_to_json(s);
    const auto back = schedule_from_json(json::parse(j.dump()));
    EXPECT_EQ(schedule_to_json(back), j);
    for (double t : {0.0, 0.3, 2.9}) {
      EXPECT_EQ(back.at(t).jx, s.at(t).jx);
      EXPECT_EQ(back.at(t).b, s.at(t).b);
    }
  }
}

TEST(ScheduleJson, Shorthands) {
  const auto sin = schedule_from_json({{"variant", "sin_power"}, {"n_sites", 5}, {"m", 6}});
  EXPECT_NEAR(std::get<SinPower>(sin.payload()).j_max, 0.8, 1e-13);
  const auto sq = schedule_from_json({{"variant", "square_delta"}, {"n_sites", 5}, {"delta", 8}});
  EXPECT_EQ(std::get<SquareDelta>(sq.payload()).pulse_count, 4);
  const auto ideal = schedule_from_json(
      {{"variant", "ideal_kicks"}, {"n_sites", 3}, {"scheme", "JxJy"}, {"kick_duration", 2}});
  EXPECT_EQ(std::get<IdealKicks>(ideal.payload()).slots.size(), 3u);
  EXPECT_EQ(ideal.total_time(), 6.0);
}

TEST(ScheduleJson, MalformedInputIsInvalidArgument) {
  EXPECT_THROW(schedule_from_json(json::array()), std::invalid_argument);
  EXPECT_THROW(schedule_from_json({{"n_sites", 3}}), std::invalid_argument);
  EXPECT_THROW(schedule_from_json({{"variant", "gauss"}, {"n_sites", 3}}), std::invalid_argument);
  EXPECT_THROW(schedule_from_json({{"variant", "sin_power"}, {"n_sites", 3.5}, {"m", 6}}),
               std::invalid_argument);
  EXPECT_THROW(schedule_from_json({{"variant", "sin_power"}, {"n_sites", "five"}, {"m", 6}}),
               std::invalid_argument);
  EXPECT_THROW(schedule_from_json({{"variant", "sin_power"}, {"n_sites", 3}, {"m", 5}}),
               std::invalid_argument);
}

TEST(FluxCsv, HeaderMetadataAndRows) {
  const auto g = build_graph(2);
  const auto r = propagate(generator_matrices(g), sin_power_schedule(2, 6), 4);
  const std::string csv = flux_csv(r, {{"command", "simulate"}, {"n_steps", 4}});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# command=simulate");
  std::getline(in, line);
  EXPECT_EQ(line, "# n_steps=4");
  std::getline(in, line);
  EXPECT_EQ(line, "t,alpha_1,alpha_2,alpha_3,alpha_4,norm");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(csv, flux_csv(r, {{"command", "simulate"}, {"n_steps", 4}}));
}

TEST(SummaryJson, Fields) {
  TransferSummary t;
  t.peak.value = 0.9;
  t.peak.time = 2.0;
  t.alpha_at_tau = -0.1;
  t.fidelity_max = average_fidelity(0.9);
  t.n_steps = 12;
  const json j = transfer_summary_json(t);
  EXPECT_EQ(j["max_alpha_N"], 0.9);
  EXPECT_EQ(j["t_star"], 2.0);
  EXPECT_EQ(j["alpha_N_at_tau"], -0.1);
  EXPECT_EQ(j["n_steps"], 12);
  EXPECT_TRUE(j.contains("fidelity"));
  EXPECT_TRUE(j.contains("fidelity_at_tau"));
}

TEST(StateJson, ListsNonzeroAmplitudes) {
  const json j = state_to_json(StateVector::product(SiteAssignment::from_labels("+1")));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0][0], "01");
  EXPECT_EQ(j[1][0], "11");
  EXPECT_NEAR(j[0][1].get<double>(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(SweepOutput, CsvAndJson) {
  SweepSpec spec;
  spec.values = {2, 3};
  std::vector<SweepRow> rows(2);
  rows[0].param = 2;
  rows[0].max_alpha = 0.5;
  rows[1].param = 3;
  rows[1].error = "boom";
  const std::string csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "param,max_alpha,t_star,fidelity_max,fidelity_at_tau");
  EXPECT_NE(csv.find("3,nan,nan,nan,nan"), std::string::npos);
  const json j = sweep_to_json(spec, rows);
  EXPECT_EQ(j["tool_version"], std::string(kToolVersion));
  EXPECT_EQ(j["rows"][1]["error"], "boom");
  EXPECT_EQ(j["spec"]["family"], "sin");
}

TEST(ParseSweepSpec, KeyValueForm) {
  const auto spec = parse_sweep_spec(
      "# square sharpness scan\n"
      "family = square\n"
      "parameter = delta\n"
      "values = 5, 8, 12.5  # trailing comment\n"
      "n_sites = 7\n"
      "n_steps = 900\n");
  EXPECT_EQ(spec.family, ScheduleFamily::SquareDelta);
  EXPECT_EQ(spec.parameter, SweepParameter::Delta);
  EXPECT_EQ(spec.values, (std::vector<double>{5, 8, 12.5}));
  EXPECT_EQ(spec.n_sites, 7);
  EXPECT_EQ(spec.n_steps, 900);
}

TEST(ParseSweepSpec, JsonFormRoundTrips) {
  SweepSpec spec;
  spec.family = ScheduleFamily::IdealKicks;
  spec.values = {2, 4, 6};
  spec.scheme = KickScheme::JxJy;
  spec.kick_duration = 0.25;
  const auto back = parse_sweep_spec(sweep_spec_to_json(spec).dump());
  EXPECT_EQ(sweep_spec_to_json(back), sweep_spec_to_json(spec));
}

TEST(ParseSweepSpec, Errors) {
  EXPECT_THROW(parse_sweep_spec("values = 3\ncolour = red\n"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec("values = 3\nn_sites\n"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec("values = 3, x\n"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec("values =\n"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec("{\"values\": [3"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec("values = 3\nn_sites = 4.5\n"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_spec(""), std::invalid_argument);
}
