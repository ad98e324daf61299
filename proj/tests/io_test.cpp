#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "crnctl/controller/closed_loop.hpp"
#include "crnctl/dsd/circuit.hpp"
#include "crnctl/error.hpp"
#include "crnctl/io/commands.hpp"
#include "crnctl/io/csv.hpp"
#include "crnctl/io/network_json.hpp"
#include "crnctl/io/scenario.hpp"
#include "support.hpp"

namespace crn = crnctl::crn;
namespace ctl = crnctl::controller;
namespace io = crnctl::io;
namespace ct = crnctl::testing;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "name": "minimal",
  "network": {
    "species": [{"name": "x", "initial": 0}],
    "reactions": [{"label": "degradation", "equation": "x -> 0", "rate": 1.0}],
    "controlled": "x",
    "actuated": "x"
  },
  "controller": {"mu": 2, "alpha": 0.5, "k": 1},
  "simulation": {"t_end": 10, "samples": 11}
})";

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("crnctl_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void expect_same_network(const crn::Network& a, const crn::Network& b) {
  ASSERT_EQ(a.names(), b.names());
  ASSERT_EQ(a.reactions().size(), b.reactions().size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a.species()[i].initial_concentration, b.species()[i].initial_concentration);
  for (std::size_t r = 0; r < a.reactions().size(); ++r) {
    const auto& x = a.reactions()[r];
    const auto& y = b.reactions()[r];
    EXPECT_EQ(x.label, y.label);
    EXPECT_EQ(x.rate_constant, y.rate_constant);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(x.net_change(i), y.net_change(i));
    EXPECT_EQ(x.order(), y.order());
  }
  EXPECT_EQ(a.controlled(), b.controlled());
  EXPECT_EQ(a.actuated(), b.actuated());
}

}  // namespace

TEST(Equation, ParseAndFormat) {
  const auto [lhs, rhs] = io::parse_equation("V + 2 X -> X");
  ASSERT_EQ(lhs.size(), 2u);
  EXPECT_EQ(lhs[1], (std::pair<std::string, int>{"X", 2}));
  ASSERT_EQ(rhs.size(), 1u);
  EXPECT_TRUE(io::parse_equation("x -> 0").second.empty());
  EXPECT_TRUE(io::parse_equation("∅ -> x").first.empty());
  EXPECT_THROW(io::parse_equation("x => y"), crnctl::Error);
  const auto net = ct::dimerization();
  EXPECT_EQ(io::format_equation(net, net.reactions()[1]), "2 x1 -> x2");
}

TEST(NetworkJson, RoundTripsCompiledCircuit) {
  const auto cl = ctl::attach_integral_controller(ct::birth_death(0.0, 0.002), {1.0, 3e-4, 0.01, 1.0});
  const auto circuit = crnctl::dsd::compile_to_dsd(cl, 1e4);
  const auto text = io::network_to_json_text(circuit.network);
  expect_same_network(circuit.network, io::network_from_json_text(text));
  EXPECT_EQ(io::network_to_json_text(io::network_from_json_text(text)), text);
}

TEST(NetworkJson, RoundTripsHillAndInflow) {
  const auto hill = ctl::attach_hill_controller(ct::birth_death(0.0, 1.0), {1.0, 1.0, 1.0, 1.0}, {500.0});
  const auto net = hill.network().with_inflow(Eigen::Vector2d(0.5, 0.0));
  const auto back = io::network_from_json_text(io::network_to_json_text(net));
  expect_same_network(net, back);
  EXPECT_EQ(back.inflow()[0], 0.5);
  const auto& r = back.reactions()[*back.reaction_index("reference")];
  ASSERT_TRUE(r.hill);
  EXPECT_EQ(r.hill->theta, 500.0);
}

TEST(NetworkJson, Diagnostics) {
  try {
    io::network_from_json_text("{\"species\": [\"x\"],\n \"reactions\": [,]}");
    FAIL() << "expected a parse error";
  } catch (const crnctl::Error& e) {
    EXPECT_NE(std::string(e.what()).find("2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::network_from_json_text(R"({"species": ["x"], "reactions": [], "controlled": "x", "actuated": "x", "extra": 1})"),
               crnctl::Error);
  EXPECT_THROW(io::network_from_json_text(
                   R"({"species": ["x"], "reactions": [{"equation": "y -> 0", "rate": 1}], "controlled": "x", "actuated": "x"})"),
               crnctl::Error);
}

TEST(Scenario, ParsesMinimalDocument) {
  const auto s = io::parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "minimal");
  EXPECT_EQ(s.controller.mu, 2.0);
  EXPECT_EQ(s.controller.v0, 1.0);
  EXPECT_EQ(s.simulation.samples, 11u);
  EXPECT_EQ(s.closed_loop().dimension(), 2u);
}

TEST(Scenario, RejectsUnknownKeys) {
  EXPECT_THROW(io::parse_scenario(kMinimal, {"controller.gain=3"}), crnctl::Error);
  EXPECT_THROW(io::parse_scenario(kMinimal, {"simulation.tend=3"}), crnctl::Error);
  EXPECT_THROW(io::parse_scenario(kMinimal, {"bogus=1"}), crnctl::Error);
}

TEST(Scenario, OverridesUseDottedPaths) {
  const auto s = io::parse_scenario(kMinimal, {"controller.alpha=0.45", "network.reactions.0.rate=2.5"});
  EXPECT_EQ(s.controller.alpha, 0.45);
  EXPECT_EQ(s.plant.reactions()[0].rate_constant, 2.5);
  EXPECT_THROW(io::parse_scenario(kMinimal, {"controller.alpha"}), crnctl::Error);
  EXPECT_THROW(io::parse_scenario(kMinimal, {"network.reactions.7.rate=1"}), crnctl::Error);
}

TEST(Scenario, ValidationNamesThePrecondition) {
  auto message = [](const std::vector<std::string>& overrides) {
    try {
      io::parse_scenario(kMinimal, overrides);
    } catch (const crnctl::Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message({"controller.alpha=0"}).find("controller.alpha"), std::string::npos);
  EXPECT_NE(message({"controller.v0=0"}).find("v0"), std::string::npos);
  EXPECT_NE(message({"simulation.t_end=-1"}).find("t_end"), std::string::npos);
  EXPECT_NE(message({"network.reactions.0.rate=0"}).find("rate"), std::string::npos);
  EXPECT_FALSE(message({"simulation.method=\"ssa\"", "simulation.volume_scale=1", "controller.v0=0.5"}).empty());
  EXPECT_FALSE(message({"schedule=[{\"time\": 5, \"target\": \"alpha\", \"value\": -1}]"}).empty());
  EXPECT_FALSE(message({"schedule=[{\"time\": 5, \"target\": \"nope\", \"value\": 1}]"}).empty());
  EXPECT_FALSE(message({"dsd={\"omega\": 0}"}).empty());
  EXPECT_FALSE(message({"controller.theta=10", "dsd={\"omega\": 100}"}).empty());
  EXPECT_FALSE(message({"costs={\"kappa_r\": -1, \"kappa_m\": 0, \"kappa_a\": 0}"}).empty());
}

TEST(Scenario, ShippedScenariosLoad) {
  for (const auto* name : {"fig2a", "fig2b", "fig3b", "fig3c", "fig3d", "fig3e", "dimer_tracking", "dimer_adaptation",
                           "power", "hill", "ssa_small", "ssa_large", "fig5a", "fig5b", "fig5c", "fig5d"}) {
    EXPECT_NO_THROW(io::load_scenario(ct::scenario_path(name))) << name;
  }
}

TEST(Csv, ThreeSampleTrajectory) {
  crnctl::sim::Trajectory t;
  t.names = {"x", "v"};
  for (int i = 0; i < 3; ++i) {
    t.times.push_back(0.5 * i);
    t.states.push_back(Eigen::Vector2d(i, 1.0 / 3.0));
  }
  const auto text = io::trajectory_csv(t);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,x,v");
  EXPECT_NE(text.find("0.5,1,0.333333333333333\n"), std::string::npos);
  EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Commands, SimulateIsDeterministic) {
  const auto s = io::load_scenario(ct::scenario_path("fig3b"));
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  const auto files_a = io::run_scenario(io::Command::simulate, s, {a.string(), 1});
  const auto files_b = io::run_scenario(io::Command::simulate, s, {b.string(), 1});
  ASSERT_EQ(files_a.size(), files_b.size());
  for (std::size_t i = 0; i < files_a.size(); ++i) EXPECT_EQ(read_text(files_a[i]), read_text(files_b[i])) << files_a[i];
  const auto csv = read_text(a / "trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,m,p,q,v");
}

TEST(Commands, SsaRunIsDeterministic) {
  const auto s = io::load_scenario(ct::scenario_path("ssa_small"), {"simulation.runs=20"});
  const auto a = fresh_dir("ssa_a");
  const auto b = fresh_dir("ssa_b");
  const auto files_a = io::run_scenario(io::Command::simulate, s, {a.string(), 1});
  const auto files_b = io::run_scenario(io::Command::simulate, s, {b.string(), 3});
  for (std::size_t i = 0; i < files_a.size(); ++i) EXPECT_EQ(read_text(files_a[i]), read_text(files_b[i]));
}

TEST(Commands, SweepPowerDecreasesInK) {
  const auto s = io::load_scenario(ct::scenario_path("power"));
  const auto dir = fresh_dir("sweep");
  io::run_scenario(io::Command::sweep, s, {dir.string(), 2});
  std::istringstream in(read_text(dir / "sweep.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "controller.k,tracking_error,settling_time,P_star,alpha_bar");
  std::vector<double> k, p;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 5u);
    k.push_back(std::stod(cells[0]));
    p.push_back(std::stod(cells[3]));
  }
  EXPECT_EQ(k, (std::vector<double>{1, 10, 100}));
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LT(p[i], p[i - 1]);
  EXPECT_GT(p.back(), 2.0 / ct::gene_gain());
}

TEST(Commands, AnalyzeReportsAlphaBar) {
  const auto s = io::load_scenario(ct::scenario_path("fig3b"));
  const auto summary = io::analysis_summary(s);
  EXPECT_NE(summary.find("\"alpha_bar\""), std::string::npos);
  EXPECT_NE(summary.find("0.8436"), std::string::npos);
}

TEST(Commands, CompileDsdWritesArtifacts) {
  const auto s = io::load_scenario(ct::scenario_path("fig5a"));
  const auto dir = fresh_dir("dsd");
  const auto files = io::run_scenario(io::Command::compile_dsd, s, {dir.string(), 1});
  EXPECT_TRUE(fs::exists(dir / "dsd_network.json"));
  EXPECT_TRUE(fs::exists(dir / "gate_report.txt"));
  EXPECT_TRUE(fs::exists(dir / "comparison.csv"));
  const auto net = io::read_network_file((dir / "dsd_network.json").string());
  EXPECT_EQ(net.size(), crnctl::dsd::compile_to_dsd(s.closed_loop(), s.dsd->omega).network.size());
  EXPECT_THROW(io::run_scenario(io::Command::compile_dsd, io::load_scenario(ct::scenario_path("fig3b")), {dir.string(), 1}),
               crnctl::Error);
}

TEST(Commands, CommandNames) {
  EXPECT_EQ(io::parse_command("compile-dsd"), io::Command::compile_dsd);
  EXPECT_EQ(io::command_name(io::Command::sweep), "sweep");
  EXPECT_THROW(io::parse_command("plot"), crnctl::Error);
}
