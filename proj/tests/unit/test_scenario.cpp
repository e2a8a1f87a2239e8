#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "phisim/compare.hpp"
#include "phisim/runner.hpp"
#include "phisim/scenario.hpp"
#include "phisim/snapshot.hpp"
#include "support/diagnostics.hpp"
#include "support/fields.hpp"

using namespace phisim;
using phisim::testing::kPi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "phisim-unit" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> column(const fs::path& csv, const std::string& name) {
  return phisim::testing::read_column(csv, name);
}

const char* kFree = R"([run]
kind = schrodinger
name = free
[grid]
dims = 1
points = 64
length = 10
[initial]
psi_re = exp(-(x-5)^2)
[integrator]
steps = 20
stride = 5
)";

const char* kPhi = R"([run]
kind = phi
name = packet
[constants]
omega = 1
[grid]
dims = 1
points = 64
length = 20
[potential]
V = 0.5*omega^2*(x-10)^2
[initial]
psi_re = exp(-(x-11)^2/2)*cos(x)
psi_im = exp(-(x-11)^2/2)*sin(x)
[integrator]
steps = 40
stride = 4
)";

std::string expect_config_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_scenario(text, "t.ini", overrides);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  FAIL("expected InvalidArgument");
  return {};
}

}  // namespace

TEST_CASE("scenario: parse a minimal schrodinger run") {
  const Scenario s = parse_scenario(kFree, "dir/free.ini");
  CHECK(s.kind == Kind::schrodinger);
  CHECK(s.name == "free");
  CHECK(s.integrator.method == "cn");
  CHECK(s.integrator.steps == 20);
  CHECK(s.integrator.stride == 5);
  REQUIRE(s.grid);
  CHECK(s.grid->points(0) == 64);
  CHECK(s.grid->length(0) == doctest::Approx(10.0));
  CHECK(s.hash.size() == 16);

  // Free particle: largest eigenvalue hbar^2 / 2m * (pi/h)^2.
  const double h = 10.0 / 64.0;
  const double e_max = 0.5 * (kPi / h) * (kPi / h);
  CHECK(s.integrator.auto_dt);
  CHECK(s.integrator.dt == doctest::Approx(0.2 * 2.0 / e_max).epsilon(1e-14));
}

TEST_CASE("scenario: name defaults to the file stem") {
  std::string text = kFree;
  text.replace(text.find("name = free\n"), 12, "");
  CHECK(parse_scenario(text, "some/where/my_run.ini").name == "my_run");
}

TEST_CASE("scenario: configuration errors name the key") {
  std::string no_points = kFree;
  no_points.replace(no_points.find("points = 64\n"), 12, "");
  CHECK(expect_config_error(no_points) == "missing required key grid.points (grid size)");

  CHECK(expect_config_error(std::string(kFree) + "[bogus]\nx = 1\n") == "unknown section [bogus]");
  CHECK(expect_config_error(kFree, {"grid.colour=red"}) == "unknown key grid.colour");
  CHECK(expect_config_error(kFree, {"run.kind=teleport"}) == "unknown scenario kind 'teleport'");
  CHECK(expect_config_error(kFree, {"grid.points=6.5"}).find("expected an integer") != std::string::npos);
  CHECK(expect_config_error(kFree, {"initial.psi_re=exp(-q^2)"}) ==
        "initial.psi_re: unknown name 'q' in 'exp(-q^2)'");
  CHECK(expect_config_error(kFree, {"initial.psi_re=exp(-(x-"}).rfind("initial.psi_re:", 0) == 0);
  CHECK(expect_config_error(kFree, {"integrator.duration=1"}) ==
        "integrator: give steps or duration, not both");
  CHECK(expect_config_error(kFree, {"integrator.method=rk4"}) ==
        "integrator.method 'rk4' is not available for schrodinger");
  CHECK(expect_config_error(kFree, {"integrator.stride=0"}) == "integrator.stride must be >= 1");
  CHECK(expect_config_error(kFree, {"integrator.dt=-1"}) == "integrator.dt must be positive");
  CHECK(expect_config_error(kFree, {"initial.phi=x"}) == "initial.phi is not used by schrodinger");
  CHECK(expect_config_error(kFree, {"constants.hbar=0"}).find("hbar") != std::string::npos);
  CHECK(expect_config_error(kFree, {"stride=3"}) ==
        "override key 'stride' needs a section, e.g. integrator.steps");
  CHECK(expect_config_error(kFree, {"integrator.steps"}).find("not of the form") != std::string::npos);

  CHECK(expect_config_error(kPhi, {"potential.V=x*t"}) ==
        "potential.V: time-dependent potential unsupported for phi");
  CHECK(expect_config_error(kPhi, {"initial.phi=x"}) ==
        "initial: give either psi_re/psi_im or phi/phi_dot, not both");
  CHECK(expect_config_error(kPhi, {"sources.rho=1"}) == "[sources] is only used by Maxwell kinds");
}

TEST_CASE("scenario: load_scenario reports missing files") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/phisim.ini"), InvalidArgument);
}

TEST_CASE("scenario: constants feed later entries and may chain") {
  const Scenario s = parse_scenario(kPhi, "p.ini", {"constants.n=32", "constants.m2=2*n", "grid.points=m2"});
  CHECK(s.grid->points(0) == 64);
  CHECK(s.constants.at("omega") == 1.0);
}

TEST_CASE("scenario: duration picks the largest dt giving whole frames") {
  const Scenario base = parse_scenario(kFree, "f.ini");
  const double limit = base.integrator.dt;
  std::string text = kFree;
  text.replace(text.find("steps = 20\n"), 11, "duration = 1\n");
  const Scenario s = parse_scenario(text, "f.ini");
  CHECK(s.integrator.steps == 5 * static_cast<long>(std::ceil(1.0 / (5 * limit))));
  CHECK(s.integrator.steps % s.integrator.stride == 0);
  CHECK(s.integrator.dt <= limit);
  CHECK(static_cast<double>(s.integrator.steps) * s.integrator.dt == doctest::Approx(1.0).epsilon(1e-15));

  // An exact multiple keeps the requested dt.
  const Scenario exact = parse_scenario(text, "f.ini", {"integrator.dt=0.01"});
  CHECK(exact.integrator.steps == 100);
  CHECK(exact.integrator.dt == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("scenario: hash follows the effective text") {
  const auto a = parse_scenario(kFree, "a.ini").hash;
  CHECK(parse_scenario(kFree, "elsewhere.ini").hash == a);
  CHECK(parse_scenario(kFree, "a.ini", {"integrator.steps=21"}).hash != a);
  // An override that restates the file value changes nothing.
  CHECK(parse_scenario(kFree, "a.ini", {"integrator.steps=20"}).hash == a);
}

TEST_CASE("scenario: maxwell kinds need 3D and a continuous source") {
  const std::string base = R"([run]
kind = maxwell-fields
[grid]
dims = 3
points = 8
length = 6.283185307179586
[integrator]
steps = 4
)";
  const Scenario s = parse_scenario(base, "m.ini");
  CHECK(s.integrator.method == "rk4");
  CHECK(s.integrator.dt == doctest::Approx(0.5 * rk4_stability_limit(*s.grid, 1.0)));
  CHECK(expect_config_error(base, {"grid.dims=2"}) == "grid.dims must be 3 for maxwell-fields");
  // A growing charge with no current violates continuity.
  CHECK(expect_config_error(base, {"sources.rho=t*sin(x)"}).find("continuity") != std::string::npos);
  CHECK_NOTHROW(parse_scenario(base, "m.ini", {"sources.rho=sin(x)*cos(t)", "sources.J_x=-cos(x)*sin(t)"}));
}

TEST_CASE("snapshot: write, read and dump") {
  const fs::path dir = scratch("snapshot");
  const Grid g = Grid::cube(4, 2.0);
  const ScalarField a = phisim::testing::white_noise(g, 1);
  const ScalarField b = phisim::testing::white_noise(g, 2);
  const ScalarField v = phisim::testing::white_noise(g, 3);
  SnapshotHeader h;
  h.kind = "phi";
  h.grid = g;
  h.fields = {"phi", "phi_dot"};
  h.static_fields = {"V"};
  h.params = {{"hbar", 0.7}, {"mass", 1.0 / 3.0}};
  h.scenario_hash = "0123456789abcdef";
  h.dt = 0.125;
  {
    SnapshotWriter w(dir / "s.snap", h, {v.values});
    w.write_frame(0.0, {&a.values, &b.values});
    w.write_frame(0.125, {&b.values, &a.values});
  }
  const Snapshot s = read_snapshot(dir / "s.snap");
  CHECK(s.header.kind == "phi");
  CHECK(s.header.frames == 2);
  CHECK(s.header.grid.points(2) == 4);
  CHECK(s.header.param("hbar") == 0.7);
  CHECK(s.header.param("mass") == 1.0 / 3.0);
  CHECK(s.header.scenario_hash == h.scenario_hash);
  CHECK(s.times == std::vector<double>{0.0, 0.125});
  CHECK((s.field(0, "phi") == a.values).all());
  CHECK((s.field(1, "phi") == b.values).all());
  CHECK((s.field(1, "phi_dot") == a.values).all());
  CHECK((s.static_field("V") == v.values).all());
  CHECK_THROWS_AS(s.field(0, "psi_re"), InvalidArgument);

  std::ostringstream csv;
  dump_csv(s, csv);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 64);
  CHECK(text.rfind("frame,t,x,y,z,phi,phi_dot", 0) == 0);

  // Truncation is detected.
  const std::string bytes = slurp(dir / "s.snap");
  std::ofstream(dir / "cut.snap", std::ios::binary) << bytes.substr(0, bytes.size() - 8);
  CHECK_THROWS_AS(read_snapshot(dir / "cut.snap"), InvalidArgument);
  std::ofstream(dir / "junk.snap") << "hello\n";
  CHECK_THROWS_AS(read_snapshot(dir / "junk.snap"), InvalidArgument);
}

TEST_CASE("snapshot: writer rejects mismatched frames") {
  const fs::path dir = scratch("snapshot-bad");
  const Grid g = Grid::line(8, 1.0);
  SnapshotHeader h;
  h.kind = "phi";
  h.grid = g;
  h.fields = {"phi", "phi_dot"};
  SnapshotWriter w(dir / "s.snap", h, {});
  const Eigen::ArrayXd ok = Eigen::ArrayXd::Zero(8), bad = Eigen::ArrayXd::Zero(7);
  CHECK_THROWS_AS(w.write_frame(0.0, {&ok}), InvalidArgument);
  CHECK_THROWS_AS(w.write_frame(0.0, {&ok, &bad}), GridMismatch);
}

TEST_CASE("fnv1a matches published vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("runner: exit codes") {
  const fs::path out = scratch("exit");
  const Scenario ok = parse_scenario(kPhi, "p.ini");
  const RunResult r = run_scenario(ok, {out});
  CHECK(r.exit_code == exit_status::ok);
  CHECK(r.message == "ok");
  CHECK(fs::exists(out / "packet" / "trajectory.snap"));
  CHECK(fs::exists(out / "packet" / "diagnostics.csv"));

  // Explicit dt above the Verlet bound is refused by the integrator.
  const double limit = ok.integrator.dt / ok.integrator.safety;
  const Scenario fast = parse_scenario(kPhi, "p.ini", {"integrator.dt=" + format_double(1.01 * limit)});
  const RunResult rf = run_scenario(fast, {out});
  CHECK(rf.exit_code == exit_status::numerical);
  CHECK(rf.message.find("stability limit") != std::string::npos);

  // A ceiling that cannot hold.
  const Scenario strict = parse_scenario(kPhi, "p.ini", {"monitors.max_identity=-1"});
  const RunResult ri = run_scenario(strict, {out});
  CHECK(ri.exit_code == exit_status::invariant);
  REQUIRE(ri.violations.size() == 1);
  CHECK(ri.violations[0].find("probability-energy identity residual") == 0);

  const Scenario missing = parse_scenario("[run]\nkind=reconstruct-phi\n[input]\ntrajectory=none/x.snap\n", "r.ini");
  CHECK(run_scenario(missing, {out}).exit_code == exit_status::config);
}

TEST_CASE("runner: phi diagnostics hold the pointwise identity") {
  const fs::path out = scratch("phi-diag");
  const Scenario s = parse_scenario(kPhi, "p.ini");
  REQUIRE(run_scenario(s, {out}).exit_code == exit_status::ok);
  const auto identity = column(out / "packet" / "diagnostics.csv", "identity_residual");
  REQUIRE(identity.size() == 41);
  for (double v : identity) CHECK(v < 1e-13);
  const Snapshot snap = read_snapshot(out / "packet" / "trajectory.snap");
  CHECK(snap.header.frames == 11);
  CHECK(snap.times.back() == doctest::Approx(40 * s.integrator.dt));
  CHECK(snap.header.scenario_hash == s.hash);
  CHECK(snap.header.param("step_dt") == s.integrator.dt);
  CHECK(snap.header.param("stride") == 4.0);
  CHECK(snap.header.dt == doctest::Approx(4 * s.integrator.dt));
  CHECK(snap.header.version == kVersion);
}

TEST_CASE("runner: runs are byte-for-byte reproducible, noise included") {
  const Scenario s = parse_scenario(kPhi, "p.ini", {"initial.noise=1e-3", "run.seed=42"});
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  REQUIRE(run_scenario(s, {a}).exit_code == exit_status::ok);
  REQUIRE(run_scenario(s, {b}).exit_code == exit_status::ok);
  CHECK(slurp(a / "packet" / "trajectory.snap") == slurp(b / "packet" / "trajectory.snap"));
  CHECK(slurp(a / "packet" / "diagnostics.csv") == slurp(b / "packet" / "diagnostics.csv"));

  const Scenario other = parse_scenario(kPhi, "p.ini", {"initial.noise=1e-3", "run.seed=43"});
  const fs::path c = scratch("det-c");
  REQUIRE(run_scenario(other, {c}).exit_code == exit_status::ok);
  CHECK(slurp(a / "packet" / "trajectory.snap") != slurp(c / "packet" / "trajectory.snap"));
}

TEST_CASE("runner: eigenstate phi run reproduces the dense Schroedinger run") {
  const fs::path out = scratch("eig");
  const std::string common = R"([grid]
dims = 1
points = 64
length = 20
[potential]
V = 0.5*(x-10)^2
[initial]
eigenstate = 1
[integrator]
dt = 0.002
steps = 200
stride = 50
)";
  const Scenario phi = parse_scenario("[run]\nkind=phi\nname=p\n" + common, "p.ini");
  const Scenario dense =
      parse_scenario("[run]\nkind=schrodinger\nname=d\n" + common, "d.ini", {"integrator.method=dense"});
  const Scenario cmp = parse_scenario(
      "[run]\nkind=compare\nname=c\n[compare]\na=p/trajectory.snap\nb=d/trajectory.snap\nmap_a=to_wavefunction\n",
      "c.ini");
  const auto results = run_suite({cmp, phi, dense}, {out}, 2);
  for (const auto& r : results) CHECK_MESSAGE(r.exit_code == exit_status::ok, r.message);
  const Snapshot a = read_snapshot(out / "p" / "trajectory.snap");
  const Snapshot b = read_snapshot(out / "d" / "trajectory.snap");
  const CompareReport rep = compare_runs(a, b, "to_wavefunction", "none");
  CHECK(rep.rows.size() == 5);
  CHECK(rep.unmatched_a == 0);
  // Verlet phase error of one eigenmode: (E dt)^2 t / 24 with E = 1.5.
  CHECK(rep.max_relative < 1e-5);
  CHECK(fs::exists(out / "c" / "compare.json"));
}

TEST_CASE("compare: identical runs differ by zero, and order does not matter") {
  const fs::path out = scratch("cmp");
  const Scenario cn = parse_scenario(kFree, "f.ini", {"run.name=cn"});
  const Scenario dense = parse_scenario(kFree, "f.ini", {"run.name=dense", "integrator.method=dense"});
  REQUIRE(run_scenario(cn, {out}).exit_code == exit_status::ok);
  REQUIRE(run_scenario(dense, {out}).exit_code == exit_status::ok);
  const Snapshot a = read_snapshot(out / "cn" / "trajectory.snap");
  const Snapshot b = read_snapshot(out / "dense" / "trajectory.snap");
  const CompareReport self = compare_runs(a, a, "none", "none");
  CHECK(self.max_l2 == 0.0);
  CHECK(self.max_relative == 0.0);
  const CompareReport ab = compare_runs(a, b, "none", "none");
  const CompareReport ba = compare_runs(b, a, "none", "none");
  REQUIRE(ab.rows.size() == ba.rows.size());
  CHECK(ab.max_l2 > 0.0);
  CHECK(ab.max_l2 == ba.max_l2);
  CHECK(ab.max_relative == ba.max_relative);
  CHECK(ab.rows[0].l2 == 0.0);  // same initial data
  CHECK_THROWS_AS(compare_runs(a, b, "a_to_fields", "none"), InvalidArgument);

  // Different grids are refused.
  const Scenario coarse = parse_scenario(kFree, "f.ini", {"run.name=coarse", "grid.points=32"});
  REQUIRE(run_scenario(coarse, {out}).exit_code == exit_status::ok);
  CHECK_THROWS(compare_runs(a, read_snapshot(out / "coarse" / "trajectory.snap"), "none", "none"));
}

TEST_CASE("runner: reconstruct-phi chained after a Schroedinger run") {
  const fs::path out = scratch("rphi");
  const Scenario src = parse_scenario(kPhi, "p.ini", {"run.kind=schrodinger", "run.name=src",
                                                       "integrator.stride=1", "monitors.max_norm_drift=1e-12"});
  REQUIRE(run_scenario(src, {out}).exit_code == exit_status::ok);
  const Scenario rec = parse_scenario(
      "[run]\nkind=reconstruct-phi\nname=rec\n[input]\ntrajectory=src/trajectory.snap\n", "r.ini");
  const RunResult r = run_scenario(rec, {out});
  CHECK_MESSAGE(r.exit_code == exit_status::ok, r.message);
  CHECK(r.message.rfind("round trip", 0) == 0);
  const Snapshot phi = read_snapshot(out / "rec" / "trajectory.snap");
  CHECK(phi.header.kind == "phi");
  CHECK(phi.header.frames == 41);
  const auto err = column(out / "rec" / "diagnostics.csv", "relative_error");
  CHECK(err.front() < 1e-12);  // the initial frame is exact by construction

  // reconstruct-phi refuses a phi snapshot as input.
  const Scenario wrong = parse_scenario(
      "[run]\nkind=reconstruct-phi\nname=w\n[input]\ntrajectory=rec/trajectory.snap\n", "r.ini");
  CHECK(run_scenario(wrong, {out}).exit_code == exit_status::config);
}

TEST_CASE("runner: vacuum fields keep div B at roundoff") {
  const fs::path out = scratch("vac");
  const Scenario s = parse_scenario(R"([run]
kind = maxwell-fields
name = vac
[grid]
dims = 3
points = 8
length = 6.283185307179586
[initial]
E_y = cos(x) + 0.3*sin(2*z)
B_z = cos(x)
B_x = 0.5*cos(y+z)
[integrator]
steps = 50
)",
                                    "v.ini");
  REQUIRE(run_scenario(s, {out}).exit_code == exit_status::ok);
  for (double v : column(out / "vac" / "diagnostics.csv", "div_B")) CHECK(v <= 1e-11);
}
