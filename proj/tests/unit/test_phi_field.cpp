#include <doctest.h>

#include <cmath>

#include "phisim/errors.hpp"
#include "phisim/operators.hpp"
#include "phisim/phi_field.hpp"
#include "support/fields.hpp"

using namespace phisim;
using namespace phisim::testing;

namespace {

PhiState make_state(const ScalarField& phi, const ScalarField& phi_dot, const PotentialSpec& V,
                    QuantumParams p = {}) {
  return PhiState{phi, phi_dot, p, V};
}

double pointwise_identity(const PhiState& s) {
  const auto w = to_wavefunction(s);
  const auto e = energy_density(s);
  const Eigen::ArrayXd dens = w.psi.values.abs2();
  return (dens - 2 * s.params.hbar * e.total.values).abs().maxCoeff() / dens.maxCoeff();
}

}  // namespace

TEST_CASE("phi acceleration") {
  const Grid g = Grid::line(32, 3.0);
  const QuantumParams p{0.8, 1.5};
  const auto V0 = PotentialSpec::zero(g);
  const ScalarField zero(g);
  CHECK(max_abs(phi_acceleration(make_state(zero, zero, V0, p))) == 0.0);

  const double k = 2 * kPi / 3.0;
  const auto mode = sample_fn(g, [&](double x, double, double) { return std::cos(k * x); });
  const double Ek = p.hbar * p.hbar * k * k / (2 * p.mass);
  const auto acc = phi_acceleration(make_state(mode, zero, V0, p));
  const double emax = max_energy(V0, p) / p.hbar;
  CHECK(max_abs(acc + (Ek * Ek / (p.hbar * p.hbar)) * mode) <= 1e-12 * emax * emax);

  const Grid gh = Grid::line(64, 20.0);
  const auto V = harmonic(gh);
  const auto ground = eigenpairs_small(V, {}, 1)[0];
  const auto a0 = phi_acceleration(make_state(ground.state, ScalarField(gh), V));
  const auto want = (-ground.energy * ground.energy) * ground.state;
  CHECK(rel_l2(a0, want) <= 1e-10);
}

TEST_CASE("stability limits") {
  const Grid g = Grid::line(64, 2 * kPi);
  const auto V0 = PotentialSpec::zero(g);
  CHECK(max_energy(V0, {}) == doctest::Approx(512.0).epsilon(1e-14));
  CHECK(stable_dt(V0, {}) == doctest::Approx(7.8125e-4).epsilon(1e-14));
  const Grid g2 = Grid::line(128, 2 * kPi);
  CHECK(stable_dt(PotentialSpec::zero(g2), {}) ==
        doctest::Approx(stable_dt(V0, {}) / 4).epsilon(1e-14));
  double prev = stable_dt(V0, {});
  for (double v0 : {0.5, 5.0, 50.0}) {
    const double dt = stable_dt(PotentialSpec::from_samples(ScalarField::constant(g, v0)), {});
    CHECK(dt < prev);
    prev = dt;
  }
  // a negative constant potential also widens E_max
  const auto Vn = PotentialSpec::from_samples(ScalarField::constant(g, -3.0));
  CHECK(max_energy(Vn, {}) == doctest::Approx(515.0));

  const ScalarField zero(g);
  const auto s = make_state(white_noise(g, 1), zero, V0);
  CHECK_THROWS_AS(verlet_step(s, 1.01 * verlet_stability_limit(V0, {})), NumericalError);
  CHECK_NOTHROW(verlet_step(s, 0.99 * verlet_stability_limit(V0, {})));
}

TEST_CASE("verlet reproduces the discrete oscillator") {
  const Grid g = Grid::line(128, 20.0);
  const auto V = harmonic(g);
  const auto pair = eigenpairs_small(V, {}, 2)[1];
  const double dt = stable_dt(V, {});
  const double theta = 2 * std::asin(dt * pair.energy / 2);
  PhiVerlet run(make_state(pair.state, ScalarField(g), V), dt);
  double worst = 0.0;
  for (int n = 1; n <= 2000; ++n) {
    run.step();
    worst = std::max(worst, max_abs(run.state().phi - std::cos(n * theta) * pair.state));
  }
  CHECK(worst <= 1e-10 * max_abs(pair.state));
  // Omega = theta / dt is within O(dt^2) of E / hbar
  const double Omega = theta / dt;
  CHECK(std::abs(Omega - pair.energy) <= pair.energy * std::pow(dt * pair.energy, 2));
}

TEST_CASE("verlet is time reversible") {
  const Grid g = Grid::line(64, 10.0);
  const auto V = harmonic(g);
  const auto s0 = make_state(smooth_random(g, 2, 5), smooth_random(g, 3, 5), V);
  const double dt = stable_dt(V, {});
  PhiState s = s0;
  for (int i = 0; i < 100; ++i) s = verlet_step(s, dt);
  s.phi_dot = -s.phi_dot;
  for (int i = 0; i < 100; ++i) s = verlet_step(s, dt);
  s.phi_dot = -s.phi_dot;
  CHECK(max_abs(s.phi - s0.phi) <= 1e-12 * max_abs(s0.phi));
  CHECK(max_abs(s.phi_dot - s0.phi_dot) <= 1e-12 * max_abs(s0.phi_dot));
}

TEST_CASE("cached stepper matches single steps") {
  const Grid g = Grid::line(64, 10.0);
  const auto V = harmonic(g);
  const auto s0 = make_state(smooth_random(g, 4), smooth_random(g, 5), V);
  const double dt = stable_dt(V, {});
  PhiState a = s0;
  PhiVerlet b(s0, dt);
  for (int i = 0; i < 500; ++i) {
    a = verlet_step(a, dt);
    b.step();
  }
  CHECK(max_abs(a.phi - b.state().phi) <= 1e-12 * max_abs(a.phi));
  CHECK(max_abs(a.phi_dot - b.state().phi_dot) <= 1e-12 * max_abs(a.phi_dot));
}

TEST_CASE("probability drift over 1e4 steps") {
  const Grid g = Grid::line(256, 20.0);
  const auto V = harmonic(g);
  const auto pairs = eigenpairs_small(V, {}, 2);
  const ScalarField phi = (1.0 / pairs[0].energy) * pairs[0].state +
                          (0.5 / pairs[1].energy) * pairs[1].state;
  PhiVerlet run(make_state(phi, ScalarField(g), V), stable_dt(V, {}));
  auto norm = [&] { return inner(to_wavefunction(run.state()).psi, to_wavefunction(run.state()).psi).real(); };
  const double n0 = norm();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    run.step();
    if (i % 10 == 0) worst = std::max(worst, std::abs(norm() - n0) / n0);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("wave function map") {
  const Grid g = Grid::line(32, 4.0);
  const auto V0 = PotentialSpec::zero(g);
  const QuantumParams p{1.3, 0.7};
  const ScalarField zero(g);
  CHECK(max_abs(to_wavefunction(make_state(zero, zero, V0, p)).psi) == 0.0);

  const double k = 2 * kPi * 3 / 4.0;
  const double Ek = p.hbar * p.hbar * k * k / (2 * p.mass);
  const auto c = sample_fn(g, [&](double x, double, double) { return std::cos(k * x); });
  const auto w = to_wavefunction(make_state((1 / Ek) * c, zero, V0, p));
  CHECK(max_abs(w.psi.real() - c) <= 1e-13);
  CHECK(max_abs(w.psi.imag()) == 0.0);

  const auto alpha = ScalarField::constant(g, 2.5);
  CHECK(max_abs(to_wavefunction(make_state(alpha, zero, V0, p)).psi) <= 1e-12);

  const auto d = white_noise(g, 9);
  CHECK(max_abs(to_wavefunction(make_state(zero, d, V0, p)).psi.imag() - p.hbar * d) == 0.0);
}

TEST_CASE("stationary states") {
  const Grid g = Grid::line(128, 20.0);
  const auto V = harmonic(g);
  const QuantumParams p{};
  const auto pr = eigenpairs_small(V, p, 3)[2];
  const double E = pr.energy;

  const auto s0 = stationary_phi(pr.state, E, 0.0, p, V);
  CHECK(max_abs(s0.phi - (1 / E) * pr.state) == 0.0);
  CHECK(max_abs(s0.phi_dot) == 0.0);
  CHECK(max_abs(to_wavefunction(s0).psi.real() - pr.state) <= 1e-12 * max_abs(pr.state));

  const auto half = stationary_phi(pr.state, E, kPi / E, p, V);
  const auto wh = to_wavefunction(half).psi;
  CHECK(max_abs(wh.real() + pr.state) <= 1e-12 * max_abs(pr.state));
  CHECK(max_abs(wh.imag()) <= 1e-12 * max_abs(pr.state));

  for (double t : {0.3, 1.7, 4.0}) {
    const auto s = stationary_phi(pr.state, E, t, p, V);
    const auto acc = phi_acceleration(s);
    const auto want = (-E * E) * s.phi;
    // roundoff of L applied twice scales with E_max^2
    const double emax = max_energy(V, p);
    CHECK(max_abs(acc - want) <= 1e-12 * emax * emax * max_abs(s.phi));
    // total energy is |psi|^2 / 2 hbar and does not depend on t
    const auto e = energy_density(s);
    CHECK(e.total.values.sum() * g.cell_volume() ==
          doctest::Approx(inner(pr.state, pr.state) / (2 * p.hbar)).epsilon(1e-12));
    CHECK(pointwise_identity(s) <= 1e-12);
  }

  const auto quarter = stationary_phi(pr.state, E, kPi / (4 * E), p, V);
  const auto lag = lagrangian_density(quarter);
  CHECK(std::abs(lag.values.sum()) * g.cell_volume() <= 1e-12);

  const Grid gf = Grid::line(16, 1.0);
  const auto flat = ScalarField::constant(gf, 0.25);
  CHECK_THROWS_AS(stationary_phi(flat, 0.0, 0.0, p, PotentialSpec::zero(gf)), InvalidArgument);
}

TEST_CASE("energy and lagrangian densities") {
  const Grid g = Grid::line(64, 10.0);
  const auto V = harmonic(g);
  const QuantumParams p{0.6, 1.2};
  const ScalarField zero(g);
  const auto ez = energy_density(make_state(zero, zero, V, p));
  CHECK(max_abs(ez.total) == 0.0);
  CHECK(max_abs(lagrangian_density(make_state(zero, zero, V, p))) == 0.0);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = make_state(white_noise(g, seed), white_noise(g, seed + 20), V, p);
    CHECK(pointwise_identity(s) <= 1e-12);
    const auto e = energy_density(s);
    CHECK(max_abs(e.total - (e.kinetic + e.potential)) <= 1e-15 * max_abs(e.total));
    CHECK(e.kinetic.values.minCoeff() >= 0.0);
    CHECK(e.potential.values.minCoeff() >= 0.0);
    CHECK(max_abs(lagrangian_density(s) - (e.kinetic - e.potential)) <= 1e-14 * max_abs(e.total));
  }
}

TEST_CASE("gauge shifts") {
  const Grid g = Grid::line(64, 10.0);
  const auto V0 = PotentialSpec::zero(g);
  const auto s = make_state(smooth_random(g, 1), smooth_random(g, 2), V0);
  const auto shifted = gauge_shift(s, ScalarField::constant(g, 3.0));
  const auto psi = to_wavefunction(s).psi;
  CHECK(max_abs(to_wavefunction(shifted).psi - psi) <= 1e-13 * max_abs(psi));
  CHECK(max_abs(shifted.phi - s.phi - ScalarField::constant(g, 3.0)) <= 1e-15 * 4);
  const auto same = gauge_shift(s, ScalarField(g));
  CHECK(max_abs(same.phi - s.phi) == 0.0);

  const auto V = harmonic(g);
  const auto sh = make_state(smooth_random(g, 1), smooth_random(g, 2), V);
  try {
    (void)gauge_shift(sh, ScalarField::constant(g, 1.0));
    FAIL("expected rejection");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("||L alpha||") != std::string::npos);
  }
  CHECK_THROWS_AS(gauge_shift(s, smooth_random(g, 3)), InvalidArgument);
}

TEST_CASE("state validation") {
  const Grid g = Grid::line(16, 1.0), h = Grid::line(32, 1.0);
  auto s = make_state(ScalarField(g), ScalarField(h), PotentialSpec::zero(g));
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.phi_dot = ScalarField(g);
  s.phi[3] = std::nan("");
  CHECK_THROWS_AS(s.validate(), Error);
}
