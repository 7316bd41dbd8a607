#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "mgn/diagnostics.hpp"
#include "mgn/errors.hpp"
#include "mgn/gn_operators.hpp"

using namespace mgn;
using mgn::test::max_diff;
using mgn::test::random_smooth;

namespace {

const Grid kGrid(256, 4.0);

GNModel model_with(const MultiplierSpec& spec, PhysParams p = {}) {
  return GNModel(kGrid, p, spec);
}

Field sine(double k) {
  return Field::from_function(kGrid, [k](double x) { return std::sin(k * x); });
}

}  // namespace

TEST_CASE("q_i and r_i constant-depth reductions") {
  const auto m = model_with(MultiplierSpec::improved());
  const double c = 1.3;
  const Field h = Field::constant(kGrid, c);
  CHECK(m.q_i(Layer::Upper, h, Field::constant(kGrid, 2.0)).max_abs() < 1e-13);
  CHECK(m.r_i(Layer::Upper, h, Field::constant(kGrid, 2.0)).max_abs() < 1e-13);

  const std::size_t mode = 5;
  const double k = kGrid.wavenumber(mode);
  for (Layer layer : {Layer::Upper, Layer::Lower}) {
    const double F = m.symbol(layer)[mode];
    CHECK(F == eval_F(MultiplierSpec::improved(), layer, k, 0.1, 0.5));
    const Field expect = (c * c * k * k * F * F / 3.0) * sine(k);
    CHECK(max_diff(m.q_i(layer, h, sine(k)), expect) < 1e-11);
  }

  const auto id = model_with(MultiplierSpec::identity());
  const Field r = id.r_i(Layer::Lower, h, sine(k));
  const Field r_expect = Field::from_function(kGrid, [&](double x) {
    const double s = std::sin(k * x), co = std::cos(k * x);
    return c * c * k * k * (0.5 * co * co - s * s / 3.0);
  });
  CHECK(max_diff(r, r_expect) < 1e-11);
  CHECK_THROWS_AS(id.q_i(Layer::Upper, Field::constant(kGrid, 0.0), sine(k)), StateError);
}

TEST_CASE("apply_AF at flat interface is the flat symbol") {
  for (const auto& spec : {MultiplierSpec::identity(), MultiplierSpec::regularized_natural(0.5),
                           MultiplierSpec::improved()}) {
    const auto m = model_with(spec);
    const PhysParams p;
    const std::size_t mode = 9;
    const double k = kGrid.wavenumber(mode);
    const double F1 = eval_F(spec, Layer::Upper, k, p.mu, p.delta);
    const double F2 = eval_F(spec, Layer::Lower, k, p.mu, p.delta);
    const double bbar =
        (p.gamma + p.delta) + (p.mu / 3.0) * (F2 * F2 / p.delta + p.gamma * F1 * F1) * k * k;
    CHECK(m.flat_symbol()[mode] == doctest::Approx(bbar).epsilon(1e-14));
    const Field out = m.apply_AF(Field(kGrid), sine(k));
    CHECK(max_diff(out, bbar * sine(k)) < 1e-12 * bbar);
    CHECK(m.apply_AF(Field(kGrid), Field(kGrid)).max_abs() == 0.0);
  }
}

TEST_CASE("apply_AF local part with gamma = 0 and mu = 0") {
  PhysParams p;
  p.gamma = 0.0;
  p.mu = 0.0;
  const auto m = model_with(MultiplierSpec::improved(), p);
  std::mt19937_64 rng(3);
  const Field zeta = random_smooth(kGrid, rng, 0.5);
  const Field w = random_smooth(kGrid, rng, 1.0);
  CHECK(max_diff(m.apply_AF(zeta, w), w / m.h2(zeta)) < 1e-14);
}

TEST_CASE("apply_AF is symmetric and positive") {
  std::mt19937_64 rng(11);
  for (const auto& spec : {MultiplierSpec::identity(), MultiplierSpec::regularized_natural(0.5),
                           MultiplierSpec::improved()}) {
    const auto m = model_with(spec);
    for (int trial = 0; trial < 10; ++trial) {
      const Field zeta = random_smooth(kGrid, rng, 1.0);  // eps zeta up to 0.5
      const Field w = random_smooth(kGrid, rng, 1.0, 12);
      const Field g = random_smooth(kGrid, rng, 1.0, 12);
      const double awg = inner(m.apply_AF(zeta, w), g);
      const double wag = inner(w, m.apply_AF(zeta, g));
      CHECK(std::abs(awg - wag) <= 1e-12 * std::abs(awg) + 1e-14);
      CHECK(inner(m.apply_AF(zeta, w), w) > 0.0);
    }
  }
}

TEST_CASE("invert_AF") {
  std::mt19937_64 rng(5);
  for (const auto& spec : {MultiplierSpec::identity(), MultiplierSpec::regularized_natural(0.5),
                           MultiplierSpec::improved()}) {
    const auto m = model_with(spec);
    const Field v = random_smooth(kGrid, rng, 1.0, 20);

    // Flat interface: exact Fourier division, one CG iteration at most.
    CgStats st;
    const Field w_flat = m.invert_AF(Field(kGrid), v, nullptr, &st);
    Symbol inv_flat(std::vector<double>(m.flat_symbol().size()));
    {
      std::vector<double> s(m.flat_symbol().size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / m.flat_symbol()[i];
      inv_flat = Symbol(s);
    }
    CHECK(max_diff(w_flat, apply_symbol(v, inv_flat)) <= 1e-13);
    CHECK(st.iterations <= 1);

    CHECK(m.invert_AF(Field(kGrid), Field(kGrid)).max_abs() == 0.0);

    const Field zeta = random_smooth(kGrid, rng, 1.0);
    const Field w = m.invert_AF(zeta, v, nullptr, &st);
    const Field res = m.apply_AF(zeta, w) - v;
    CHECK(std::sqrt(inner(res, res) / inner(v, v)) <= 1e-12);
    CHECK(st.relative_residual <= 1e-12);

    // A warm start at the answer needs no further iterations.
    CgStats warm;
    m.invert_AF(zeta, v, &w, &warm);
    CHECK(warm.iterations == 0);
  }
}

TEST_CASE("invert_AF reports non-convergence with its history") {
  const GNModel m(kGrid, PhysParams{}, MultiplierSpec::identity(), CgOptions{1e-14, 2});
  std::mt19937_64 rng(8);
  const Field zeta = random_smooth(kGrid, rng, 1.5);
  const Field v = random_smooth(kGrid, rng, 1.0, 30);
  try {
    m.invert_AF(zeta, v);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual_history().size() >= 2);
  }
}

TEST_CASE("cavitation is a state error") {
  const auto m = model_with(MultiplierSpec::identity());
  const Field deep = Field::constant(kGrid, 2.0);  // h1 = 1 - 0.5*2 = 0
  CHECK_THROWS_AS(m.apply_AF(deep, Field(kGrid)), StateError);
  CHECK_THROWS_AS(m.invert_AF(deep, Field::constant(kGrid, 1.0)), StateError);
  GNWorkspace ws;
  CHECK_THROWS_AS(m.rhs({deep, Field(kGrid)}, ws), StateError);
}

TEST_CASE("surface tension term") {
  PhysParams p;
  p.inv_bond = 0.0;
  CHECK(model_with(MultiplierSpec::identity(), p).surface_tension_term(sine(1.0)).max_abs() == 0.0);

  p = PhysParams{};
  p.mu = 0.0;
  const auto lin = model_with(MultiplierSpec::identity(), p);
  const double k = kGrid.wavenumber(4);
  const Field expect = Field::from_function(kGrid, [&](double x) {
    return (p.gamma + p.delta) * p.inv_bond * (-k * k * k) * std::cos(k * x);
  });
  CHECK(max_diff(lin.surface_tension_term(sine(k)), expect) < 1e-12);

  // Second-order finite differences of the analytic flux converge to the spectral value.
  p = PhysParams{};
  const auto m = model_with(MultiplierSpec::identity(), p);
  const double L = kGrid.length();
  const double q = 2 * std::numbers::pi / L;
  auto zx = [&](double x) { return 1.5 * q * std::cos(q * x) * std::exp(std::sin(q * x)); };
  const double s = p.mu * p.epsilon * p.epsilon;
  auto flux = [&](double x) { return zx(x) / std::sqrt(1.0 + s * zx(x) * zx(x)); };
  const Field zeta = Field::from_function(kGrid, [&](double x) { return 1.5 * std::exp(std::sin(q * x)); });
  const Field spectral = m.surface_tension_term(zeta);
  auto fd_err = [&](double h) {
    double err = 0.0;
    for (std::size_t j = 0; j < kGrid.size(); ++j) {
      const double x = kGrid.node(j);
      const double fd = (flux(x + h) - 2 * flux(x) + flux(x - h)) / (h * h);
      err = std::max(err, std::abs((p.gamma + p.delta) * p.inv_bond * fd - spectral[j]));
    }
    return err;
  };
  const double e1 = fd_err(1e-2), e2 = fd_err(5e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rest state is steady") {
  for (const auto& spec : {MultiplierSpec::identity(), MultiplierSpec::improved()}) {
    const auto m = model_with(spec);
    GNWorkspace ws;
    auto [dz, dv] = m.rhs({Field(kGrid), Field(kGrid)}, ws);
    CHECK(dz.max_abs() == 0.0);
    CHECK(dv.max_abs() == 0.0);
  }
}

TEST_CASE("rhs at mu = 0 ignores the multiplier") {
  PhysParams p;
  p.mu = 0.0;
  std::mt19937_64 rng(21);
  const Field zeta = random_smooth(kGrid, rng, 0.8);
  const Field v = random_smooth(kGrid, rng, 0.5);
  GNWorkspace w1, w2, w3;
  const auto a = model_with(MultiplierSpec::identity(), p).rhs({zeta, v}, w1);
  const auto b = model_with(MultiplierSpec::improved(), p).rhs({zeta, v}, w2);
  const auto c = model_with(MultiplierSpec::regularized(0.3, 0.7), p).rhs({zeta, v}, w3);
  CHECK(max_diff(a.first, b.first) == 0.0);
  CHECK(max_diff(a.second, b.second) == 0.0);
  CHECK(max_diff(a.second, c.second) == 0.0);
}

TEST_CASE("w_to_velocities") {
  const auto m = model_with(MultiplierSpec::identity());
  auto [u1, u2] = m.w_to_velocities(Field(kGrid), Field::constant(kGrid, 1.0));
  CHECK(max_diff(u1, Field::constant(kGrid, -1.0)) == 0.0);
  CHECK(max_diff(u2, Field::constant(kGrid, 0.5)) == 0.0);
  auto [z1, z2] = m.w_to_velocities(Field(kGrid), Field(kGrid));
  CHECK(z1.max_abs() == 0.0);
  CHECK(z2.max_abs() == 0.0);
  std::mt19937_64 rng(2);
  const Field zeta = random_smooth(kGrid, rng, 1.0);
  const Field w = random_smooth(kGrid, rng, 1.0);
  auto [a, b] = m.w_to_velocities(zeta, w);
  CHECK((m.h1(zeta) * a + m.h2(zeta) * b).max_abs() < 1e-15);
}

TEST_CASE("Hamiltonian gradients match finite differences") {
  std::mt19937_64 rng(17);
  const auto m = model_with(MultiplierSpec::regularized_natural(0.5));
  const Field zeta = random_smooth(kGrid, rng, 0.8);
  const Field v = random_smooth(kGrid, rng, 0.5);
  const Field phi = random_smooth(kGrid, rng, 1.0);
  const Field w = m.invert_AF(zeta, v);
  const double dz_exact = inner(m.dH_dzeta(zeta, w), phi);
  const double dv_exact = inner(w, phi);
  auto fd = [&](double h, bool in_zeta) {
    if (in_zeta) {
      return (hamiltonian(m, zeta + h * phi, v) - hamiltonian(m, zeta - h * phi, v)) / (2 * h);
    }
    return (hamiltonian(m, zeta, v + h * phi) - hamiltonian(m, zeta, v - h * phi)) / (2 * h);
  };
  const double e2 = std::abs(fd(1e-2, true) - dz_exact);
  const double e3 = std::abs(fd(1e-3, true) - dz_exact);
  CHECK(std::log10(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::abs(fd(1e-3, false) - dv_exact) <= 1e-10 * std::abs(dv_exact));
}

TEST_CASE("hyperbolicity margin") {
  const auto m = model_with(MultiplierSpec::identity());
  CHECK(m.hyperbolicity_margin(Field(kGrid), Field(kGrid)) == doctest::Approx(1.45));
  const PhysParams p;
  const double w = 0.4;
  const double expect = 1.45 - p.epsilon * p.epsilon * (std::pow(p.delta, 3) + p.gamma) * w * w;
  CHECK(m.hyperbolicity_margin(Field(kGrid), Field::constant(kGrid, w)) ==
        doctest::Approx(expect).epsilon(1e-14));
}
