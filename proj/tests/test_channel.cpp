#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gfastsim/channel.hpp"
#include "gfastsim/profile.hpp"
#include "gfastsim/rng.hpp"
#include "gfastsim/types.hpp"

using namespace gfastsim;

TEST_SUITE_BEGIN("channel");

TEST_CASE("insertion loss polynomial") {
  CableModel cad = make_cable("cad55");
  CHECK(cad.il_a0 == doctest::Approx(1.0));
  CHECK(cad.il_a1 == doctest::Approx(3.8));
  CHECK(cad.il_a2 == doctest::Approx(0.06));
  // 100 m at 100 MHz: 1 + 38 + 6 dB.
  CHECK(insertion_loss_db(cad, 100e6, 100.0) == doctest::Approx(45.0));
  CHECK(std::abs(direct_gain(cad, 100e6, 100.0)) ==
        doctest::Approx(5.6234e-3).epsilon(1e-4));

  CableModel cat = make_cable("cat5");
  CHECK(insertion_loss_db(cat, 100e6, 100.0) == doctest::Approx(35.0));

  CHECK(direct_gain(cat, 10e6, 0.0) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(insertion_loss_db(cat, 10e6, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(insertion_loss_db(cat, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_cable("coax"), std::invalid_argument);
}

TEST_CASE("direct gain phase") {
  CableModel cat = make_cable("cat5");
  // Propagation delay l / 2e8: at 1 MHz over 50 m the phase is -pi/2.
  Complex g = direct_gain(cat, 1e6, 50.0);
  double mag = std::pow(10.0, -insertion_loss_db(cat, 1e6, 50.0) / 20.0);
  CHECK(g.real() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(g.imag() == doctest::Approx(-mag));
}

TEST_CASE("fext coupling mean") {
  CableModel cat = make_cable("cat5");
  CHECK(fext_coupling_std(cat, 10e6, 0.0, 1.0) == 0.0);
  // f^2 law below the breakpoint.
  double p1 = fext_coupling_std(cat, 10e6, 100.0, 1.0);
  double p2 = fext_coupling_std(cat, 20e6, 100.0, 1.0);
  CHECK(p2 / p1 == doctest::Approx(4.0).epsilon(1e-12));
  // Linear in coupling length.
  CHECK(fext_coupling_std(cat, 10e6, 200.0, 1.0) / p1 ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Calibration: -38 dB mean coupling at 10 MHz / 100 m.
  CHECK(lin_to_db(p1) == doctest::Approx(-38.0).epsilon(1e-9));
  CableModel cad = make_cable("cad55");
  CHECK(lin_to_db(fext_coupling_std(cad, 10e6, 100.0, 1.0)) ==
        doctest::Approx(-36.0).epsilon(1e-9));
}

TEST_CASE("fext dual slope") {
  CableModel cat = make_cable("cat5");
  double below = fext_coupling_std(cat, 75e6 * (1 - 1e-9), 100.0, 1.0);
  double above = fext_coupling_std(cat, 75e6 * (1 + 1e-9), 100.0, 1.0);
  CHECK(above / below == doctest::Approx(1.0).epsilon(1e-6));
  // Above the breakpoint the effective frequency grows as f^1.2.
  double p75 = fext_coupling_std(cat, 75e6, 100.0, 1.0);
  double p150 = fext_coupling_std(cat, 150e6, 100.0, 1.0);
  CHECK(p150 / p75 == doctest::Approx(std::pow(2.0, 2.4)).epsilon(1e-9));
}

TEST_CASE("binder topologies") {
  CableModel cat = make_cable("cat5");
  BinderTopology eq = equal_binder(4, 100.0, cat);
  CHECK(eq.lines == 4);
  CHECK(eq.length_m == std::vector<double>{100, 100, 100, 100});
  CHECK(coupling_length_m(eq, 0, 3) == doctest::Approx(100.0));

  BinderTopology sp = spread_binder(50.0, 400.0, 25.0, cat);
  CHECK(sp.lines == 15);
  CHECK(sp.length_m.front() == doctest::Approx(50.0));
  CHECK(sp.length_m.back() == doctest::Approx(400.0));
  CHECK(coupling_length_m(sp, 2, 9) == doctest::Approx(100.0));  // min(100, 275)

  CHECK_THROWS_AS(equal_binder(0, 100.0, cat), std::invalid_argument);
  CHECK_THROWS_AS(spread_binder(400.0, 50.0, 25.0, cat), std::invalid_argument);
}

TEST_CASE("channel matrix structure") {
  CableModel cat = make_cable("cat5");
  BinderTopology one = equal_binder(1, 150.0, cat);
  MatrixC h1 = channel_matrix(one, 10e6, 193, 7);
  CHECK(h1.rows() == 1);
  CHECK(h1(0, 0) == direct_gain(cat, 10e6, 150.0));  // no randomness for N=1

  BinderTopology four = equal_binder(4, 100.0, cat);
  MatrixC a = channel_matrix(four, 10e6, 193, 7);
  MatrixC b = channel_matrix(four, 10e6, 193, 7);
  CHECK(a == b);
  MatrixC c = channel_matrix(four, 10e6, 193, 8);
  CHECK(a != c);
  for (int i = 0; i < 4; ++i)
    CHECK(a(i, i) == direct_gain(cat, 10e6, 100.0));
}

TEST_CASE("tensor determinism and reciprocity") {
  SystemProfile p = make_profile("gfast106");
  CableModel cat = make_cable("cat5");
  BinderTopology t = equal_binder(3, 120.0, cat);
  ChannelTensor up = generate_channel(t, p, 11, Direction::upstream, 256);
  ChannelTensor up2 = generate_channel(t, p, 11, Direction::upstream, 256);
  ChannelTensor down = generate_channel(t, p, 11, Direction::downstream, 256);
  REQUIRE(up.h.size() == up.tones.size());
  CHECK(up.tones.front() == 43);
  for (std::size_t k = 0; k < up.h.size(); ++k) {
    CHECK(up.h[k] == up2.h[k]);
    CHECK(up.h[k].transpose() == down.h[k]);  // TDD reciprocity, same seed
  }
  CHECK(up.length_m == std::vector<double>{120, 120, 120});
}

TEST_CASE("fext offsets are per pair, phases per tone") {
  CableModel cat = make_cable("cat5");
  BinderTopology t = equal_binder(2, 100.0, cat);
  MatrixC k1 = channel_matrix(t, tone_frequency(make_profile("gfast106"), 400),
                              400, 3);
  MatrixC k2 = channel_matrix(t, tone_frequency(make_profile("gfast106"), 401),
                              401, 3);
  double f1 = tone_frequency(make_profile("gfast106"), 400);
  double f2 = tone_frequency(make_profile("gfast106"), 401);
  // The per-pair log-normal offset is common to every tone, so the magnitude
  // ratio between adjacent tones is the deterministic f^2 slope.
  double want = std::sqrt(fext_coupling_std(cat, f2, 100.0, 1.0) /
                          fext_coupling_std(cat, f1, 100.0, 1.0));
  double direct_ratio = std::abs(direct_gain(cat, f2, 100.0)) /
                        std::abs(direct_gain(cat, f1, 100.0));
  CHECK(std::abs(k2(0, 1)) / std::abs(k1(0, 1)) ==
        doctest::Approx(want * direct_ratio).epsilon(1e-9));
  // Phases still differ per tone.
  CHECK(std::arg(k2(0, 1)) != std::arg(k1(0, 1)));
}

TEST_CASE("monte carlo fext mean") {
  CableModel cat = make_cable("cat5");
  BinderTopology t = equal_binder(2, 100.0, cat);
  double f = 50.33e6;
  double direct = std::norm(direct_gain(cat, f, 100.0));
  double want = fext_coupling_std(cat, f, 100.0, direct);
  double acc = 0;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s)
    acc += std::norm(channel_matrix(t, f, 900, static_cast<std::uint64_t>(s))(0, 1));
  CHECK(acc / trials == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("diagonal dominance") {
  MatrixC id = MatrixC::Identity(3, 3);
  DiagDominance d0 = diag_dominance(id);
  CHECK(d0.beta_row == 0.0);
  CHECK(d0.beta_col == 0.0);
  CHECK(d0.beta == 0.0);

  MatrixC h(2, 2);
  h << 1.0, 0.3, 0.3, 1.0;
  DiagDominance d1 = diag_dominance(h);
  CHECK(d1.beta == doctest::Approx(0.3));

  MatrixC g(2, 2);
  g << 1.0, 0.5, 0.1, 1.0;
  DiagDominance d2 = diag_dominance(g);
  CHECK(d2.beta_row == doctest::Approx(0.5));
  CHECK(d2.beta_col == doctest::Approx(0.5));
  CHECK(d2.beta == doctest::Approx(0.5));

  MatrixC z = MatrixC::Zero(2, 2);
  z(0, 1) = 1.0;
  z(1, 0) = 1.0;
  CHECK_THROWS_AS(diag_dominance(z), SingularDiagonalError);
}

TEST_CASE("rng streams") {
  // Stream keys separate tags and indices.
  CHECK(stream_key(1, kPairOffsetTag, 0, 1) != stream_key(1, kPairOffsetTag, 1, 0));
  CHECK(stream_key(1, kPairOffsetTag, 0, 1) != stream_key(2, kPairOffsetTag, 0, 1));
  CHECK(stream_key(1, kPairOffsetTag) != stream_key(1, kTonePhaseTag));
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  // Box-Muller moments, fixed stream.
  Rng n(7);
  double m1 = 0, m2 = 0;
  const int cnt = 200000;
  for (int i = 0; i < cnt; ++i) {
    double v = n.normal();
    m1 += v;
    m2 += v * v;
  }
  CHECK(m1 / cnt == doctest::Approx(0.0).epsilon(0.01));
  CHECK(m2 / cnt == doctest::Approx(1.0).epsilon(0.01));
}

TEST_SUITE_END();
