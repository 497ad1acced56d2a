#include <doctest.h>

#include <cmath>

#include "qdecay/error.hpp"
#include "qdecay/potential.hpp"

using namespace qdecay;

TEST_CASE("single barrier segments") {
  const PotentialSpec p = single_barrier(1.5, 2.25, 3.0);
  REQUIRE(p.size() == 2);
  CHECK(p.segments()[0] == Segment{0.0, 1.5, 0.0});
  CHECK(p.segments()[1] == Segment{1.5, 2.25, 3.0});
  CHECK(single_barrier(1.5, 1.7, 3.0).segments()[1].width() == doctest::Approx(0.2));
  CHECK_THROWS_AS(single_barrier(1.0, 2.0, 0.0), ValidationError);
  CHECK_THROWS_AS(single_barrier(2.0, 1.0, 3.0), ValidationError);
  CHECK_THROWS_AS(single_barrier(0.0, 1.0, 3.0), ValidationError);
}

TEST_CASE("segment validation") {
  CHECK_THROWS_AS(PotentialSpec({}), ValidationError);
  CHECK_THROWS_AS(PotentialSpec({{0.5, 1.0, 1.0}}), ValidationError);                    // not at 0
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0, 1.0}, {1.2, 2.0, 1.0}}), ValidationError);   // gap
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0, 1.0}, {0.8, 2.0, 1.0}}), ValidationError);   // overlap
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0, 1.0}, {1.0, 0.5, 1.0}}), ValidationError);   // reversed
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0, -1.0}}), ValidationError);
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0, NAN}}), ValidationError);
  CHECK_NOTHROW(PotentialSpec({{0.0, 1.0, 0.0}, {1.0, 2.0, 2.0}}));
}

TEST_CASE("cut oscillator bars") {
  const CutHarmonicSpec ho{0.28, 6.0};
  const PotentialSpec one = discretize_cut_harmonic(ho, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.segments()[0].x_end == doctest::Approx(3.0));
  CHECK(one.segments()[0].v == doctest::Approx(0.315).epsilon(1e-14));

  const PotentialSpec six = discretize_cut_harmonic(ho, 6);
  REQUIRE(six.size() == 6);
  for (std::size_t j = 0; j < 6; ++j) {
    const double mid = 0.25 + 0.5 * static_cast<double>(j);
    CHECK(six.segments()[j].width() == doctest::Approx(0.5));
    CHECK(six.segments()[j].v == doctest::Approx(0.5 * 0.28 * mid * mid).epsilon(1e-14));
    CHECK(eval_potential(six, mid) == 0.5 * 0.28 * mid * mid);
    if (j > 0) CHECK(six.segments()[j].v >= six.segments()[j - 1].v);
  }
  CHECK_THROWS_AS(discretize_cut_harmonic(ho, 0), ValidationError);
  CHECK_THROWS_AS(discretize_cut_harmonic({0.28, 0.0}, 3), ValidationError);
  CHECK_THROWS_AS(discretize_cut_harmonic({0.0, 6.0}, 3), ValidationError);
}

TEST_CASE("stair converges within the Lipschitz bound") {
  const CutHarmonicSpec ho{0.28, 6.0};
  for (std::size_t n : {1u, 2u, 5u, 13u, 40u}) {
    const PotentialSpec s = discretize_cut_harmonic(ho, n);
    const double bound = 0.5 * ho.alpha * (ho.beta / 2.0) * (ho.beta / (2.0 * static_cast<double>(n)));
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
      const double x = 3.0 * i / 3000.0;
      worst = std::max(worst, std::abs(eval_potential(s, x) - eval_potential(ho, x)));
    }
    CHECK(worst <= bound);
  }
}

TEST_CASE("eval_potential") {
  const CutHarmonicSpec ho{0.28, 6.0};
  CHECK(eval_potential(ho, 3.0) == doctest::Approx(1.26).epsilon(1e-14));
  CHECK(eval_potential(ho, 4.0) == 0.0);
  CHECK(eval_potential(single_barrier(1.5, 2.25, 3.0), 2.0) == 3.0);
  CHECK(eval_potential(single_barrier(1.5, 2.25, 3.0), 1.0) == 0.0);
  CHECK(eval_potential(single_barrier(1.5, 2.25, 3.0), 5.0) == 0.0);
  CHECK_THROWS_AS(eval_potential(ho, -0.1), DomainError);
  CHECK_THROWS_AS(eval_potential(single_barrier(1.5, 2.25, 3.0), -1e-9), DomainError);
  const AnyPotential any = ho;
  CHECK(max_height(any) == doctest::Approx(1.26));
  CHECK(outer_edge(any) == 3.0);
}

TEST_CASE("cell averages") {
  const PotentialSpec p = single_barrier(1.5, 2.25, 3.0);
  CHECK(cell_average(p, 1.5, 0.1) == doctest::Approx(1.5));  // jump on the node
  CHECK(cell_average(p, 2.0, 0.1) == doctest::Approx(3.0));
  const CutHarmonicSpec ho{0.28, 6.0};
  // Mean of 0.14 x^2 over [2.9, 3.0] plus zero over [3.0, 3.1].
  CHECK(cell_average(ho, 3.0, 0.2) == doctest::Approx(0.14 * (27.0 - 24.389) / 3.0 / 0.2));
  CHECK(cell_average(ho, 1.0, 0.01) == doctest::Approx(0.14 * (1.0 + 0.01 * 0.01 / 12.0)));
}
