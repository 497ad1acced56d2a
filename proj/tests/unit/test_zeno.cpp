#include <doctest.h>

#include <cmath>
#include <vector>

#include "qdecay/error.hpp"
#include "qdecay/zeno.hpp"

using namespace qdecay;

TEST_CASE("Zeno time for nuclear and atomic barriers") {
  CHECK(zeno_time({4.0, EnergyUnit::MeV}) == doctest::Approx(1.64553e-22).epsilon(1e-5));
  CHECK(zeno_time({4.0, EnergyUnit::eV}) == doctest::Approx(1.64553e-16).epsilon(1e-5));
  CHECK(zeno_time({3.0}) == doctest::Approx(1.0 / 3.0));
  for (double v = 1.0; v <= 10.0; v += 1.0) {
    const double t = zeno_time({v, EnergyUnit::MeV});
    CHECK(t > 6e-23);
    CHECK(t < 7e-22);
  }
  CHECK_THROWS_AS(zeno_time({0.0}), DomainError);
  CHECK_THROWS_AS(zeno_time({-1.0, EnergyUnit::eV}), DomainError);
}

TEST_CASE("energy units") {
  CHECK(parse_energy_unit("MeV") == EnergyUnit::MeV);
  CHECK(parse_energy_unit("eV") == EnergyUnit::eV);
  CHECK(parse_energy_unit("natural") == EnergyUnit::natural);
  CHECK_THROWS_AS(parse_energy_unit("keV"), ValidationError);
  CHECK(to_string(EnergyUnit::MeV) == "MeV");
  CHECK(hbar_in(EnergyUnit::eV) == doctest::Approx(6.582119569e-16));
}

TEST_CASE("short-time law") {
  CHECK(short_time_survival(0.0, 2.0) == 1.0);
  CHECK(short_time_survival(1.0, 2.0) == 0.75);
  CHECK_THROWS_AS(short_time_survival(2.0, 2.0), DomainError);
  CHECK_THROWS_AS(short_time_survival(0.1, 0.0), DomainError);

  std::vector<double> t, p;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.01 * i);
    p.push_back(0.9 * short_time_survival(0.01 * i, 0.5));
  }
  const ShortTimeFit f = fit_short_time_law(t, p);
  CHECK(f.p0 == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(f.c == doctest::Approx(0.9 / 0.25).epsilon(1e-10));
  CHECK(f.zeno_time == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(fit_short_time_law(std::vector<double>{0.1}, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("verdict") {
  const std::string fast = zeno_verdict(1.6e-22, 1e-9);
  CHECK(fast.find("unaffected") != std::string::npos);
  const std::string slow = zeno_verdict(1.0, 0.1);
  CHECK(slow.find("slow the decay") != std::string::npos);
  CHECK_THROWS_AS(zeno_verdict(1.0, 0.0), DomainError);
}
