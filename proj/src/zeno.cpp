#include "qdecay/zeno.hpp"

#include <cmath>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

namespace {

constexpr double kHbarMeVs = 6.582119569e-22;

}  // namespace

double hbar_in(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::MeV:
      return kHbarMeVs;
    case EnergyUnit::eV:
      return kHbarMeVs * 1e6;
    case EnergyUnit::natural:
      break;
  }
  return 1.0;
}

EnergyUnit parse_energy_unit(const std::string& text) {
  if (text == "eV" || text == "ev") return EnergyUnit::eV;
  if (text == "MeV" || text == "mev") return EnergyUnit::MeV;
  if (text == "natural") return EnergyUnit::natural;
  throw ValidationError("unknown energy unit '" + text + "' (expected eV, MeV or natural)");
}

std::string to_string(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::MeV:
      return "MeV";
    case EnergyUnit::eV:
      return "eV";
    case EnergyUnit::natural:
      break;
  }
  return "natural";
}

double zeno_time(const ZenoInput& input) {
  if (!(input.barrier_height > 0.0) || !std::isfinite(input.barrier_height))
    throw DomainError("Zeno time needs a positive barrier height");
  return hbar_in(input.unit) / input.barrier_height;
}

double short_time_survival(double t, double t_z) {
  if (!(t_z > 0.0)) throw DomainError("Zeno time must be positive");
  if (!(std::abs(t) < t_z)) throw DomainError("short-time expansion used at |t| >= t_z");
  const double r = t / t_z;
  return 1.0 - r * r;
}

ShortTimeFit fit_short_time_law(std::span<const double> times, std::span<const double> p) {
  if (times.size() != p.size() || times.size() < 2)
    throw DomainError("short-time fit needs at least two (t, p) samples");
  // Linear least squares in u = t^2.
  double su = 0, sp = 0, suu = 0, sup = 0;
  const double n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double u = times[i] * times[i];
    su += u;
    sp += p[i];
    suu += u * u;
    sup += u * p[i];
  }
  const double det = n * suu - su * su;
  if (!(std::abs(det) > 0.0)) throw DomainError("short-time fit is degenerate");
  const double slope = (n * sup - su * sp) / det;
  const double p0 = (sp - slope * su) / n;
  const double c = -slope;
  const double tz = c > 0.0 && p0 > 0.0 ? 1.0 / std::sqrt(c / p0) : INFINITY;
  return {p0, c, tz};
}

std::string zeno_verdict(double t_z, double measurement_interval) {
  if (!(measurement_interval > 0.0)) throw DomainError("measurement interval must be positive");
  const std::string tz = format_short(t_z);
  const std::string dt = format_short(measurement_interval);
  if (t_z < measurement_interval)
    return "t_z = " + tz + " lies below the measurement interval " + dt +
           ": repeated measurements cannot hold the state, lambda is unaffected.";
  return "t_z = " + tz + " exceeds the measurement interval " + dt +
         ": repeated measurements can slow the decay (Zeno regime).";
}

}  // namespace qdecay
