#ifndef QDECAY_ZENO_HPP
#define QDECAY_ZENO_HPP

#include <span>
#include <string>

namespace qdecay {

enum class EnergyUnit { natural, eV, MeV };

/// hbar in units of [energy unit] * s; 1 for natural units.
double hbar_in(EnergyUnit unit);

EnergyUnit parse_energy_unit(const std::string& text);
std::string to_string(EnergyUnit unit);

struct ZenoInput {
  double barrier_height;
  EnergyUnit unit = EnergyUnit::natural;
};

/// t_z = hbar / V: the interaction-squared expectation of a constant barrier
/// is V^2. Seconds for eV / MeV input, natural time otherwise.
double zeno_time(const ZenoInput& input);

/// 1 - (t/t_z)^2; DomainError outside 0 <= |t| < t_z.
double short_time_survival(double t, double t_z);

/// Least-squares fit of p(t) = p0 - c t^2 on the given samples (t, p).
struct ShortTimeFit {
  double p0;
  double c;
  double zeno_time;  // 1/sqrt(c / p0)
};
ShortTimeFit fit_short_time_law(std::span<const double> times, std::span<const double> p);

/// Sentence comparing t_z with a measurement interval.
std::string zeno_verdict(double t_z, double measurement_interval);

}  // namespace qdecay

#endif  // QDECAY_ZENO_HPP
