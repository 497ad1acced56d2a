#ifndef QDECAY_FORMAT_HPP
#define QDECAY_FORMAT_HPP

#include <string>

namespace qdecay {

/// Round-trip float formatting (17 significant digits) used by every CSV writer.
std::string format_double(double v);

/// Shortest %g form, used in file names and labels ("0.75", "30").
std::string format_short(double v);

}  // namespace qdecay

#endif  // QDECAY_FORMAT_HPP
