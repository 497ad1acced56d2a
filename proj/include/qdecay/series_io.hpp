#ifndef QDECAY_SERIES_IO_HPP
#define QDECAY_SERIES_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "qdecay/evolution.hpp"
#include "qdecay/leapfrog.hpp"

namespace qdecay {

/// `# key=value` metadata lines, then header `t,p_in,lambda`, 17-digit floats.
void write_series_csv(std::ostream& os, const DecaySeries& series);
DecaySeries read_series_csv(std::istream& is);
DecaySeries read_series_file(const std::filesystem::path& path);

/// Header `x,density`.
void write_snapshot_csv(std::ostream& os, const Snapshot& snap);

/// `snap_t<time>.csv` with the shortest time form, e.g. snap_t30.csv.
std::string snapshot_file_name(double time);

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qdecay

#endif  // QDECAY_SERIES_IO_HPP
