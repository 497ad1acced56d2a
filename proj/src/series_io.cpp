#include "qdecay/series_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

void write_series_csv(std::ostream& os, const DecaySeries& s) {
  for (const auto& [k, v] : s.metadata) os << "# " << k << '=' << v << '\n';
  os << "t,p_in,lambda\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    os << format_double(s.times[i]) << ',' << format_double(s.p_in[i]) << ','
       << format_double(s.lambda[i]) << '\n';
}

namespace {

double parse_number(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + text + "' in series CSV", line);
  }
}

}  // namespace

DecaySeries read_series_csv(std::istream& is) {
  DecaySeries s;
  std::string line;
  int no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq != std::string::npos) s.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header) {
      if (line != "t,p_in,lambda") throw ConfigError("expected header t,p_in,lambda", no);
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ConfigError("series row needs three columns", no);
    s.times.push_back(parse_number(a, no));
    s.p_in.push_back(parse_number(b, no));
    s.lambda.push_back(parse_number(c, no));
  }
  if (!header) throw ConfigError("series CSV has no header");
  if (auto m = s.meta("method")) s.method = *m;
  if (auto x = s.meta("x_in")) s.x_in = std::stod(*x);
  if (s.times.size() > 1) s.dt_obs = s.times[1] - s.times[0];
  return s;
}

DecaySeries read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file " + path.string());
  return read_series_csv(in);
}

void write_snapshot_csv(std::ostream& os, const Snapshot& snap) {
  os << "x,density\n";
  for (std::size_t j = 0; j < snap.x.size(); ++j)
    os << format_double(snap.x[j]) << ',' << format_double(snap.density[j]) << '\n';
}

std::string snapshot_file_name(double time) { return "snap_t" + format_short(time) + ".csv"; }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot write " + tmp.string());
    out << content;
    if (!out) throw NumericalError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace qdecay
