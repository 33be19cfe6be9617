#include "liepulse/formats.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "liepulse/errors.hpp"

namespace liepulse {
namespace {

// Non-comment, non-blank lines with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      tokens.clear();
      std::istringstream ss(line);
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      return true;
    }
    return false;
  }

  std::vector<std::string> expect(const char* what) {
    std::vector<std::string> tokens;
    if (!next(tokens)) throw FormatError(std::string("unexpected end of input, expected ") + what, number_);
    return tokens;
  }

  std::size_t line() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("not a number: '" + s + "'", line);
  return v;
}

long parse_int(const std::string& s, std::size_t line) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("not an integer: '" + s + "'", line);
  return v;
}

std::vector<std::string> keyed(LineReader& r, const std::string& key, std::size_t min_values) {
  auto tok = r.expect(key.c_str());
  if (tok.empty() || tok[0] != key) throw FormatError("expected '" + key + "'", r.line());
  if (tok.size() < 1 + min_values) throw FormatError("'" + key + "' needs a value", r.line());
  return tok;
}

}  // namespace

std::string format_number(double v, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

void write_decomposition(std::ostream& out, const DecompositionResult& d) {
  out << "# liepulse decomposition\n";
  out << "mode " << (d.mode == DecompositionMode::exact ? "exact" : "mod_phase") << '\n';
  out << "levels " << d.residual_phases.size() << '\n';
  out << "global_phase " << format_number(d.global_phase) << '\n';
  out << "residual_phases";
  for (double th : d.residual_phases) out << ' ' << format_number(th);
  out << '\n';
  out << "factors " << d.factors.size() << '\n';
  out << "# k m C phi\n";
  for (std::size_t k = 0; k < d.factors.size(); ++k) {
    const auto& f = d.factors[k];
    out << k + 1 << ' ' << f.transition << ' ' << format_number(f.angle) << ' ' << format_number(f.phase) << '\n';
  }
}

DecompositionResult read_decomposition(std::istream& in) {
  LineReader r(in);
  DecompositionResult d;
  auto tok = keyed(r, "mode", 1);
  if (tok[1] == "exact")
    d.mode = DecompositionMode::exact;
  else if (tok[1] == "mod_phase")
    d.mode = DecompositionMode::mod_phase;
  else
    throw FormatError("unknown mode '" + tok[1] + "'", r.line());

  tok = keyed(r, "levels", 1);
  const long levels = parse_int(tok[1], r.line());
  if (levels < 0) throw FormatError("levels must be non-negative", r.line());
  tok = keyed(r, "global_phase", 1);
  d.global_phase = parse_double(tok[1], r.line());
  tok = keyed(r, "residual_phases", 0);
  if (tok.size() != static_cast<std::size_t>(levels) + 1)
    throw FormatError("expected " + std::to_string(levels) + " residual phases", r.line());
  for (std::size_t i = 1; i < tok.size(); ++i) d.residual_phases.push_back(parse_double(tok[i], r.line()));
  tok = keyed(r, "factors", 1);
  const long count = parse_int(tok[1], r.line());
  if (count < 0) throw FormatError("factor count must be non-negative", r.line());
  for (long k = 0; k < count; ++k) {
    tok = r.expect("a factor line");
    if (tok.size() != 4) throw FormatError("factor line needs 'k m C phi'", r.line());
    if (parse_int(tok[0], r.line()) != k + 1) throw FormatError("factor index out of sequence", r.line());
    FactorSpec f;
    f.transition = static_cast<int>(parse_int(tok[1], r.line()));
    if (f.transition < 1 || (levels > 0 && f.transition >= levels))
      throw FormatError("transition " + tok[1] + " out of range", r.line());
    f.angle = parse_double(tok[2], r.line());
    f.phase = parse_double(tok[3], r.line());
    d.factors.push_back(f);
  }
  std::vector<std::string> extra;
  if (r.next(extra)) throw FormatError("trailing content after the last factor", r.line());
  return d;
}

std::uint64_t system_hash(const SystemModel& system) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  feed("E");
  for (double e : system.energies()) feed(format_number(e) + ";");
  feed("d");
  for (double d : system.dipoles()) feed(format_number(d) + ";");
  return h;
}

void write_schedule(std::ostream& out, const PulseSchedule& schedule, const SystemModel& system) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "0x%016" PRIx64, system_hash(system));
  out << "# liepulse schedule\n";
  out << "total_time " << format_number(schedule.total_time) << '\n';
  out << "system_hash " << hash << '\n';
  out << "pulses " << schedule.pulses.size() << '\n';
  out << "# index m mu phi start duration shape A param C\n";
  for (std::size_t i = 0; i < schedule.pulses.size(); ++i) {
    const Pulse& p = schedule.pulses[i];
    const bool square = p.kind == EnvelopeKind::square_erf;
    out << i + 1 << ' ' << p.transition << ' ' << format_number(p.carrier) << ' ' << format_number(p.phase) << ' '
        << format_number(p.start) << ' ' << format_number(p.duration) << ' ' << (square ? "square_erf" : "gaussian")
        << ' ' << format_number(p.half_amplitude) << ' '
        << format_number(square ? p.rise_time : p.shape_factor) << ' ' << format_number(p.area_constant) << '\n';
  }
}

PulseSchedule read_schedule(std::istream& in, const SystemModel& system) {
  LineReader r(in);
  PulseSchedule s;
  auto tok = keyed(r, "total_time", 1);
  s.total_time = parse_double(tok[1], r.line());
  tok = keyed(r, "system_hash", 1);
  char expected[32];
  std::snprintf(expected, sizeof expected, "0x%016" PRIx64, system_hash(system));
  if (tok[1] != expected)
    throw FormatError("schedule was written for a different system (hash " + tok[1] + ", expected " + expected + ")",
                      r.line());
  tok = keyed(r, "pulses", 1);
  const long count = parse_int(tok[1], r.line());
  if (count < 0) throw FormatError("pulse count must be non-negative", r.line());
  for (long i = 0; i < count; ++i) {
    tok = r.expect("a pulse line");
    if (tok.size() != 10) throw FormatError("pulse line needs 10 fields", r.line());
    if (parse_int(tok[0], r.line()) != i + 1) throw FormatError("pulse index out of sequence", r.line());
    Pulse p;
    p.transition = static_cast<int>(parse_int(tok[1], r.line()));
    if (p.transition < 1 || static_cast<std::size_t>(p.transition) > system.transitions())
      throw FormatError("transition " + tok[1] + " out of range", r.line());
    p.dipole = system.dipole(p.transition);
    p.carrier = parse_double(tok[2], r.line());
    p.phase = parse_double(tok[3], r.line());
    p.start = parse_double(tok[4], r.line());
    p.duration = parse_double(tok[5], r.line());
    if (tok[6] == "square_erf") {
      p.kind = EnvelopeKind::square_erf;
      p.rise_time = parse_double(tok[8], r.line());
    } else if (tok[6] == "gaussian") {
      p.kind = EnvelopeKind::gaussian;
      p.shape_factor = parse_double(tok[8], r.line());
    } else {
      throw FormatError("unknown shape '" + tok[6] + "'", r.line());
    }
    p.half_amplitude = parse_double(tok[7], r.line());
    p.area_constant = parse_double(tok[9], r.line());
    s.pulses.push_back(p);
  }
  for (const auto& g : detuning_guard(s, system))
    if (g.flagged) s.warnings.push_back(g);
  return s;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  const std::size_t n = trace.initial_state.dim();
  out << 't';
  for (std::size_t k = 1; k <= n; ++k) out << ",p" << k;
  out << ",energy";
  if (trace.observable) out << ",observable";
  if (trace.overlap) out << ",overlap";
  out << '\n';
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    out << format_number(trace.times[i], 12);
    for (double p : trace.populations[i]) out << ',' << format_number(p, 12);
    out << ',' << format_number(trace.energy[i], 12);
    if (trace.observable) out << ',' << format_number((*trace.observable)[i], 12);
    if (trace.overlap) out << ',' << format_number((*trace.overlap)[i], 12);
    out << '\n';
  }
}

ComplexMatrix read_unitary_text(std::istream& in) {
  LineReader r(in);
  std::vector<std::vector<Complex>> rows;
  std::vector<std::string> tok;
  while (r.next(tok)) {
    if (tok.size() % 2 != 0) throw FormatError("row needs re/im pairs", r.line());
    std::vector<Complex> row;
    for (std::size_t i = 0; i < tok.size(); i += 2)
      row.emplace_back(parse_double(tok[i], r.line()), parse_double(tok[i + 1], r.line()));
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError("ragged matrix rows", r.line());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("matrix file is empty");
  const std::size_t n = rows.size();
  if (rows.front().size() != n)
    throw FormatError("matrix is " + std::to_string(n) + "x" + std::to_string(rows.front().size()) +
                      ", expected square");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace liepulse
