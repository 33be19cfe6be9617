#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "liepulse/decomposition.hpp"
#include "liepulse/matrix.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/simulate.hpp"
#include "liepulse/system.hpp"

// Line-oriented text formats. Numbers in decomposition and schedule files use
// 17 significant digits so that reading them back is lossless; traces use 12.
// Lines starting with '#' are comments.
//
// Decomposition:
//   mode mod_phase|exact
//   levels N
//   global_phase g
//   residual_phases th_1 ... th_N
//   factors K
//   k m C phi                       (K lines, k = 1..K in time order)
//
// Schedule:
//   total_time T
//   system_hash 0x<16 hex digits>
//   pulses K
//   index m mu phi start duration shape A param C
// where shape is square_erf (param = tau0) or gaussian (param = q).
//
// Trace CSV: header t,p1..pN,energy[,observable][,overlap]

namespace liepulse {

std::string format_number(double v, int significant = 17);

void write_decomposition(std::ostream& out, const DecompositionResult& d);
/// Throws FormatError with the offending line.
DecompositionResult read_decomposition(std::istream& in);

/// FNV-1a over the 17-digit text of energies and dipoles.
std::uint64_t system_hash(const SystemModel& system);

void write_schedule(std::ostream& out, const PulseSchedule& schedule, const SystemModel& system);
/// Rebuilds the schedule for `system`; throws FormatError when the stored
/// hash names a different system or a line is malformed.
PulseSchedule read_schedule(std::istream& in, const SystemModel& system);

void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

/// N lines of 2N reals (re im pairs per entry). Blank and '#' lines skipped.
ComplexMatrix read_unitary_text(std::istream& in);

}  // namespace liepulse
