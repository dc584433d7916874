#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "paritydisp/analysis.hpp"
#include "paritydisp/states.hpp"
#include "paritydisp/verify.hpp"

namespace paritydisp {

/// JSON state document: dim, interior_dim, tail_tol, amplitudes as [re, im]
/// pairs (raw, before report_sign) and a metadata object. Doubles are written
/// in shortest round-trip form, so read_state(write_state(s)) is bit-exact.
std::string write_state(const State& state);
State read_state(std::string_view text);

/// Structured suite report. Keys are stable; a non-finite residual is written
/// as the string "inf".
std::string write_report(const SuiteReport& report);
SuiteReport read_report(std::string_view text);

/// Tab-separated, one line per check result, with a header line.
void write_report_rows(std::ostream& out, const SuiteReport& report);

std::string write_convergence(const ConvergenceReport& report);
void write_convergence_rows(std::ostream& out, const ConvergenceReport& report);

}  // namespace paritydisp
