#pragma once

#include "timepar/analysis.hpp"
#include "timepar/stepper.hpp"
#include "timepar/window.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace timepar {

/**
 * Renders a double so that parsing the text recovers the identical bits:
 * %.17g by default, C99 hexadecimal floating point (%a) when hex is set.
 */
std::string format_double(double v, bool hex = false);

/// Strict full-string double parser; accepts both decimal and hex forms.
double parse_double(const std::string& text);

/// Writes content to path via a temporary file in the same directory plus
/// an atomic rename, so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

/// Columns t,p,q,energy (p0..,q0.. for several degrees of freedom).
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool hex = false);
Trajectory read_trajectory_csv(const std::string& path);

/// Columns iter,frontier,conv,max_correction.
void write_iteration_log_csv(const std::string& path,
                             const std::vector<IterationRecord>& log, bool hex = false);
std::vector<IterationRecord> read_iteration_log_csv(const std::string& path);

/// Columns P,C_dt,I_dtP,k_dtP.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     bool hex = false);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

/// Columns P,S.
void write_speedup_csv(const std::string& path,
                       const std::vector<std::pair<std::size_t, double>>& curve,
                       bool hex = false);

/// Plain key=value lines in the given order.
void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace timepar
