// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ghsbp/evaluation.hpp"
#include "ghsbp/types.hpp"

namespace ghsbp {

// Shortest decimal string that round-trips to the same double bit pattern.
std::string format_double(double v);

// Writes a matrix as CSV: '#'-prefixed header lines first, then a column
// header row of state labels (s0,s1,...), then one row per line.
void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header_comments);

// Reads a matrix CSV written by write_matrix_csv ('#' lines and the column
// header row are skipped).
Matrix read_matrix_csv(const std::string& path);

// Writes a state sequence, one decimal state index per line, preceded by
// '#'-prefixed header lines.
void write_sequence(const std::string& path,
                    const std::vector<std::int64_t>& states,
                    const std::vector<std::string>& header_comments);

// Reads a newline-delimited state sequence.  '#'-prefixed and blank lines are
// ignored.  Throws std::runtime_error with the 1-based line number on parse
// errors or negative states, and on an empty file.
std::vector<std::int64_t> read_sequence(const std::string& path);

// Writes evaluation reports as CSV with columns
// method,alpha,beta,b0,mae_times_100,d,chain_length,seed.
void write_reports_csv(const std::string& path,
                       const std::vector<EvalReport>& reports,
                       const std::vector<std::string>& header_comments);

// Writes plain text lines (used for diagnostics reports).
void write_text(const std::string& path, const std::vector<std::string>& lines);

}  // namespace ghsbp
