#pragma once

#include <string>

#include "ddopt/algorithms.hpp"

namespace ddopt {

/// Columns: t,x_0..x_{n-1},lambda_0..lambda_{dw-1},dist_to_xs,
/// constraint_residual,objective. Lambda columns only when present.
/// Values printed with %.17g so emit -> parse -> emit is byte-identical.
std::string trace_to_csv(const Trace& trace);
Trace trace_from_csv(const std::string& text);

/// JSON object: status plus one array per CSV column.
std::string trace_to_json(const Trace& trace);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ddopt
