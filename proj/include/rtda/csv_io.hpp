#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "rtda/filtration.hpp"
#include "rtda/persistence.hpp"
#include "rtda/signal_frame.hpp"

namespace rtda {

/// Shortest decimal that parses back to the same double; `inf`, `-inf`, `nan`
/// for the non-finite values.
std::string format_number(double value);
/// Inverse of format_number. Throws std::invalid_argument on malformed text.
double parse_number(std::string_view text);

/// Header `t,c0,...,c{d-1}`.
void write_signal_csv(std::ostream& out, const SignalFrame& frame);
SignalFrame read_signal_csv(std::istream& in);

/// Header `dim,birth,death`.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(std::istream& in);

/// Header `dim,v0,v1,v2,scale`; absent vertices are empty fields.
void write_complex_csv(std::ostream& out, const FilteredComplex& complex);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace rtda
