#ifndef AUTOHSIC_SERIES_IO_HPP
#define AUTOHSIC_SERIES_IO_HPP

#include <iosfwd>
#include <string>

#include "autohsic/spaces.hpp"

namespace autohsic {

/// Errors raised while parsing a series file; carries a 1-based line number.
struct SeriesParseError : std::runtime_error {
    SeriesParseError(int line, const std::string& message);
    int line = 0;
};

/// Parses the flat-text series format:
///   - '#' comment lines and blank lines are ignored,
///   - the first payload line is the header declaring the space:
///       vector <d> | matrix <rows> <cols> | function <g0,g1,...,gK>
///   - every following line is one observation: comma-separated values of the
///     declared width (matrix rows in row-major order, function values on the
///     declared grid).
ObjectSeries read_series(std::istream& in);
ObjectSeries read_series_file(const std::string& path);

/// Writes the canonical form of the same format, round-trip exact.
void write_series(std::ostream& out, const ObjectSeries& series);
void write_series_file(const std::string& path, const ObjectSeries& series);

} // namespace autohsic

#endif
