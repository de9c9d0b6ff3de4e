#pragma once

#include "fcast/core/series.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace fcast::ingest {

/// CSV wire format: header `date,open,high,low,close,volume`, ISO-8601 dates,
/// prices written with shortest-round-trip precision so write/read is lossless.

PriceSeries parse_csv(std::istream& in, std::string symbol,
                      OhlcPolicy policy = OhlcPolicy::WarnAndKeep);

/// Symbol defaults to the file stem. Throws FormatError with the offending
/// line number, EmptyDataError on a header-only file.
PriceSeries read_csv(const std::filesystem::path& path,
                     OhlcPolicy policy = OhlcPolicy::WarnAndKeep);

void write_csv(const PriceSeries& series, std::ostream& out);

/// Writes via a temp file and renames so readers never see a partial file.
void write_csv(const PriceSeries& series, const std::filesystem::path& path);

} // namespace fcast::ingest
