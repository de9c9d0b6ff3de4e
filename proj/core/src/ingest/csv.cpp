#include "fcast/ingest/csv.hpp"
#include "fcast/core/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace fcast::ingest {

namespace {

constexpr const char* kHeader = "date,open,high,low,close,volume";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_price(const std::string& text, const std::string& context) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw FormatError(context + ": unparseable number '" + text + "'");
    }
    return value;
}

std::int64_t parse_volume(const std::string& text, const std::string& context) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError(context + ": unparseable volume '" + text + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

} // namespace

PriceSeries parse_csv(std::istream& in, std::string symbol, OhlcPolicy policy) {
    std::string line;
    if (!std::getline(in, line)) {
        throw EmptyDataError(symbol + ": empty CSV");
    }
    if (strip_cr(line) != kHeader) {
        throw FormatError(symbol + ":1: bad header, want '" + std::string(kHeader) + "'");
    }

    std::vector<Bar> bars;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const std::string context = symbol + ":" + std::to_string(line_no);
        const auto fields = split_fields(line);
        if (fields.size() != 6) {
            throw FormatError(context + ": expected 6 fields, got " +
                              std::to_string(fields.size()));
        }
        Bar bar;
        try {
            bar.date = Date::from_string(fields[0]);
        } catch (const FormatError& e) {
            throw FormatError(context + ": " + e.what());
        }
        bar.open = parse_price(fields[1], context);
        bar.high = parse_price(fields[2], context);
        bar.low = parse_price(fields[3], context);
        bar.close = parse_price(fields[4], context);
        bar.volume = parse_volume(fields[5], context);
        if (bar.open <= 0.0 || bar.high <= 0.0 || bar.low <= 0.0 || bar.close <= 0.0) {
            throw FormatError(context + ": nonpositive price");
        }
        bars.push_back(bar);
    }
    if (bars.empty()) {
        throw EmptyDataError(symbol + ": CSV has a header but no rows");
    }
    return PriceSeries(std::move(symbol), std::move(bars), policy);
}

PriceSeries read_csv(const std::filesystem::path& path, OhlcPolicy policy) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open CSV file: " + path.string());
    }
    return parse_csv(in, path.stem().string(), policy);
}

void write_csv(const PriceSeries& series, std::ostream& out) {
    out << kHeader << '\n';
    for (const Bar& b : series.bars()) {
        out << b.date.to_string() << ',' << format_double(b.open) << ','
            << format_double(b.high) << ',' << format_double(b.low) << ','
            << format_double(b.close) << ',' << b.volume << '\n';
    }
}

void write_csv(const PriceSeries& series, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw FormatError("cannot open for writing: " + tmp.string());
        }
        write_csv(series, out);
        if (!out.good()) {
            throw FormatError("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace fcast::ingest
