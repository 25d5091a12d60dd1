#include "scalarmc/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace scalarmc {

RecordFormat parse_record_format(const std::string& name) {
    if (name == "csv") return RecordFormat::csv;
    if (name == "jsonl") return RecordFormat::jsonl;
    throw std::invalid_argument("unknown record format: " + name);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    // %.17g always round-trips; prefer the shortest precision that does.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lg", &back);
        if (back == v) return buf;
    }
    return buf;
}

RecordWriter::RecordWriter(std::ostream& out, RecordFormat format,
                           std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
    if (format_ == RecordFormat::csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns_[i];
        }
        out_ << '\n';
    }
}

void RecordWriter::write_row(std::span<const double> values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("RecordWriter: column count mismatch");
    if (format_ == RecordFormat::csv) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    } else {
        out_ << '{';
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << '"' << columns_[i] << "\":" << format_double(values[i]);
        }
        out_ << "}\n";
    }
}

}  // namespace scalarmc
