#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace scalarmc {

enum class RecordFormat { csv, jsonl };

RecordFormat parse_record_format(const std::string& name);

// Shortest text representation that round-trips a double exactly.
std::string format_double(double v);

// Streams numeric records as CSV (header + rows) or JSON lines.
class RecordWriter {
public:
    RecordWriter(std::ostream& out, RecordFormat format, std::vector<std::string> columns);
    void write_row(std::span<const double> values);

private:
    std::ostream& out_;
    RecordFormat format_;
    std::vector<std::string> columns_;
};

}  // namespace scalarmc
