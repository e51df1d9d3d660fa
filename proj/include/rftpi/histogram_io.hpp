#pragma once

#include <string>

#include "rftpi/trace_lab.hpp"

// Plain-text histogram/trace format: '#'-prefixed key=value header lines,
// then two tab-separated columns tau_ps<TAB>count (or value).

namespace rftpi {

void write_histogram(const std::string& path, const HistogramRecord& rec);
HistogramRecord read_histogram(const std::string& path);

// Model traces use the same layout with a floating-point value column.
void write_trace(const std::string& path, const CorrelationTrace& trace,
                 const std::string& label = "");
CorrelationTrace read_trace(const std::string& path);

}  // namespace rftpi
