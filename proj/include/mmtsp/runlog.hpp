#pragma once

#include <string>

#include <json.hpp>

#include "mmtsp/engine.hpp"

namespace mmtsp {

/// Serializes a finished run with a stable field order. Timing fields
/// (time_to_best_s, per-iteration elapsed_s) are the only values that vary
/// between identical-seed runs.
nlohmann::ordered_json run_record(const RunResult& result, bool include_trace);

std::string run_record_text(const RunResult& result, bool include_trace);

} // namespace mmtsp
