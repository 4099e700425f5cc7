#pragma once

#include "bll/conditions.hpp"
#include "bll/config.hpp"
#include "bll/experiments.hpp"
#include "bll/flow.hpp"
#include "bll/functional.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace bll::io {

/// Contents of a configuration file:
///   { "m": 2, "rows": [["1","0"], ...], "e": ["2", ...],
///     "sets": [[["-1","1"]], ...] }
/// Rationals are strings ("3", "-7/2", "0.25"); plain JSON integers are also
/// accepted, JSON floats are rejected.
struct ConfigFile {
    Configuration config;
    std::optional<MeasureVector> e;
    std::optional<SetTuple> sets;
};

/// Throws input_error naming the offending JSON location.
ConfigFile parse_config(const std::string& text, const std::string& origin = "<config>");
ConfigFile load_config(const std::string& path);
std::string dump_config(const ConfigFile& file);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

/// "2 (exact 2/1)"
std::string describe(const Rational& q);

/// "[lo,hi]U[lo,hi];[lo,hi]" with exact endpoints.
std::string serialize_tuple(const SetTuple& sets);

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const ScanReport& report, const std::string& sampler);

std::string kernel_csv(const KernelTable& table);
std::string flow_csv(const std::vector<TracePoint>& trace);
std::string scan_csv(const ScanReport& report);

}  // namespace bll::io
