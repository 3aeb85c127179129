#pragma once

#include <string>

#include <json.hpp>

#include "pmd/metrics.hpp"

namespace pmd {

// JSON layouts use the field names of the corresponding structs; labels are
// rendered through label_to_string. nlohmann::json keeps keys sorted, so the
// serialized bytes are stable across runs and worker counts.
nlohmann::json report_json(const PmdReport& r);
nlohmann::json report_json(const DesignCheckReport& r);
nlohmann::json report_json(const BergamaschiGap& g);

// One header line plus one data row. Fields that may contain commas (the
// worst label) are double-quoted.
std::string report_csv(const PmdReport& r);
std::string report_csv(const DesignCheckReport& r);
std::string report_csv(const BergamaschiGap& g);

}  // namespace pmd
