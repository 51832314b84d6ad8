#pragma once

#include <nlohmann/json.hpp>

#include "rankvarma/are.hpp"
#include "rankvarma/mc.hpp"

namespace rankvarma {

// Numbers are rounded to 12 significant digits before they enter the document, so
// dumps are stable across platforms. Non-finite values become null.
double round12(double v);

nlohmann::json to_json(const Orders& o);
nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const McSummary& s, bool with_statistics = false);
nlohmann::json to_json(const EfficiencyReport& r);
nlohmann::json to_json(const RootCheckReport& r);
nlohmann::json to_json(const std::vector<InvarianceCheck>& checks);
nlohmann::json to_json(const std::vector<TrendReport>& trend);

}  // namespace rankvarma
