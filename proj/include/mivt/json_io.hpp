#pragma once

#include <json.hpp>

#include "mivt/infer.hpp"
#include "mivt/model.hpp"
#include "mivt/moments.hpp"

namespace mivt {

nlohmann::json to_json(const TrawlSpec& spec);
TrawlSpec trawl_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeedSpec& spec);
SeedSpec seed_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MivtModel& model);
MivtModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const MomentSummary& summary);
nlohmann::json to_json(const McStudyResult& result);

}  // namespace mivt
