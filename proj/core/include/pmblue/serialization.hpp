#pragma once

#include <nlohmann/json.hpp>

#include "pmblue/diagnostics.hpp"
#include "pmblue/estimators.hpp"
#include "pmblue/fisher.hpp"
#include "pmblue/matrix.hpp"
#include "pmblue/moments.hpp"
#include "pmblue/simulation.hpp"

// JSON forms of the report types.  Non-finite numbers are written as the
// strings "Infinity", "-Infinity" and "NaN" so every document round-trips.
namespace pmblue {

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);

void to_json(nlohmann::json& j, const PartialMaximaMoments& v);
void from_json(const nlohmann::json& j, PartialMaximaMoments& v);
void to_json(nlohmann::json& j, const SpacingMoments& v);
void from_json(const nlohmann::json& j, SpacingMoments& v);

void to_json(nlohmann::json& j, const EstimatorSolution& v);
void from_json(const nlohmann::json& j, EstimatorSolution& v);
void to_json(nlohmann::json& j, const EstimatorPair& v);
void from_json(const nlohmann::json& j, EstimatorPair& v);

void to_json(nlohmann::json& j, const NcpReport& v);
void from_json(const nlohmann::json& j, NcpReport& v);
void to_json(nlohmann::json& j, const VonMisesProfile& v);
void from_json(const nlohmann::json& j, VonMisesProfile& v);
void to_json(nlohmann::json& j, const RateStudy& v);
void from_json(const nlohmann::json& j, RateStudy& v);
void to_json(nlohmann::json& j, const ConsistencyRow& v);
void from_json(const nlohmann::json& j, ConsistencyRow& v);
void to_json(nlohmann::json& j, const EndpointAtomReport& v);
void from_json(const nlohmann::json& j, EndpointAtomReport& v);

void to_json(nlohmann::json& j, const FisherReport& v);
void from_json(const nlohmann::json& j, FisherReport& v);
void to_json(nlohmann::json& j, const FisherLimitReport& v);
void from_json(const nlohmann::json& j, FisherLimitReport& v);

void to_json(nlohmann::json& j, const EstimatorStats& v);
void from_json(const nlohmann::json& j, EstimatorStats& v);
void to_json(nlohmann::json& j, const MonteCarloReport& v);
void from_json(const nlohmann::json& j, MonteCarloReport& v);
void to_json(nlohmann::json& j, const RecordCountStats& v);
void from_json(const nlohmann::json& j, RecordCountStats& v);

}  // namespace pmblue
