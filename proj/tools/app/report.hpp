// JSON report assembly. Every report is {"payload": ..., "metadata": ...};
// the payload is a pure function of the resolved config, the metadata holds
// the wall-clock bits.
#pragma once

#include "unilab/correlations.hpp"
#include "unilab/pretend.hpp"
#include "unilab/proofgraph.hpp"

#include <json.hpp>

#include <string>

namespace unilab::app {

using json = nlohmann::json;

std::string version();

json make_report(const std::string& command, const json& config, const json& results,
                 const std::string& ref);

// Canonical text of the payload, used for reproducibility comparisons.
std::string payload_text(const json& report);

json to_json(cplx z);
json to_json(const Interval& I);
json to_json(const SupCertificate& c);
json to_json(const UniformityReport& r, bool with_records = true);
json to_json(const FixedAlphaReport& r);
json to_json(const SlotScan& s);
json to_json(const DistanceResult& r);
json to_json(const MsdResult& r);
json to_json(const PrimeRatioGraph& g, bool with_edges = true);
json to_json(const WalkCount& w);
json to_json(const ProductCount& p);
json to_json(const MixingReport& m);
json to_json(const ModelFit& f);
json to_json(const CorrelationReport& r);
json to_json(const ChowlaReport& r, bool with_inner = false);
json to_json(const L3Report& r);
json to_json(const HolderReport& r);

}  // namespace unilab::app
