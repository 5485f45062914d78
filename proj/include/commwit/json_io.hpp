#pragma once

#include <json.hpp>

#include "commwit/commdecomp.hpp"
#include "commwit/henselift.hpp"
#include "commwit/wordmaps.hpp"

namespace commwit {

using nlohmann::json;

// Matrix interchange format: {"ring": "<token>", "n": n, "rows": [[...], ...]}
// with canonical integer entries. Round-trips exactly.
json matrix_to_json(const RMatrix& m);
RMatrix matrix_from_json(const json& j);

// Witness file: {"ring", "mode": "SL"|"PSL", "target", "g1", "g2", "trace"?}
json witness_to_json(const CommutatorWitness& w, const DecompositionTrace* trace = nullptr);

struct ParsedWitness {
    CommutatorWitness witness;
    std::optional<DecompositionTrace> trace;
};
ParsedWitness witness_from_json(const json& j);

json report_to_json(const WordImageReport& r);
json report_to_json(const CoverReport& r, const std::string& kind);
json report_to_json(const ClassProductReport& r);
json report_to_json(const ObstructionReport& r);
json report_to_json(const NilpotentCheckReport& r);

} // namespace commwit
