#include "commwit/json_io.hpp"

namespace commwit {

json matrix_to_json(const RMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n(); ++j) row.push_back(m.at(i, j).value());
        rows.push_back(std::move(row));
    }
    return json{{"ring", m.ring().token()}, {"n", m.n()}, {"rows", std::move(rows)}};
}

RMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("ring") || !j.contains("n") || !j.contains("rows"))
        fail(Err::InvalidArgument, "matrix JSON needs ring, n, rows");
    Ring ring = Ring::parse_token(j.at("ring").get<std::string>());
    std::size_t n = j.at("n").get<std::size_t>();
    const json& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != n) fail(Err::InvalidArgument, "matrix rows mismatch n");
    std::vector<i64> vals;
    vals.reserve(n * n);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n) fail(Err::InvalidArgument, "matrix row length mismatch");
        for (const auto& v : row) {
            if (!v.is_number_integer() && !v.is_number_unsigned())
                fail(Err::InvalidArgument, "matrix entries must be integers");
            vals.push_back(v.get<i64>());
        }
    }
    return RMatrix::from_values(ring, n, vals);
}

json witness_to_json(const CommutatorWitness& w, const DecompositionTrace* trace) {
    json out{{"ring", w.target.ring().token()},
             {"mode", w.mode == WitnessMode::SL ? "SL" : "PSL"},
             {"target", matrix_to_json(w.target)},
             {"g1", matrix_to_json(w.g1)},
             {"g2", matrix_to_json(w.g2)}};
    if (trace) {
        json targets = json::array();
        for (const auto& t : trace->targets) targets.push_back(t.value());
        out["trace"] = json{{"g", matrix_to_json(trace->g)},
                            {"X", matrix_to_json(trace->X)},
                            {"Y", matrix_to_json(trace->Y)},
                            {"D", matrix_to_json(trace->D)},
                            {"targets", std::move(targets)}};
    }
    return out;
}

ParsedWitness witness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("mode") || !j.contains("target") || !j.contains("g1") ||
        !j.contains("g2"))
        fail(Err::InvalidArgument, "witness JSON needs mode, target, g1, g2");
    std::string mode = j.at("mode").get<std::string>();
    if (mode != "SL" && mode != "PSL") fail(Err::InvalidArgument, "mode must be SL or PSL");
    ParsedWitness out{
        CommutatorWitness{matrix_from_json(j.at("target")), matrix_from_json(j.at("g1")),
                          matrix_from_json(j.at("g2")),
                          mode == "SL" ? WitnessMode::SL : WitnessMode::PslPair},
        std::nullopt};
    if (j.contains("ring") &&
        Ring::parse_token(j.at("ring").get<std::string>()) != out.witness.target.ring())
        fail(Err::InvalidArgument, "witness ring token disagrees with the target's ring");
    if (j.contains("trace") && !j.at("trace").is_null()) {
        const json& t = j.at("trace");
        DecompositionTrace tr{matrix_from_json(t.at("g")), matrix_from_json(t.at("X")),
                              matrix_from_json(t.at("Y")), matrix_from_json(t.at("D")), {}};
        const Ring& ring = tr.D.ring();
        for (const auto& v : t.at("targets")) tr.targets.emplace_back(ring, v.get<u64>());
        out.trace = std::move(tr);
    }
    return out;
}

json report_to_json(const WordImageReport& r) {
    json samples = json::array();
    for (const auto& [value, tuple] : r.samples) {
        json tup = json::array();
        for (const auto& m : tuple) tup.push_back(matrix_to_json(m));
        samples.push_back(json{{"value", matrix_to_json(value)}, {"tuple", std::move(tup)}});
    }
    return json{{"word", r.word},
                {"group", "SL(" + std::to_string(r.n) + ", F_" + std::to_string(r.p) + ")"},
                {"n", r.n},
                {"p", r.p},
                {"group_order", r.group_order},
                {"image_size", r.image_size},
                {"conjugation_closed", r.conjugation_closed},
                {"inverse_closed", r.inverse_closed},
                {"contains_identity", r.contains_identity},
                {"sampled", r.sampled},
                {"samples", std::move(samples)}};
}

json report_to_json(const CoverReport& r, const std::string& kind) {
    json covered = json::array(), uncovered = json::array();
    for (const auto& m : r.center_covered) covered.push_back(matrix_to_json(m));
    for (const auto& m : r.center_uncovered) uncovered.push_back(matrix_to_json(m));
    return json{{"kind", kind},
                {"words", r.words},
                {"group", "SL(" + std::to_string(r.n) + ", F_" + std::to_string(r.p) + ")"},
                {"n", r.n},
                {"p", r.p},
                {"group_order", r.group_order},
                {"image_sizes", r.image_sizes},
                {"product_size", r.product_size},
                {"cover", r.cover},
                {"center_covered", std::move(covered)},
                {"center_uncovered", std::move(uncovered)}};
}

json report_to_json(const ClassProductReport& r) {
    return json{{"group", "SL(" + std::to_string(r.n) + ", F_" + std::to_string(r.p) + ")"},
                {"n", r.n},
                {"p", r.p},
                {"t1", r.t1},
                {"t2", r.t2},
                {"class_sizes", json::array({r.class1_size, r.class2_size})},
                {"product_size", r.product_size},
                {"covers_noncentral", r.covers_noncentral}};
}

json report_to_json(const ObstructionReport& r) {
    json out{{"group", "SL(" + std::to_string(r.n) + ", F_" + std::to_string(r.p) + ")"},
             {"n", r.n},
             {"p", r.p},
             {"target", matrix_to_json(r.target)},
             {"pairs_with_commutator", r.pairs_with_commutator},
             {"all_pairs_obstructed", r.all_pairs_obstructed}};
    if (r.witness_pair) {
        out["witness_pair"] = json{{"g1", matrix_to_json(r.witness_pair->first)},
                                   {"g2", matrix_to_json(r.witness_pair->second)}};
    } else {
        out["witness_pair"] = nullptr;
    }
    return out;
}

namespace {

// nilpotent-extension matrices carry per-generator coefficients
json nilext_matrix_to_json(const RMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n(); ++j) {
            const RingElem& e = m.at(i, j);
            row.push_back(json{{"const", e.value()}, {"coeffs", e.coeffs()}});
        }
        rows.push_back(std::move(row));
    }
    return json{{"ring", m.ring().token()}, {"n", m.n()}, {"rows", std::move(rows)}};
}

} // namespace

json report_to_json(const NilpotentCheckReport& r) {
    return json{{"group", "SL(" + std::to_string(r.n) + ", F_" + std::to_string(r.p) + ")"},
                {"n", r.n},
                {"p", r.p},
                {"ring", r.ring.token()},
                {"ring_generators", r.ring.generator_count()},
                {"commuting_pairs", r.commuting_pairs},
                {"sl_dimension", r.sl_dimension},
                {"max_image_rank", r.max_image_rank},
                {"certified_noncommutator", r.certified},
                {"element", nilext_matrix_to_json(r.element)}};
}

} // namespace commwit
