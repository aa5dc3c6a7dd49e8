#pragma once

#include <json.hpp>

#include "constants.hpp"
#include "field.hpp"
#include "group.hpp"
#include "sets.hpp"
#include "subgroups.hpp"

namespace hlw {

using json = nlohmann::ordered_json;

inline json to_json(const FieldCtx& F) {
    return json{{"p", F.p}, {"r", F.r}, {"modulus", F.modulus}};
}

/// Points serialize as integer code lists [x_1, ..., x_2n, t].
inline json to_json(const HPoint& a) {
    json codes = json::array();
    for (auto e : a.x) codes.push_back(e.code);
    codes.push_back(a.t.code);
    return codes;
}

inline json to_json(const HSubset& S) {
    const GroupCtx& ctx = S.ctx();
    json points = json::array();
    S.for_each([&](uint64_t r) { points.push_back(to_json(point_unrank(ctx, r))); });
    return json{{"q", ctx.q()}, {"n", ctx.n}, {"points", std::move(points)}};
}

inline json to_json(const GridFn& f) {
    return json{{"q", f.ctx().q()}, {"n", f.ctx().n}, {"values", f.values()}};
}

inline json exponents_json(const std::vector<Exponent>& us) {
    json out = json::array();
    for (const auto& u : us) out.push_back(u.str());
    return out;
}

inline json to_json(const Subspace& S) {
    json rows = json::array();
    for (const auto& row : S.basis) {
        json r = json::array();
        for (auto e : row) r.push_back(e.code);
        rows.push_back(std::move(r));
    }
    return json{{"field", to_json(S.field)}, {"ambient_dim", S.ambient_dim}, {"basis", rows}};
}

inline json to_json(const SubgroupRec& rec, bool with_elements = false) {
    json out{{"q", rec.ctx.q()},
             {"n", rec.ctx.n},
             {"order", rec.order},
             {"kind", subgroup_kind_name(rec.kind)},
             {"S_basis", to_json(rec.horizontal)["basis"]},
             {"rho", rec.rho},
             {"homogeneous", rec.homogeneous}};
    if (with_elements) out["elements"] = rec.elements;
    return out;
}

/// Ratio reports reference their witness by id; the witness functions are
/// emitted as separate lines so reports stay small.
inline json to_json(const RatioReport& rep, const std::string& witness_ref) {
    return json{{"q", rep.q},
                {"n", rep.n},
                {"exponents", exponents_json(rep.exponents)},
                {"value", rep.value},
                {"witness_ref", witness_ref},
                {"method", ratio_method_name(rep.method)},
                {"iterations", rep.iterations},
                {"converged", rep.converged},
                {"degenerate", rep.degenerate}};
}

}  // namespace hlw
