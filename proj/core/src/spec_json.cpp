#include "cansys/spec_json.hpp"

#include <initializer_list>
#include <string>

#include "cansys/errors.hpp"
#include "json.hpp"

namespace cansys {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw InputError(where + ": expected an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) {
            if (it.key() == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw InputError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw InputError(where + ": missing key '" + key + "'");
    }
    return *it;
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) {
        throw InputError(what + ": expected a number");
    }
    return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
    if (!j.is_array()) {
        throw InputError(what + ": expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        out.push_back(number(x, what));
    }
    return out;
}

std::pair<double, double> domain_of(const json& j, const std::string& where) {
    const auto v = numbers(need(j, "domain", where), where + ".domain");
    if (v.size() != 2) {
        throw InputError(where + ".domain: expected [a, b]");
    }
    return {v[0], v[1]};
}

PhiForm parse_phi(const json& j) {
    const std::string where = "phi";
    const json& nm = need(j, "name", where);
    if (!nm.is_string()) {
        throw InputError("phi.name: expected a string");
    }
    const std::string name = nm.get<std::string>();
    if (name == "constant") {
        only_keys(j, {"name", "value"}, where);
        return PhiForm::constant(number(need(j, "value", where), "phi.value"));
    }
    if (name == "chirp") {
        only_keys(j, {"name", "gamma", "beta"}, where);
        return PhiForm::chirp(number(need(j, "gamma", where), "phi.gamma"),
                              number(need(j, "beta", where), "phi.beta"));
    }
    if (name == "holder") {
        only_keys(j, {"name", "scale", "exponent"}, where);
        const double scale = j.contains("scale") ? number(j["scale"], "phi.scale") : 1.0;
        return PhiForm::holder(scale, number(need(j, "exponent", where), "phi.exponent"));
    }
    if (name == "table" || name == "polygon") {
        only_keys(j, {"name", "t", "value"}, where);
        return PhiForm::table(numbers(need(j, "t", where), "phi.t"),
                              numbers(need(j, "value", where), "phi.value"));
    }
    if (name == "steps") {
        only_keys(j, {"name", "t", "value"}, where);
        return PhiForm::steps(numbers(need(j, "t", where), "phi.t"),
                              numbers(need(j, "value", where), "phi.value"));
    }
    throw InputError("phi.name: unknown profile '" + name + "'");
}

DensityForm parse_density(const json& j) {
    const std::string where = "density";
    const json& nm = need(j, "name", where);
    if (!nm.is_string()) {
        throw InputError("density.name: expected a string");
    }
    const std::string name = nm.get<std::string>();
    if (name == "const") {
        only_keys(j, {"name", "value"}, where);
        return DensityForm::constant(number(need(j, "value", where), "density.value"));
    }
    if (name == "power") {
        only_keys(j, {"name", "coeff", "power"}, where);
        return DensityForm::power_law(number(need(j, "coeff", where), "density.coeff"),
                                      number(need(j, "power", where), "density.power"));
    }
    if (name == "table") {
        only_keys(j, {"name", "t", "value"}, where);
        return DensityForm::table(numbers(need(j, "t", where), "density.t"),
                                  numbers(need(j, "value", where), "density.value"));
    }
    if (name == "steps") {
        only_keys(j, {"name", "t", "value"}, where);
        return DensityForm::steps(numbers(need(j, "t", where), "density.t"),
                                  numbers(need(j, "value", where), "density.value"));
    }
    throw InputError("density.name: unknown density '" + name + "'");
}

json phi_json(const PhiForm& p) {
    switch (p.kind) {
        case PhiForm::Kind::Constant:
            return {{"name", "constant"}, {"value", p.value}};
        case PhiForm::Kind::Chirp:
            return {{"name", "chirp"}, {"gamma", p.gamma}, {"beta", p.beta}};
        case PhiForm::Kind::Holder:
            return {{"name", "holder"}, {"scale", p.scale}, {"exponent", p.exponent}};
        case PhiForm::Kind::Table:
            return {{"name", "table"}, {"t", p.t}, {"value", p.v}};
        case PhiForm::Kind::Steps:
            return {{"name", "steps"}, {"t", p.t}, {"value", p.v}};
    }
    return {};
}

json density_json(const DensityForm& d) {
    switch (d.kind) {
        case DensityForm::Kind::Const:
            return {{"name", "const"}, {"value", d.value}};
        case DensityForm::Kind::Power:
            return {{"name", "power"}, {"coeff", d.coeff}, {"power", d.power}};
        case DensityForm::Kind::Table:
            return {{"name", "table"}, {"t", d.t}, {"value", d.v}};
        case DensityForm::Kind::Steps:
            return {{"name", "steps"}, {"t", d.t}, {"value", d.v}};
    }
    return {};
}

}  // namespace

HamiltonianSpec parse_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("spec: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InputError("spec: expected a JSON object");
    }
    const json& kind_j = need(j, "kind", "spec");
    if (!kind_j.is_string()) {
        throw InputError("spec.kind: expected a string");
    }
    const std::string kind = kind_j.get<std::string>();
    HamiltonianSpec out;
    if (kind == "hamburger") {
        only_keys(j, {"kind", "lengths", "angles"}, "hamburger");
        HamburgerSpec h;
        h.lengths = numbers(need(j, "lengths", "hamburger"), "hamburger.lengths");
        h.angles = numbers(need(j, "angles", "hamburger"), "hamburger.angles");
        out = h;
    } else if (kind == "profile") {
        only_keys(j, {"kind", "domain", "phi", "density", "warp"}, "profile");
        AngleProfile p;
        std::tie(p.alpha, p.beta) = domain_of(j, "profile");
        p.phi = parse_phi(need(j, "phi", "profile"));
        if (j.contains("density")) {
            p.density = parse_density(j["density"]);
        }
        if (j.contains("warp")) {
            p.warp = number(j["warp"], "profile.warp");
        }
        out = p;
    } else if (kind == "diagonal") {
        only_keys(j, {"kind", "domain", "h1_intervals"}, "diagonal");
        DiagonalSpec d;
        std::tie(d.alpha, d.beta) = domain_of(j, "diagonal");
        const json& iv = need(j, "h1_intervals", "diagonal");
        if (!iv.is_array()) {
            throw InputError("diagonal.h1_intervals: expected an array of [x0, x1] pairs");
        }
        for (const auto& e : iv) {
            const auto v = numbers(e, "diagonal.h1_intervals");
            if (v.size() != 2) {
                throw InputError("diagonal.h1_intervals: expected [x0, x1] pairs");
            }
            d.h1_intervals.emplace_back(v[0], v[1]);
        }
        out = d;
    } else if (kind == "constant") {
        only_keys(j, {"kind", "matrix", "length"}, "constant");
        ConstantMatrixSpec c;
        const json& m = need(j, "matrix", "constant");
        if (!m.is_array() || m.size() != 2) {
            throw InputError("constant.matrix: expected [[a, b], [c, d]]");
        }
        const auto r0 = numbers(m[0], "constant.matrix");
        const auto r1 = numbers(m[1], "constant.matrix");
        if (r0.size() != 2 || r1.size() != 2) {
            throw InputError("constant.matrix: expected [[a, b], [c, d]]");
        }
        c.matrix = {r0[0], r0[1], r1[0], r1[1]};
        c.length = number(need(j, "length", "constant"), "constant.length");
        out = c;
    } else {
        throw InputError("spec.kind: unknown kind '" + kind + "'");
    }
    validate(out);
    return out;
}

std::string spec_to_json(const HamiltonianSpec& spec, int indent) {
    json j;
    if (const auto* h = std::get_if<HamburgerSpec>(&spec)) {
        j = {{"kind", "hamburger"}, {"lengths", h->lengths}, {"angles", h->angles}};
    } else if (const auto* p = std::get_if<AngleProfile>(&spec)) {
        j = {{"kind", "profile"},
             {"domain", {p->alpha, p->beta}},
             {"phi", phi_json(p->phi)},
             {"density", density_json(p->density)}};
        if (p->warp != 1.0) {
            j["warp"] = p->warp;
        }
    } else if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        json iv = json::array();
        for (const auto& [a, b] : d->h1_intervals) {
            iv.push_back({a, b});
        }
        j = {{"kind", "diagonal"}, {"domain", {d->alpha, d->beta}}, {"h1_intervals", iv}};
    } else {
        const auto& c = std::get<ConstantMatrixSpec>(spec);
        j = {{"kind", "constant"},
             {"matrix", {{c.matrix.m11, c.matrix.m12}, {c.matrix.m21, c.matrix.m22}}},
             {"length", c.length}};
    }
    return j.dump(indent);
}

}  // namespace cansys
