#include "weaklab/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace weaklab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw Error(ErrorCode::ParseError, field + ": " + message);
}

Complex parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(field, "expected a number or a [re, im] pair, got " + j.dump());
}

bool is_complex_entry(const json& j) {
    return j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number());
}

CMatrix parse_matrix(const json& j, Eigen::Index d, const std::string& field) {
    if (!j.is_array()) fail(field, "expected a matrix (array)");
    CMatrix m(d, d);
    const auto ud = static_cast<std::size_t>(d);
    const bool nested = j.size() == ud && std::all_of(j.begin(), j.end(), [&](const json& row) {
        return row.is_array() && row.size() == ud && std::all_of(row.begin(), row.end(), is_complex_entry);
    });
    if (nested) {
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                m(r, c) = parse_complex(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                        field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
            }
        }
        return m;
    }
    if (j.size() == ud * ud) {
        for (Eigen::Index k = 0; k < d * d; ++k) {
            m(k / d, k % d) = parse_complex(j[static_cast<std::size_t>(k)], field + "[" + std::to_string(k) + "]");
        }
        return m;
    }
    fail(field, "expected " + std::to_string(d) + " rows of " + std::to_string(d) + " entries or a flat list of " +
                    std::to_string(d * d) + " entries");
}

template <class F>
auto with_field(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(e.code(), field + ": " + e.what());
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) fail("<root>", "expected a JSON object");
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) {
        fail("dimension", "required integer field missing");
    }
    const Eigen::Index d = doc["dimension"].get<Eigen::Index>();
    if (d < 2) fail("dimension", "must be at least 2");

    if (!doc.contains("initial")) fail("initial", "required field missing");
    const json& init = doc["initial"];
    MixedState initial = with_field("initial", [&] {
        const bool is_ket = init.is_array() && init.size() == static_cast<std::size_t>(d) &&
                            std::all_of(init.begin(), init.end(), is_complex_entry);
        if (is_ket) {
            CVector v(d);
            for (Eigen::Index i = 0; i < d; ++i) {
                v(i) = parse_complex(init[static_cast<std::size_t>(i)], "initial[" + std::to_string(i) + "]");
            }
            return MixedState(PureState(std::move(v)));
        }
        return MixedState(parse_matrix(init, d, "initial"));
    });

    if (!doc.contains("steps") || !doc["steps"].is_array() || doc["steps"].empty()) {
        fail("steps", "required non-empty array");
    }
    std::vector<MeasurementStep> steps;
    for (std::size_t j = 0; j < doc["steps"].size(); ++j) {
        const std::string field = "steps[" + std::to_string(j) + "]";
        const json& s = doc["steps"][j];
        if (!s.is_object()) fail(field, "expected an object");
        if (!s.contains("observable")) fail(field + ".observable", "required field missing");
        if (!s.contains("sigma") || !s["sigma"].is_number()) fail(field + ".sigma", "required number missing");
        Observable obs = with_field(field + ".observable",
                                    [&] { return Observable(parse_matrix(s["observable"], d, field + ".observable")); });
        GaussianPointer ptr = with_field(field + ".sigma", [&] { return GaussianPointer(s["sigma"].get<double>()); });
        steps.push_back({std::move(obs), ptr});
    }

    std::optional<PovmElement> post;
    if (doc.contains("postselect") && !doc["postselect"].is_null()) {
        post = with_field("postselect", [&] { return PovmElement(parse_matrix(doc["postselect"], d, "postselect")); });
    }
    return with_field("<scenario>", [&] { return Scenario(std::move(initial), std::move(steps), std::move(post)); });
}

json scenario_to_json(const Scenario& scn) {
    json doc;
    doc["dimension"] = scn.dimension();
    doc["initial"] = matrix_json(scn.initial().matrix());
    json steps = json::array();
    for (const MeasurementStep& s : scn.steps()) {
        steps.push_back({{"observable", matrix_json(s.observable.matrix())}, {"sigma", s.pointer.sigma()}});
    }
    doc["steps"] = std::move(steps);
    doc["postselect"] = scn.post() ? matrix_json(scn.post()->matrix()) : json(nullptr);
    return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

void save_scenario(const Scenario& scn, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write scenario file " + path.string());
    out << scenario_to_json(scn).dump(2) << '\n';
}

}  // namespace weaklab
