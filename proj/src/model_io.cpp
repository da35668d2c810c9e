// model_io.cpp
#include "qlv/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qlv {

namespace {

using nlohmann::json;

CMatrix parse_cmatrix(const json& j, int rows, int cols, const std::string& name) {
    if (!j.is_array() || int(j.size()) != rows)
        throw validation_error("model file: " + name + " must be an array of " +
                               std::to_string(rows) + " rows");
    CMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[size_t(r)];
        if (!row.is_array() || int(row.size()) != cols)
            throw validation_error("model file: " + name + " row " + std::to_string(r) +
                                   " must have " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            const json& e = row[size_t(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw validation_error("model file: " + name + " entries must be [re, im] pairs");
            out(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return out;
}

std::vector<double> parse_reals(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty())
        throw validation_error("model file: " + name + " must be a non-empty array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number())
            throw validation_error("model file: " + name + " entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw validation_error("model file: missing " + where);
    return *it;
}

} // namespace

ModelSpec parse_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("model file: JSON parse failed: ") + e.what());
    }
    if (!j.is_object())
        throw validation_error("model file: top level must be an object");

    const json& jsys = field(j, "system", "\"system\"");
    const json& jbath = field(j, "bath", "\"bath\"");
    const json& jcoup = field(j, "coupling", "\"coupling\"");

    ModelSpec m;
    const json& jdim = field(jsys, "dim", "system.dim");
    if (!jdim.is_number_integer() || jdim.get<int>() < 1)
        throw validation_error("model file: system.dim must be a positive integer");
    m.system.d = jdim.get<int>();
    m.system.H_S = parse_cmatrix(field(jsys, "H_S", "system.H_S"), m.system.d, m.system.d,
                                 "system.H_S");

    m.bath.gamma = parse_reals(field(jbath, "gamma", "bath.gamma"), "bath.gamma");
    if (m.bath.gamma.size() < 2)
        throw validation_error("model file: bath.gamma needs at least two levels");
    m.bath.N = int(m.bath.gamma.size()) - 1;

    const json& jstate = field(jbath, "state", "bath.state");
    std::string stype = field(jstate, "type", "bath.state.type").get<std::string>();
    if (stype == "gibbs") {
        double beta = field(jstate, "beta", "bath.state.beta").get<double>();
        m.bath.weights = gibbs_weights(m.bath.gamma, beta);
        m.bath.beta = beta;
    } else if (stype == "weights") {
        m.bath.weights = parse_reals(field(jstate, "weights", "bath.state.weights"),
                                     "bath.state.weights");
        if (m.bath.weights.size() != m.bath.gamma.size())
            throw validation_error("model file: bath.state.weights length must match gamma");
    } else {
        throw validation_error("model file: bath.state.type must be \"gibbs\" or \"weights\"");
    }

    std::string ctype = field(jcoup, "type", "coupling.type").get<std::string>();
    if (ctype == "ladder") {
        if (jsys.contains("V"))
            throw validation_error("model file: ladder coupling generates V; drop system.V");
        if (int(m.bath.gamma.size()) != m.system.d)
            throw validation_error("model file: ladder coupling needs one bath level per "
                                   "system level (gamma length = dim)");
        m.system.V = ladder_couplings(m.system.d);
    } else if (ctype == "explicit") {
        const json& jV = field(jsys, "V", "system.V");
        if (!jV.is_array() || int(jV.size()) != m.bath.N)
            throw validation_error("model file: system.V must list N = " +
                                   std::to_string(m.bath.N) + " operators");
        for (int i = 0; i < m.bath.N; ++i)
            m.system.V.push_back(parse_cmatrix(jV[size_t(i)], m.system.d, m.system.d,
                                               "system.V[" + std::to_string(i) + "]"));
    } else {
        throw validation_error("model file: coupling.type must be \"explicit\" or \"ladder\"");
    }

    validate(m);
    return m;
}

ModelSpec load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw validation_error("model file: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_model(ss.str());
}

} // namespace qlv
