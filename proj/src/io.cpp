#include "sispatch/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace sispatch {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::BadConfig, msg); }

Vector read_vector(const json& j, const std::string& name, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        bad("field '" + name + "' must be an array of length " + std::to_string(n));
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_number()) bad("field '" + name + "' must contain numbers");
        v(i) = j[i].get<double>();
    }
    return v;
}

double read_positive(const json& j, const std::string& name) {
    if (!j.is_number()) bad("field '" + name + "' must be a number");
    const double x = j.get<double>();
    if (!(x > 0.0)) bad("field '" + name + "' must be positive");
    return x;
}

} // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) bad("config root must be a JSON object");

    static const std::set<std::string> known = {"n",  "L",  "beta", "gamma",      "dS",  "dI",
                                               "N",  "S0", "I0",   "tolerances", "seed"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) bad("unknown config field '" + k + "'");

    for (const char* req : {"n", "L", "beta", "gamma", "dS", "dI", "N"})
        if (!j.contains(req)) bad(std::string("missing required config field '") + req + "'");

    ScenarioConfig cfg;
    if (!j["n"].is_number_integer()) bad("field 'n' must be an integer");
    cfg.n = j["n"].get<int>();
    if (cfg.n < 2) bad("field 'n' must be at least 2");

    const json& lj = j["L"];
    if (!lj.is_array() || static_cast<int>(lj.size()) != cfg.n)
        bad("field 'L' must be an n x n array");
    cfg.L.resize(cfg.n, cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
        const Vector row = read_vector(lj[i], "L", cfg.n);
        cfg.L.row(i) = row.transpose();
    }

    cfg.beta = read_vector(j["beta"], "beta", cfg.n);
    cfg.gamma = read_vector(j["gamma"], "gamma", cfg.n);
    cfg.dS = read_positive(j["dS"], "dS");
    cfg.dI = read_positive(j["dI"], "dI");
    cfg.N = read_positive(j["N"], "N");

    if (j.contains("S0")) cfg.S0 = read_vector(j["S0"], "S0", cfg.n);
    if (j.contains("I0")) cfg.I0 = read_vector(j["I0"], "I0", cfg.n);
    if (cfg.S0.has_value() != cfg.I0.has_value())
        bad("fields 'S0' and 'I0' must be given together");
    if (cfg.S0 && cfg.I0) {
        if ((cfg.S0->array() < 0.0).any() || (cfg.I0->array() < 0.0).any())
            bad("initial data must be nonnegative");
        if (std::abs(cfg.S0->sum() + cfg.I0->sum() - cfg.N) > 1e-9 * cfg.N)
            bad("S0 and I0 must sum to N");
    }

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) bad("field 'tolerances' must be an object");
        for (const auto& [k, v] : t.items()) {
            if (k == "rel")
                cfg.tol_rel = read_positive(v, "tolerances.rel");
            else if (k == "abs")
                cfg.tol_abs = read_positive(v, "tolerances.abs");
            else
                bad("unknown tolerances field '" + k + "'");
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) bad("field 'seed' must be an integer");
        cfg.seed = j["seed"].get<long>();
    }
    return cfg;
}

Model model_from_config(const ScenarioConfig& cfg) {
    return build_model(cfg.L, cfg.beta, cfg.gamma, cfg.dS, cfg.dI, cfg.N);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void JsonWriter::comma() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!need_comma_.empty()) {
        if (need_comma_.back()) out_ += ',';
        need_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    comma();
    out_ += '"';
    out_ += name;
    out_ += "\":";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x) {
    comma();
    if (std::isfinite(x))
        out_ += format_double(x);
    else
        out_ += x > 0 ? "\"inf\"" : (x < 0 ? "\"-inf\"" : "\"nan\"");
    return *this;
}

JsonWriter& JsonWriter::value(long x) {
    comma();
    out_ += std::to_string(x);
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    comma();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    comma();
    out_ += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value(const Vector& v) {
    begin_array();
    for (int i = 0; i < v.size(); ++i) value(v(i));
    return end_array();
}

JsonWriter& JsonWriter::null_value() {
    comma();
    out_ += "null";
    return *this;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += fields[i];
    }
    row += '\n';
    return row;
}

} // namespace sispatch
