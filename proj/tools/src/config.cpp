#include "splitfem_app/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "splitfem/errors.hpp"

namespace splitfem::app {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + where + "." + key + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("'" + where + "." + key + "' has the wrong type");
    }
}

void read_count(const json& obj, const char* key, const std::string& where, std::size_t& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError("'" + where + "." + key + "' must be a non-negative integer");
    out = v.get<std::size_t>();
}

json section(const json& j, const char* name) {
    if (!j.contains(name)) return json::object();
    return j.at(name);
}

}  // namespace

void RunConfig::validate() const {
    if (mesh.n < 3) throw ConfigError("mesh.n must be at least 3");
    if (!(mesh.length > 0.0)) throw ConfigError("mesh.length must be positive");
    if (!(params.g > 0.0)) throw ConfigError("params.g must be positive");
    if (!(params.h_mean > 0.0)) throw ConfigError("params.h_mean must be positive");
    if (closure.uses(ClosureKind::gp0) && mesh.n % 2 == 0)
        throw ConfigError("closure " + closure.label() + " uses gp0, which is singular for even n (mesh.n = " +
                          std::to_string(mesh.n) + "); choose an odd number of elements");
    if (time.dt && !(*time.dt > 0.0)) throw ConfigError("time.dt must be positive when given");
    if (!(time.t_end_cycles >= 0.0)) throw ConfigError("time.t_end_cycles must be >= 0");
    if (time.sample_every == 0) throw ConfigError("time.sample_every must be at least 1");
    if (!(time.fp_tol > 0.0)) throw ConfigError("time.fp_tol must be positive");
    if (time.fp_max_iters < 1) throw ConfigError("time.fp_max_iters must be at least 1");
    try {
        testcase.config.validate(params);
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("testcase: ") + e.what());
    }
    if (testcase.name != TestCase::tc3 && params.f == 0.0)
        throw ConfigError("testcase " + std::string(to_string(testcase.name)) +
                          " is geostrophically balanced and needs params.f != 0");
    if (testcase.name == TestCase::tc3 && !(testcase.config.balance_fraction < 1.0))
        throw ConfigError("testcase tc3 needs balance_fraction < 1");
    if (output.prefix.empty()) throw ConfigError("output.prefix must not be empty");
}

Mesh RunConfig::make_mesh() const { return Mesh::uniform(mesh.n, mesh.length); }

TimeConfig RunConfig::time_config(const Mesh& m) const {
    TimeConfig tc;
    tc.dt = time.dt ? *time.dt : default_time_step(m, params);
    tc.scheme = time.scheme;
    tc.fp_tol = time.fp_tol;
    tc.fp_max_iters = time.fp_max_iters;
    return tc;
}

double RunConfig::t_end(const Mesh& m) const { return time.t_end_cycles * cycle_time(m, params); }

json to_json(const RunConfig& c) {
    json j;
    j["mesh"] = {{"n", c.mesh.n}, {"length", c.mesh.length}};
    j["params"] = {{"g", c.params.g}, {"f", c.params.f}, {"h_mean", c.params.h_mean}};
    j["closure"] = {{"height", std::string(to_string(c.closure.height))},
                    {"velocity", std::string(to_string(c.closure.velocity))}};
    j["time"] = {{"scheme", std::string(to_string(c.time.scheme))},
                 {"dt", c.time.dt ? json(*c.time.dt) : json(nullptr)},
                 {"t_end_cycles", c.time.t_end_cycles},
                 {"sample_every", c.time.sample_every},
                 {"fp_tol", c.time.fp_tol},
                 {"fp_max_iters", c.time.fp_max_iters}};
    j["testcase"] = {{"name", std::string(to_string(c.testcase.name))},
                     {"amplitude", c.testcase.config.amplitude},
                     {"width", c.testcase.config.width},
                     {"center", c.testcase.config.center},
                     {"balance_fraction", c.testcase.config.balance_fraction}};
    j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}};
    return j;
}

RunConfig config_from_json(const json& j) {
    reject_unknown(j, "config", {"mesh", "params", "closure", "time", "testcase", "output"});
    RunConfig c;

    const json mesh = section(j, "mesh");
    reject_unknown(mesh, "mesh", {"n", "length"});
    read_count(mesh, "n", "mesh", c.mesh.n);
    read(mesh, "length", "mesh", c.mesh.length);

    const json params = section(j, "params");
    reject_unknown(params, "params", {"g", "f", "h_mean"});
    read(params, "g", "params", c.params.g);
    read(params, "f", "params", c.params.f);
    read(params, "h_mean", "params", c.params.h_mean);

    const json closure = section(j, "closure");
    reject_unknown(closure, "closure", {"height", "velocity"});
    try {
        std::string name;
        if (closure.contains("height")) {
            read(closure, "height", "closure", name);
            c.closure.height = parse_closure_kind(name);
        }
        if (closure.contains("velocity")) {
            read(closure, "velocity", "closure", name);
            c.closure.velocity = parse_closure_kind(name);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }

    const json time = section(j, "time");
    reject_unknown(time, "time",
                   {"scheme", "dt", "t_end_cycles", "sample_every", "fp_tol", "fp_max_iters"});
    try {
        if (time.contains("scheme")) {
            std::string name;
            read(time, "scheme", "time", name);
            c.time.scheme = parse_time_scheme(name);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (time.contains("dt") && !time.at("dt").is_null()) {
        double dt = 0.0;
        read(time, "dt", "time", dt);
        c.time.dt = dt;
    }
    read(time, "t_end_cycles", "time", c.time.t_end_cycles);
    read_count(time, "sample_every", "time", c.time.sample_every);
    read(time, "fp_tol", "time", c.time.fp_tol);
    read(time, "fp_max_iters", "time", c.time.fp_max_iters);

    const json tc = section(j, "testcase");
    reject_unknown(tc, "testcase", {"name", "amplitude", "width", "center", "balance_fraction"});
    try {
        if (tc.contains("name")) {
            std::string name;
            read(tc, "name", "testcase", name);
            c.testcase.name = parse_test_case(name);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    // A pure height bump unless told otherwise.
    if (c.testcase.name == TestCase::tc3) c.testcase.config.balance_fraction = 0.0;
    read(tc, "amplitude", "testcase", c.testcase.config.amplitude);
    read(tc, "width", "testcase", c.testcase.config.width);
    read(tc, "center", "testcase", c.testcase.config.center);
    read(tc, "balance_fraction", "testcase", c.testcase.config.balance_fraction);

    const json out = section(j, "output");
    reject_unknown(out, "output", {"dir", "prefix"});
    read(out, "dir", "output", c.output.dir);
    read(out, "prefix", "output", c.output.prefix);

    c.validate();
    return c;
}

void apply_overrides(json& j, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + a + "' must look like key.path=value");
        const std::string path = a.substr(0, eq);
        const std::string text = a.substr(eq + 1);
        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        json* node = &j;
        std::size_t start = 0;
        while (true) {
            const auto dot = path.find('.', start);
            const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (key.empty()) throw ConfigError("override '" + a + "' has an empty key");
            if (!node->is_object()) *node = json::object();
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            node = &(*node)[key];
            start = dot + 1;
        }
    }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json j = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
    }
    apply_overrides(j, overrides);
    if (const char* dir = std::getenv("SPLITFEM_OUT_DIR"); dir && *dir) j["output"]["dir"] = dir;
    return config_from_json(j);
}

}  // namespace splitfem::app
