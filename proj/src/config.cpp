#include "nemo/config.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#ifndef NEMO_VERSION
#define NEMO_VERSION "0.0.0"
#endif
#ifndef NEMO_BUILD_ID
#define NEMO_BUILD_ID "unknown"
#endif

namespace nemo {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw Error(key + ": " + what);
}

std::size_t get_count(const json& v, const std::string& key, std::size_t min) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(key, "expected an integer, got " + v.dump());
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(key, "must be non-negative");
    auto x = v.get<std::uint64_t>();
    if (x < min) fail(key, "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(x);
}

double get_real(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
}

std::uint64_t get_seed(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    fail(key, "expected a non-negative integer, got " + v.dump());
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) fail(key, "expected a string, got " + v.dump());
    return v.get<std::string>();
}

std::size_t get_interval(const json& v, const std::string& key) {
    if (v.is_null()) return 0;
    if (v.is_string()) {
        if (v.get<std::string>() == "none") return 0;
        fail(key, "expected an integer or \"none\", got " + v.dump());
    }
    return get_count(v, key, 0);
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        v = std::stoull(text, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw Error(source + ": expected a non-negative integer seed, got '" + text + "'");
    return v;
}

struct AreaSlot {
    const char* name;
    AreaParams OrganConfig::*member;
};

constexpr AreaSlot area_slots[] = {
    {"PHON", &OrganConfig::phon},     {"LEX_N", &OrganConfig::lex_n},
    {"LEX_V", &OrganConfig::lex_v},   {"VISUAL", &OrganConfig::visual},
    {"MOTOR", &OrganConfig::motor},   {"CONTEXT", &OrganConfig::context},
};

std::string area_names() {
    std::string s;
    for (const auto& a : area_slots) s += (s.empty() ? "" : ", ") + std::string(a.name);
    return s;
}

void apply_area(const json& doc, AreaParams& area, const std::string& prefix, bool complete) {
    if (!doc.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, v] : doc.items()) {
        const std::string path = prefix + "." + key;
        if (key == "n")
            area.n = get_count(v, path, 1);
        else if (key == "k")
            area.k = get_count(v, path, 1);
        else if (key == "p") {
            area.p = get_real(v, path);
            if (area.p < 0.0 || area.p > 1.0) fail(path, "must lie in [0, 1], got " + v.dump());
        } else if (key == "beta") {
            area.beta = get_real(v, path);
            if (area.beta < 0.0) fail(path, "must be non-negative, got " + v.dump());
        } else {
            fail(path, "unknown key (expected n, k, p, beta)");
        }
    }
    if (complete)
        for (const char* key : {"n", "k", "p", "beta"})
            if (!doc.contains(key)) fail(prefix + "." + key, "required");
    if (area.k > area.n) fail(prefix + ".k", "must not exceed n");
}

void apply_sweep(const json& doc, RunConfig& c) {
    if (!doc.is_object()) fail("sweep", "expected an object");
    SweepSpec s = c.sweep.value_or(SweepSpec{});
    for (const auto& [key, v] : doc.items()) {
        if (key == "variable") {
            try {
                s.variable = sweep_variable_from_string(get_string(v, "sweep.variable"));
            } catch (const Error& e) {
                fail("sweep.variable", e.what());
            }
        } else if (key != "values") {
            fail("sweep." + key, "unknown key (expected variable, values)");
        }
    }
    if (!doc.contains("variable") && !c.sweep) fail("sweep.variable", "required");
    if (doc.contains("values")) {
        const auto& vals = doc["values"];
        if (!vals.is_array() || vals.empty()) fail("sweep.values", "expected a non-empty array");
        s.values.clear();
        for (std::size_t i = 0; i < vals.size(); ++i)
            s.values.push_back(get_real(vals[i], "sweep.values[" + std::to_string(i) + "]"));
    }
    if (s.values.empty()) fail("sweep.values", "required");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const std::string key = "sweep.values[" + std::to_string(i) + "]";
        double v = s.values[i];
        if (s.variable == SweepVariable::Beta) {
            if (v < 0.0) fail(key, "beta must be non-negative");
        } else if (v < 0.0 || v != std::floor(v)) {
            fail(key, "expected a non-negative integer");
        } else if (s.variable == SweepVariable::Lexicon && v < 1.0) {
            fail(key, "l must be at least 1");
        }
    }
    c.sweep = std::move(s);
}

} // namespace

std::string_view to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::Lexicon: return "l";
    case SweepVariable::Beta: return "beta";
    case SweepVariable::TutoringInterval: return "tutoring_interval";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(std::string_view s) {
    if (s == "l") return SweepVariable::Lexicon;
    if (s == "beta") return SweepVariable::Beta;
    if (s == "tutoring_interval") return SweepVariable::TutoringInterval;
    throw Error("unknown sweep variable '" + std::string(s) +
                "' (expected l, beta, tutoring_interval)");
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    c.preset = std::string(name);
    auto& o = c.experiment.organ;
    auto set = [](AreaParams& a, std::size_t n, std::size_t k, double p, double beta) {
        a.n = n;
        a.k = k;
        a.p = p;
        a.beta = beta;
    };
    std::size_t n = 0;
    double beta = 0.0;
    if (name == "fig2a") {
        n = 100000;
        beta = 0.06;
        o.contexts = 20;
        c.experiment.l = 4;
    } else if (name == "desk") {
        n = 10000;
        beta = 0.1;
        o.contexts = 5;
        c.experiment.l = 3;
        c.experiment.max_sentences = 500;
    } else {
        throw Error("unknown preset '" + std::string(name) + "' (expected fig2a, desk)");
    }
    set(o.phon, n, 100, 0.05, beta);
    set(o.lex_n, n, 50, 0.05, beta);
    set(o.lex_v, n, 50, 0.05, beta);
    set(o.visual, n, 100, 0.05, beta);
    set(o.motor, n, 100, 0.05, beta);
    set(o.context, n, 20, 0.05, beta);
    o.tau = 2;
    o.order = WordOrder::SV;
    o.backend = Backend::Lazy;
    return c;
}

std::vector<std::string> preset_names() { return {"fig2a", "desk"}; }

RunConfig apply_config(const json& doc, RunConfig c, bool from_preset) {
    if (!doc.is_object()) throw Error("config: expected a JSON object at top level");
    auto& e = c.experiment;
    auto& o = e.organ;
    for (const auto& [key, v] : doc.items()) {
        if (key == "areas") {
            if (!v.is_object()) fail("areas", "expected an object");
            for (const auto& [name, area] : v.items()) {
                const AreaSlot* slot = nullptr;
                for (const auto& s : area_slots)
                    if (name == s.name) slot = &s;
                if (!slot) fail("areas." + name, "unknown area (expected " + area_names() + ")");
                apply_area(area, o.*(slot->member), "areas." + name, !from_preset);
            }
        } else if (key == "tau") {
            o.tau = get_count(v, key, 1);
        } else if (key == "order") {
            try {
                o.order = word_order_from_string(get_string(v, key));
            } catch (const Error& err) {
                fail(key, err.what());
            }
        } else if (key == "l") {
            e.l = get_count(v, key, 1);
        } else if (key == "C") {
            o.contexts = get_count(v, key, 0);
        } else if (key == "backend") {
            try {
                o.backend = backend_from_string(get_string(v, key));
            } catch (const Error& err) {
                fail(key, err.what());
            }
        } else if (key == "seed") {
            e.seed = get_seed(v, key);
        } else if (key == "max_sentences") {
            e.max_sentences = get_count(v, key, 0);
        } else if (key == "eval_every") {
            e.eval_every = get_count(v, key, 1);
        } else if (key == "tutoring_interval") {
            e.tutoring_interval = get_interval(v, key);
        } else if (key == "repeats") {
            e.repeats = get_count(v, key, 1);
        } else if (key == "sweep") {
            apply_sweep(v, c);
        } else {
            fail(key, "unknown key");
        }
    }
    if (!from_preset) {
        for (const char* key : {"areas", "l", "C"})
            if (!doc.contains(key)) fail(key, "required when no preset is given");
        for (const auto& s : area_slots) {
            if (std::string_view(s.name) == "CONTEXT" && o.contexts == 0) continue;
            if (!doc["areas"].contains(s.name)) fail(std::string("areas.") + s.name, "required");
        }
    }
    for (const auto& s : area_slots) (o.*(s.member)).name = s.name;
    return c;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path.string() + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                    ": malformed JSON");
    }
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::optional<std::string>& preset_name,
                         const ConfigOverrides& ov, const std::optional<std::string>& env_seed) {
    if (!file && !preset_name) throw Error("no configuration given (use --config or --preset)");
    RunConfig c = preset_name ? preset(*preset_name) : RunConfig{};
    bool file_seed = false;
    if (file) {
        json doc = read_json_file(*file);
        if (doc.is_object() && doc.contains("command") && doc.contains("config")) {
            json inner = doc["config"];
            doc = std::move(inner);
        }
        try {
            c = apply_config(doc, std::move(c), preset_name.has_value());
        } catch (const Error& err) {
            throw Error(file->string() + ": " + err.what());
        }
        file_seed = doc.is_object() && doc.contains("seed");
    }
    auto& e = c.experiment;
    if (ov.seed)
        e.seed = *ov.seed;
    else if (!file_seed && env_seed && !env_seed->empty())
        e.seed = parse_seed_text(*env_seed, "NEMO_SEED");
    if (ov.beta) {
        if (!(*ov.beta >= 0.0)) throw Error("--beta: must be non-negative");
        e.organ.set_beta(*ov.beta);
    }
    if (ov.l) {
        if (*ov.l == 0) throw Error("--l: must be at least 1");
        e.l = *ov.l;
    }
    if (ov.contexts) e.organ.contexts = *ov.contexts;
    if (ov.tau) {
        if (*ov.tau == 0) throw Error("--tau: must be at least 1");
        e.organ.tau = *ov.tau;
    }
    if (ov.order) e.organ.order = word_order_from_string(*ov.order);
    if (ov.backend) e.organ.backend = backend_from_string(*ov.backend);
    if (ov.max_sentences) e.max_sentences = *ov.max_sentences;
    if (ov.tutoring_interval) e.tutoring_interval = *ov.tutoring_interval;
    if (ov.repeats) {
        if (*ov.repeats == 0) throw Error("--repeats: must be at least 1");
        e.repeats = *ov.repeats;
    }
    if (ov.eval_every) {
        if (*ov.eval_every == 0) throw Error("--eval-every: must be at least 1");
        e.eval_every = *ov.eval_every;
    }
    e.validate();
    return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    const auto& e = c.experiment;
    const auto& o = e.organ;
    nlohmann::ordered_json areas;
    for (const auto& s : area_slots) {
        if (std::string_view(s.name) == "CONTEXT" && o.contexts == 0) continue;
        const AreaParams& a = o.*(s.member);
        areas[s.name] = {{"n", a.n}, {"k", a.k}, {"p", a.p}, {"beta", a.beta}};
    }
    nlohmann::ordered_json j;
    j["areas"] = std::move(areas);
    j["tau"] = o.tau;
    j["order"] = to_string(o.order);
    j["l"] = e.l;
    j["C"] = o.contexts;
    j["backend"] = to_string(o.backend);
    j["seed"] = e.seed;
    j["max_sentences"] = e.budget();
    j["eval_every"] = e.eval_every;
    j["tutoring_interval"] =
        e.tutoring_interval == 0 ? nlohmann::ordered_json() : nlohmann::ordered_json(e.tutoring_interval);
    j["repeats"] = e.repeats;
    if (c.sweep)
        j["sweep"] = {{"variable", to_string(c.sweep->variable)}, {"values", c.sweep->values}};
    return j;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view tool_version() { return NEMO_VERSION; }
std::string_view build_id() { return NEMO_BUILD_ID; }

RunManifest make_manifest(std::string command, const RunConfig& config, int threads) {
    RunManifest m;
    m.command = std::move(command);
    m.config = to_json(config);
    m.version = std::string(tool_version());
    m.build_id = std::string(build_id());
    m.seed = config.experiment.seed;
    m.threads = threads;
    m.started_at = utc_timestamp();
    return m;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = version;
    j["build_id"] = build_id;
    j["seed"] = seed;
    j["threads"] = threads;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(finished_at);
    j["config"] = config;
    return j;
}

} // namespace nemo
