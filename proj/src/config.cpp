#include "mcomm/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mcomm/errors.hpp"

namespace mcomm {

using nlohmann::json;

namespace {

std::string field_error(const std::string& field, const std::string& what) { return field + ": " + what; }

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
    if (!obj.is_object()) throw ValidationError(field_error(where.empty() ? "config" : where, "expected an object"));
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw ValidationError(field_error(where.empty() ? key : where + "." + key, "unknown field"));
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(field_error(where + "." + key, std::string("wrong type (") + e.what() + ")"));
    }
}

std::size_t read_voxel(const json& v, const std::string& field, const std::array<int, 3>& dims) {
    VoxelGrid shape;
    shape.dims = dims;
    try {
        if (v.is_array()) {
            if (v.size() != 3) throw ValidationError(field_error(field, "coordinate needs 3 entries"));
            return shape.index_of(v[0].get<int>(), v[1].get<int>(), v[2].get<int>());
        }
        const auto idx = v.get<long long>();
        if (idx < 1 || static_cast<std::size_t>(idx) > shape.voxel_count())
            throw ValidationError(field_error(field, "voxel index out of range"));
        return static_cast<std::size_t>(idx);
    } catch (const json::exception&) {
        throw ValidationError(field_error(field, "expected a 1-based index or [x, y, z]"));
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        throw ValidationError(msg.rfind(field, 0) == 0 ? msg : field_error(field, msg));
    }
}

Configuration parse_configuration(const std::string& s) {
    if (s == "om_only") return Configuration::OmOnly;
    if (s == "erc_om") return Configuration::ErcOm;
    if (s == "both") return Configuration::Both;
    throw ValidationError(field_error("receiver.configuration", "expected om_only | erc_om | both"));
}

OutputKind parse_kind(const std::string& s) {
    if (s == "rc") return OutputKind::RC;
    if (s == "catreg") return OutputKind::CATREG;
    throw ValidationError(field_error("receiver.output_module", "expected rc | catreg"));
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError(field_error(field, what));
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::string to_string(Configuration c) {
    switch (c) {
        case Configuration::OmOnly: return "om_only";
        case Configuration::ErcOm: return "erc_om";
        case Configuration::Both: return "both";
    }
    return "";
}

std::string to_string(OutputKind k) { return k == OutputKind::RC ? "rc" : "catreg"; }

bool ExperimentConfig::operator==(const ExperimentConfig& o) const { return to_json(*this) == to_json(o); }

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    reject_unknown(j, "", {"grid", "receiver", "input", "frequency", "ssa", "sweep", "closed_form", "output_dir"});

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, "grid", {"dims", "delta", "diff_coeff", "tx", "rx", "boundary", "escape_rate", "escapes"});
        read(g, "dims", "grid", cfg.grid.dims);
        for (int m : cfg.grid.dims) require(m >= 1, "grid.dims", "every dimension must be >= 1");
        read(g, "delta", "grid", cfg.grid.delta);
        read(g, "diff_coeff", "grid", cfg.grid.diff_coeff);
        if (g.contains("tx")) cfg.grid.tx = read_voxel(g.at("tx"), "grid.tx", cfg.grid.dims);
        if (g.contains("rx")) cfg.grid.rx = read_voxel(g.at("rx"), "grid.rx", cfg.grid.dims);
        if (g.contains("boundary")) {
            std::string b;
            read(g, "boundary", "grid", b);
            require(b == "absorbing" || b == "reflecting", "grid.boundary", "expected absorbing | reflecting");
            cfg.grid.boundary = b == "absorbing" ? Boundary::Absorbing : Boundary::Reflecting;
        }
        if (g.contains("escape_rate") && !g.at("escape_rate").is_null()) {
            double e = 0.0;
            read(g, "escape_rate", "grid", e);
            cfg.grid.escape_rate = e;
        }
        if (g.contains("escapes")) {
            const auto& list = g.at("escapes");
            require(list.is_array(), "grid.escapes", "expected a list of [voxel, rate]");
            for (const auto& item : list) {
                require(item.is_array() && item.size() == 2, "grid.escapes", "expected [voxel, rate] pairs");
                const auto voxel = read_voxel(item[0], "grid.escapes", cfg.grid.dims);
                require(item[1].is_number(), "grid.escapes", "rate must be a number");
                cfg.grid.escapes.push_back({voxel, item[1].get<double>()});
            }
        }
    }

    if (j.contains("receiver")) {
        const auto& r = j.at("receiver");
        reject_unknown(r, "receiver", {"configuration", "output_module", "k_plus", "k_minus", "k_zero", "erc",
                                       "linearized", "regime_threshold"});
        if (r.contains("configuration")) {
            std::string s;
            read(r, "configuration", "receiver", s);
            cfg.receiver.configuration = parse_configuration(s);
        }
        if (r.contains("output_module")) {
            std::string s;
            read(r, "output_module", "receiver", s);
            cfg.receiver.output_module = parse_kind(s);
        }
        read(r, "k_plus", "receiver", cfg.receiver.k_plus);
        read(r, "k_minus", "receiver", cfg.receiver.k_minus);
        read(r, "k_zero", "receiver", cfg.receiver.k_zero);
        read(r, "linearized", "receiver", cfg.receiver.linearized);
        read(r, "regime_threshold", "receiver", cfg.receiver.regime_threshold);
        if (r.contains("erc")) {
            const auto& e = r.at("erc");
            reject_unknown(e, "receiver.erc",
                           {"beta1", "beta2", "k1", "alpha1", "alpha2", "k2", "z_total", "p_total"});
            auto& p = cfg.receiver.erc;
            const std::string w = "receiver.erc";
            read(e, "beta1", w, p.beta1);
            read(e, "beta2", w, p.beta2);
            read(e, "k1", w, p.k1);
            read(e, "alpha1", w, p.alpha1);
            read(e, "alpha2", w, p.alpha2);
            read(e, "k2", w, p.k2);
            read(e, "z_total", w, p.z_total);
            read(e, "p_total", w, p.p_total);
        }
    }

    if (j.contains("input")) {
        const auto& in = j.at("input");
        reject_unknown(in, "input", {"c", "power_budget", "normalization"});
        read(in, "c", "input", cfg.input.c);
        read(in, "power_budget", "input", cfg.input.power_budget);
        if (in.contains("normalization")) {
            std::string s;
            read(in, "normalization", "input", s);
            try {
                cfg.input.normalization = parse_normalization(s);
            } catch (const ValidationError& e) {
                throw ValidationError(field_error("input.normalization", e.what()));
            }
        }
    }

    if (j.contains("frequency")) {
        const auto& f = j.at("frequency");
        reject_unknown(f, "frequency", {"min", "max", "points"});
        read(f, "min", "frequency", cfg.frequency.min);
        read(f, "max", "frequency", cfg.frequency.max);
        read(f, "points", "frequency", cfg.frequency.points);
    }

    if (j.contains("ssa")) {
        const auto& s = j.at("ssa");
        reject_unknown(s, "ssa", {"runs", "t_end", "seed", "sample_dt"});
        read(s, "runs", "ssa", cfg.ssa.runs);
        read(s, "t_end", "ssa", cfg.ssa.t_end);
        read(s, "seed", "ssa", cfg.ssa.seed);
        read(s, "sample_dt", "ssa", cfg.ssa.sample_dt);
    }

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const auto& s = j.at("sweep");
        reject_unknown(s, "sweep", {"variable", "values"});
        SweepSpec sw;
        read(s, "variable", "sweep", sw.variable);
        read(s, "values", "sweep", sw.values);
        cfg.sweep = sw;
    }

    read(j, "closed_form", "config", cfg.closed_form);
    read(j, "output_dir", "config", cfg.output_dir);
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: not valid JSON (") + e.what() + ")");
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    json escapes = json::array();
    for (const auto& e : cfg.grid.escapes) escapes.push_back({e.voxel, e.rate});
    j["grid"] = {{"dims", cfg.grid.dims},
                 {"delta", cfg.grid.delta},
                 {"diff_coeff", cfg.grid.diff_coeff},
                 {"tx", cfg.grid.tx},
                 {"rx", cfg.grid.rx},
                 {"boundary", cfg.grid.boundary == Boundary::Absorbing ? "absorbing" : "reflecting"},
                 {"escape_rate", cfg.grid.escape_rate ? json(*cfg.grid.escape_rate) : json(nullptr)},
                 {"escapes", escapes}};
    const auto& p = cfg.receiver.erc;
    j["receiver"] = {{"configuration", to_string(cfg.receiver.configuration)},
                     {"output_module", to_string(cfg.receiver.output_module)},
                     {"k_plus", cfg.receiver.k_plus},
                     {"k_minus", cfg.receiver.k_minus},
                     {"k_zero", cfg.receiver.k_zero},
                     {"linearized", cfg.receiver.linearized},
                     {"regime_threshold", cfg.receiver.regime_threshold},
                     {"erc",
                      {{"beta1", p.beta1},
                       {"beta2", p.beta2},
                       {"k1", p.k1},
                       {"alpha1", p.alpha1},
                       {"alpha2", p.alpha2},
                       {"k2", p.k2},
                       {"z_total", p.z_total},
                       {"p_total", p.p_total}}}};
    j["input"] = {{"c", cfg.input.c},
                  {"power_budget", cfg.input.power_budget},
                  {"normalization", to_string(cfg.input.normalization)}};
    j["frequency"] = {{"min", cfg.frequency.min}, {"max", cfg.frequency.max}, {"points", cfg.frequency.points}};
    j["ssa"] = {{"runs", cfg.ssa.runs}, {"t_end", cfg.ssa.t_end}, {"seed", cfg.ssa.seed}, {"sample_dt", cfg.ssa.sample_dt}};
    j["sweep"] = cfg.sweep ? json{{"variable", cfg.sweep->variable}, {"values", cfg.sweep->values}} : json(nullptr);
    j["closed_form"] = cfg.closed_form;
    j["output_dir"] = cfg.output_dir;
    return j;
}

void validate(const ExperimentConfig& cfg) {
    const auto& g = cfg.grid;
    for (int m : g.dims) require(m >= 1, "grid.dims", "every dimension must be >= 1");
    const std::size_t n = static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2];
    require(positive(g.delta), "grid.delta", "must be > 0");
    require(positive(g.diff_coeff), "grid.diff_coeff", "must be > 0");
    require(g.tx >= 1 && g.tx <= n, "grid.tx", "voxel index out of range");
    require(g.rx >= 1 && g.rx <= n, "grid.rx", "voxel index out of range");
    require(g.tx != g.rx, "grid.rx", "receiver must not share the transmitter voxel");
    if (g.escape_rate) require(*g.escape_rate >= 0.0 && std::isfinite(*g.escape_rate), "grid.escape_rate", "must be >= 0");
    for (const auto& e : g.escapes) {
        require(e.voxel >= 1 && e.voxel <= n, "grid.escapes", "voxel index out of range");
        require(e.rate >= 0.0 && std::isfinite(e.rate), "grid.escapes", "escape rate must be >= 0");
    }

    const auto& r = cfg.receiver;
    require(positive(r.k_plus), "receiver.k_plus", "must be > 0");
    require(positive(r.k_minus), "receiver.k_minus", "must be > 0");
    require(r.k_zero >= 0.0 && std::isfinite(r.k_zero), "receiver.k_zero", "must be >= 0");
    require(positive(r.regime_threshold), "receiver.regime_threshold", "must be > 0");
    const auto& p = r.erc;
    require(positive(p.beta1), "receiver.erc.beta1", "must be > 0");
    require(positive(p.beta2), "receiver.erc.beta2", "must be > 0");
    require(positive(p.k1), "receiver.erc.k1", "must be > 0");
    require(positive(p.alpha1), "receiver.erc.alpha1", "must be > 0");
    require(positive(p.alpha2), "receiver.erc.alpha2", "must be > 0");
    require(positive(p.k2), "receiver.erc.k2", "must be > 0");
    require(positive(p.z_total), "receiver.erc.z_total", "must be > 0");
    require(positive(p.p_total), "receiver.erc.p_total", "must be > 0");

    require(cfg.input.c >= 0.0 && std::isfinite(cfg.input.c), "input.c", "must be >= 0");
    require(positive(cfg.input.power_budget), "input.power_budget", "must be > 0");

    const auto& f = cfg.frequency;
    require(positive(f.min), "frequency.min", "must be > 0");
    require(positive(f.max) && f.max > f.min, "frequency.max", "must exceed frequency.min");
    require(f.points >= 2, "frequency.points", "must be >= 2");

    require(cfg.ssa.runs >= 1, "ssa.runs", "must be >= 1");
    require(positive(cfg.ssa.t_end), "ssa.t_end", "must be > 0");
    require(positive(cfg.ssa.sample_dt) && cfg.ssa.sample_dt <= cfg.ssa.t_end, "ssa.sample_dt",
            "must be in (0, t_end]");

    if (cfg.sweep) {
        static const std::set<std::string> vars{"k_plus", "k_minus", "z_total", "p_total", "power_budget"};
        require(vars.count(cfg.sweep->variable) > 0, "sweep.variable",
                "expected k_plus | k_minus | z_total | p_total | power_budget");
        require(!cfg.sweep->values.empty(), "sweep.values", "sweep list is empty");
        for (double v : cfg.sweep->values) require(positive(v), "sweep.values", "every value must be > 0");
    }
    require(!cfg.output_dir.empty(), "output_dir", "must not be empty");
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string canonical = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace mcomm
