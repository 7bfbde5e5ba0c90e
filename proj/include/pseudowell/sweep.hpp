#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pseudowell/bound.hpp"
#include "pseudowell/scattering.hpp"
#include "pseudowell/transfer.hpp"

namespace pseudowell {

enum class SweptParam { lam, v0, k, a };

enum class OutputKind {
    beta,
    tL,
    tR,
    rL,
    rR,
    abs_t2,
    abs_rL2,
    abs_rR2,
    dev_L,
    dev_R,
    pseudo_defect
};

struct GridSpec {
    double min = 0.0, max = 1.0;
    int count = 2;  // linear spacing

    double at(int i) const {
        return min + (max - min) * static_cast<double>(i) / (count - 1);
    }
};

// Declarative parameter sweep: one swept parameter over a linear grid, a
// potential template supplying the fixed parameters, and a set of output
// columns. Scattering outputs on a non-k sweep are evaluated at `fixed_k`
// (default 1/a).
struct SweepSpec {
    PotentialSpec model;
    SweptParam swept = SweptParam::lam;
    GridSpec grid;
    std::vector<OutputKind> outputs;
    double fixed_k = 0.0;  // 0 = default 1/a
    bool use_oracle = false;
    ModelTwoVariant variant = default_model_two_variant;

    void validate() const {
        model.validate();
        if (grid.count < 2) throw ValidationError("SweepSpec: grid count must be >= 2");
        if (!(grid.min < grid.max)) throw ValidationError("SweepSpec: grid min must be < max");
        if (outputs.empty()) throw ValidationError("SweepSpec: no outputs requested");
        if (swept == SweptParam::k && grid.min <= 0.0)
            throw ValidationError("SweepSpec: k grid must be positive");
    }
};

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
};

namespace detail {

inline const char* swept_name(SweptParam p) {
    switch (p) {
        case SweptParam::lam: return "lam";
        case SweptParam::v0: return "v0";
        case SweptParam::k: return "k";
        case SweptParam::a: return "a";
    }
    return "?";
}

inline const char* output_name(OutputKind o) {
    switch (o) {
        case OutputKind::beta: return "beta";
        case OutputKind::tL: return "tL";
        case OutputKind::tR: return "tR";
        case OutputKind::rL: return "rL";
        case OutputKind::rR: return "rR";
        case OutputKind::abs_t2: return "abs_t2";
        case OutputKind::abs_rL2: return "abs_rL2";
        case OutputKind::abs_rR2: return "abs_rR2";
        case OutputKind::dev_L: return "dev_L";
        case OutputKind::dev_R: return "dev_R";
        case OutputKind::pseudo_defect: return "pseudo_defect";
    }
    return "?";
}

inline bool output_is_complex(OutputKind o) {
    return o == OutputKind::tL || o == OutputKind::tR || o == OutputKind::rL ||
           o == OutputKind::rR;
}

inline bool output_needs_scattering(OutputKind o) { return o != OutputKind::beta; }

}  // namespace detail

inline std::optional<SweptParam> parse_swept(const std::string& s) {
    if (s == "lam") return SweptParam::lam;
    if (s == "v0" || s == "mu") return SweptParam::v0;
    if (s == "k") return SweptParam::k;
    if (s == "a") return SweptParam::a;
    return std::nullopt;
}

inline std::optional<OutputKind> parse_output(const std::string& s) {
    using O = OutputKind;
    static const std::map<std::string, O> names = {
        {"beta", O::beta},       {"tL", O::tL},          {"tR", O::tR},
        {"rL", O::rL},           {"rR", O::rR},          {"abs_t2", O::abs_t2},
        {"abs_rL2", O::abs_rL2}, {"abs_rR2", O::abs_rR2},{"dev_L", O::dev_L},
        {"dev_R", O::dev_R},     {"pseudo_defect", O::pseudo_defect}};
    auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

inline SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    table.columns.push_back(detail::swept_name(spec.swept));
    for (auto o : spec.outputs) {
        if (detail::output_is_complex(o)) {
            table.columns.push_back(std::string(detail::output_name(o)) + "_re");
            table.columns.push_back(std::string(detail::output_name(o)) + "_im");
        } else {
            table.columns.push_back(detail::output_name(o));
        }
    }

    bool needs_bound = false, needs_scatter = false;
    for (auto o : spec.outputs)
        (detail::output_needs_scattering(o) ? needs_scatter : needs_bound) = true;

    table.rows.resize(spec.grid.count);
    parallel_for(static_cast<std::size_t>(spec.grid.count), [&](std::size_t i) {
        const double value = spec.grid.at(static_cast<int>(i));
        PotentialSpec model = spec.model;
        double k = spec.fixed_k > 0.0 ? spec.fixed_k : 1.0 / model.a;
        switch (spec.swept) {
            case SweptParam::lam: model.lam = value; break;
            case SweptParam::v0: model.v0 = value; break;
            case SweptParam::a: model.a = value; break;
            case SweptParam::k: k = value; break;
        }
        model = PotentialSpec::normalized(model);

        std::optional<double> beta;
        if (needs_bound) {
            if (spec.use_oracle) {
                auto roots = oracle_find_real_bound_states(
                    decompose(model), detail::beta_max(model));
                if (!roots.empty()) beta = roots.front();
            } else {
                auto states = find_real_bound_states(model, 1e-10, spec.variant);
                if (!states.empty()) beta = states.front().beta.real();
            }
        }
        ScatteringData data;
        if (needs_scatter) {
            data = spec.use_oracle ? oracle_amplitudes(decompose(model), k)
                                   : amplitudes(model, k);
        }

        auto& row = table.rows[i];
        row.push_back(value);
        for (auto o : spec.outputs) {
            switch (o) {
                case OutputKind::beta:
                    row.push_back(beta);
                    break;
                case OutputKind::tL:
                    row.push_back(data.tL.real());
                    row.push_back(data.tL.imag());
                    break;
                case OutputKind::tR:
                    row.push_back(data.tR.real());
                    row.push_back(data.tR.imag());
                    break;
                case OutputKind::rL:
                    row.push_back(data.rL.real());
                    row.push_back(data.rL.imag());
                    break;
                case OutputKind::rR:
                    row.push_back(data.rR.real());
                    row.push_back(data.rR.imag());
                    break;
                case OutputKind::abs_t2:
                    row.push_back(std::norm(data.tL));
                    break;
                case OutputKind::abs_rL2:
                    row.push_back(std::norm(data.rL));
                    break;
                case OutputKind::abs_rR2:
                    row.push_back(std::norm(data.rR));
                    break;
                case OutputKind::dev_L:
                    row.push_back(unitarity_deviation(data, Side::L));
                    break;
                case OutputKind::dev_R:
                    row.push_back(unitarity_deviation(data, Side::R));
                    break;
                case OutputKind::pseudo_defect:
                    row.push_back(pseudo_unitarity_defect(s_matrix(data)));
                    break;
            }
        }
    });
    return table;
}

// ---------------------------------------------------------------------------
// CSV emission. Shortest round-trip formatting via to_chars, LF endings,
// empty cell for an absent value; byte-identical across runs by construction.

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_csv(const SweepTable& table, std::ostream& os) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            if (row[c]) os << format_double(*row[c]);
        }
        os << "\n";
    }
}

// ---------------------------------------------------------------------------
// Figure presets. Model parameters follow the two reference configurations
//   model I : v0 = 1,   a = 1  (binding curve);  v0 = 100, a = 10, lam = 5
//   model II: mu = 1,   a = 1  (binding curve);  mu = 1,   a = 1,  lam = 0.5
// k grids are project defaults (documented in the README): the b/c panels
// cover the resonance region, the d panels extend far enough that the
// unitarity deviation has decayed below 1e-2 at the endpoint.

struct FigurePreset {
    std::string name;
    SweepSpec sweep;
};

inline std::vector<FigurePreset> figure_presets() {
    using O = OutputKind;
    std::vector<FigurePreset> out;
    const auto m1_bind = PotentialSpec::model1(1.0, 1.0, 0.0);
    const auto m1_scat = PotentialSpec::model1(100.0, 10.0, 5.0);
    const auto m2_bind = PotentialSpec::model2(1.0, 1.0, 0.0);
    const auto m2_scat = PotentialSpec::model2(1.0, 1.0, 0.5);

    auto add = [&](std::string name, PotentialSpec m, SweptParam p, double lo, double hi,
                   std::vector<O> cols) {
        SweepSpec s;
        s.model = m;
        s.swept = p;
        s.grid = {lo, hi, 400};
        s.outputs = std::move(cols);
        out.push_back({std::move(name), std::move(s)});
    };
    add("fig1a", m1_bind, SweptParam::lam, 0.0, 1.2, {O::beta});
    add("fig1b", m1_scat, SweptParam::k, 0.05, 10.0, {O::abs_t2});
    add("fig1c", m1_scat, SweptParam::k, 0.05, 10.0, {O::abs_rL2, O::abs_rR2});
    add("fig1d", m1_scat, SweptParam::k, 0.05, 100.0, {O::dev_L, O::dev_R});
    add("fig2a", m2_bind, SweptParam::lam, 0.0, 1.4, {O::beta});
    add("fig2b", m2_scat, SweptParam::k, 0.05, 5.0, {O::abs_t2});
    add("fig2c", m2_scat, SweptParam::k, 0.05, 5.0, {O::abs_rL2, O::abs_rR2});
    add("fig2d", m2_scat, SweptParam::k, 0.05, 20.0, {O::dev_L, O::dev_R});
    return out;
}

inline std::optional<SweepSpec> find_figure_preset(const std::string& name) {
    for (auto& p : figure_presets())
        if (p.name == name) return p.sweep;
    return std::nullopt;
}

inline void emit_figure(const std::string& preset_name, std::ostream& os) {
    auto spec = find_figure_preset(preset_name);
    if (!spec) throw ValidationError("emit_figure: unknown preset '" + preset_name + "'");
    write_csv(run_sweep(*spec), os);
}

inline void emit_figure(const std::string& preset_name, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_figure: cannot open " + path);
    emit_figure(preset_name, os);
}

// ---------------------------------------------------------------------------
// Flat key-value config:  `key = value` lines, `#` comments, blank lines
// ignored. Keys map 1:1 onto SweepSpec fields; CLI flags override afterwards.
//
//   family  = model1 | model2
//   v0      = <double>      (mu is accepted as an alias)
//   a       = <double>
//   lam     = <double>
//   swept   = lam | v0 | k | a
//   min,max = <double>
//   count   = <int>
//   outputs = comma-separated output names
//   k       = <double>      (fixed wavenumber for non-k sweeps)
//   oracle  = 0 | 1

inline std::map<std::string, std::string> parse_config_pairs(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        auto b = s.find_first_not_of(ws);
        auto e = s.find_last_not_of(ws);
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

inline void apply_config(const std::map<std::string, std::string>& kv, SweepSpec& spec) {
    auto to_double = [](const std::string& k, const std::string& v) {
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ValidationError("config: bad number for `" + k + "`: " + v);
        }
    };
    for (const auto& [key, value] : kv) {
        if (key == "family") {
            if (value == "model1")
                spec.model.family = Family::model_i;
            else if (value == "model2")
                spec.model.family = Family::model_ii;
            else
                throw ValidationError("config: unknown family " + value);
        } else if (key == "v0" || key == "mu") {
            spec.model.v0 = to_double(key, value);
        } else if (key == "a") {
            spec.model.a = to_double(key, value);
        } else if (key == "lam") {
            spec.model.lam = to_double(key, value);
        } else if (key == "swept") {
            auto p = parse_swept(value);
            if (!p) throw ValidationError("config: unknown swept parameter " + value);
            spec.swept = *p;
        } else if (key == "min") {
            spec.grid.min = to_double(key, value);
        } else if (key == "max") {
            spec.grid.max = to_double(key, value);
        } else if (key == "count") {
            spec.grid.count = static_cast<int>(to_double(key, value));
        } else if (key == "outputs") {
            spec.outputs.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto b = item.find_first_not_of(" \t");
                auto e = item.find_last_not_of(" \t");
                if (b == std::string::npos)
                    throw ValidationError("config: empty output name");
                auto o = parse_output(item.substr(b, e - b + 1));
                if (!o) throw ValidationError("config: unknown output " + item);
                spec.outputs.push_back(*o);
            }
        } else if (key == "k") {
            spec.fixed_k = to_double(key, value);
        } else if (key == "oracle") {
            spec.use_oracle = value == "1" || value == "true";
        } else {
            throw ValidationError("config: unknown key `" + key + "`");
        }
    }
}

}  // namespace pseudowell
