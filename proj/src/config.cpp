#include "kyle/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace kyle {
namespace {

const std::vector<std::string> kExperiments = {
    "fig-impact-h",  "fig-impact-eps",     "bridge",
    "depth-martingale", "markov-equilibrium", "fbm-validate",
    "profit-decomposition", "time-change", "optimality",
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawValue {
    std::string text;
    int line = 0;
};

struct RawConfig {
    // key is "section.name"
    std::map<std::string, RawValue> values;
};

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"experiment", {"name", "sigma_convention"}},
        {"market", {"prior_mean", "prior_variance", "horizon", "hurst", "epsilon"}},
        {"volatility",
         {"model", "sigma0", "growth_rate", "vol_of_vol", "sigma_min", "sigma_max",
          "sigma_low", "sigma_high", "intensity_to_high", "intensity_to_low",
          "start_state"}},
        {"run", {"paths", "steps", "seed", "ode_steps", "out_dir"}},
    };
    return s;
}

RawConfig scan(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("unterminated section header (line " +
                                  std::to_string(line_no) + ")");
            std::string name = trim(t.substr(1, t.size() - 2));
            if (schema().find(name) == schema().end())
                throw ConfigError("unknown section [" + name + "] (line " +
                                  std::to_string(line_no) +
                                  "); expected [experiment], [market], [volatility], [run]");
            section = name;
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("cannot parse line " + std::to_string(line_no) +
                              ": expected 'key = value' or '[section]'");
        if (section.empty())
            throw ConfigError("key outside any section (line " +
                              std::to_string(line_no) + ")");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key (line " + std::to_string(line_no) + ")");
        const auto& allowed = schema().at(section);
        if (allowed.find(key) == allowed.end())
            throw ConfigError("unknown key '" + section + "." + key + "' (line " +
                              std::to_string(line_no) + ")");
        std::string full = section + "." + key;
        auto [it, inserted] = raw.values.emplace(full, RawValue{value, line_no});
        if (!inserted)
            throw ConfigError("duplicate key '" + full + "' (line " +
                              std::to_string(line_no) + ", first defined line " +
                              std::to_string(it->second.line) + ")");
    }
    return raw;
}

double to_double(const std::string& key, const RawValue& rv) {
    const char* first = rv.text.data();
    const char* last = first + rv.text.size();
    double out = 0.0;
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("value of '" + key + "' is not a number: '" + rv.text +
                          "' (line " + std::to_string(rv.line) + ")");
    return out;
}

std::uint64_t to_uint(const std::string& key, const RawValue& rv) {
    const char* first = rv.text.data();
    const char* last = first + rv.text.size();
    std::uint64_t out = 0;
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("value of '" + key + "' is not a non-negative integer: '" +
                          rv.text + "' (line " + std::to_string(rv.line) + ")");
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

bool is_fig(const std::string& experiment) {
    return experiment == "fig-impact-h" || experiment == "fig-impact-eps";
}

}  // namespace

const std::vector<std::string>& experiment_names() { return kExperiments; }

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw = scan(text);
    auto find = [&](const std::string& key) -> const RawValue* {
        auto it = raw.values.find(key);
        return it == raw.values.end() ? nullptr : &it->second;
    };

    std::vector<std::string> missing;
    auto need = [&](const std::string& key) -> const RawValue* {
        const RawValue* rv = find(key);
        if (!rv) missing.push_back(key);
        return rv;
    };

    ExperimentConfig cfg;
    const RawValue* name_rv = need("experiment.name");
    if (name_rv) {
        cfg.experiment = name_rv->text;
        if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment) ==
            kExperiments.end()) {
            std::string known;
            for (const auto& e : kExperiments) {
                if (!known.empty()) known += ", ";
                known += e;
            }
            throw ConfigError("unknown experiment '" + cfg.experiment + "' (line " +
                              std::to_string(name_rv->line) + "); known: " + known);
        }
    }

    const RawValue* pm = need("market.prior_mean");
    const RawValue* pv = need("market.prior_variance");
    const RawValue* hz = need("market.horizon");
    const RawValue* hu = need("market.hurst");
    const RawValue* ep = need("market.epsilon");

    const RawValue* paths = need("run.paths");
    const RawValue* steps = need("run.steps");
    const RawValue* seed = need("run.seed");
    const RawValue* out_dir = need("run.out_dir");

    // The volatility section is consumed by every experiment except
    // fbm-validate; its required keys depend on the chosen model.
    const RawValue* model_rv = find("volatility.model");
    bool vol_required = name_rv && cfg.experiment != "fbm-validate";
    if (vol_required && !model_rv) missing.push_back("volatility.model");

    std::string model_name;
    std::set<std::string> model_keys;
    if (model_rv) {
        model_name = model_rv->text;
        if (model_name == "constant") {
            model_keys = {"sigma0"};
            need("volatility.sigma0");
        } else if (model_name == "growth") {
            model_keys = {"sigma0", "growth_rate", "vol_of_vol", "sigma_min",
                          "sigma_max"};
            need("volatility.sigma0");
            need("volatility.growth_rate");
        } else if (model_name == "markov") {
            model_keys = {"sigma_low", "sigma_high", "intensity_to_high",
                          "intensity_to_low", "start_state"};
            need("volatility.sigma_low");
            need("volatility.sigma_high");
            need("volatility.intensity_to_high");
            need("volatility.intensity_to_low");
        } else {
            throw ConfigError("unknown volatility model '" + model_name + "' (line " +
                              std::to_string(model_rv->line) +
                              "); expected constant, growth, or markov");
        }
        for (const auto& [key, rv] : raw.values) {
            if (key.rfind("volatility.", 0) != 0) continue;
            std::string leaf = key.substr(std::string("volatility.").size());
            if (leaf == "model") continue;
            if (model_keys.find(leaf) == model_keys.end())
                throw ConfigError("key '" + key + "' is not used by volatility model '" +
                                  model_name + "' (line " + std::to_string(rv.line) + ")");
        }
    }

    const RawValue* conv = find("experiment.sigma_convention");
    if (conv && name_rv && !is_fig(cfg.experiment))
        throw ConfigError("key 'experiment.sigma_convention' only applies to "
                          "fig-impact-h and fig-impact-eps (line " +
                          std::to_string(conv->line) + ")");

    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) {
            if (!list.empty()) list += ", ";
            list += k;
        }
        throw ConfigError("missing required keys: " + list);
    }

    cfg.market.prior_mean = to_double("market.prior_mean", *pm);
    cfg.market.prior_variance = to_double("market.prior_variance", *pv);
    cfg.market.horizon = to_double("market.horizon", *hz);
    double hurst = to_double("market.hurst", *hu);
    double epsilon = to_double("market.epsilon", *ep);
    try {
        cfg.market.frac = FractionalParams(hurst, epsilon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid market parameters: ") + e.what());
    }

    cfg.paths = to_uint("run.paths", *paths);
    cfg.steps = to_uint("run.steps", *steps);
    cfg.seed = to_uint("run.seed", *seed);
    cfg.out_dir = out_dir->text;
    if (const RawValue* os = find("run.ode_steps"))
        cfg.ode_steps = to_uint("run.ode_steps", *os);

    if (conv) {
        if (conv->text != "evolving" && conv->text != "frozen")
            throw ConfigError("sigma_convention must be 'evolving' or 'frozen' (line " +
                              std::to_string(conv->line) + ")");
        cfg.sigma_convention = conv->text;
    }

    if (model_rv) {
        cfg.has_vol = true;
        auto dv = [&](const std::string& leaf, double fallback) {
            const RawValue* rv = find("volatility." + leaf);
            return rv ? to_double("volatility." + leaf, *rv) : fallback;
        };
        if (model_name == "constant") {
            cfg.vol = ConstantVol{dv("sigma0", 1.0)};
        } else if (model_name == "growth") {
            DeterministicGrowthVol g;
            g.sigma0 = dv("sigma0", 1.0);
            g.growth_rate = dv("growth_rate", 0.0);
            g.vol_of_vol = dv("vol_of_vol", 0.0);
            g.sigma_min = dv("sigma_min", g.sigma_min);
            g.sigma_max = dv("sigma_max", g.sigma_max);
            cfg.vol = g;
        } else {
            TwoStateMarkovVol mk;
            mk.sigma_low = dv("sigma_low", mk.sigma_low);
            mk.sigma_high = dv("sigma_high", mk.sigma_high);
            mk.intensity_to_high = dv("intensity_to_high", mk.intensity_to_high);
            mk.intensity_to_low = dv("intensity_to_low", mk.intensity_to_low);
            if (const RawValue* ss = find("volatility.start_state")) {
                if (ss->text == "low")
                    mk.start = Regime::low;
                else if (ss->text == "high")
                    mk.start = Regime::high;
                else
                    throw ConfigError("start_state must be 'low' or 'high' (line " +
                                      std::to_string(ss->line) + ")");
            }
            cfg.vol = mk;
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    if (std::find(kExperiments.begin(), kExperiments.end(), cfg.experiment) ==
        kExperiments.end())
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    if (!(cfg.market.prior_variance > 0.0) || !std::isfinite(cfg.market.prior_variance))
        throw ConfigError("market.prior_variance must be positive");
    if (!(cfg.market.horizon > 0.0) || !std::isfinite(cfg.market.horizon))
        throw ConfigError("market.horizon must be positive");
    if (!std::isfinite(cfg.market.prior_mean))
        throw ConfigError("market.prior_mean must be finite");
    if (cfg.paths < 1) throw ConfigError("run.paths must be at least 1");
    if (cfg.steps < 16) throw ConfigError("run.steps must be at least 16");
    if (cfg.ode_steps < 16) throw ConfigError("run.ode_steps must be at least 16");
    if (cfg.out_dir.empty()) throw ConfigError("run.out_dir must be non-empty");
    if (cfg.sigma_convention != "evolving" && cfg.sigma_convention != "frozen")
        throw ConfigError("sigma_convention must be 'evolving' or 'frozen'");

    bool vol_required = cfg.experiment != "fbm-validate";
    if (vol_required && !cfg.has_vol)
        throw ConfigError("experiment '" + cfg.experiment +
                          "' requires a [volatility] section");
    if (cfg.has_vol) {
        try {
            validate_model(cfg.vol);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("invalid volatility model: ") + e.what());
        }
    }
    if (is_fig(cfg.experiment) &&
        !std::holds_alternative<DeterministicGrowthVol>(cfg.vol))
        throw ConfigError("experiment '" + cfg.experiment +
                          "' requires the growth volatility model");
    if (cfg.experiment == "markov-equilibrium" &&
        !std::holds_alternative<TwoStateMarkovVol>(cfg.vol))
        throw ConfigError("experiment 'markov-equilibrium' requires the markov "
                          "volatility model");
    if (cfg.experiment == "bridge" && cfg.steps < 256)
        throw ConfigError("experiment 'bridge' refines a step ladder and needs "
                          "run.steps >= 256");
    static const std::set<std::string> kEnsemble = {
        "bridge", "depth-martingale", "markov-equilibrium", "fbm-validate",
        "profit-decomposition", "optimality"};
    if (kEnsemble.count(cfg.experiment) && cfg.paths < 100)
        throw ConfigError("experiment '" + cfg.experiment +
                          "' needs run.paths >= 100 for its statistical checks");
    if (cfg.experiment == "fig-impact-eps" && cfg.market.frac.hurst <= 0.5)
        throw ConfigError("experiment 'fig-impact-eps' needs market.hurst > 0.5; "
                          "the smoothing width has no effect at hurst = 0.5");
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    out += "[experiment]\n";
    put("name", cfg.experiment);
    if (is_fig(cfg.experiment)) put("sigma_convention", cfg.sigma_convention);
    out += "\n[market]\n";
    put("prior_mean", format_double(cfg.market.prior_mean));
    put("prior_variance", format_double(cfg.market.prior_variance));
    put("horizon", format_double(cfg.market.horizon));
    put("hurst", format_double(cfg.market.frac.hurst));
    put("epsilon", format_double(cfg.market.frac.eps));
    if (cfg.has_vol) {
        out += "\n[volatility]\n";
        if (const auto* c = std::get_if<ConstantVol>(&cfg.vol)) {
            put("model", "constant");
            put("sigma0", format_double(c->sigma0));
        } else if (const auto* g = std::get_if<DeterministicGrowthVol>(&cfg.vol)) {
            put("model", "growth");
            put("sigma0", format_double(g->sigma0));
            put("growth_rate", format_double(g->growth_rate));
            put("vol_of_vol", format_double(g->vol_of_vol));
            put("sigma_min", format_double(g->sigma_min));
            put("sigma_max", format_double(g->sigma_max));
        } else {
            const auto& m = std::get<TwoStateMarkovVol>(cfg.vol);
            put("model", "markov");
            put("sigma_low", format_double(m.sigma_low));
            put("sigma_high", format_double(m.sigma_high));
            put("intensity_to_high", format_double(m.intensity_to_high));
            put("intensity_to_low", format_double(m.intensity_to_low));
            put("start_state", m.start == Regime::low ? "low" : "high");
        }
    }
    out += "\n[run]\n";
    put("paths", std::to_string(cfg.paths));
    put("steps", std::to_string(cfg.steps));
    put("seed", std::to_string(cfg.seed));
    put("ode_steps", std::to_string(cfg.ode_steps));
    put("out_dir", cfg.out_dir);
    return out;
}

}  // namespace kyle
