#include "mfgstop_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "mfgstop/error.hpp"
#include "mfgstop_cli/io.hpp"

namespace mfgstop::cli {
namespace {

using boost::property_tree::ptree;

const ptree& section(const ptree& root, const std::string& name) {
    const auto child = root.get_child_optional(name);
    if (!child) throw ConfigError("missing section [" + name + "]");
    return *child;
}

std::string where(const std::string& sec, const std::string& key) {
    return "[" + sec + "] " + key;
}

double parse_double(const std::string& text, const std::string& what) {
    std::istringstream in(text);
    double value = 0.0;
    in >> value;
    if (in.fail() || !(in >> std::ws).eof()) throw ConfigError(what + ": not a number: '" + text + "'");
    return value;
}

/// Numbers separated by whitespace and/or commas.
std::vector<double> parse_list(std::string text, const std::string& what) {
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(parse_double(token, what));
    return out;
}

std::string require(const ptree& sec, const std::string& sec_name, const std::string& key) {
    const auto v = sec.get_optional<std::string>(ptree::path_type(key, '/'));
    if (!v) throw ConfigError("missing key " + where(sec_name, key));
    return *v;
}

std::optional<std::string> optional(const ptree& sec, const std::string& key) {
    const auto v = sec.get_optional<std::string>(ptree::path_type(key, '/'));
    if (!v) return std::nullopt;
    return *v;
}

double require_double(const ptree& sec, const std::string& sec_name, const std::string& key) {
    return parse_double(require(sec, sec_name, key), where(sec_name, key));
}

std::size_t require_count(const ptree& sec, const std::string& sec_name, const std::string& key) {
    const double v = require_double(sec, sec_name, key);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ConfigError(where(sec_name, key) + ": expected a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

CoefficientFn coefficient(const ptree& sec, const std::string& sec_name, const std::string& prefix) {
    const std::string kind_text = require(sec, sec_name, prefix + ".kind");
    const auto kind = parse_coefficient_kind(kind_text);
    if (!kind) throw ConfigError(where(sec_name, prefix + ".kind") + ": unknown kind '" + kind_text + "'");
    return CoefficientFn(*kind, parse_list(require(sec, sec_name, prefix + ".params"),
                                           where(sec_name, prefix + ".params")));
}

/// `<prefix>.kind/params` for space and optional `<prefix>.time.kind/params`.
SpaceTimeFn space_time(const ptree& sec, const std::string& sec_name, const std::string& prefix) {
    SpaceTimeFn fn{coefficient(sec, sec_name, prefix)};
    if (optional(sec, prefix + ".time.kind")) fn.time = coefficient(sec, sec_name, prefix + ".time");
    return fn;
}

FBarFn fbar(const ptree& sec, const std::string& sec_name, const std::string& prefix) {
    const std::string kind_text = require(sec, sec_name, prefix + ".kind");
    const auto kind = parse_fbar_kind(kind_text);
    if (!kind) throw ConfigError(where(sec_name, prefix + ".kind") + ": unknown kind '" + kind_text + "'");
    const auto params = parse_list(require(sec, sec_name, prefix + ".params"), where(sec_name, prefix + ".params"));
    if (params.size() != 2) throw ConfigError(where(sec_name, prefix + ".params") + ": expected 2 values");
    FBarFn out = FBarFn::make(*kind, params[0], params[1]);
    if (optional(sec, prefix + ".time.kind")) out.time_modulation = coefficient(sec, sec_name, prefix + ".time");
    return out;
}

InitialMeasure initial_measure(const ptree& sec, const SpaceTimeGrid& grid,
                               const std::filesystem::path& base_dir) {
    const std::string kind = require(sec, "initial", "kind");
    if (kind == "uniform") return InitialMeasure::uniform(grid);
    if (kind == "atom") return InitialMeasure::atom(grid, require_double(sec, "initial", "x0"));
    if (kind == "tabulated") {
        std::filesystem::path path = require(sec, "initial", "path");
        if (path.is_relative()) path = base_dir / path;
        std::vector<double> masses(grid.nodes(), 0.0);
        for (const auto& [x, mass] : read_pairs_csv(path)) {
            if (!(x > grid.lo() && x < grid.hi())) {
                throw Error(ErrorCode::InvalidMeasure, "initial atom outside the domain");
            }
            masses[grid.nearest_node(x)] += mass;
        }
        return InitialMeasure::from_masses(std::move(masses));
    }
    throw ConfigError("[initial] kind: expected uniform, atom or tabulated, got '" + kind + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ptree root;
    try {
        boost::property_tree::ini_parser::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("syntax error: ") + e.what());
    }

    RunConfig cfg;
    const ptree& g = section(root, "grid");
    cfg.grid = build_grid(require_double(g, "grid", "T"), require_double(g, "grid", "a"),
                          require_double(g, "grid", "b"), require_count(g, "grid", "K"),
                          require_count(g, "grid", "J"));

    const ptree& m = section(root, "model");
    cfg.model.drift = space_time(m, "model", "mu");
    cfg.model.volatility = space_time(m, "model", "sigma");
    cfg.model.sigma_min = optional(m, "sigma_min")
                              ? require_double(m, "model", "sigma_min")
                              : min_volatility(cfg.model, cfg.grid);
    cfg.model.validate(cfg.grid);

    cfg.initial = initial_measure(section(root, "initial"), cfg.grid, base_dir);

    const ptree& r = section(root, "reward");
    if (optional(r, "fbar.kind")) {
        cfg.reward.terms.push_back({fbar(r, "reward", "fbar"), coefficient(r, "reward", "g")});
    }
    for (int i = 2; optional(r, "term" + std::to_string(i) + ".fbar.kind"); ++i) {
        const std::string p = "term" + std::to_string(i);
        cfg.reward.terms.push_back({fbar(r, "reward", p + ".fbar"), coefficient(r, "reward", p + ".g")});
    }
    if (optional(r, "h.kind")) cfg.reward.h = space_time(r, "reward", "h");
    if (cfg.reward.terms.empty() && !cfg.reward.h) {
        throw ConfigError("[reward] needs fbar.kind/g.kind or h.kind");
    }

    if (const auto d = root.get_child_optional("discount")) {
        if (optional(*d, "rho")) cfg.reward.discount_rate = require_double(*d, "discount", "rho");
        if (optional(*d, "g.kind")) {
            const auto terminal = sample_terminal_reward(space_time(*d, "discount", "g"), cfg.grid);
            cfg.reward.offset = fold_reward(cfg.grid, cfg.model, Field::on(cfg.grid), terminal,
                                            cfg.reward.discount_rate);
        }
    }

    if (const auto a = root.get_child_optional("algorithm")) {
        if (optional(*a, "max_iters")) cfg.algorithm.max_iters = require_count(*a, "algorithm", "max_iters");
        if (optional(*a, "eps_tol")) cfg.algorithm.eps_tol = require_double(*a, "algorithm", "eps_tol");
        if (const auto s = optional(*a, "m_init")) {
            if (*s == "zero") {
                cfg.start = StartMeasure::zero;
            } else if (*s == "all_continue") {
                cfg.start = StartMeasure::all_continue;
            } else {
                throw ConfigError("[algorithm] m_init: expected zero or all_continue");
            }
        }
    }

    if (const auto mc = root.get_child_optional("mc")) {
        if (optional(*mc, "n_paths")) cfg.mc.n_paths = require_count(*mc, "mc", "n_paths");
        if (optional(*mc, "seed")) cfg.mc.seed = require_count(*mc, "mc", "seed");
        if (const auto b = optional(*mc, "bridge")) {
            if (*b != "true" && *b != "false") throw ConfigError("[mc] bridge: expected true or false");
            cfg.mc.bridge_correction = *b == "true";
        }
        if (cfg.mc.n_paths == 0) throw ConfigError("[mc] n_paths must be positive");
    }

    // Fails early on an invalid reward rather than inside a command.
    (void)Reward(cfg.reward, cfg.grid, cfg.initial.total());
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

}  // namespace mfgstop::cli
