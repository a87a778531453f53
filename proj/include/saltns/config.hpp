#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "study.hpp"

namespace saltns {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat INI-style key-value file with one section per module. Unknown keys
// are rejected so typos cannot silently fall back to defaults.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path + ": cannot open config file");
        return parse_stream(in, path);
    }

    static ConfigFile parse_stream(std::istream& in, const std::string& path) {
        ConfigFile cfg;
        cfg.path_ = path;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw ConfigError(cfg.at_line(lineno) + ": unterminated section header");
                section = trim(t.substr(1, t.size() - 2));
                if (section.empty()) throw ConfigError(cfg.at_line(lineno) + ": empty section name");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(cfg.at_line(lineno) + ": expected key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError(cfg.at_line(lineno) + ": empty key");
            if (section.empty())
                throw ConfigError(cfg.at_line(lineno) + ": key '" + key + "' outside any section");
            auto& slot = cfg.entries_[section + "." + key];
            if (slot.line != 0)
                throw ConfigError(cfg.at_line(lineno) + ": duplicate key '" + key + "' in [" + section + "]");
            slot = Entry{value, lineno};
        }
        return cfg;
    }

    const std::string& path() const { return path_; }

    bool has(const std::string& section, const std::string& key) const {
        return entries_.count(section + "." + key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(at_line(it->second.line) + ": key '" + key + "' expects a number, got '" +
                              it->second.value + "'");
        }
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(at_line(it->second.line) + ": key '" + key + "' expects an integer, got '" +
                              it->second.value + "'");
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        const std::string& v = it->second.value;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(at_line(it->second.line) + ": key '" + key + "' expects a boolean, got '" + v + "'");
    }

    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const {
        auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        std::vector<double> out;
        std::istringstream ss(it->second.value);
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError(at_line(it->second.line) + ": key '" + key +
                                  "' expects a list of numbers, got token '" + tok + "'");
            }
        }
        return out;
    }

    std::vector<int> get_ints(const std::string& section, const std::string& key,
                              std::vector<int> fallback) const {
        auto doubles = get_doubles(section, key, {});
        if (doubles.empty() && !has(section, key)) return fallback;
        std::vector<int> out;
        for (double d : doubles) {
            if (d != std::floor(d))
                throw ConfigError(path_ + ": key '" + key + "' expects integers");
            out.push_back(static_cast<int>(d));
        }
        return out;
    }

    int line_of(const std::string& section, const std::string& key) const {
        auto it = entries_.find(section + "." + key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    // first key the reader never touched, for unknown-key rejection
    std::string first_unused() const {
        std::string worst;
        int worst_line = 0;
        for (const auto& [k, e] : entries_)
            if (!e.used && (worst_line == 0 || e.line < worst_line)) {
                worst = k;
                worst_line = e.line;
            }
        return worst.empty() ? "" : at_line(worst_line) + ": unknown key '" + worst + "'";
    }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    std::string at_line(int line) const { return path_ + ":" + std::to_string(line); }

    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::string path_;
    std::map<std::string, Entry> entries_;
};

// Fully materialized run setup; owns the noise model the bundle points at.
struct ParsedConfig {
    ModeSetPtr basis;
    std::shared_ptr<NoiseModel> noise;
    OperatorBundle bundle;
    GalerkinConfig cfg;
    SpectralField initial;
    StudySpec study;

    // assumption-verifier settings
    int assumption_n = 8;
    int assumption_samples = 50;
    KWeights weights;
};

namespace detail {

inline SpectralField build_initial(const ConfigFile& file, const OperatorBundle& bundle,
                                   const ModeSetPtr& basis) {
    const std::string kind = file.get_string("initial", "kind", "smooth");
    const double amplitude = file.get_double("initial", "amplitude", 1.0);
    const double decay = file.get_double("initial", "decay", 2.0);
    const bool scalar = bundle.form == EquationForm::Vorticity && basis->dim() == 2;
    if (kind == "zero") return SpectralField(basis);
    if (kind == "slow_decay") return slow_decay_initial(bundle, basis, amplitude);
    if (kind == "single_mode") {
        SpectralField f(basis);
        Coeff c{};
        if (scalar)
            c[2] = Complex(amplitude, 0.0);
        else
            c[static_cast<std::size_t>(basis->dim() - 1)] = Complex(amplitude, 0.0);
        f.coeff(0) = c;
        return scalar ? f : leray_project(f);
    }
    if (kind == "smooth") {
        SpectralField f(basis);
        for (int j = 0; j < basis->count(); ++j) {
            const double mag = amplitude * std::pow(basis->eigenvalue(j), -decay);
            const Complex z = mag * std::polar(1.0, 0.25 * std::numbers::pi * (j % 8));
            Coeff c{};
            if (scalar)
                c[2] = z;
            else {
                c[0] = z;
                c[1] = Complex(-z.imag(), z.real());
            }
            f.coeff(j) = c;
        }
        return scalar ? f : leray_project(f);
    }
    throw ConfigError(file.path() + ":" + std::to_string(file.line_of("initial", "kind")) +
                      ": key 'kind' expects zero|slow_decay|single_mode|smooth, got '" + kind + "'");
}

}  // namespace detail

inline std::shared_ptr<ParsedConfig> parse_config(const ConfigFile& file) {
    auto pc = std::make_shared<ParsedConfig>();

    // [model]
    const int dim = static_cast<int>(file.get_int("model", "dim", 2));
    if (dim != 2 && dim != 3)
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("model", "dim")) +
                          ": key 'dim' must be 2 or 3");
    const int modes = static_cast<int>(file.get_int("model", "modes", 16));
    if (modes < 1)
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("model", "modes")) +
                          ": key 'modes' must be >= 1");
    pc->basis = ModeSet::make(dim, modes);

    const std::string form = file.get_string("model", "form", "velocity");
    if (form != "velocity" && form != "vorticity")
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("model", "form")) +
                          ": key 'form' expects velocity|vorticity, got '" + form + "'");

    const std::string nk = file.get_string("model", "noise_kind", "shear");
    const int ncount = static_cast<int>(file.get_int("model", "noise_count", 2));
    const double ndecay = file.get_double("model", "noise_decay", 1.0);
    const double namp = file.get_double("model", "noise_amplitude", 1.0);
    const auto nseed = static_cast<std::uint64_t>(file.get_int("model", "noise_seed", 0));
    if (nk == "none") {
        pc->noise = std::make_shared<NoiseModel>(NoiseModel::empty(pc->basis));
    } else if (nk == "shear") {
        pc->noise = std::make_shared<NoiseModel>(
            build_xi_family(XiKind::ShearModes, ncount, ndecay, pc->basis, namp, nseed));
    } else if (nk == "random") {
        pc->noise = std::make_shared<NoiseModel>(
            build_xi_family(XiKind::RandomSmooth, ncount, ndecay, pc->basis, namp, nseed));
    } else if (nk == "file") {
        const std::string nf = file.get_string("model", "noise_file", "");
        if (nf.empty())
            throw ConfigError(file.path() + ": key 'noise_file' required when noise_kind = file");
        pc->noise = std::make_shared<NoiseModel>(noise_model_from_file(nf, pc->basis));
    } else {
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("model", "noise_kind")) +
                          ": key 'noise_kind' expects shear|random|file|none, got '" + nk + "'");
    }

    pc->bundle = form == "velocity" ? OperatorBundle::velocity(*pc->noise)
                                    : OperatorBundle::vorticity(*pc->noise);
    pc->bundle.viscosity = file.get_double("model", "viscosity", 1.0);
    pc->bundle.include_advection = file.get_bool("model", "include_advection", true);
    if (!(pc->bundle.viscosity > 0.0))
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("model", "viscosity")) +
                          ": key 'viscosity' must be > 0");

    // [galerkin]
    pc->cfg.ladder = pc->bundle.ladder;
    pc->cfg.cutoff_n = static_cast<int>(file.get_int("galerkin", "cutoff_n", modes));
    pc->cfg.M = file.get_double("galerkin", "M", 2.0);
    pc->cfg.horizon_t = file.get_double("galerkin", "horizon_t", 0.2);
    pc->cfg.dt = file.get_double("galerkin", "dt", 1e-3);
    const double R = file.get_double("galerkin", "R", 0.0);
    const std::string scheme = file.get_string("galerkin", "scheme", "euler_maruyama_ito");
    if (scheme == "euler_maruyama_ito")
        pc->cfg.scheme = Scheme::EulerMaruyamaIto;
    else if (scheme == "heun_stratonovich")
        pc->cfg.scheme = Scheme::HeunStratonovich;
    else
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("galerkin", "scheme")) +
                          ": key 'scheme' expects euler_maruyama_ito|heun_stratonovich, got '" + scheme + "'");
    if (!(pc->cfg.M > 1.0))
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("galerkin", "M")) +
                          ": key 'M' must exceed 1");
    if (!(pc->cfg.dt > 0.0))
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("galerkin", "dt")) +
                          ": key 'dt' must be > 0");
    if (pc->cfg.cutoff_n < 1 || pc->cfg.cutoff_n > modes)
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("galerkin", "cutoff_n")) +
                          ": key 'cutoff_n' must lie in [1, modes]");

    // [initial]
    pc->initial = detail::build_initial(file, pc->bundle, pc->basis);

    // auto radius unless R given explicitly
    if (R > 0.0) {
        pc->cfg.R = R;
        pc->study.auto_radius = false;
    } else {
        pc->cfg.R = auto_R(pc->cfg, sobolev_norm2(pc->initial, pc->cfg.ladder.m_H), pc->basis);
        pc->study.auto_radius = true;
    }
    pc->cfg.validate();

    // [study]
    pc->study.cfg = pc->cfg;
    pc->study.bundle = &pc->bundle;
    pc->study.initial = pc->initial;
    const std::string sk = file.get_string("study", "kind", "uniform_bound");
    const std::map<std::string, StudyKind> kinds{
        {"uniform_bound", StudyKind::UniformBound},
        {"cauchy_decay", StudyKind::CauchyDecay},
        {"small_time_hitting", StudyKind::SmallTimeHitting},
        {"pathwise_uniqueness", StudyKind::PathwiseUniqueness},
        {"rough_data_convergence", StudyKind::RoughDataConvergence},
        {"blowup_watch", StudyKind::BlowupWatch},
        {"gronwall_witness", StudyKind::GronwallWitness}};
    auto kit = kinds.find(sk);
    if (kit == kinds.end())
        throw ConfigError(file.path() + ":" + std::to_string(file.line_of("study", "kind")) +
                          ": key 'kind' names no study: '" + sk + "'");
    pc->study.study = kit->second;
    pc->study.n_values = file.get_ints("study", "n_values", {4, 8, 16});
    pc->study.sample_count = static_cast<int>(file.get_int("study", "samples", 50));
    pc->study.seed = static_cast<std::uint64_t>(file.get_int("study", "seed", 1));
    pc->study.S_values = file.get_doubles("study", "S_values", {0.01, 0.04, 0.16});
    pc->study.deltas = file.get_doubles("study", "deltas", {1e-2, 1e-3, 1e-4});
    pc->study.validate();

    // [assumptions]
    pc->assumption_n = static_cast<int>(file.get_int("assumptions", "n", std::min(8, modes)));
    pc->assumption_samples = static_cast<int>(file.get_int("assumptions", "samples", 50));
    pc->weights.p = file.get_double("assumptions", "p", 4.0);
    pc->weights.q = file.get_double("assumptions", "q", 4.0);
    if (pc->assumption_n < 1 || pc->assumption_n > modes)
        throw ConfigError(file.path() + ": key 'n' in [assumptions] must lie in [1, modes]");
    if (pc->assumption_samples < 1)
        throw ConfigError(file.path() + ": key 'samples' in [assumptions] must be >= 1");

    const std::string unused = file.first_unused();
    if (!unused.empty()) throw ConfigError(unused);
    return pc;
}

inline std::shared_ptr<ParsedConfig> parse_config_file(const std::string& path) {
    return parse_config(ConfigFile::parse_file(path));
}

}  // namespace saltns
