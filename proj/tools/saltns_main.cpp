// Command-line front end: config ingestion, study dispatch, reproducible
// output layout. Exit codes: 0 success, 1 config/usage error, 2 runtime
// failure. Data CSVs carry no timestamps so reruns are byte-identical.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "saltns/config.hpp"

namespace fs = std::filesystem;
using namespace saltns;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunManifest {
    std::string config_path;
    fs::path output_dir;
    std::uint64_t config_hash = 0;
    std::string command;
    std::uint64_t seed = 0;

    // Creates the output directory and writes manifest.txt; refuses to
    // reuse a directory whose manifest records a different config hash.
    void establish() const {
        fs::create_directories(output_dir);
        const fs::path mpath = output_dir / "manifest.txt";
        if (fs::exists(mpath)) {
            std::ifstream in(mpath);
            std::string line;
            while (std::getline(in, line)) {
                if (line.rfind("config_hash=", 0) == 0 &&
                    line != "config_hash=" + std::to_string(config_hash))
                    throw std::runtime_error(mpath.string() +
                                             ": existing manifest was produced from a different config; "
                                             "refusing to overwrite");
            }
        }
        std::ofstream out(mpath);
        out << "config_hash=" << config_hash << '\n'
            << "config_path=" << config_path << '\n'
            << "command=" << command << '\n'
            << "seed=" << seed << '\n';
        // exact config echo so the directory is re-runnable on its own
        std::ofstream echo(output_dir / "config_echo.ini", std::ios::binary);
        echo << read_file(config_path);
    }
};

void write_sidecar(const fs::path& path, const StudyResult& res) {
    std::ofstream out(path);
    write_study_metadata(out, res);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    out << "wallclock_unix="
        << std::chrono::duration_cast<std::chrono::seconds>(now).count() << '\n';
}

int run_simulate(const ParsedConfig& pc, const RunManifest& man) {
    BrownianPath path(pc.study.seed, 0, pc.cfg.dt, pc.noise->truncation());
    const TrajectoryRecord rec = run(project(pc.initial, pc.cfg.cutoff_n), pc.cfg, pc.bundle, path);
    std::ofstream out(man.output_dir / "trajectory.csv");
    write_trajectory_csv(out, rec);
    std::ofstream meta(man.output_dir / "trajectory.meta.txt");
    meta << "tau=" << csv_number(rec.tau) << '\n'
         << "cause=" << to_string(rec.cause) << '\n'
         << "seed=" << pc.study.seed << '\n';
    std::cout << "trajectory: " << rec.times.size() << " records, tau=" << rec.tau << " ("
              << to_string(rec.cause) << ")\n";
    return 0;
}

int run_verify(const ParsedConfig& pc, const RunManifest& man) {
    const auto reports = check_all(pc.bundle, pc.assumption_n, pc.assumption_samples, pc.weights,
                                   pc.study.seed);
    std::ofstream out(man.output_dir / "assumptions.csv");
    write_assumption_csv(out, reports);
    int violated = 0;
    for (const auto& r : reports)
        if (r.worst_violation > 1e-9 * (1.0 + std::abs(r.c))) ++violated;
    std::cout << reports.size() << " assumption checks, " << violated
              << " with positive violation margin\n";
    return 0;
}

int run_study_cmd(ParsedConfig& pc, StudyKind kind, const RunManifest& man) {
    pc.study.study = kind;
    const StudyResult res = run_study(pc.study);
    const std::string stem = std::string(to_string(kind)) + "_seed" + std::to_string(res.seed);
    std::ofstream out(man.output_dir / (stem + ".csv"));
    write_study_csv(out, res);
    write_sidecar(man.output_dir / (stem + ".meta.txt"), res);
    std::cout << res.study_name << ": " << res.rows.size() << " statistics written\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin simulator and verification harness for fluid equations "
                 "with transport noise"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed_override = -1;
    int threads = 1;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_override, "override the study seed");
    app.add_option("--threads", threads, "worker threads for sample parallelism")
        ->check(CLI::PositiveNumber);

    const std::vector<std::pair<std::string, StudyKind>> study_cmds{
        {"uniform-bound", StudyKind::UniformBound},
        {"cauchy-study", StudyKind::CauchyDecay},
        {"hitting-times", StudyKind::SmallTimeHitting},
        {"uniqueness", StudyKind::PathwiseUniqueness},
        {"rough-data", StudyKind::RoughDataConvergence},
        {"blowup-watch", StudyKind::BlowupWatch},
    };
    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and export it");
    auto* verify = app.add_subcommand("verify-assumptions", "estimate operator inequality constants");
    std::vector<CLI::App*> subs;
    for (const auto& [name, kind] : study_cmds)
        subs.push_back(app.add_subcommand(name, std::string("run the ") + to_string(kind) + " study"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        auto pc = parse_config_file(config_path);
        if (seed_override >= 0) pc->study.seed = static_cast<std::uint64_t>(seed_override);
        pc->study.threads = threads;

        RunManifest man;
        man.config_path = config_path;
        man.output_dir = out_dir;
        man.config_hash = fnv1a(read_file(config_path));
        man.command = app.get_subcommands().front()->get_name();
        man.seed = pc->study.seed;
        man.establish();

        if (sim->parsed()) return run_simulate(*pc, man);
        if (verify->parsed()) return run_verify(*pc, man);
        for (std::size_t i = 0; i < study_cmds.size(); ++i)
            if (subs[i]->parsed()) return run_study_cmd(*pc, study_cmds[i].second, man);
        std::cerr << "no subcommand dispatched\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}
