// owagen command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 infeasible decision point, 3 I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "owagen/owagen.hpp"
#include "owagen/json_io.hpp"
#include "owagen/service.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kIo = 3 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join12(const std::vector<double>& values, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += fmt12(values[i]);
    }
    return out;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir + "'");
    }
    return fs::path(dir);
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    writer(os);
    os.flush();
    if (!os) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

struct PointArgs {
    double alpha = 0.0;
    double delta = 0.0;
    std::size_t n = 0;
    double epsilon = owagen::kDefaultEpsilon;
};

void add_point_options(CLI::App* cmd, PointArgs& args, bool required) {
    auto* a = cmd->add_option("--alpha", args.alpha, "orness level in [0,1]")->check(CLI::Range(0.0, 1.0));
    auto* d = cmd->add_option("--delta", args.delta, "dispersion level in [0,1]")->check(CLI::Range(0.0, 1.0));
    auto* n = cmd->add_option("--n", args.n, "number of criteria")->check(CLI::PositiveNumber);
    if (required) {
        a->required();
        d->required();
        n->required();
    }
}

void add_epsilon(CLI::App* cmd, double& epsilon) {
    cmd->add_option("--epsilon", epsilon, "acceptance threshold on the moment distance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

owagen::GenerationOutcome generate(const PointArgs& args) {
    return owagen::generate_weights({args.alpha, args.delta}, args.n, args.epsilon);
}

void print_outcome(const owagen::GenerationOutcome& out, const std::string& format) {
    if (format == "json") {
        std::cout << owagen::to_json(out).dump() << '\n';
        return;
    }
    const std::vector<double>& w = out.weights.to_vector();
    if (format == "csv") {
        std::cout << "index,weight\n";
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::cout << i + 1 << ',' << fmt12(w[i]) << '\n';
        }
        return;
    }
    std::cout << join12(w) << '\n';
    if (out.achieved_orness) {
        std::cout << "orness=" << fmt12(*out.achieved_orness) << " dispersion=" << fmt12(*out.achieved_dispersion)
                  << " tradeoff=" << fmt12(*out.achieved_tradeoff) << '\n';
    }
}

void print_metrics(const owagen::WeightVector& w, const std::string& format) {
    const double orn = owagen::orness(w);
    const double disp = owagen::dispersion(w);
    const double trade = owagen::tradeoff(w);
    if (format == "json") {
        std::cout << nlohmann::json{{"weights", w.to_vector()},
                                    {"n", w.size()},
                                    {"orness", orn},
                                    {"andness", owagen::andness(w)},
                                    {"dispersion", disp},
                                    {"tradeoff", trade}}
                         .dump()
                  << '\n';
    } else if (format == "csv") {
        std::cout << "orness,andness,dispersion,tradeoff\n"
                  << fmt12(orn) << ',' << fmt12(owagen::andness(w)) << ',' << fmt12(disp) << ',' << fmt12(trade)
                  << '\n';
    } else {
        std::cout << "orness=" << fmt12(orn) << " andness=" << fmt12(owagen::andness(w))
                  << " dispersion=" << fmt12(disp) << " tradeoff=" << fmt12(trade) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordered weighted averaging weights from orness and dispersion"};
    app.require_subcommand(1);

    const std::vector<std::string> formats{"json", "csv", "plain"};
    std::string format = "plain";

    PointArgs gen;
    auto* cmd_generate = app.add_subcommand("generate", "weights for a decision point (alpha, delta)");
    add_point_options(cmd_generate, gen, true);
    add_epsilon(cmd_generate, gen.epsilon);
    cmd_generate->add_option("--format", format)->check(CLI::IsMember(formats))->capture_default_str();

    PointArgs agg;
    std::vector<double> agg_weights;
    std::vector<double> criteria;
    auto* cmd_aggregate = app.add_subcommand("aggregate", "OWA value of a criteria list");
    add_point_options(cmd_aggregate, agg, false);
    add_epsilon(cmd_aggregate, agg.epsilon);
    auto* weights_opt = cmd_aggregate->add_option("--weights", agg_weights, "explicit weights, comma separated")
                            ->delimiter(',');
    cmd_aggregate->add_option("--criteria", criteria, "criteria values, comma separated")
        ->delimiter(',')
        ->required();
    cmd_aggregate->add_option("--format", format)->check(CLI::IsMember(formats))->capture_default_str();

    std::vector<double> met_weights;
    PointArgs met;
    auto* cmd_metrics = app.add_subcommand("metrics", "orness, dispersion and tradeoff of a weight vector");
    add_point_options(cmd_metrics, met, false);
    add_epsilon(cmd_metrics, met.epsilon);
    auto* met_weights_opt =
        cmd_metrics->add_option("--weights", met_weights, "weights, comma separated")->delimiter(',');
    cmd_metrics->add_option("--format", format)->check(CLI::IsMember(formats))->capture_default_str();

    std::size_t samples = 0;
    std::uint64_t seed = 42;
    double sweep_eps = owagen::kDefaultEpsilon;
    std::string out_dir = ".";
    auto* cmd_sweep = app.add_subcommand("sweep", "LHS sweep, writes sweep.csv and epsilon_curve.csv");
    cmd_sweep->add_option("--samples", samples)->check(CLI::PositiveNumber)->default_val(2000);
    cmd_sweep->add_option("--seed", seed)->capture_default_str();
    add_epsilon(cmd_sweep, sweep_eps);
    cmd_sweep->add_option("--out-dir", out_dir)->capture_default_str();

    auto* cmd_frontier = app.add_subcommand("frontier", "LHS sweep and parabola fit of the accepted frontier");
    cmd_frontier->add_option("--samples", samples)->check(CLI::PositiveNumber)->default_val(2000);
    cmd_frontier->add_option("--seed", seed)->capture_default_str();
    add_epsilon(cmd_frontier, sweep_eps);
    cmd_frontier->add_option("--out-dir", out_dir)->capture_default_str();

    std::size_t grid_n = 5;
    std::string metric = "all";
    std::size_t resolution = 41;
    auto* cmd_grid = app.add_subcommand("grid", "metric sensitivity grids over (alpha, delta)");
    cmd_grid->add_option("--n", grid_n)->check(CLI::Range(2, 100000))->capture_default_str();
    cmd_grid->add_option("--metric", metric)
        ->check(CLI::IsMember({"orness", "dispersion", "tradeoff", "all"}))
        ->capture_default_str();
    cmd_grid->add_option("--resolution", resolution)->check(CLI::Range(10, 100000))->capture_default_str();
    add_epsilon(cmd_grid, sweep_eps);
    cmd_grid->add_option("--out-dir", out_dir)->capture_default_str();

    int port = owagen::service::kDefaultPort;
    std::string host = "127.0.0.1";
    std::string static_dir;
    auto* cmd_serve = app.add_subcommand("serve", "HTTP API and static UI");
    cmd_serve->add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();
    cmd_serve->add_option("--host", host)->capture_default_str();
    cmd_serve->add_option("--static-dir", static_dir, "directory served at /");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*cmd_generate) {
            print_outcome(generate(gen), format);
        } else if (*cmd_aggregate) {
            std::optional<owagen::WeightVector> w;
            if (*weights_opt) {
                w.emplace(agg_weights);
            } else if (cmd_aggregate->count("--alpha") && cmd_aggregate->count("--delta") &&
                       cmd_aggregate->count("--n")) {
                w.emplace(generate(agg).weights);
            } else {
                std::cerr << "aggregate needs --weights or all of --alpha --delta --n\n";
                return kUsage;
            }
            const owagen::CriteriaSet x(criteria);
            const double value = owagen::owa_aggregate(*w, x);
            if (format == "json") {
                std::cout << nlohmann::json{{"value", value}, {"weights", w->to_vector()},
                                            {"sorted_criteria", x.sorted()}}
                                 .dump()
                          << '\n';
            } else if (format == "csv") {
                std::cout << "value\n" << fmt12(value) << '\n';
            } else {
                std::cout << fmt12(value) << '\n';
            }
        } else if (*cmd_metrics) {
            if (*met_weights_opt) {
                print_metrics(owagen::WeightVector(met_weights), format);
            } else if (cmd_metrics->count("--alpha") && cmd_metrics->count("--delta") && cmd_metrics->count("--n")) {
                print_metrics(generate(met).weights, format);
            } else {
                std::cerr << "metrics needs --weights or all of --alpha --delta --n\n";
                return kUsage;
            }
        } else if (*cmd_sweep || *cmd_frontier) {
            const fs::path dir = prepare_dir(out_dir);
            owagen::CalibrationConfig config;
            config.epsilon = sweep_eps;
            const auto points = owagen::latin_hypercube(samples, seed);
            const auto records = owagen::run_sweep(points, config);
            std::size_t accepted = 0;
            for (const auto& r : records) {
                accepted += r.accepted ? 1 : 0;
            }
            write_file(dir / "sweep.csv", [&](std::ostream& os) { owagen::write_sweep_csv(os, records); });
            if (*cmd_sweep) {
                const auto eps = owagen::default_epsilon_grid();
                const auto curve = owagen::epsilon_sweep(std::span<const owagen::SweepRecord>(records), eps);
                write_file(dir / "epsilon_curve.csv",
                           [&](std::ostream& os) { owagen::write_epsilon_curve_csv(os, curve); });
                std::cout << "samples=" << samples << " seed=" << seed << " accepted=" << accepted
                          << " rejected_fraction="
                          << fmt12(1.0 - static_cast<double>(accepted) / static_cast<double>(samples)) << '\n';
            } else {
                const owagen::FrontierFit fit = owagen::fit_frontier(records);
                std::cout << "samples=" << samples << " seed=" << seed << " accepted=" << accepted
                          << " a=" << fmt12(fit.a) << " b=" << fmt12(fit.b) << " c=" << fmt12(fit.c)
                          << " rmse=" << fmt12(fit.rmse) << '\n';
            }
        } else if (*cmd_grid) {
            const fs::path dir = prepare_dir(out_dir);
            const auto grids = owagen::sensitivity_grids(grid_n, resolution, sweep_eps);
            for (const auto& g : grids) {
                if (metric != "all" && metric != owagen::to_string(g.metric)) {
                    continue;
                }
                std::size_t feasible = 0;
                for (const auto& v : g.values) {
                    feasible += v ? 1 : 0;
                }
                const std::string name = owagen::grid_file_name(g);
                write_file(dir / name, [&](std::ostream& os) { owagen::write_grid_csv(os, g); });
                std::cout << name << " rows=" << g.values.size() << " feasible=" << feasible << '\n';
            }
        } else if (*cmd_serve) {
            httplib::Server server;
            if (!owagen::service::mount(server, static_dir)) {
                std::cerr << "cannot serve static directory '" << static_dir << "'\n";
                return kIo;
            }
            std::cout << "listening on http://" << host << ':' << port << '\n' << std::flush;
            if (!server.listen(host, port)) {
                std::cerr << "cannot listen on " << host << ':' << port << '\n';
                return kIo;
            }
        }
    } catch (const owagen::InfeasibleError& e) {
        if (format == "json") {
            const std::size_t n = *cmd_generate ? gen.n : (*cmd_aggregate ? agg.n : met.n);
            std::cout << owagen::to_json(e, n).dump() << '\n';
        }
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const owagen::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
