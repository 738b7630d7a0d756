// Command-line front end: protocol scans, single-point bound evaluation,
// best-separable-approximation queries on user-supplied data, and
// information-measure utilities.
//
// Exit codes: 0 success, 2 invalid arguments or unreadable input,
// 3 statistics inconsistent with the declared devices, 4 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkdbound/info.hpp"
#include "qkdbound/pipeline.hpp"
#include "qkdbound/serialize.hpp"

namespace {

using namespace qkdbound;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string protocol = "six-state";
    double e_start = 0.0;
    double e_end = 0.5;
    int steps = 100;
    double e = 0.0;
    double dark_count = 0.0;
    double efficiency = 1.0;
    std::string out;
    std::string format = "csv";
    std::string input;
    double tol = 0.0;  // 0: library defaults
    // full detector description from a config file; scalar flags win
    std::optional<DetectorSpec> detector;
};

struct Provided {
    bool protocol = false, e_start = false, e_end = false, steps = false, e = false;
    bool dark_count = false, efficiency = false, out = false, format = false;
    bool input = false, tol = false;
};

void merge_config_file(RunConfig& cfg, const Provided& given, const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw UsageError("invalid --config file " + path + ": " + ex.what());
    }
    auto take = [&](const char* key, auto& slot, bool flag_given) {
        if (!flag_given && j.contains(key)) j.at(key).get_to(slot);
    };
    take("protocol", cfg.protocol, given.protocol);
    take("e_start", cfg.e_start, given.e_start);
    take("e_end", cfg.e_end, given.e_end);
    take("steps", cfg.steps, given.steps);
    take("e", cfg.e, given.e);
    take("dark_count", cfg.dark_count, given.dark_count);
    take("efficiency", cfg.efficiency, given.efficiency);
    take("out", cfg.out, given.out);
    take("format", cfg.format, given.format);
    take("input", cfg.input, given.input);
    take("tol", cfg.tol, given.tol);
    if (j.contains("detector") && !given.dark_count && !given.efficiency)
        cfg.detector = detector_from_json(j.at("detector"));
}

void validate(const RunConfig& cfg, const Provided& given) {
    if (cfg.command == "scan" || cfg.command == "point") {
        if (cfg.protocol != "four-state" && cfg.protocol != "six-state")
            throw UsageError("invalid --protocol: expected four-state or six-state");
        if (cfg.efficiency <= 0.0 || cfg.efficiency > 1.0)
            throw UsageError("invalid --efficiency: must lie in (0,1]");
        if (cfg.dark_count < 0.0 || cfg.dark_count >= 1.0)
            throw UsageError("invalid --dark-count: must lie in [0,1)");
    }
    if (cfg.command == "scan") {
        if (cfg.e_start < 0.0 || cfg.e_end > 0.5 || cfg.e_start > cfg.e_end)
            throw UsageError("invalid --e-start/--e-end: range must sit inside [0, 1/2]");
        if (cfg.steps < 1) throw UsageError("invalid --steps: must be >= 1");
    }
    if (cfg.command == "point" && (cfg.e < 0.0 || cfg.e > 0.5))
        throw UsageError("invalid --e: must lie in [0, 1/2]");
    if (cfg.format != "csv" && cfg.format != "json")
        throw UsageError("invalid --format: expected csv or json");
    if (cfg.command == "bsa") {
        if (cfg.input.empty()) throw UsageError("bsa requires --input");
        if (given.protocol)
            throw UsageError("conflicting flags: bsa takes --input, not --protocol");
    }
    if (cfg.command == "info" && cfg.input.empty()) throw UsageError("info requires --input");
    if (given.tol && (cfg.tol <= 0.0 || cfg.tol > 1e-2))
        throw UsageError("invalid --tol: must lie in (0, 1e-2]");
}

DetectorSpec detectors_of(const RunConfig& cfg) {
    if (cfg.detector) return *cfg.detector;
    DetectorSpec d;
    d.dark_total = cfg.dark_count;
    d.efficiencies = {cfg.efficiency};
    return d;
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
    PipelineOptions opts;
    if (cfg.tol > 0.0) {
        opts.bsa.sdp.feas_tol = cfg.tol;
        opts.bsa.sdp.gap_tol = cfg.tol;
    }
    return opts;
}

std::string default_out(const RunConfig& cfg) {
    if (cfg.command == "bsa" || cfg.command == "info") return cfg.command + ".json";
    return cfg.command + "." + cfg.format;
}

void write_reports(const RunConfig& cfg, const std::vector<BoundReport>& reports,
                   const std::string& path) {
    if (cfg.format == "json")
        write_file_atomic(path, reports_to_json(reports).dump(2) + "\n");
    else
        write_file_atomic(path, reports_to_csv(reports));
}

int run_scan(const RunConfig& cfg) {
    const ProtocolSpec spec = protocol_povms(protocol_from_string(cfg.protocol));
    std::vector<double> grid(cfg.steps);
    for (int k = 0; k < cfg.steps; ++k)
        grid[k] = cfg.steps == 1
                      ? cfg.e_start
                      : cfg.e_start + (cfg.e_end - cfg.e_start) * k / (cfg.steps - 1);
    const auto reports = scan(spec, grid, detectors_of(cfg), pipeline_options(cfg));
    const std::string path = cfg.out.empty() ? default_out(cfg) : cfg.out;
    write_reports(cfg, reports, path);
    int failed = 0;
    for (const auto& r : reports)
        if (!r.error.empty()) ++failed;
    std::printf("wrote %zu rows to %s", reports.size() - failed, path.c_str());
    if (failed) std::printf(" (%d grid points failed)", failed);
    std::printf("\n");
    return 0;
}

int run_point(const RunConfig& cfg) {
    const ProtocolSpec spec = protocol_povms(protocol_from_string(cfg.protocol));
    const BoundReport r =
        key_rate_upper_bound(spec, {cfg.e}, detectors_of(cfg), pipeline_options(cfg));
    const std::string path = cfg.out.empty() ? default_out(cfg) : cfg.out;
    write_reports(cfg, {r}, path);
    std::printf("e = %s  lambda_max = %s  upper_bound = %s  (wrote %s)\n",
                format_double(r.e).c_str(), format_double(r.lambda_max).c_str(),
                format_double(r.upper_bound).c_str(), path.c_str());
    return 0;
}

int run_bsa(const RunConfig& cfg) {
    json j;
    try {
        j = json::parse(read_file(cfg.input));
    } catch (const json::exception& ex) {
        throw UsageError("invalid input file " + cfg.input + ": " + ex.what());
    }
    const EquivalenceClassSpec spec = class_spec_from_json(j);
    BsaOptions opts;
    if (cfg.tol > 0.0) {
        opts.sdp.feas_tol = cfg.tol;
        opts.sdp.gap_tol = cfg.tol;
    }
    const BsaResult r = max_separable_weight(spec, opts);
    const std::string path = cfg.out.empty() ? default_out(cfg) : cfg.out;
    write_file_atomic(path, to_json(r).dump(2) + "\n");
    std::printf("lambda_max = %s\n", format_double(r.lambda_max).c_str());
    if (r.lambda_max >= 1.0 - opts.lambda_one_threshold)
        std::printf("separable-compatible; bound = 0\n");
    else
        std::printf("entanglement verified; entangled weight = %s\n",
                    format_double(1.0 - r.lambda_max).c_str());
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int run_info(const RunConfig& cfg) {
    json j;
    try {
        j = json::parse(read_file(cfg.input));
    } catch (const json::exception& ex) {
        throw UsageError("invalid input file " + cfg.input + ": " + ex.what());
    }
    const JointDistribution p = distribution_from_json(j);
    json out;
    if (p.parties() == 2) {
        out["mutual_information"] = mutual_information(p);
    } else {
        out["mutual_information_ab"] = mutual_information(p.marginal_ab());
        out["conditional_mutual_information"] = conditional_mutual_information(p);
        const IntrinsicResult r = intrinsic_information(p);
        out["intrinsic_information"] = r.value;
        std::vector<std::vector<double>> rows;
        for (Eigen::Index i = 0; i < r.channel.transition().rows(); ++i) {
            std::vector<double> row(r.channel.transition().cols());
            for (Eigen::Index k = 0; k < r.channel.transition().cols(); ++k)
                row[k] = r.channel.transition()(i, k);
            rows.push_back(std::move(row));
        }
        out["minimizing_channel"] = rows;
    }
    const std::string path = cfg.out.empty() ? default_out(cfg) : cfg.out;
    write_file_atomic(path, out.dump(2) + "\n");
    for (auto it = out.begin(); it != out.end(); ++it)
        if (it->is_number())
            std::printf("%s = %s\n", it.key().c_str(),
                        format_double(it->get<double>()).c_str());
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upper bounds on distillable secret key rates from observed"
                 " QKD statistics with imperfect trusted detectors"};
    app.require_subcommand(1);

    RunConfig cfg;
    Provided given;
    std::string config_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", cfg.out, "output path (default <command>.<format>)")->each([&](const std::string&) { given.out = true; });
        cmd->add_option("--format", cfg.format, "csv or json")->each([&](const std::string&) {
            given.format = true;
        });
        cmd->add_option("--config", config_path, "JSON config file; explicit flags win");
        cmd->add_option("--tol", cfg.tol, "solver feasibility/gap tolerance")->each([&](const std::string&) { given.tol = true; });
    };
    auto add_protocol = [&](CLI::App* cmd) {
        cmd->add_option("--protocol", cfg.protocol, "four-state or six-state")->each([&](const std::string&) {
            given.protocol = true;
        });
        cmd->add_option("--dark-count", cfg.dark_count, "total dark count probability d")->each([&](const std::string&) {
            given.dark_count = true;
        });
        cmd->add_option("--efficiency", cfg.efficiency, "detector efficiency eta in (0,1]")->each([&](const std::string&) {
            given.efficiency = true;
        });
    };

    CLI::App* scan_cmd = app.add_subcommand("scan", "Bound curve over a grid of e values");
    add_protocol(scan_cmd);
    add_common(scan_cmd);
    scan_cmd->add_option("--e-start", cfg.e_start, "first depolarizing error")->each([&](const std::string&) {
        given.e_start = true;
    });
    scan_cmd->add_option("--e-end", cfg.e_end, "last depolarizing error")->each([&](const std::string&) {
        given.e_end = true;
    });
    scan_cmd->add_option("--steps", cfg.steps, "number of grid points")->each([&](const std::string&) {
        given.steps = true;
    });

    CLI::App* point_cmd = app.add_subcommand("point", "Bound at a single e value");
    add_protocol(point_cmd);
    add_common(point_cmd);
    point_cmd->add_option("--e", cfg.e, "depolarizing error probability")->each([&](const std::string&) { given.e = true; });

    CLI::App* bsa_cmd =
        app.add_subcommand("bsa", "Maximum separable weight for user-supplied data");
    add_common(bsa_cmd);
    bsa_cmd->add_option("--input", cfg.input, "JSON file with alice_povm, bob_povm, observed")->each([&](const std::string&) {
        given.input = true;
    });
    bsa_cmd->add_option("--protocol", cfg.protocol, "four-state or six-state")->each([&](const std::string&) {
        given.protocol = true;
    });

    CLI::App* info_cmd =
        app.add_subcommand("info", "Information measures of a joint distribution");
    add_common(info_cmd);
    info_cmd->add_option("--input", cfg.input, "JSON joint distribution")->each([&](const std::string&) {
        given.input = true;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (!config_path.empty()) merge_config_file(cfg, given, config_path);
        validate(cfg, given);
        if (cfg.command == "scan") return run_scan(cfg);
        if (cfg.command == "point") return run_point(cfg);
        if (cfg.command == "bsa") return run_bsa(cfg);
        return run_info(cfg);
    } catch (const UsageError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const InvalidArgument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const UnsupportedDimension& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const InconsistentStatistics& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 3;
    } catch (const NumericalFailure& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 4;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 4;
    }
}
