#include "dtnsim/sweep.hpp"

#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "dtnsim/error.hpp"
#include "dtnsim/metrics.hpp"

namespace dtnsim {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_category_names(const fs::path& path)
{
    std::vector<std::string> names;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        names.push_back(line);
    }
    return names;
}

// Inputs shared by every sweep point of a file-driven config.
struct LoadedInputs {
    ContactTrace trace;
    ProfileSet profiles;
    std::vector<std::string> names;
};

LoadedInputs load_inputs(const RunConfig& config)
{
    LoadedInputs in;
    if (config.trace_file) {
        in.trace = parse_contact_trace(read_file(*config.trace_file), config.trace_format);
        in.profiles = parse_interest_profiles(read_file(*config.profile_file), *config.profile_categories);
    }
    if (config.category_names_file)
        in.names = read_category_names(*config.category_names_file);
    return in;
}

Scenario make_scenario(const RunConfig& config, const LoadedInputs& inputs, std::size_t n, std::uint64_t seed,
                       std::vector<std::string>& log)
{
    Scenario sc;
    sc.n_categories = n;
    sc.router = config.router;
    sc.schedule = config.schedule;
    sc.seed = seed;

    std::size_t source_arity;
    if (config.synthetic) {
        auto synth = generate_synthetic_trace(*config.synthetic, seed);
        sc.trace = std::move(synth.trace);
        sc.profiles = std::move(synth.profiles);
        source_arity = config.synthetic->n_categories;
    } else {
        sc.trace = inputs.trace;
        sc.profiles = inputs.profiles;
        source_arity = *config.profile_categories;
    }
    if (source_arity != n) {
        sc.profiles = adapt_profiles(sc.profiles, n);
        log.push_back(run_id_for(n, seed) + ": profiles " + (source_arity > n ? "truncated" : "zero-padded")
                      + " from " + std::to_string(source_arity) + " to " + std::to_string(n) + " categories");
    }

    if (!inputs.names.empty()) {
        sc.category_names = inputs.names;
        if (sc.category_names.size() != n) {
            const std::size_t had = sc.category_names.size();
            sc.category_names.resize(n);
            for (std::size_t k = had; k < n; ++k)
                sc.category_names[k] = "category_" + std::to_string(k + 1);
            log.push_back(run_id_for(n, seed) + ": category names adapted from " + std::to_string(had) + " to "
                          + std::to_string(n));
        }
    }
    return sc;
}

std::string format_groups(const SimResult& result)
{
    std::string out;
    for (const auto& [k, members] : result.groups) {
        out += std::to_string(k) + ':';
        for (NodeId id : members)
            out += ' ' + std::to_string(id);
        if (result.group_fallback.at(k))
            out += " (exact fallback)";
        out += '\n';
    }
    return out;
}

struct RunOutput {
    std::string run_id;
    bool ok = false;
    std::string error;
    MetricsReport report;
    std::vector<DeliveryRecord> records;
    std::string groups;
    std::string clustering;
    std::vector<std::string> log;
};

} // namespace

std::string run_id_for(std::size_t n_categories, std::uint64_t seed)
{
    return "n" + std::to_string(n_categories) + "_s" + std::to_string(seed);
}

Scenario build_scenario(const RunConfig& config, std::size_t n_categories, std::uint64_t seed,
                        std::vector<std::string>& log)
{
    return make_scenario(config, load_inputs(config), n_categories, seed, log);
}

int run_sweep(const RunConfig& config, std::ostream& err)
{
    LoadedInputs inputs;
    try {
        inputs = load_inputs(config);
    } catch (const Error& e) {
        err << "error loading inputs: " << e.what() << '\n';
        return exit_run_failed;
    }

    std::vector<RunOutput> outputs;
    for (std::size_t n : config.categories)
        for (std::uint64_t seed : config.seeds) {
            RunOutput out;
            out.run_id = run_id_for(n, seed);
            outputs.push_back(std::move(out));
        }

    auto execute = [&](std::size_t idx) {
        RunOutput& out = outputs[idx];
        const std::size_t n = config.categories[idx / config.seeds.size()];
        const std::uint64_t seed = config.seeds[idx % config.seeds.size()];
        try {
            const Scenario sc = make_scenario(config, inputs, n, seed, out.log);
            SimResult result = run(sc);
            for (const auto& w : result.warnings)
                out.log.push_back(out.run_id + ": " + w);
            out.report = compute_report(result, out.run_id);
            out.groups = format_groups(result);
            if (result.clustering)
                out.clustering = format_clustering(*result.clustering);
            out.records = std::move(result.records);
            out.ok = true;
        } catch (const Error& e) {
            out.error = "run n_categories=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + e.what();
        }
    };

    const std::size_t workers = std::min<std::size_t>(config.workers, outputs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < outputs.size(); ++i)
            execute(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < outputs.size(); i = next++)
                    execute(i);
            });
    }

    // Outputs are written only after every run finished, in sweep order.
    int status = exit_ok;
    try {
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (ec)
            throw IoError(config.output_dir.string());
        write_text_file(config.output_dir / "effective_config.txt", format_config(config));

        std::string summary = summary_csv_header();
        std::string log;
        for (const auto& out : outputs) {
            for (const auto& line : out.log)
                log += line + '\n';
            if (!out.ok) {
                err << out.error << '\n';
                log += out.error + '\n';
                status = exit_run_failed;
                continue;
            }
            summary += format_summary_row(out.report);
            const fs::path dir = config.output_dir / "runs" / out.run_id;
            write_report(out.report, out.records, dir);
            write_text_file(dir / "groups.txt", out.groups);
            if (!out.clustering.empty())
                write_text_file(dir / "clustering.txt", out.clustering);
        }
        write_text_file(config.output_dir / "summary.csv", summary);
        write_text_file(config.output_dir / "sweep.log", log);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_run_failed;
    }
    return status;
}

int validate_command(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        const LoadedInputs inputs = load_inputs(config);
        auto print = [&](const std::string& label, const ValidationReport& report) {
            auto list = [](const std::vector<NodeId>& ids) {
                std::string s;
                for (NodeId id : ids)
                    s += ' ' + std::to_string(id);
                return s;
            };
            out << label << "missing_profile:" << list(report.missing_profile) << '\n';
            out << label << "unused_profile:" << list(report.unused_profile) << '\n';
            out << label << (report.consistent() ? "consistent" : "inconsistent") << '\n';
            return report.consistent();
        };
        bool ok = true;
        if (config.synthetic) {
            for (std::uint64_t seed : config.seeds) {
                const auto synth = generate_synthetic_trace(*config.synthetic, seed);
                ok = print("seed " + std::to_string(seed) + ": ", validate_scenario(synth.trace, synth.profiles)) && ok;
            }
        } else {
            ok = print("", validate_scenario(inputs.trace, inputs.profiles));
        }
        return ok ? exit_ok : exit_run_failed;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_run_failed;
    }
}

int gen_trace_command(const RunConfig& config, std::ostream& err)
{
    if (!config.synthetic) {
        err << "gen-trace needs synthetic.* parameters in the config\n";
        return exit_config_error;
    }
    try {
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (ec)
            throw IoError(config.output_dir.string());
        for (std::uint64_t seed : config.seeds) {
            const auto synth = generate_synthetic_trace(*config.synthetic, seed);
            const std::string tag = "_s" + std::to_string(seed) + ".txt";
            write_text_file(config.output_dir / ("trace" + tag), format_contact_trace(synth.trace));
            write_text_file(config.output_dir / ("profiles" + tag), format_interest_profiles(synth.profiles));
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_run_failed;
    }
    return exit_ok;
}

} // namespace dtnsim
