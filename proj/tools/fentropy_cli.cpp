#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include <fentropy/fentropy.hpp>

namespace {

using namespace fentropy;

// Shared --f / --alpha / --f-table handling. t_need is the largest
// argument the command will feed to f; builtins stretch their domain
// to cover it, tables carry their own domain.
struct FSpec {
    std::string name;
    double alpha = 0.0;
    std::string table_path;
    CLI::Option* alpha_opt = nullptr;

    entropy::ConvexFunction resolve(double t_need) const {
        if (!table_path.empty()) {
            std::ifstream in(table_path);
            if (!in)
                throw ParameterError("--f-table: cannot open " + table_path);
            return io::read_f_table_csv(
                in, table_path,
                std::filesystem::path(table_path).stem().string());
        }
        if (name.empty())
            throw ParameterError("one of --f or --f-table is required");
        return entropy::builtin(name,
                                alpha_opt->count() > 0
                                    ? std::optional<double>(alpha)
                                    : std::nullopt,
                                std::max(1.0, t_need));
    }
};

void add_f_options(CLI::App* cmd, FSpec& spec) {
    auto* f = cmd->add_option("--f", spec.name, "builtin convex function")
                  ->check(CLI::IsMember({"shannon", "tsallis", "gini_simpson",
                                         "natural_xlogx"}));
    spec.alpha_opt =
        cmd->add_option("--alpha", spec.alpha, "Tsallis order (> 1)");
    spec.alpha_opt->needs(f);
    auto* t = cmd->add_option("--f-table", spec.table_path,
                              "CSV table `x,fx` defining f")
                  ->check(CLI::ExistingFile);
    f->excludes(t);
    t->excludes(f);
}

// Results go to --out when given, stdout otherwise.
struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutStream(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw ParameterError("--out: cannot open " + path);
        os = &file;
    }
    std::ostream& get() { return *os; }
};

nlohmann::json load_json(const std::string& path) {
    if (path.empty()) return io::parse_json(std::cin, "<stdin>");
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path);
    return io::parse_json(in, path);
}

std::pair<states::DensityMatrix, states::DensityMatrix>
load_state_pair(const std::vector<std::string>& files) {
    if (files.size() == 2) {
        const auto a = load_json(files[0]);
        const auto b = load_json(files[1]);
        return {io::state_from_json(a, files[0]),
                io::state_from_json(b, files[1])};
    }
    const std::string origin = files.empty() ? "<stdin>" : files[0];
    const auto j = load_json(files.empty() ? std::string() : files[0]);
    return io::state_pair_from_json(j, origin);
}

void require_json_only(const std::string& format, const char* cmd) {
    if (format == "csv")
        throw ParameterError(std::string(cmd) + " does not emit csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"f-entropy continuity bounds for quantum states"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI file");

    int exit_code = 0;

    // bound
    FSpec bound_f;
    int bound_d = 0;
    double bound_eps = 0.0, bound_t = 1.0;
    std::string bound_out, bound_format;
    auto* bound = app.add_subcommand(
        "bound", "evaluate the entropy-difference bound at trace distance eps");
    bound->fallthrough();
    add_f_options(bound, bound_f);
    bound->add_option("--d", bound_d, "dimension")->required();
    bound->add_option("--eps", bound_eps, "trace distance")->required();
    auto* bound_t_opt =
        bound->add_option("--t", bound_t, "trace cap (default 1)");
    bound->add_option("--out", bound_out, "write result to a file");
    bound->add_option("--format", bound_format, "json for the full record")
        ->check(CLI::IsMember({"json", "csv"}));
    bound->callback([&] {
        require_json_only(bound_format, "bound");
        const auto f = bound_f.resolve(bound_t);
        const auto res = bound_t_opt->count()
                             ? bounds::f_bound_trace_t(f, bound_d, bound_t,
                                                       bound_eps)
                             : bounds::f_bound(f, bound_d, bound_eps);
        OutStream out(bound_out);
        if (bound_format == "json")
            io::write_bound_json(out.get(), res);
        else
            out.get() << format_real(res.value) << '\n';
    });

    // distance
    std::vector<std::string> dist_files;
    std::string dist_out, dist_format;
    auto* dist = app.add_subcommand(
        "distance", "trace distance between two states (files or stdin)");
    dist->add_option("files", dist_files,
                     "two state files, or one pair file (stdin when absent)")
        ->expected(0, 2);
    dist->add_option("--out", dist_out, "write result to a file");
    dist->add_option("--format", dist_format, "json for the full record")
        ->check(CLI::IsMember({"json", "csv"}));
    dist->callback([&] {
        require_json_only(dist_format, "distance");
        const auto [rho, sigma] = load_state_pair(dist_files);
        const double t = states::trace_distance(rho, sigma);
        OutStream out(dist_out);
        if (dist_format == "json")
            out.get() << "{\"d\":" << rho.dim()
                      << ",\"trace_distance\":" << format_real(t) << "}\n";
        else
            out.get() << format_real(t) << '\n';
    });

    // entropy
    FSpec ent_f;
    std::vector<std::string> ent_files;
    std::string ent_out, ent_format;
    auto* ent = app.add_subcommand(
        "entropy", "f-entropy of a state (file or stdin)");
    ent->fallthrough();
    add_f_options(ent, ent_f);
    ent->add_option("file", ent_files, "state file (stdin when absent)")
        ->expected(0, 1);
    ent->add_option("--out", ent_out, "write result to a file");
    ent->add_option("--format", ent_format, "json for the full record")
        ->check(CLI::IsMember({"json", "csv"}));
    ent->callback([&] {
        require_json_only(ent_format, "entropy");
        const auto f = ent_f.resolve(1.0);
        const std::string origin = ent_files.empty() ? "<stdin>" : ent_files[0];
        const auto j = load_json(ent_files.empty() ? std::string()
                                                   : ent_files[0]);
        const auto rho = io::state_from_json(j, origin);
        const double value = entropy::f_entropy(rho, f);
        OutStream out(ent_out);
        if (ent_format == "json")
            out.get() << "{\"f_name\":\"" << f.name() << "\",\"d\":"
                      << rho.dim() << ",\"value\":" << format_real(value)
                      << "}\n";
        else
            out.get() << format_real(value) << '\n';
    });

    // extremal
    int ext_d = 0;
    double ext_eps = 0.0;
    std::string ext_out, ext_format;
    auto* ext = app.add_subcommand(
        "extremal", "emit the extremal state pair attaining the bound");
    ext->fallthrough();
    ext->add_option("--d", ext_d, "dimension")->required();
    ext->add_option("--eps", ext_eps, "trace distance")->required();
    ext->add_option("--out", ext_out, "write result to a file");
    ext->add_option("--format", ext_format, "json (the only format)")
        ->check(CLI::IsMember({"json", "csv"}));
    ext->callback([&] {
        require_json_only(ext_format, "extremal");
        const auto [rho, sigma] = bounds::extremal_pair(ext_d, ext_eps);
        OutStream out(ext_out);
        io::write_state_pair_json(out.get(), ext_eps, rho, sigma);
    });

    // verify
    FSpec ver_f;
    int ver_d = 0, ver_n = 1000;
    std::uint64_t ver_seed = 0;
    std::string ver_out, ver_format;
    auto* ver = app.add_subcommand(
        "verify", "sample random pairs and check the bound, report slack");
    ver->fallthrough();
    add_f_options(ver, ver_f);
    ver->add_option("--d", ver_d, "dimension")->required();
    ver->add_option("--n", ver_n, "number of random pairs");
    ver->add_option("--seed", ver_seed, "RNG seed");
    ver->add_option("--out", ver_out, "write report to a file");
    ver->add_option("--format", ver_format, "json (the only format)")
        ->check(CLI::IsMember({"json", "csv"}));
    ver->callback([&] {
        require_json_only(ver_format, "verify");
        const auto f = ver_f.resolve(1.0);
        const auto rep = verify::sample_check(f, ver_d, ver_n, ver_seed);
        OutStream out(ver_out);
        io::write_report_json(out.get(), rep);
        char elapsed[32];
        std::snprintf(elapsed, sizeof elapsed, "%.3f", rep.elapsed);
        std::cerr << "verify: f=" << rep.f_name << " d=" << rep.d
                  << " n=" << rep.samples << " seed=" << rep.seed
                  << " violations=" << rep.violations.size()
                  << " min_slack=" << format_real(rep.min_slack)
                  << " elapsed=" << elapsed << "s\n";
        if (!rep.violations.empty()) exit_code = 1;
    });

    // oracle
    FSpec ora_f;
    int ora_d = 0, ora_grid = 200;
    double ora_eps = 0.0;
    std::string ora_out, ora_format;
    auto* ora = app.add_subcommand(
        "oracle", "grid+polish search for the exact maximum entropy gap");
    ora->fallthrough();
    add_f_options(ora, ora_f);
    ora->add_option("--d", ora_d, "dimension (2 or 3)")->required();
    ora->add_option("--eps", ora_eps, "trace distance")->required();
    ora->add_option("--grid", ora_grid, "grid points per axis (default 200)");
    ora->add_option("--out", ora_out, "write result to a file");
    ora->add_option("--format", ora_format, "json (the only format)")
        ->check(CLI::IsMember({"json", "csv"}));
    ora->callback([&] {
        require_json_only(ora_format, "oracle");
        const auto f = ora_f.resolve(1.0);
        const auto res = verify::oracle_max_Df(f, ora_d, ora_eps, ora_grid);
        OutStream out(ora_out);
        io::write_oracle_json(out.get(), res);
        std::cerr << "oracle: f=" << res.f_name << " d=" << res.d
                  << " eps=" << format_real(res.eps)
                  << " max_Df=" << format_real(res.max_Df)
                  << " bound=" << format_real(res.bound)
                  << " gap=" << format_real(res.gap) << '\n';
        // A certification failure: the search either beat the bound or
        // stayed visibly short of it.
        if (res.gap < -1e-9 || res.gap > 1e-6) exit_code = 1;
    });

    // sweep
    FSpec sw_f;
    int sw_d = 0, sw_grid = 101, sw_n = 0, sw_oracle_grid = 0;
    double sw_t = 1.0;
    std::uint64_t sw_seed = 0;
    std::string sw_out, sw_format = "csv";
    auto* sw = app.add_subcommand(
        "sweep", "tabulate the bound over an eps grid, optionally certified");
    sw->fallthrough();
    add_f_options(sw, sw_f);
    sw->add_option("--d", sw_d, "dimension")->required();
    sw->add_option("--t", sw_t, "trace cap (default 1)");
    sw->add_option("--grid", sw_grid,
                   "number of eps points, evenly spaced on [0, t]");
    sw->add_option("--n", sw_n,
                   "with n > 0, add a min_slack column from n sampled pairs "
                   "per row");
    sw->add_option("--seed", sw_seed, "RNG seed for the sampled pairs");
    sw->add_option("--oracle-grid", sw_oracle_grid,
                   "with a value, add an oracle_gap column (d must be 2 or 3)");
    sw->add_option("--out", sw_out, "write table to a file");
    sw->add_option("--format", sw_format, "csv (default) or json")
        ->check(CLI::IsMember({"json", "csv"}));
    sw->callback([&] {
        if (sw_grid < 2) throw ParameterError("--grid must be at least 2");
        const auto f = sw_f.resolve(sw_t);
        std::vector<double> grid(sw_grid);
        for (int i = 0; i < sw_grid; ++i)
            grid[i] = sw_t * static_cast<double>(i) / (sw_grid - 1);
        grid.back() = sw_t;
        verify::SweepOptions opts;
        opts.seed = sw_seed;
        if (sw_n > 0) opts.n = sw_n;
        if (sw_oracle_grid > 0) opts.oracle_grid = sw_oracle_grid;
        const auto rows = verify::sweep(f, sw_d, grid, sw_t, opts);
        OutStream out(sw_out);
        if (sw_format == "json")
            io::write_sweep_json(out.get(), f.name(), sw_d, sw_t, rows);
        else
            io::write_sweep_csv(out.get(), rows);
        int bad = 0;
        for (const auto& row : rows) {
            if (row.min_slack && *row.min_slack < -1e-9) ++bad;
            if (row.oracle_gap &&
                (*row.oracle_gap < -1e-9 || *row.oracle_gap > 1e-6))
                ++bad;
        }
        std::cerr << "sweep: f=" << f.name() << " d=" << sw_d
                  << " t=" << format_real(sw_t) << " rows=" << rows.size()
                  << " flagged=" << bad << '\n';
        if (bad > 0) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
