#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fibgap/config.hpp"
#include "fibgap/fibgap.hpp"
#include "fibgap/presets.hpp"
#include "fibgap/validate.hpp"

namespace fibgap::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

/// Raised for numerical failures that map to exit code 2.
struct NumericalFailure : Error {
    using Error::Error;
};

struct Common {
    std::string config_path;
    int m = 1;
    int l = 1;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::size_t points = 4000;
    unsigned workers = 0;
    std::string output;
};

/// Everything derived from Common once the config is loaded.
struct Context {
    SystemSpec spec;
    TilingRule rule;
    FrequencyGrid grid;
    std::string config_hash;
    unsigned workers;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string hash_hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

Context make_context(const Common& c) {
    SystemSpec spec = load_system_spec(c.config_path);
    std::unique_ptr<TilingRule> rule;
    try {
        rule = std::make_unique<TilingRule>(c.m, c.l);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const Interval win = presets::sampling_window(spec);
    const double lo = c.omega_min.value_or(0.0);
    const double hi = c.omega_max.value_or(win.hi);
    if (lo < 0.0) throw ConfigError("--omega-min must be >= 0");
    FrequencyGrid grid;
    try {
        grid = FrequencyGrid(lo, hi, c.points);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::string canonical = to_json(spec).dump();
    return {spec, *rule, grid, hash_hex(fnv1a64(canonical)), c.workers == 0 ? default_workers() : c.workers};
}

void add_common(CLI::App* sub, Common& c, bool with_grid) {
    sub->add_option("--config,--system", c.config_path, "System config JSON file")->required();
    sub->add_option("--m", c.m, "Tiling parameter m (A -> A^m B^l)")->capture_default_str();
    sub->add_option("--l", c.l, "Tiling parameter l")->capture_default_str();
    if (with_grid) {
        sub->add_option("--omega-min", c.omega_min, "Lower grid frequency (rad/s), default 0");
        sub->add_option("--omega-max", c.omega_max, "Upper grid frequency (rad/s), default per system");
        sub->add_option("--points", c.points, "Grid points")->capture_default_str();
        sub->add_option("--workers", c.workers, "Worker threads (default FIBGAP_WORKERS or all cores)");
    }
    sub->add_option("-o,--output", c.output, "Output file (default stdout)");
}

/// Writes to the --output file if set, else to `fallback`.
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string csv_preamble(const Context& ctx, const std::vector<std::string>& columns) {
    std::string s = fmt::format("# fibgap {} config={}\n", kVersion, ctx.config_hash);
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    return s + "\n";
}

nlohmann::json json_header(const Context& ctx, const char* command) {
    return {{"tool", "fibgap"},
            {"version", kVersion},
            {"command", command},
            {"config_hash", ctx.config_hash},
            {"system", to_json(ctx.spec)},
            {"rule", {{"m", ctx.rule.m()}, {"l", ctx.rule.l()}}},
            {"grid", {{"omega_min", ctx.grid.omega_min}, {"omega_max", ctx.grid.omega_max}, {"points", ctx.grid.points}}}};
}

/// "4", "2,5,7" or "2..6".
std::vector<int> parse_orders(const std::string& text) {
    auto to_int = [&](std::string_view s) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || v < 0)
            throw ConfigError("--n: bad order '" + std::string(s) + "'");
        return v;
    };
    std::vector<int> out;
    const std::string_view sv(text);
    if (const auto dots = sv.find(".."); dots != std::string_view::npos) {
        const int a = to_int(sv.substr(0, dots));
        const int b = to_int(sv.substr(dots + 2));
        if (b < a) throw ConfigError("--n: empty range");
        for (int n = a; n <= b; ++n) out.push_back(n);
        return out;
    }
    std::size_t start = 0;
    while (start <= sv.size()) {
        const auto comma = sv.find(',', start);
        out.push_back(to_int(sv.substr(start, comma == std::string_view::npos ? sv.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_trace(const Common& c, int n_max, std::ostream& out) {
    const Context ctx = make_context(c);
    n_max = std::max(n_max, 2);
    struct Row {
        std::optional<TraceSequence> seq;
    };
    const auto rows = parallel_map(
        ctx.grid.points,
        [&](std::size_t i) {
            Row r;
            try {
                r.seq = trace_sequence(ctx.spec, ctx.rule, ctx.grid.at(i), n_max);
            } catch (const BeamPoleError&) {
            }
            return r;
        },
        ctx.workers);

    std::string text =
        csv_preamble(ctx, {"omega", "omega_normalised", "n", "x_n", "t_n", "escaped", "flag"});
    std::size_t poles = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double w = ctx.grid.at(i);
        const std::string prefix = num(w) + "," + num(normalised_frequency(ctx.spec, w)) + ",";
        if (!rows[i].seq) {
            ++poles;
            for (int n = 0; n <= n_max; ++n) text += prefix + std::to_string(n) + ",nan,,0,pole\n";
            continue;
        }
        const auto& seq = *rows[i].seq;
        for (int n = 0; n <= n_max; ++n) {
            const std::string t = seq.has_t() && n >= 2 ? num(seq.t(n)) : std::string();
            text += prefix + std::to_string(n) + "," + num(seq.x(n)) + "," + t + "," + (seq.escaped(n) ? "1" : "0") +
                    ",\n";
        }
    }
    if (poles == rows.size()) throw NumericalFailure("every grid point sits at a beam pole");
    emit(c.output, out, text);
    return kExitOk;
}

int cmd_bands(const Common& c, const std::string& orders_text, const std::string& intervals_path,
              std::ostream& out) {
    const Context ctx = make_context(c);
    const auto orders = parse_orders(orders_text);
    std::string text = csv_preamble(ctx, {"omega", "omega_normalised", "n", "trace_half", "K_L", "attenuation",
                                          "propagating"});
    nlohmann::json bands = nlohmann::json::array();
    for (int n : orders) {
        const BandDiagram d = band_diagram(ctx.spec, ctx.rule, n, ctx.grid, ctx.workers);
        if (d.points.empty()) throw NumericalFailure("every grid point sits at a beam pole");
        for (const auto& p : d.points) {
            text += fmt::format("{},{},{},{},{},{},{}\n", num(p.omega), num(normalised_frequency(ctx.spec, p.omega)), n,
                                num(p.trace_half), num(p.K_L), num(p.attenuation), p.propagating ? 1 : 0);
        }
        if (!intervals_path.empty()) {
            nlohmann::json list = nlohmann::json::array();
            for (const auto& b : passbands(ctx.spec, ctx.rule, n, ctx.grid, 1e-9, ctx.workers))
                list.push_back({{"lo", b.lo}, {"hi", b.hi}});
            bands.push_back({{"n", n}, {"cell_length", d.cell_length}, {"passbands", list}});
        }
    }
    emit(c.output, out, text);
    if (!intervals_path.empty()) {
        nlohmann::json doc = json_header(ctx, "bands");
        doc["bands"] = bands;
        emit(intervals_path, out, doc.dump(2) + "\n");
    }
    return kExitOk;
}

nlohmann::json certificate_json(const SBGCertificate& cert) {
    return {{"condition", to_string(cert.condition)},
            {"parameter", cert.parameter},
            {"anchor", cert.anchor},
            {"seed_values", {cert.seed_values[0], cert.seed_values[1], cert.seed_values[2]}}};
}

int cmd_sbg(const Common& c, int order, int lookahead, const std::string& mask_path, bool highfreq,
            std::ostream& out) {
    const Context ctx = make_context(c);
    if (order < 0) throw ConfigError("--order must be >= 0");
    if (lookahead < 0) throw ConfigError("--lookahead must be >= 0");
    try {
        theorem_for(ctx.rule);
    } catch (const UnsupportedRule& e) {
        throw ConfigError(e.what());
    }
    SweepOptions opts;
    opts.membership.anchor_lookahead = lookahead;
    opts.workers = ctx.workers;
    const GapReport rep = sweep(ctx.spec, ctx.rule, ctx.grid, order, opts);
    if (rep.skipped.size() == ctx.grid.points) throw NumericalFailure("every grid point sits at a beam pole");

    nlohmann::json doc = json_header(ctx, "sbg");
    doc["N"] = order;
    doc["anchor_lookahead"] = lookahead;
    doc["theorem"] = to_string(theorem_for(ctx.rule));
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& g : rep.intervals) {
        intervals.push_back({{"lo", g.range.lo},
                             {"hi", g.range.hi},
                             {"lo_normalised", normalised_frequency(ctx.spec, g.range.lo)},
                             {"hi_normalised", normalised_frequency(ctx.spec, g.range.hi)},
                             {"certificate", certificate_json(g.certificate)}});
    }
    doc["intervals"] = intervals;
    doc["skipped"] = rep.skipped;
    if (highfreq) {
        if (ctx.spec.kind() != SystemKind::MassSpring) throw ConfigError("--highfreq applies to mass-spring only");
        const auto hf = highfreq_threshold_mass_spring(ctx.spec.mass_spring(), ctx.rule);
        doc["high_frequency"] = {{"omega_star", hf.omega_star},
                                 {"analytic_bound", hf.analytic_bound},
                                 {"min_single_cutoff", hf.min_single_cutoff},
                                 {"max_single_cutoff", hf.max_single_cutoff},
                                 {"anchor_lookahead", hf.membership.anchor_lookahead}};
    }
    emit(c.output, out, doc.dump(2) + "\n");

    if (!mask_path.empty()) {
        std::string text = csv_preamble(ctx, {"omega", "omega_normalised", "state"});
        for (std::size_t i = 0; i < rep.mask.size(); ++i) {
            const double w = ctx.grid.at(i);
            text += num(w) + "," + num(normalised_frequency(ctx.spec, w)) + "," +
                    std::to_string(static_cast<int>(rep.mask[i])) + "\n";
        }
        emit(mask_path, out, text);
    }
    return kExitOk;
}

int cmd_transmit(const Common& c, const std::string& stack_text, std::ostream& out) {
    const Context ctx = make_context(c);
    const Stack stack = make_stack(parse_stack_descriptor(stack_text), ctx.spec, ctx.rule);
    const TransmissionProfile prof = transmission_profile(stack, ctx.grid, ctx.workers);
    std::string text = csv_preamble(ctx, {"omega", "omega_normalised", "T_c", "abs_Tc", "log10_abs_Tc", "flag"});
    std::size_t poles = 0;
    for (const auto& v : prof.values) {
        if (v.flag == SampleFlag::Pole) ++poles;
        text += fmt::format("{},{},{},{},{},{}\n", num(v.omega), num(normalised_frequency(ctx.spec, v.omega)),
                            num(v.T_c), num(std::abs(v.T_c)), num(v.log10_abs_Tc), to_string(v.flag));
    }
    if (poles == prof.values.size()) throw NumericalFailure("every grid point sits at a beam pole");
    emit(c.output, out, text);
    return kExitOk;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, const std::string& output, std::ostream& out) {
    ValidationOptions opt;
    opt.seed = seed;
    const ValidationReport rep = run_validation(suite, opt);
    nlohmann::json doc = {{"tool", "fibgap"}, {"version", kVersion}, {"command", "validate"}};
    doc["report"] = to_json(rep);
    emit(output, out, doc.dump(2) + "\n");
    return rep.passed() ? kExitOk : kExitNumerical;
}

int cmd_word(int m, int l, int n, std::int64_t cap, const std::string& output, std::ostream& out) {
    std::unique_ptr<TilingRule> rule;
    try {
        rule = std::make_unique<TilingRule>(m, l);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (n < 0) throw ConfigError("--n must be >= 0");
    emit(output, out, word(*rule, n, cap).letters + "\n");
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"fibgap: super band gaps of generalised Fibonacci tilings"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common c;
    std::function<int()> action;

    int n_max = 10;
    auto* trace = app.add_subcommand("trace", "Trace sequence x_0..x_n on a frequency grid (CSV)");
    add_common(trace, c, true);
    trace->add_option("--n-max", n_max, "Highest order")->capture_default_str();
    trace->callback([&] { action = [&] { return cmd_trace(c, n_max, out); }; });

    std::string orders = "2..5";
    std::string intervals_path;
    auto* bands = app.add_subcommand("bands", "Floquet-Bloch band diagram of periodic approximants (CSV)");
    add_common(bands, c, true);
    bands->add_option("--n", orders, "Orders: '4', '2,5' or '2..6'")->capture_default_str();
    bands->add_option("--intervals", intervals_path, "Also write pass-band intervals as JSON to this file");
    bands->callback([&] { action = [&] { return cmd_bands(c, orders, intervals_path, out); }; });

    int order = 0;
    int lookahead = 0;
    std::string mask_path;
    bool highfreq = false;
    auto* sbg = app.add_subcommand("sbg", "Certified super band gap intervals S_N (JSON)");
    add_common(sbg, c, true);
    sbg->add_option("--order", order, "Gap order N")->required();
    sbg->add_option("--lookahead", lookahead, "Extra anchors tried beyond N")->capture_default_str();
    sbg->add_option("--mask", mask_path, "Write the per-grid-point certification mask as CSV");
    sbg->add_flag("--highfreq", highfreq, "Also locate the high-frequency threshold (mass-spring)");
    sbg->callback([&] { action = [&] { return cmd_sbg(c, order, lookahead, mask_path, highfreq, out); }; });

    std::string stack_text = "quasicrystal:0..6";
    auto* transmit = app.add_subcommand("transmit", "Transmission coefficient of a finite stack (CSV)");
    add_common(transmit, c, true);
    transmit->add_option("--stack", stack_text, "'quasicrystal:a..b' or 'periodic:n=N,repeats=R'")
        ->capture_default_str();
    transmit->callback([&] { action = [&] { return cmd_transmit(c, stack_text, out); }; });

    std::string suite = "all";
    std::uint64_t seed = 42;
    std::string validate_output;
    auto* validate = app.add_subcommand("validate", "Run the invariant suites (JSON report)");
    validate->add_option("--suite", suite, "Suite name")
        ->check(CLI::IsMember(validation_suites()))
        ->capture_default_str();
    validate->add_option("--seed", seed, "Random seed")->capture_default_str();
    validate->add_option("-o,--output", validate_output, "Output file (default stdout)");
    validate->callback([&] { action = [&] { return cmd_validate(suite, seed, validate_output, out); }; });

    int word_n = 5;
    std::int64_t cap = kDefaultWordCap;
    std::string word_output;
    int word_m = 1;
    int word_l = 1;
    auto* wordcmd = app.add_subcommand("word", "Print the tiling word of order n");
    wordcmd->add_option("--m", word_m, "Tiling parameter m")->capture_default_str();
    wordcmd->add_option("--l", word_l, "Tiling parameter l")->capture_default_str();
    wordcmd->add_option("--n", word_n, "Order")->capture_default_str();
    wordcmd->add_option("--cap", cap, "Maximum word length")->capture_default_str();
    wordcmd->add_option("-o,--output", word_output, "Output file (default stdout)");
    wordcmd->callback([&] { action = [&] { return cmd_word(word_m, word_l, word_n, cap, word_output, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        return action();
    } catch (const ConfigError& e) {
        err << "fibgap: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LengthCapError& e) {
        err << "fibgap: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OverflowError& e) {
        err << "fibgap: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "fibgap: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "fibgap: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "fibgap: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace fibgap::cli
