/*
   Copyright 2026 The tcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "tcsim/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "tcsim/harness.hpp"
#include "tcsim/io.hpp"
#include "tcsim/renorm.hpp"
#include "tcsim/toom.hpp"

#ifndef TCSIM_VERSION
#define TCSIM_VERSION "0.0.0"
#endif

namespace tcsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string code_version() { return std::string("tcsim ") + TCSIM_VERSION; }

void to_json(json& j, const CliParams& p) {
    j = json{{"geometry", p.geometry}, {"rule", p.rule},     {"initial", p.initial},
             {"strategy", p.strategy}, {"theta", p.theta},   {"lambda", p.lambda},
             {"p", p.p},               {"T", p.T},           {"steps", p.steps},
             {"eps", p.eps},           {"L", p.L},           {"delta", p.delta},
             {"K", p.K},               {"M", p.M},           {"alpha", p.alpha},
             {"replicas", p.replicas}, {"seed", p.seed},     {"gamma", p.gamma},
             {"tau", p.tau},           {"proxy", p.proxy},   {"tol", p.tol},
             {"lo", p.lo},             {"hi", p.hi},         {"t_factor", p.t_factor},
             {"points", p.points},     {"runs", p.runs},     {"flip_log", p.flip_log}};
}

void from_json(const json& j, CliParams& p) {
    // Missing keys keep their defaults so older manifests stay readable.
    const CliParams d;
    p.geometry = j.value("geometry", d.geometry);
    p.rule = j.value("rule", d.rule);
    p.initial = j.value("initial", d.initial);
    p.strategy = j.value("strategy", d.strategy);
    p.theta = j.value("theta", d.theta);
    p.lambda = j.value("lambda", d.lambda);
    p.p = j.value("p", d.p);
    p.T = j.value("T", d.T);
    p.steps = j.value("steps", d.steps);
    p.eps = j.value("eps", d.eps);
    p.L = j.value("L", d.L);
    p.delta = j.value("delta", d.delta);
    p.K = j.value("K", d.K);
    p.M = j.value("M", d.M);
    p.alpha = j.value("alpha", d.alpha);
    p.replicas = j.value("replicas", d.replicas);
    p.seed = j.value("seed", d.seed);
    p.gamma = j.value("gamma", d.gamma);
    p.tau = j.value("tau", d.tau);
    p.proxy = j.value("proxy", d.proxy);
    p.tol = j.value("tol", d.tol);
    p.lo = j.value("lo", d.lo);
    p.hi = j.value("hi", d.hi);
    p.t_factor = j.value("t_factor", d.t_factor);
    p.points = j.value("points", d.points);
    p.runs = j.value("runs", d.runs);
    p.flip_log = j.value("flip_log", d.flip_log);
}

namespace {

const std::vector<std::string> kCommands{"simulate", "couple",   "goodness",       "coarse-grain",
                                         "toom",     "dominate-check", "lambda-c", "p-c",
                                         "voter",    "bootstrap", "lemma-suite"};

void require(bool ok, const std::string& message) {
    if (!ok)
        throw std::invalid_argument(message);
}

void default_initial(CliParams& p, const std::string& kind, double density) {
    if (p.initial.empty())
        p.initial = p.p >= 0.0 ? "product" : kind;
    if (p.p < 0.0)
        p.p = p.initial == "product" ? density : 1.0;
}

double dim_squared(const Geometry& g) { return static_cast<double>(g.dim()) * g.dim(); }

InitialCondition make_initial(const CliParams& p) {
    switch (parse_initial_kind(p.initial)) {
    case InitialKind::all_ones: return InitialCondition::all_ones();
    case InitialKind::all_zeros: return InitialCondition::all_zeros();
    case InitialKind::product: return InitialCondition::product(p.p);
    case InitialKind::stripes: return InitialCondition::stripes();
    case InitialKind::diagonal: return InitialCondition::diagonal();
    case InitialKind::explicit_config: break;
    }
    throw std::invalid_argument("explicit initial configurations are not available from the command line");
}

/// Like make_initial(p).realize, plus "almost_product" (alpha, M, strategy).
Configuration realize_initial(const CliParams& p, const std::shared_ptr<const Region>& region,
                              Seed seed) {
    if (p.initial == "almost_product")
        return sample_almost_product(region, p.alpha, p.M, parse_thin_set_strategy(p.strategy), seed)
            .config;
    return make_initial(p).realize(region, seed);
}

Rule make_rule(const CliParams& p) {
    switch (parse_rule_kind(p.rule)) {
    case RuleKind::threshold_contact: return Rule::threshold_contact(p.theta);
    case RuleKind::independent: return Rule::independent();
    case RuleKind::modified_contact: return Rule::modified_contact(p.theta);
    case RuleKind::voter: return Rule::voter(p.theta);
    case RuleKind::oriented: return Rule::oriented();
    }
    throw std::logic_error("unreachable");
}

} // namespace

void resolve_params(const std::string& command, CliParams& p) {
    require(std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end(),
            "unknown command '" + command + "'");
    const Geometry geometry = Geometry::parse(p.geometry);
    p.geometry = geometry.to_spec();
    require(p.theta >= 1, "--theta must be >= 1");
    require(p.lambda >= 0.0, "--lambda must be >= 0");
    require(p.T >= 0.0, "--T must be >= 0");
    require(p.points >= 2, "--points must be >= 2");
    (void)parse_rule_kind(p.rule);

    if (command == "simulate") {
        default_initial(p, "all_ones", 0.5);
        if (p.T == 0.0)
            p.T = 10.0;
        if (p.replicas == 0)
            p.replicas = 20;
    } else if (command == "couple") {
        default_initial(p, "product", 0.5);
        if (p.T == 0.0)
            p.T = dim_squared(geometry);
        if (p.replicas == 0)
            p.replicas = 1;
        if (p.K == 0)
            p.K = p.L + p.theta;
        require(p.K >= p.L + p.theta, "--K must be at least L + theta");
    } else if (command == "goodness" || command == "coarse-grain") {
        default_initial(p, "all_ones", 0.5);
        if (p.T == 0.0)
            p.T = dim_squared(geometry);
        if (p.replicas == 0)
            p.replicas = 100;
        require(p.delta > 0.0 && p.delta < 1.0, "--delta must lie in (0, 1)");
        if (command == "coarse-grain")
            require(geometry.kind() == GeometryKind::slab, "coarse-grain needs a slab geometry");
    } else if (command == "toom" || command == "dominate-check") {
        require(geometry.kind() == GeometryKind::torus, command + " needs a torus geometry");
        require(p.steps >= 1, "--steps must be >= 1");
        if (p.replicas == 0)
            p.replicas = command == "toom" ? 20 : 100;
        if (command == "toom") {
            require(!p.eps.empty(), "--eps needs at least one value");
            std::sort(p.eps.begin(), p.eps.end());
        } else {
            require(p.lambda > 0.0, "dominate-check needs --lambda > 0");
        }
    } else if (command == "lambda-c" || command == "p-c") {
        if (p.replicas == 0)
            p.replicas = 4;
        if (p.lo < 0.0)
            p.lo = 0.0;
        if (p.hi < 0.0)
            p.hi = command == "lambda-c" ? 4.0 : 1.0;
    } else if (command == "voter") {
        default_initial(p, "product", 0.5);
        if (p.T == 0.0)
            p.T = 200.0;
        if (p.replicas == 0)
            p.replicas = 4;
    } else if (command == "bootstrap") {
        default_initial(p, "product", 0.5);
        p.replicas = 1;
    } else if (command == "lemma-suite") {
        require(p.runs >= 1, "--runs must be >= 1");
        p.replicas = 2;
    }
}

namespace {

class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) {}

    void write(const std::string& name, const std::string& content) {
        write_text_file(root_ / name, content);
        names_.push_back(name);
    }
    const std::vector<std::string>& names() const { return names_; }
    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    std::vector<std::string> names_;
};

template <class Writer>
std::string render(Writer&& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

json run_simulate(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto grid = time_grid(p.T, p.points);
    std::vector<std::vector<Flip>> logs;
    const EstimateReport report = density_curve(g, make_rule(p), p.lambda, make_initial(p), grid,
                                                p.replicas, p.seed, p.flip_log ? &logs : nullptr);
    out.write("density.csv", render([&](std::ostream& s) { write_series_csv(s, report, "rho"); }));
    if (p.flip_log)
        out.write("flips.csv", render([&](std::ostream& s) { write_flips_csv(s, logs); }));
    return {{"final_density", report.series.back().value},
            {"final_stderr", report.series.back().stderr}};
}

json run_couple(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto region = Region::full(g);
    const std::vector<Seed> seeds = replica_seeds(p.seed, p.replicas);
    std::ostringstream delta, summary;
    delta << "replica,site,first_entry\n";
    summary << "replica,delta_size,delta_thinness,dangerous,dangerous_thin,contained,"
               "domination_violations\n";
    std::vector<std::vector<Flip>> eta_logs, pi_logs;
    std::size_t violations = 0, defects = 0;
    for (std::size_t r = 0; r < seeds.size(); ++r) {
        const MarkPlan plan(p.lambda, p.T, seeds[r], g);
        const CoupledRun run = evolve_coupled(region, p.theta, realize_initial(p, region, seeds[r]), plan, p.T);
        for (SiteIndex x : region->sites())
            if (run.first_entry[x] != kNever)
                delta << r << ',' << x << ',' << format_double(run.first_entry[x]) << '\n';
        const SiteSet dangerous = dangerous_sites(run.pi, *region, p.K, p.T);
        const ContainmentCheck check = check_danger_containment(run, *region, p.L, p.K, p.theta);
        summary << r << ',' << run.delta_cumulative.count() << ','
                << thinness(run.delta_cumulative, *region) << ',' << dangerous.count() << ','
                << (check.precondition_held ? 1 : 0) << ',' << (check.containment_held ? 1 : 0)
                << ',' << run.domination_violations << '\n';
        violations += run.domination_violations;
        defects += check.defect() ? 1 : 0;
        if (p.flip_log) {
            eta_logs.push_back(run.eta.flips);
            pi_logs.push_back(run.pi.flips);
        }
    }
    out.write("delta.csv", delta.str());
    out.write("couple.csv", summary.str());
    if (p.flip_log) {
        out.write("flips_eta.csv", render([&](std::ostream& s) { write_flips_csv(s, eta_logs); }));
        out.write("flips_pi.csv", render([&](std::ostream& s) { write_flips_csv(s, pi_logs); }));
    }
    return {{"domination_violations", violations}, {"containment_defects", defects}};
}

GoodnessParams goodness_params(const CliParams& p) {
    GoodnessParams gp;
    gp.theta = p.theta;
    gp.lambda = p.lambda;
    gp.l = p.L;
    gp.delta = p.delta;
    gp.horizon = p.T;
    gp.n_replicas = p.replicas;
    gp.gamma = p.gamma;
    return gp;
}

json run_goodness(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto region = Region::full(g);
    const GoodnessVerdict v =
        estimate_goodness(realize_initial(p, region, p.seed), region, goodness_params(p), p.seed);
    const std::vector<GoodnessVerdict> all{v};
    out.write("goodness.csv", render([&](std::ostream& s) { write_goodness_csv(s, all); }));
    return {{"p_hat", v.p_hat}, {"ci_lo", v.ci.lo}, {"ci_hi", v.ci.hi},
            {"verdict", std::string(to_string(v.verdict))}};
}

json run_coarse_grain(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto region = Region::full(g);
    const CoarseGrainResult result =
        coarse_grain(realize_initial(p, region, p.seed), goodness_params(p), p.seed);
    out.write("goodness.csv", render([&](std::ostream& s) { write_goodness_csv(s, result.verdicts); }));
    std::ostringstream field;
    field << "block_i,value\n";
    for (std::size_t b = 0; b < result.field.size(); ++b)
        field << b << ',' << int(result.field.cells[b]) << '\n';
    out.write("field.csv", field.str());
    return {{"good_density", result.field.density()}, {"inconclusive", result.inconclusive}};
}

json run_toom(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const EpsSweep sweep = eps_sweep(g.dim(), g.side(), p.steps, p.eps, p.replicas, p.seed, p.proxy);
    out.write("curves.csv", render([&](std::ostream& s) { write_curves_csv(s, sweep.curves); }));
    return {{"final_density", sweep.final_density},
            {"bracket", {sweep.bracket.lo, sweep.bracket.hi}},
            {"crossed", sweep.crossed},
            {"order_violations", sweep.order_violations}};
}

json run_dominate(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const DominationReport report =
        oriented_domination_check(g.dim(), g.side(), p.lambda, p.steps, p.replicas, p.seed);
    std::ostringstream csv;
    csv << "replica,seed,violations\n";
    for (std::size_t r = 0; r < report.replica_seeds.size(); ++r)
        csv << r << ',' << report.replica_seeds[r] << ',' << report.violations_per_replica[r] << '\n';
    out.write("domination.csv", csv.str());
    return {{"violations", report.violations},
            {"eps_derived", report.eps_derived},
            {"eps_empirical", report.eps_empirical}};
}

SurvivalProtocol protocol_of(const CliParams& p) {
    SurvivalProtocol protocol;
    protocol.t_factor = p.t_factor;
    protocol.tau = p.tau;
    protocol.n_replicas = p.replicas;
    protocol.tolerance = p.tol;
    protocol.lo = p.lo;
    protocol.hi = p.hi;
    return protocol;
}

json run_critical(const std::string& command, const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const Bracket bracket = command == "lambda-c"
                                ? estimate_lambda_c(g, make_rule(p), protocol_of(p), p.seed)
                                : estimate_p_c(g, make_rule(p), p.lambda, protocol_of(p), p.seed);
    out.write("trace.csv", render([&](std::ostream& s) { write_trace_csv(s, bracket); }));
    return {{"bracket", {bracket.lo, bracket.hi}}, {"horizon", bracket.horizon}};
}

json run_voter(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto grid = time_grid(p.T, p.points);
    const VoterReport report =
        voter_coexistence(g, p.theta, p.lambda, make_initial(p), grid, p.replicas, p.seed);
    out.write("interface.csv",
              render([&](std::ostream& s) { write_series_csv(s, report.curve, "interface_density"); }));
    return {{"plateau", report.plateau}};
}

json run_bootstrap(const CliParams& p, OutputDir& out) {
    const Geometry g = Geometry::parse(p.geometry);
    const auto region = Region::full(g);
    const Configuration start = realize_initial(p, region, p.seed);
    const Configuration closed = bootstrap_closure(start, p.theta);
    std::ostringstream csv;
    csv << "stage,occupied,rle\n";
    csv << "initial," << start.occupied_count() << ',' << encode_rle(start.bits()) << '\n';
    csv << "closure," << closed.occupied_count() << ',' << encode_rle(closed.bits()) << '\n';
    out.write("bootstrap.csv", csv.str());
    return {{"initial_rle", encode_rle(start.bits())},
            {"closure_rle", encode_rle(closed.bits())},
            {"fills", closed.occupied_count() == region->size()}};
}

json suite_json(const SuiteReport& r) {
    json defects = json::array();
    for (const Defect& d : r.defects)
        defects.push_back({{"seed", d.seed}, {"details", d.details}});
    return {{"suite", r.suite},
            {"n_runs", r.n_runs},
            {"precondition_held", r.precondition_held},
            {"nontrivial", r.nontrivial},
            {"defects", defects}};
}

json run_check_suite(const CliParams& p, OutputDir& out) {
    const SuiteReport a = containment_suite(p.runs, derive_seed(p.seed, 31));
    const SuiteReport b = monotonicity_suite(p.runs, derive_seed(p.seed, 42));
    json defects = json::array();
    for (const SuiteReport* r : {&a, &b})
        for (const Defect& d : r->defects)
            defects.push_back({{"seed", d.seed}, {"details", r->suite + ": " + d.details}});
    const json doc{{"suite", "danger_containment+discrepancy_monotonicity"},
                   {"n_runs", a.n_runs + b.n_runs},
                   {"defects", defects},
                   {"suites", {suite_json(a), suite_json(b)}}};
    out.write("lemma_suite.json", doc.dump(2) + "\n");
    return {{"defect_count", defects.size()}};
}

} // namespace

json run_command(const std::string& command, const CliParams& params, const std::string& out_dir) {
    CliParams p = params;
    resolve_params(command, p);
    const auto start = std::chrono::steady_clock::now();
    OutputDir out{fs::path(out_dir)};
    json results;
    if (command == "simulate")
        results = run_simulate(p, out);
    else if (command == "couple")
        results = run_couple(p, out);
    else if (command == "goodness")
        results = run_goodness(p, out);
    else if (command == "coarse-grain")
        results = run_coarse_grain(p, out);
    else if (command == "toom")
        results = run_toom(p, out);
    else if (command == "dominate-check")
        results = run_dominate(p, out);
    else if (command == "lambda-c" || command == "p-c")
        results = run_critical(command, p, out);
    else if (command == "voter")
        results = run_voter(p, out);
    else if (command == "bootstrap")
        results = run_bootstrap(p, out);
    else
        results = run_check_suite(p, out);

    json manifest{{"command", command},
                  {"params", p},
                  {"master_seed", p.seed},
                  {"replica_seeds", command == "lemma-suite"
                                        ? std::vector<Seed>{derive_seed(p.seed, 31), derive_seed(p.seed, 42)}
                                        : replica_seeds(p.seed, p.replicas)},
                  {"code_version", code_version()},
                  {"outputs", out.names()},
                  {"results", results},
                  {"wall_clock_seconds",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    write_text_file(out.root() / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

namespace {

int finish(const json& manifest, const std::string& out_dir) {
    std::cout << manifest["results"].dump() << '\n' << "wrote " << (fs::path(out_dir) / "manifest.json").string() << '\n';
    if (manifest["command"] == "lemma-suite" && manifest["results"]["defect_count"].get<std::size_t>() > 0) {
        std::cerr << "tcsim: check suite found defects\n";
        return 3;
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Threshold contact process simulator"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "Flat key=value file mirroring the flags; flags override");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CliParams p;
    std::string out = "out";
    // Config files split unquoted values on commas; join them back.
    app.add_option("--geometry", p.geometry, "torus:d=D,side=S | hypercube:d=D | slab:d=D,theta=T,side=S")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--rule", p.rule, "threshold_contact | independent | modified_contact | voter | oriented");
    app.add_option("--initial", p.initial, "all_ones | all_zeros | product | stripes | diagonal | almost_product");
    app.add_option("--strategy", p.strategy, "Thin-set strategy: empty | sparse_pruned | structured_faces");
    app.add_option("--theta", p.theta, "Threshold");
    app.add_option("--lambda", p.lambda, "Up-mark rate");
    app.add_option("--p", p.p, "Initial product density");
    app.add_option("--T", p.T, "Time horizon (0: command default)");
    app.add_option("--steps", p.steps, "PCA steps");
    app.add_option("--eps", p.eps, "PCA noise, comma separated for a sweep")->delimiter(',');
    app.add_option("--L", p.L, "Thinness parameter");
    app.add_option("--delta", p.delta, "Goodness tolerance");
    app.add_option("--K", p.K, "Danger threshold (0: L + theta)");
    app.add_option("--M", p.M, "Corruption thinness");
    app.add_option("--alpha", p.alpha, "Product density for almost-product samples");
    app.add_option("--replicas", p.replicas, "Replica count (0: command default)");
    app.add_option("--seed", p.seed, "Master seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--gamma", p.gamma, "Confidence interval error level");
    app.add_option("--tau", p.tau, "Survival threshold for critical-point bisection");
    app.add_option("--proxy", p.proxy, "Survival density proxy for eps sweeps");
    app.add_option("--tol", p.tol, "Bisection tolerance");
    app.add_option("--lo", p.lo, "Lower bisection endpoint");
    app.add_option("--hi", p.hi, "Upper bisection endpoint");
    app.add_option("--t-factor", p.t_factor, "Bisection horizon is t-factor * d^2");
    app.add_option("--points", p.points, "Time grid points");
    app.add_option("--runs", p.runs, "Runs per randomized check suite");
    app.add_flag("--flip-log", p.flip_log, "Also write flip logs");

    const std::vector<std::pair<std::string, std::string>> descriptions{
        {"simulate", "Density curve of one rule"},
        {"couple", "Coupled contact and independent flip processes"},
        {"goodness", "Monte Carlo goodness of a configuration"},
        {"coarse-grain", "Block goodness field of a slab configuration"},
        {"toom", "Toom PCA survival curves over an eps grid"},
        {"dominate-check", "Oriented process versus PCA built from the same marks"},
        {"lambda-c", "Bisection bracket for the survival threshold in lambda"},
        {"p-c", "Bisection bracket for the critical initial density"},
        {"voter", "Interface density of the threshold voter model"},
        {"bootstrap", "Bootstrap closure of an initial configuration"},
        {"lemma-suite", "Randomized containment and monotonicity checks"}};
    for (const auto& [name, text] : descriptions)
        app.add_subcommand(name, text);
    std::string manifest_path;
    CLI::App* replay = app.add_subcommand("replay", "Re-run a manifest into --out");
    replay->add_option("manifest", manifest_path, "manifest.json to replay")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "replay") {
            const json recorded = json::parse(read_text_file(manifest_path));
            if (recorded.value("code_version", std::string()) != code_version())
                std::cerr << "tcsim: warning: manifest was written by "
                          << recorded.value("code_version", std::string("unknown")) << '\n';
            if (app.get_option("--out")->count() == 0)
                out = (fs::path(manifest_path).parent_path() / "replay").string();
            const json manifest = run_command(recorded.at("command").get<std::string>(),
                                              recorded.at("params").get<CliParams>(), out);
            return finish(manifest, out);
        }
        return finish(run_command(command, p, out), out);
    } catch (const std::exception& e) {
        std::cerr << "tcsim: error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"tcsim"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace tcsim
