#include "connectgraph/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "connectgraph/error.hpp"
#include "connectgraph/experiments.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/serialize.hpp"
#include "connectgraph/verify.hpp"

namespace connectgraph {

namespace {

struct Options {
    ToyKernelParams toy;
    SeparationKernelParams sep;
    SbmParams sbm;
    double eta = kDefaultSweepEta;
    double lambda = 1.0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::string vary;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    int trials = 10;
    int threads = 0;
    double fraction = 0.0;
    std::string output;
    std::string format;
    std::string input;
    std::string suite = "all";
    bool with_graph = false;
};

// Kernel probabilities for toy and separation.
template <typename P>
void add_prime_flags(CLI::App* cmd, P& p) {
    const auto unit = CLI::Range(0.0, 1.0);
    cmd->add_option("--rho-p", p.rho_p, "augmentation probability, same class and domain")->required()->check(unit);
    cmd->add_option("--alpha-p", p.alpha_p, "same class, other domain")->required()->check(unit);
    cmd->add_option("--beta-p", p.beta_p, "other class, same domain")->required()->check(unit);
    cmd->add_option("--gamma-p", p.gamma_p, "other class and domain")->required()->check(unit);
}

// In a sweep the varied parameter may be left out, so `deferred` options are
// checked after parsing by require_unless_varied.
std::vector<CLI::Option*> add_sbm_flags(CLI::App* cmd, Options& o, bool deferred = false) {
    const auto unit = CLI::Range(0.0, 1.0);
    cmd->add_option("--r", o.sbm.r, "number of classes")->required()->check(CLI::Range(2, 1000));
    cmd->add_option("--m", o.sbm.m, "number of domains")->required()->check(CLI::Range(2, 1000));
    std::vector<CLI::Option*> params{
        cmd->add_option("--n", o.sbm.n, "nodes per class-domain block")->check(CLI::Range(1, 100000)),
        cmd->add_option("--rho", o.sbm.rho, "edge probability, same class and domain")->check(unit),
        cmd->add_option("--alpha", o.sbm.alpha, "same class, other domain")->check(unit),
        cmd->add_option("--beta", o.sbm.beta, "other class, same domain")->check(unit),
        cmd->add_option("--gamma", o.sbm.gamma, "other class and domain")->check(unit)};
    if (!deferred)
        for (auto* p : params) p->required();
    cmd->add_option("--k", o.k, "embedding dimension (default r + m - 1)");
    cmd->add_option("--eta", o.eta, "ridge strength")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "base seed (CONNECTGRAPH_SEED overrides)");
    cmd->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::Range(1, 1024));
    return params;
}

void require_unless_varied(const std::vector<CLI::Option*>& params, const std::string& vary) {
    for (const auto* p : params)
        if (p->count() == 0 && p->get_name() != "--" + vary)
            throw ValidationError(p->get_name() + " is required");
}

// The first listed format is the default; it is filled in after parsing
// because all subcommands share one Options.
void add_output_flags(CLI::App* cmd, Options& o, std::initializer_list<std::string> formats) {
    cmd->add_option("--output", o.output, "write results to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format (default " + *formats.begin() + ")")
        ->check(CLI::IsMember(std::vector<std::string>(formats)));
}

std::uint64_t env_seed(std::uint64_t fallback) {
    const char* env = std::getenv("CONNECTGRAPH_SEED");
    if (!env) return fallback;
    const std::string s(env);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-')
        throw ValidationError("CONNECTGRAPH_SEED must be an unsigned 64-bit integer");
    return v;
}

std::string read_file(const std::string& path, const char* flag) {
    std::ifstream in(path);
    if (!in) throw ValidationError(std::string(flag) + ": cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Re-raises a library validation error with the flags that caused it.
template <typename F>
void with_flags(const char* flags, F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(flags) + ": " + e.what());
    }
}

void check_k(const Options& o) {
    if (o.k > o.sbm.num_nodes()) throw ValidationError("--k must not exceed the node count r*m*n");
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral contrastive domain-adaptation experiments"};
    app.name("connectgraph");
    app.require_subcommand(1);
    Options o;

    auto* toy = app.add_subcommand("toy", "4-node toy graph: embedding, probe, errors");
    add_prime_flags(toy, o.toy);
    toy->add_option("--eta", o.eta, "ridge strength")->check(CLI::PositiveNumber);
    add_output_flags(toy, o, {"json"});

    auto* sep = app.add_subcommand("separation", "8-node graph: contrastive vs ERM vs DANN");
    add_prime_flags(sep, o.sep);
    sep->add_option("--lambda", o.lambda, "DANN trade-off")->check(CLI::PositiveNumber);
    sep->add_option("--eta", o.eta, "ridge strength")->check(CLI::PositiveNumber);
    add_output_flags(sep, o, {"json"});

    auto* run = app.add_subcommand("sbm-run", "one sampled SBM trial");
    add_sbm_flags(run, o);
    run->add_flag("--with-graph", o.with_graph, "include the sampled graph in JSON output");
    add_output_flags(run, o, {"json", "csv"});

    auto* sw = app.add_subcommand("sbm-sweep", "Monte-Carlo sweep over one parameter");
    const auto sweep_params = add_sbm_flags(sw, o, true);
    sw->add_option("--vary", o.vary, "parameter to sweep")
        ->required()
        ->check(CLI::IsMember({"alpha", "beta", "gamma", "n", "eta", "rho"}));
    sw->add_option("--from", o.from, "first grid value")->required();
    sw->add_option("--to", o.to, "last grid value")->required();
    sw->add_option("--steps", o.steps, "grid size")->required()->check(CLI::Range(0, 100000));
    sw->add_option("--trials", o.trials, "trials per grid point")->check(CLI::Range(0, 100000));
    add_output_flags(sw, o, {"csv", "json"});

    auto* ab = app.add_subcommand("ablate", "remove cross-domain edges and rerun trials");
    add_sbm_flags(ab, o);
    auto* frac = ab->add_option("--fraction", o.fraction, "fraction of cross-domain edges removed")
                     ->check(CLI::Range(0.0, 1.0));
    auto* abfrom = ab->add_option("--from", o.from, "first fraction")->check(CLI::Range(0.0, 1.0));
    auto* abto = ab->add_option("--to", o.to, "last fraction")->check(CLI::Range(0.0, 1.0));
    auto* absteps = ab->add_option("--steps", o.steps, "number of fractions")->check(CLI::Range(0, 100000));
    frac->excludes(abfrom)->excludes(abto)->excludes(absteps);
    abfrom->needs(abto)->needs(absteps);
    ab->add_option("--trials", o.trials, "trials per fraction")->check(CLI::Range(0, 100000));
    add_output_flags(ab, o, {"csv", "json"});

    auto* fit = app.add_subcommand("fit", "log-space connectivity regression");
    fit->add_option("--input", o.input, "CSV with pair_id,accuracy,alpha,beta,gamma")->required();
    add_output_flags(fit, o, {"json"});

    auto* tables = app.add_subcommand("paper-tables", "fit the embedded DomainNet SwAV tables");
    add_output_flags(tables, o, {"json"});

    auto* ver = app.add_subcommand("verify", "run the invariant suites");
    std::vector<std::string> suites = verify_suites();
    suites.insert(suites.begin(), "all");
    ver->add_option("--suite", o.suite, "suite to run")->check(CLI::IsMember(suites));
    ver->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::Range(1, 1024));
    add_output_flags(ver, o, {"text", "json"});

    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
        err << "error: unknown command '" << argv[1] << "'\n";
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (o.format.empty()) o.format = (sw->parsed() || ab->parsed()) ? "csv" : ver->parsed() ? "text" : "json";

    try {
        o.seed = env_seed(o.seed);
        if (o.threads > 0) kernels::set_threads(o.threads);

        std::ofstream file;
        if (!o.output.empty()) {
            file.open(o.output, std::ios::binary | std::ios::trunc);
            if (!file) throw ValidationError("--output: cannot write '" + o.output + "'");
        }
        std::ostream& dst = o.output.empty() ? out : file;
        int code = 0;
        std::string text;

        if (toy->parsed()) {
            with_flags("--rho-p/--alpha-p/--beta-p/--gamma-p", [&] { o.toy.validate(); });
            text = dump_json(to_json(run_toy(o.toy, o.eta)));
        } else if (sep->parsed()) {
            with_flags("--rho-p/--alpha-p/--beta-p/--gamma-p", [&] { o.sep.validate(); });
            text = dump_json(to_json(run_separation(o.sep, o.lambda, o.eta)));
        } else if (run->parsed()) {
            o.sbm.validate();
            check_k(o);
            const SampledGraph g = sample_adjacency(o.sbm, o.seed);
            const TrialRecord r = run_graph_trial(g, o.k, o.eta);
            if (o.format == "csv") {
                text = sweep_csv({SweepRow{"none", 0.0, 0, o.seed, r}});
            } else {
                Json j = to_json(r);
                if (o.with_graph) j["graph"] = to_json(g);
                text = dump_json(j);
            }
        } else if (sw->parsed()) {
            require_unless_varied(sweep_params, o.vary);
            o.sbm.validate();
            if (o.vary != "n") check_k(o);
            SweepSpec spec;
            spec.base = o.sbm;
            spec.vary = o.vary;
            spec.grid = linear_grid(o.from, o.to, o.steps);
            with_flags("--vary/--from/--to", [&] {
                for (double v : spec.grid) apply_sweep_value(o.sbm, o.eta, o.vary, v);
            });
            spec.trials = o.trials;
            spec.base_seed = o.seed;
            spec.eta = o.eta;
            spec.k = o.k;
            const auto rows = sweep(spec);
            text = o.format == "csv" ? sweep_csv(rows) : dump_json(sweep_json(rows));
        } else if (ab->parsed()) {
            o.sbm.validate();
            check_k(o);
            const Vector fractions = absteps->count() ? linear_grid(o.from, o.to, o.steps) : Vector{o.fraction};
            const auto rows = ablation_sweep(o.sbm, fractions, o.trials, o.seed, o.eta, o.k);
            text = o.format == "csv" ? sweep_csv(rows) : dump_json(sweep_json(rows));
        } else if (fit->parsed()) {
            text = dump_json(to_json(fit_connectivity(parse_connectivity_csv(read_file(o.input, "--input")))));
        } else if (tables->parsed()) {
            text = dump_json(to_json(paper_table_fit()));
        } else if (ver->parsed()) {
            const auto results = run_verify(o.suite);
            if (o.format == "json") {
                Json a = Json::array();
                for (const auto& r : results)
                    a.push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
                text = dump_json(a);
            } else {
                text = format_report(results);
            }
            code = all_passed(results) ? 0 : 1;
        }
        dst << text;
        dst.flush();
        if (!dst) throw ValidationError("--output: write failed");
        return code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace connectgraph
