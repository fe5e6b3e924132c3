// shapetest command-line front end.
//
// Exit codes: 0 accept / success, 1 reject, 2 usage error, 3 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "shapetest/certify.hpp"
#include "shapetest/classes.hpp"
#include "shapetest/effective.hpp"
#include "shapetest/generators.hpp"
#include "shapetest/hardness.hpp"
#include "shapetest/splittable.hpp"
#include "shapetest/structure.hpp"
#include "shapetest/tolerant.hpp"

using json = nlohmann::json;
using namespace shapetest;

namespace {

constexpr int kAccept = 0, kReject = 1, kUsage = 2, kRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json histogram_json(const Histogram& h) {
    std::vector<double> pmf = h.masses();
    for (double& v : pmf) v = std::max(0.0, v);  // no -0.0 from solver round-off
    return json{{"n", h.n()}, {"pmf", pmf}};
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

// {"n", "pmf"} or {"gen", ...}; n_default fills a missing "n" for generators.
Histogram histogram_from_json(const json& j, std::size_t n_default = 0) {
    if (j.contains("pmf")) {
        auto pmf = j.at("pmf").get<std::vector<double>>();
        if (j.contains("n") && j.at("n").get<std::size_t>() != pmf.size())
            throw UsageError("distribution: \"n\" does not match the pmf length");
        return Histogram(std::move(pmf));
    }
    if (!j.contains("gen")) throw UsageError("distribution: need \"pmf\" or \"gen\"");
    const std::string g = j.at("gen").get<std::string>();
    const std::size_t n = get_or<std::size_t>(j, "n", n_default);
    if (n == 0 && g != "ksiirv" && g != "ksiirv_sum" && g != "pbd") throw UsageError("generator " + g + ": missing \"n\"");
    if (g == "uniform") return Histogram::uniform(n);
    if (g == "point") return Histogram::point_mass(n, get_or<std::size_t>(j, "at", 1));
    if (g == "staircase") return gen::staircase(n, get_or<std::size_t>(j, "steps", 8));
    if (g == "ramp") return gen::ramp(n, get_or<bool>(j, "increasing", true));
    if (g == "geometric") return gen::geometric(n, get_or<double>(j, "r", 0.99));
    if (g == "binomial") return gen::binomial(n, get_or<double>(j, "q", 0.5));
    if (g == "bimodal") {
        const double nd = static_cast<double>(n);
        return gen::bimodal(n, get_or<double>(j, "c1", 0.2 * nd), get_or<double>(j, "c2", 0.8 * nd),
                            get_or<double>(j, "width", nd / 25.0));
    }
    if (g == "two_block") return gen::two_block(n, get_or<std::size_t>(j, "len", n / 16), get_or<double>(j, "left", 0.7));
    if (g == "step") return gen::step(n, get_or<std::size_t>(j, "cut", n / 2), get_or<double>(j, "high", 3.0));
    if (g == "alternating")
        return gen::alternating(n, get_or<std::size_t>(j, "blocks", 4), get_or<double>(j, "high", 4.0));
    if (g == "paninski")
        return paninski_instance(n, get_or<double>(j, "eps", 0.5), get_or<std::uint64_t>(j, "seed", 1));
    if (g == "ksiirv" || g == "ksiirv_sum")
        return ksiirv_hard_instance(get_or<std::size_t>(j, "count", 10), get_or<std::size_t>(j, "k", 3));
    if (g == "zipf") {
        const double s = get_or<double>(j, "s", 1.0);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(i + 1), -s);
        return Histogram::from_weights(std::move(w));
    }
    if (g == "pbd") {
        // {"gen": "pbd", "p": [...]} on values 0..len(p), i.e. n = len(p) + 1.
        const auto p = j.at("p").get<std::vector<double>>();
        return pbd_pmf(p);
    }
    throw UsageError("unknown generator: " + g);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

ShapeClass parse_class(const std::string& tag, int t, int d) {
    const auto c = ShapeClass::parse(tag, t, d);
    if (!c) throw UsageError("unknown class: " + tag);
    return *c;
}

std::size_t thread_count() {
    if (const char* s = std::getenv("SHAPETEST_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

// Runs f(i) for i in [0, count) on SHAPETEST_THREADS workers.
template <class F>
void parallel_for(std::size_t count, F f) {
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

struct TrialResult {
    Verdict verdict = Verdict::Reject;
    std::uint64_t samples = 0;
    double wall_ms = 0.0;
    json diag;
};

json outcome_json(const TestOutcome& o) {
    json j{{"verdict", verdict_name(o.verdict)},
           {"reason", o.reason},
           {"samples_used", o.samples_used},
           {"config",
            {{"epsilon", o.config.epsilon},
             {"gamma", o.config.gamma},
             {"L", o.config.L},
             {"kappa", o.config.kappa},
             {"delta", o.config.delta},
             {"n", o.config.n},
             {"N", o.config.N},
             {"m", o.config.m}}}};
    if (o.report) {
        json leaves = json::array();
        for (std::size_t i = 0; i < o.report->partition.size(); ++i)
            leaves.push_back({{"lo", o.report->partition.intervals[i].lo},
                              {"hi", o.report->partition.intervals[i].hi},
                              {"kind", o.report->kinds[i] == LeafKind::Flat ? "flat" : "light"},
                              {"m_I", o.report->samples[i]}});
        j["report"] = {{"splits", o.report->splits}, {"leaves", leaves}};
    }
    return j;
}

// One trial: the tester `boost` times on one source, majority verdict.
TrialResult run_trial(const Histogram& d, const ClassSpec& spec, double eps, std::uint64_t seed, int boost,
                      bool effective) {
    const auto t0 = std::chrono::steady_clock::now();
    HistogramSource src(d, seed);
    TrialResult r;
    int acc = 0, fail = 0;
    json runs = json::array();
    for (int b = 0; b < boost; ++b) {
        const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(b) + 1);
        Verdict v;
        if (effective) {
            const auto o = test_effective_splittable(src, d.n(), eps, spec, s);
            v = o.verdict;
            json ej{{"verdict", verdict_name(v)}, {"reason", o.reason}, {"tau", o.config.tau}, {"m0", o.config.m0}};
            json reps = json::array();
            for (const auto& run : o.runs) {
                json rj{{"verdict", verdict_name(run.verdict)}, {"reason", run.reason}};
                if (run.interval) rj["interval"] = {run.interval->lo, run.interval->hi};
                if (run.inner) rj["inner"] = outcome_json(*run.inner);
                reps.push_back(rj);
            }
            ej["runs"] = reps;
            runs.push_back(ej);
        } else {
            const auto o = test_splittable(src, d.n(), eps, spec, s);
            v = o.verdict;
            runs.push_back(outcome_json(o));
        }
        acc += v == Verdict::Accept;
        fail += v == Verdict::Fail;
    }
    r.verdict = 2 * acc > boost ? Verdict::Accept : (2 * fail > boost ? Verdict::Fail : Verdict::Reject);
    r.samples = src.consumed();
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.diag = {{"verdict", verdict_name(r.verdict)}, {"seed", seed}, {"samples_used", r.samples}, {"runs", runs}};
    return r;
}

struct ClassArgs {
    std::string tag = "monotone";
    int t = 2;
    int d = 1;
};

void add_class_options(CLI::App* app, ClassArgs& c, bool required = true) {
    auto* o = app->add_option("--class", c.tag, "shape class tag");
    if (required) o->required();
    app->add_option("--t", c.t, "pieces / modes for histogram, tmodal and piecewise-poly");
    app->add_option("--d", c.d, "degree for piecewise-poly");
}

// ---- test ----------------------------------------------------------------

struct TestArgs {
    ClassArgs cls;
    std::size_t n = 0;
    double eps = 0.25;
    std::string dist;
    std::uint64_t seed = 1;
    int trials = 1;
    int boost = 1;
    bool effective = false;
    bool verbose = false;
};

int cmd_test(const TestArgs& a) {
    const Histogram d = histogram_from_json(read_json_file(a.dist), a.n);
    if (a.n && d.n() != a.n) throw UsageError("--n does not match the distribution");
    if (a.trials < 1 || a.boost < 1) throw UsageError("--trials and --boost must be >= 1");
    const ClassSpec spec = make_class_spec(parse_class(a.cls.tag, a.cls.t, a.cls.d));
    std::vector<TrialResult> res(static_cast<std::size_t>(a.trials));
    parallel_for(res.size(), [&](std::size_t i) {
        res[i] = run_trial(d, spec, a.eps, mix_seed(a.seed, i), a.boost, a.effective);
    });
    int acc = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        acc += res[i].verdict == Verdict::Accept;
        if (a.verbose) std::cout << res[i].diag.dump() << "\n";
        if (a.trials > 1) std::cout << "trial " << i << ": " << verdict_name(res[i].verdict) << "\n";
    }
    const bool accept = 2 * acc > a.trials;
    if (a.trials > 1) std::cout << "accept_rate " << static_cast<double>(acc) / a.trials << "\n";
    std::cout << (accept ? "accept" : "reject") << "\n";
    return accept ? kAccept : kReject;
}

// ---- tolerant ------------------------------------------------------------

struct TolerantArgs {
    ClassArgs cls;
    double eps1 = 0.01, eps2 = 0.5, kappa = 2.0;
    std::string dist;
    std::uint64_t seed = 1;
    bool verbose = false;
};

int cmd_tolerant(const TolerantArgs& a) {
    const Histogram d = histogram_from_json(read_json_file(a.dist));
    const ClassSpec spec = make_class_spec(parse_class(a.cls.tag, a.cls.t, a.cls.d));
    TolerantOptions opt;
    opt.kappa = a.kappa;
    const auto cfg = make_tolerant_config(a.eps1, a.eps2, opt);
    if (!cfg.precondition())
        std::cerr << "warning: eps2/eps1 = " << a.eps2 / a.eps1 << " is below C = " << cfg.ratio_required
                  << "; the guarantee does not apply\n";
    HistogramSource src(d, a.seed);
    const auto o = tolerant_test(src, d.n(), a.eps1, a.eps2, spec, a.seed, opt);
    if (a.verbose)
        std::cout << json{{"verdict", verdict_name(o.verdict)},
                          {"reason", o.reason},
                          {"eps", o.config.eps},
                          {"theta", o.config.theta},
                          {"tau", o.config.tau_t},
                          {"delta", o.delta},
                          {"delta_hat", o.delta_hat},
                          {"samples_used", o.samples_used}}
                         .dump()
                  << "\n";
    std::cout << verdict_name(o.verdict) << "\n";
    return o.accepted() ? kAccept : kReject;
}

// ---- project -------------------------------------------------------------

struct ProjectArgs {
    ClassArgs cls;
    std::string dist;
    double eps = 0.1;
};

int cmd_project(const ProjectArgs& a) {
    const Histogram d = histogram_from_json(read_json_file(a.dist));
    const ShapeClass c = parse_class(a.cls.tag, a.cls.t, a.cls.d);
    const double e = std::clamp(a.eps, 1e-6, 0.99);
    std::optional<Histogram> cert;
    double delta = 0.0;
    switch (c.kind) {
        case Kind::Monotone: {
            auto p = project_monotone(d, c.increasing);
            delta = dist_to_monotone(d, c.increasing);
            cert = std::move(p.q);
            break;
        }
        case Kind::MHR:
        case Kind::LogConcave: {
            // The checkers take a Kolmogorov witness; d itself is exact.
            const auto r = c.kind == Kind::MHR ? mhr_check(d, d, e) : logconcave_check(d, d, e);
            std::cout << (r.yes ? "yes" : "no") << "\n";
            if (r.yes) {
                std::cout << r.certificate_distance << "\n";
                std::cout << histogram_json(*r.certificate).dump() << "\n";
            }
            return kAccept;
        }
        case Kind::PBD: {
            const auto r = pbd_distance(d, e, {1, d.n()});
            delta = r.tau;
            cert = pbd_pmf(r.best, d.n() - 1);
            break;
        }
        case Kind::Binomial: {
            const auto r = binomial_distance(d, e, {1, d.n()});
            delta = r.tau;
            cert = binomial_pmf(d.n() - 1, r.q);
            break;
        }
        default: delta = class_distance_estimate(d, c, e);
    }
    std::cout << delta << "\n";
    if (cert) std::cout << histogram_json(*cert).dump() << "\n";
    return kAccept;
}

// ---- decompose -----------------------------------------------------------

struct DecomposeArgs {
    ClassArgs cls;
    std::string dist;
    double gamma = 0.1;
};

int cmd_decompose(const DecomposeArgs& a) {
    const Histogram d = histogram_from_json(read_json_file(a.dist));
    const ShapeClass c = parse_class(a.cls.tag, a.cls.t, a.cls.d);
    const auto cert = decompose_class(d, c, a.gamma);
    json pieces = json::array();
    for (std::size_t i = 0; i < cert.size(); ++i)
        pieces.push_back({{"lo", cert.partition.intervals[i].lo},
                          {"hi", cert.partition.intervals[i].hi},
                          {"kind", cert.kinds[i] == PieceKind::Flat ? "flat" : "light"}});
    std::cout << json{{"class", c.name()},
                      {"gamma", cert.gamma},
                      {"L", cert.L},
                      {"pieces", pieces},
                      {"verified", verify_decomposition(d, cert, a.gamma, cert.L)}}
                     .dump(2)
              << "\n";
    return kAccept;
}

// ---- instance ------------------------------------------------------------

struct InstanceArgs {
    std::string family;
    std::size_t n = 0;
    std::size_t k = 3;
    double eps = 0.5;
    double phi = 0.001;
    std::uint64_t seed = 1;
    std::string dist;
    std::string out;
};

int cmd_instance(const InstanceArgs& a) {
    Histogram h;
    if (a.family == "paninski") {
        h = paninski_instance(a.n, a.eps, a.seed);
    } else if (a.family == "ksiirv") {
        h = ksiirv_hard_instance(a.n, a.k);
    } else if (a.family == "binomial-embedding") {
        const Histogram inner = a.dist.empty() ? Histogram::uniform(a.n) : histogram_from_json(read_json_file(a.dist));
        h = binomial_embedding_pmf(inner, a.phi);
    } else {
        throw UsageError("unknown family: " + a.family);
    }
    const std::string text = histogram_json(h).dump();
    if (a.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot write " + a.out);
        f << text << "\n";
    }
    return kAccept;
}

// ---- bench ---------------------------------------------------------------

struct Fixture {
    std::string label;
    bool in_class = true;
    json spec;
};

struct BenchArgs {
    std::string plan;
    std::string out;
    bool no_wall = false;
};

// ExperimentPlan:
// {"class": tag, "t": int, "d": int, "mode": "splittable"|"effective",
//  "n": [..], "eps": [..], "trials": int, "seed": int, "boost": int,
//  "generators": [{"gen": name, "truth": "in"|"far", ...params}], "output": path}
int cmd_bench(const BenchArgs& a) {
    const json plan = read_json_file(a.plan);
    const ShapeClass c = parse_class(plan.at("class").get<std::string>(), get_or<int>(plan, "t", 2),
                                     get_or<int>(plan, "d", 1));
    const ClassSpec spec = make_class_spec(c);
    const std::string mode = get_or<std::string>(plan, "mode", "splittable");
    if (mode != "splittable" && mode != "effective") throw UsageError("plan: unknown mode " + mode);
    const auto ns = plan.at("n").get<std::vector<std::size_t>>();
    const auto epss = plan.at("eps").get<std::vector<double>>();
    const int trials = plan.at("trials").get<int>();
    const auto master = get_or<std::uint64_t>(plan, "seed", 1);
    const int boost = get_or<int>(plan, "boost", 1);
    if (trials < 0 || boost < 1) throw UsageError("plan: trials must be >= 0 and boost >= 1");
    std::vector<Fixture> fixtures;
    for (const auto& g : plan.at("generators")) {
        Fixture f;
        f.spec = g;
        f.label = g.at("gen").get<std::string>();
        const std::string truth = g.at("truth").get<std::string>();
        if (truth != "in" && truth != "far") throw UsageError("plan: truth must be \"in\" or \"far\"");
        f.in_class = truth == "in";
        fixtures.push_back(f);
    }
    std::string out_path = a.out.empty() ? get_or<std::string>(plan, "output", "") : a.out;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    os << "trial_id,seed,class,n,eps,generator,truth,outcome,samples_used,wall_ms\n";

    std::uint64_t trial_id = 0;
    for (std::size_t n : ns)
        for (double eps : epss)
            for (const auto& f : fixtures) {
                const Histogram d = histogram_from_json(f.spec, n);
                if (f.in_class && !spec.member(d))
                    throw UsageError("plan: fixture " + f.label + " is labelled in-class but is not a member");
                if (!f.in_class) {
                    const double lb = certified_distance_lower_bound(d, c);
                    if (!(lb > eps))
                        throw UsageError("plan: fixture " + f.label + " is labelled far but its certified distance " +
                                         std::to_string(lb) + " does not exceed eps");
                }
                std::vector<TrialResult> res(static_cast<std::size_t>(trials));
                const std::uint64_t base = trial_id;
                parallel_for(res.size(), [&](std::size_t i) {
                    res[i] = run_trial(d, spec, eps, mix_seed(master, base + i), boost, mode == "effective");
                });
                double errors = 0.0, samples = 0.0, wall = 0.0;
                for (std::size_t i = 0; i < res.size(); ++i) {
                    const auto& r = res[i];
                    const bool wrong = (r.verdict == Verdict::Accept) != f.in_class;
                    errors += wrong;
                    samples += static_cast<double>(r.samples);
                    wall += r.wall_ms;
                    os << base + i << "," << mix_seed(master, base + i) << "," << c.name() << "," << n << "," << eps
                       << "," << f.label << "," << (f.in_class ? "in" : "far") << "," << verdict_name(r.verdict) << ","
                       << r.samples << "," << (a.no_wall ? 0.0 : r.wall_ms) << "\n";
                }
                trial_id += res.size();
                if (trials > 0) {
                    const double T = static_cast<double>(trials);
                    os << "summary,," << c.name() << "," << n << "," << eps << "," << f.label << ","
                       << (f.in_class ? "in" : "far") << ",error_rate=" << errors / T << "," << samples / T << ","
                       << (a.no_wall ? 0.0 : wall / T) << "\n";
                }
            }
    return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape-restricted distribution testing", "shapetest"};
    app.require_subcommand(1);

    TestArgs ta;
    auto* test = app.add_subcommand("test", "test membership of a distribution in a class");
    add_class_options(test, ta.cls);
    test->add_option("--n", ta.n, "domain size (checked against the distribution)");
    test->add_option("--eps", ta.eps, "distance parameter")->required();
    test->add_option("--dist", ta.dist, "distribution JSON file")->required();
    test->add_option("--seed", ta.seed, "master seed");
    test->add_option("--trials", ta.trials, "independent trials");
    test->add_option("--boost", ta.boost, "runs per trial, majority verdict");
    test->add_flag("--effective-support", ta.effective, "use the effective-support front end");
    test->add_flag("--verbose", ta.verbose, "JSON diagnostics per trial");

    TolerantArgs tl;
    auto* tol = app.add_subcommand("tolerant", "tolerant membership test");
    add_class_options(tol, tl.cls);
    tol->add_option("--eps1", tl.eps1, "closeness parameter")->required();
    tol->add_option("--eps2", tl.eps2, "farness parameter")->required();
    tol->add_option("--kappa", tl.kappa, "kappa > 1");
    tol->add_option("--dist", tl.dist, "distribution JSON file")->required();
    tol->add_option("--seed", tl.seed, "seed");
    tol->add_flag("--verbose", tl.verbose, "JSON diagnostics");

    ProjectArgs pa;
    auto* proj = app.add_subcommand("project", "distance of an explicit distribution to a class");
    add_class_options(proj, pa.cls);
    proj->add_option("--dist", pa.dist, "distribution JSON file")->required();
    proj->add_option("--eps", pa.eps, "oracle accuracy where approximate");

    DecomposeArgs da;
    auto* dec = app.add_subcommand("decompose", "structural decomposition certificate");
    add_class_options(dec, da.cls);
    dec->add_option("--dist", da.dist, "distribution JSON file")->required();
    dec->add_option("--gamma", da.gamma, "flatness parameter");

    InstanceArgs ia;
    auto* inst = app.add_subcommand("instance", "emit a hard instance as JSON");
    inst->add_option("--family", ia.family, "paninski | ksiirv | binomial-embedding")->required();
    inst->add_option("--n", ia.n, "domain size / number of summands");
    inst->add_option("--k", ia.k, "support size of each summand (ksiirv)");
    inst->add_option("--eps", ia.eps, "perturbation (paninski)");
    inst->add_option("--phi", ia.phi, "uniformity tolerance (binomial-embedding)");
    inst->add_option("--seed", ia.seed, "sign seed (paninski)");
    inst->add_option("--dist", ia.dist, "inner distribution (binomial-embedding; default uniform)");
    inst->add_option("--out", ia.out, "output file (default stdout)");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "run an experiment plan and emit CSV");
    bench->add_option("--plan", ba.plan, "ExperimentPlan JSON file")->required();
    bench->add_option("--out", ba.out, "CSV path (default: plan output or stdout)");
    bench->add_flag("--no-wall-time", ba.no_wall, "write wall_ms as 0 for byte-identical reruns");

    if (argc <= 1) {
        std::cerr << app.help();
        return kUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kAccept;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return kUsage;
    }
    try {
        if (*test) return cmd_test(ta);
        if (*tol) return cmd_tolerant(tl);
        if (*proj) return cmd_project(pa);
        if (*dec) return cmd_decompose(da);
        if (*inst) return cmd_instance(ia);
        if (*bench) return cmd_bench(ba);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
