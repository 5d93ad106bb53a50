#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hypcap/errors.hpp"
#include "hypcap/experiments.hpp"
#include "hypcap/io.hpp"
#include "hypcap/optimize.hpp"

namespace hypcap::cli {

namespace {

struct Common {
    int n = 128;
    std::vector<double> alpha;
    double delta = 0.02;
    std::string mode = "direct";
    int jobs = 1;
    std::string out;
    CLI::Option* deltaOption = nullptr;

    SolverConfig solver() const {
        if (n < 4 || n % 2) throw ConfigError("--n must be an even integer >= 4");
        if (jobs < 1) throw ConfigError("--jobs must be positive");
        SolverConfig cfg;
        cfg.n = n;
        if (!alpha.empty()) {
            if (alpha.size() != 2) throw ConfigError("--alpha expects re,im");
            cfg.alpha = cplx(alpha[0], alpha[1]);
        }
        if (mode == "direct")
            cfg.mode = SolveMode::Direct;
        else if (mode == "iterative")
            cfg.mode = SolveMode::Iterative;
        else
            throw ConfigError("--mode must be direct or iterative");
        return cfg;
    }

    bool deltaGiven() const { return deltaOption && deltaOption->count() > 0; }
};

void addCommon(CLI::App* sub, Common& c) {
    sub->add_option("--n", c.n, "nodes per boundary circle (even)")->capture_default_str();
    sub->add_option("--alpha", c.alpha, "auxiliary point re,im (default: automatic)")->delimiter(',')->expected(2);
    c.deltaOption = sub->add_option("--delta", c.delta, "minimal hyperbolic separation")->capture_default_str();
    sub->add_option("--mode", c.mode, "direct | iterative")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
    sub->add_option("--out", c.out, "output file (default: standard output)");
}

void emit(const std::string& text, const Common& c, const SolverConfig& cfg, double delta, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    writeText(text, c.out);
    writeText(metadata(cfg, delta).dump(2) + "\n", c.out + ".meta.json");
}

Constellation loadWithDelta(const std::string& path, const Common& c) {
    Constellation con = loadConstellation(path);
    if (c.deltaGiven()) {
        con.delta = c.delta;
        const auto rep = validate(con);
        if (!rep.feasible()) throw InfeasibleError(path + ": " + rep.describe());
    }
    return con;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conformal capacity of hyperbolic disk constellations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);
    Common common;

    std::string input;
    auto* cap = app.add_subcommand("cap", "capacity of a constellation file (JSON)");
    cap->add_option("--input", input, "constellation JSON")->required();

    int m = 4;
    std::vector<double> ds{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    auto* sc = app.add_subcommand("sweep-collinear", "collinear family as a function of the gap d (CSV)");
    sc->add_option("--m", m, "number of disks (2, 3, 4)")->capture_default_str();
    sc->add_option("--d", ds, "gaps")->delimiter(',');

    double r = 0.3, circle = 0.5;
    int samples = 41;
    auto* stc = app.add_subcommand("sweep-threecircle", "three equal disks on a circle as a function of d (CSV)");
    stc->add_option("--r", r, "hyperbolic radius")->capture_default_str();
    stc->add_option("--circle", circle, "Euclidean radius of the center circle")->capture_default_str();
    stc->add_option("--samples", samples, "number of d values")->capture_default_str();

    int rollingCase = 1;
    std::vector<double> rollingRadii;
    int rollingSamples = 61;
    auto* sr = app.add_subcommand("sweep-rolling", "disk rolling over three fixed disks (CSV)");
    sr->add_option("--case", rollingCase, "radii case 1..4")->capture_default_str();
    sr->add_option("--radii", rollingRadii, "r1,r2,r3,r4 (overrides --case)")->delimiter(',')->expected(4);
    sr->add_option("--samples", rollingSamples, "number of tau values")->capture_default_str();

    int freeIndex = 0;
    std::vector<double> xRange{-0.6, 0.6}, yRange{-0.6, 0.6};
    int resolution = 41;
    auto* grid = app.add_subcommand("grid", "capacity over the position of one free disk (CSV)");
    grid->add_option("--input", input, "constellation JSON")->required();
    grid->add_option("--free", freeIndex, "index of the free disk")->capture_default_str();
    grid->add_option("--x-range", xRange, "xmin,xmax")->delimiter(',')->expected(2);
    grid->add_option("--y-range", yRange, "ymin,ymax")->delimiter(',')->expected(2);
    grid->add_option("--resolution", resolution, "samples per axis")->capture_default_str();

    std::vector<std::string> mobility;
    double mobilityCircle = 0.5;
    OptimizerConfig ocfg;
    std::string strategy = "random";
    std::string trajectory;
    auto* opt = app.add_subcommand("optimize", "minimize the capacity over disk positions (JSON)");
    opt->add_option("--input", input, "constellation JSON (starting configuration)")->required();
    opt->add_option("--mobility", mobility, "per disk: fixed, free2D, onCircle, onDiameter")->delimiter(',')->required();
    opt->add_option("--circle", mobilityCircle, "center circle radius for onCircle disks")->capture_default_str();
    opt->add_option("--seeds", ocfg.seeds, "number of starts")->capture_default_str();
    opt->add_option("--rng-seed", ocfg.rngSeed, "seed for random starts")->capture_default_str();
    opt->add_option("--strategy", strategy, "random | permute")->capture_default_str();
    opt->add_option("--tolerance", ocfg.tolerance, "first-order and step tolerance")->capture_default_str();
    opt->add_option("--fd-step", ocfg.fdStep, "finite-difference step")->capture_default_str();
    opt->add_option("--max-iterations", ocfg.maxIterations, "iteration limit per start")->capture_default_str();
    opt->add_option("--trajectory", trajectory, "CSV file for the iterates of the best start");

    std::string caseName = "I";
    double rMin = 0.02, rMax = 2.0;
    int rSamples = 100;
    auto* bound = app.add_subcommand("bound", "capacity against the hyperbolic-area lower bound (CSV)");
    bound->add_option("--m", m, "number of disks (2, 3, 4)")->capture_default_str();
    bound->add_option("--case", caseName, "I | II | IIEqualDistance (m = 4 only)")->capture_default_str();
    bound->add_option("--r-min", rMin)->capture_default_str();
    bound->add_option("--r-max", rMax)->capture_default_str();
    bound->add_option("--samples", rSamples)->capture_default_str();

    std::string layout = "diameter";
    std::vector<double> permRadii{0.5, 0.4, 0.25, 0.2};
    auto* perm = app.add_subcommand("perm", "capacities of the 12 orderings of four contiguous disks (CSV)");
    perm->add_option("--layout", layout, "diameter | circle")->capture_default_str();
    perm->add_option("--radii", permRadii, "A,B,C,D strictly decreasing")->delimiter(',')->expected(4);

    std::vector<int> nList{16, 32, 64, 128};
    double familyD = 0.1;
    auto* conv = app.add_subcommand("convergence", "error against n (CSV); default: four-disk collinear family");
    conv->add_option("--input", input, "constellation JSON (default: collinear family)");
    conv->add_option("--family-d", familyD, "gap of the default family")->capture_default_str();
    conv->add_option("--n-list", nList, "increasing list of n")->delimiter(',');

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) addCommon(sub, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const SolverConfig cfg = common.solver();
        const double delta = common.delta;
        if (cap->parsed()) {
            const Constellation c = loadWithDelta(input, common);
            emit(toJson(capacity(c, cfg)).dump(2) + "\n", common, cfg, c.delta, out);
        } else if (sc->parsed()) {
            emit(formatTable(sweepCollinear(m, ds, cfg, common.jobs)), common, cfg, 0.0, out);
        } else if (stc->parsed()) {
            emit(formatTable(sweepThreeCircle(r, circle, delta, samples, cfg, common.jobs)), common, cfg, delta, out);
        } else if (sr->parsed()) {
            std::array<double, 4> radii = rollingCaseRadii(rollingCase);
            if (!rollingRadii.empty()) std::copy(rollingRadii.begin(), rollingRadii.end(), radii.begin());
            emit(formatTable(sweepRolling(radii, delta, rollingSamples, cfg, common.jobs)), common, cfg, delta, out);
        } else if (grid->parsed()) {
            OptimizationProblem p;
            p.start = loadWithDelta(input, common);
            p.delta = p.start.delta;
            p.solver = cfg;
            if (freeIndex < 0 || freeIndex >= p.start.size()) throw ConfigError("--free is out of range");
            p.mobility.assign(p.start.size(), Mobility::fixed());
            p.mobility[freeIndex] = Mobility::free2D();
            const auto g = levelGrid(p, {xRange[0], xRange[1]}, {yRange[0], yRange[1]}, resolution, common.jobs);
            emit(formatTable(gridTable(g)), common, cfg, p.delta, out);
        } else if (opt->parsed()) {
            OptimizationProblem p;
            p.start = loadWithDelta(input, common);
            p.delta = p.start.delta;
            p.solver = cfg;
            if (static_cast<int>(mobility.size()) != p.start.size())
                throw ConfigError("--mobility needs one entry per disk");
            for (const auto& s : mobility) {
                const auto kind = parseMobilityKind(s);
                p.mobility.push_back(kind == MobilityKind::OnCircle ? Mobility::onCircle(mobilityCircle)
                                                                    : Mobility{kind, 0.0});
            }
            StartStrategy st;
            if (strategy == "random")
                st = StartStrategy::Random;
            else if (strategy == "permute")
                st = StartStrategy::PermuteMobile;
            else
                throw ConfigError("--strategy must be random or permute");
            const auto results = multistart(p, ocfg, ocfg.seeds, st, common.jobs);
            nlohmann::json j = {{"best", toJson(results.front())}, {"levels", capacityLevels(results)}};
            j["results"] = nlohmann::json::array();
            for (const auto& res : results) j["results"].push_back(toJson(res));
            if (!trajectory.empty()) writeTable(trajectoryTable(results.front()), trajectory);
            emit(j.dump(2) + "\n", common, cfg, p.delta, out);
        } else if (bound->parsed()) {
            const ERCase cs = parseERCase(caseName);
            emit(formatTable(boundTable(m, cs, linspace(rMin, rMax, rSamples), delta, cfg, common.jobs)), common, cfg,
                 delta, out);
        } else if (perm->parsed()) {
            Layout lay;
            if (layout == "diameter")
                lay = Layout::Diameter;
            else if (layout == "circle")
                lay = Layout::Circle;
            else
                throw ConfigError("--layout must be diameter or circle");
            emit(formatTable(permTable(permRadii, lay, delta, cfg, common.jobs)), common, cfg, delta, out);
        } else if (conv->parsed()) {
            const Constellation c = input.empty() ? collinearFamily4(familyD) : loadWithDelta(input, common);
            emit(formatTable(convergenceTable(convergenceStudy(c, cfg.alpha, nList, cfg.mode))), common, cfg, c.delta,
                 out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace hypcap::cli
