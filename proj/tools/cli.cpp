#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cansys/cansys.hpp"

namespace cansys::cli {

namespace {

using json = nlohmann::ordered_json;

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(c);
        }
    }
    return out;
}

double to_number(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InputError("cannot read " + what + " from '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) {
        throw InputError("cannot read " + what + " from '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (v == -std::numeric_limits<double>::infinity()) {
        return "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read system file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Curves and the data that produce them.
struct Workload {
    HamiltonianSpec spec;
    std::optional<HamburgerSpec> companion;
    std::optional<Modulus> modulus;
};

const std::set<std::string> kCurveTags = {"lower", "maxmod", "upper:opt", "upper:recipe"};

std::set<std::string> parse_which(const std::string& list) {
    std::set<std::string> out;
    std::stringstream ss(strip(list));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        if (kCurveTags.count(item) == 0) {
            throw InputError("unknown curve '" + item + "' (expected lower, maxmod, upper:recipe, upper:opt)");
        }
        out.insert(item);
    }
    if (out.empty()) {
        throw InputError("no curves requested");
    }
    return out;
}

std::optional<HamburgerSpec> hamburger_view(const Workload& w) {
    if (w.companion) {
        return w.companion;
    }
    if (const auto* h = std::get_if<HamburgerSpec>(&w.spec)) {
        return *h;
    }
    if (const auto* d = std::get_if<DiagonalSpec>(&w.spec)) {
        return to_hamburger(*d);
    }
    return std::nullopt;
}

using CurveSet = std::map<std::string, std::vector<double>>;

CurveSet compute_curves(const Workload& w, const std::vector<double>& grid, const std::set<std::string>& which,
                        double tol) {
    CurveSet out;
    if (which.count("lower") != 0) {
        const auto h = hamburger_view(w);
        if (!h) {
            throw InputError("curve 'lower' needs a Hamburger or diagonal spec, or a family with a Hamburger companion");
        }
        const LogSeries series = f_series(normalize_first_angle(*h), h->size());
        auto& v = out["lower"];
        for (double r : grid) {
            v.push_back(lower_bound_at(series, r).value);
        }
    }
    if (which.count("maxmod") != 0) {
        MaxModulusOptions mo;
        mo.monodromy.tol = tol;
        auto& v = out["maxmod"];
        for (double r : grid) {
            v.push_back(max_modulus(w.spec, r, mo));
        }
    }
    if (which.count("upper:recipe") != 0) {
        const auto* p = std::get_if<AngleProfile>(&w.spec);
        if (p == nullptr) {
            throw InputError("curve 'upper:recipe' needs an angle profile");
        }
        const Modulus mod = w.modulus ? *w.modulus : profile_modulus(*p);
        auto& v = out["upper:recipe"];
        for (double r : grid) {
            v.push_back(thm14_recipe(*p, r, mod).value.total_at(r));
        }
    }
    if (which.count("upper:opt") != 0) {
        OptimizeOptions oo;
        oo.modulus = w.modulus;
        auto& v = out["upper:opt"];
        for (double r : grid) {
            v.push_back(optimize_bound(w.spec, r, Strategy::CoordinateDescent, oo).value.total_at(r));
        }
    }
    for (const auto& [tag, values] : out) {
        for (double v : values) {
            if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
                throw NumericalError("curve '" + tag + "' produced a non-finite value");
            }
        }
    }
    return out;
}

std::string curves_csv(const std::vector<double>& grid, const CurveSet& curves) {
    std::string csv = "r,tag,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (const auto& [tag, values] : curves) {
            csv += format_double(grid[i]) + "," + tag + "," + format_double(values[i]) + "\n";
        }
    }
    return csv;
}

std::optional<double> curve_slope(const std::vector<double>& grid, const CurveSet& curves, const std::string& tag) {
    const auto it = curves.find(tag);
    if (it == curves.end()) {
        return std::nullopt;
    }
    GrowthCurve c{tag, grid, it->second};
    try {
        return fit_order(c).slope;
    } catch (const InputError&) {
        return std::nullopt;
    }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Output goes to --out DIR/name when a directory is given, else to stdout.
void emit(const std::string& out_dir, const std::string& name, const std::string& text, std::ostream& out) {
    if (out_dir.empty()) {
        out << text;
        return;
    }
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot write '" + path + "'");
    }
    f << text;
}

struct GridArgs {
    double r_min = 1e2;
    double r_max = 1e6;
    int points = 16;
};

struct FamilyArgs {
    double gamma = 1.0;
    double beta = 1.0;
    double kappa = 1.0;
    double rho = 2.0 / 3.0;
    std::string g_expr;
    std::string m_expr = "r^1.5";
    std::size_t N = 5000;
    double shift = 0.0;
    double p = 0.8;
    int depth = 8;
    std::size_t count = 200;
    double decay = 2.0;
    double alpha = 0.5;
};

struct Family {
    Workload work;
    json params;
    std::optional<double> predicted_lower;
    std::optional<double> predicted_upper;
    std::string default_which;
    GridArgs default_grid;
};

Family build_family(const std::string& name, const FamilyArgs& a) {
    Family f;
    if (name == "chirp") {
        const AngleProfile base = chirp_profile(a.gamma, a.beta);
        f.work.spec = a.kappa == 1.0 ? base : reparameterize(base, a.kappa);
        f.params = {{"gamma", a.gamma}, {"beta", a.beta}, {"kappa", a.kappa}};
        f.predicted_upper = a.beta / (a.beta + a.gamma);
        f.default_which = "upper:recipe";
        f.default_grid = {1e3, 1e8, 11};
    } else if (name == "polygon") {
        if (a.count < 2 || !(a.decay > 0.0)) {
            throw InputError("polygon: count must be at least 2 and decay positive");
        }
        PolygonParams pp;
        for (std::size_t j = 1; j <= a.count; ++j) {
            pp.l.push_back(std::pow(static_cast<double>(j), -a.decay));
            pp.m.push_back(0.5 * pp.l.back());
        }
        pp.pi = Modulus::power(a.alpha);
        const PolygonResult res = polygon_profile(pp);
        f.work.spec = res.profile;
        f.work.companion = res.hamburger;
        f.work.modulus = pp.pi;
        f.params = {{"count", a.count}, {"decay", a.decay}, {"alpha", a.alpha}};
        f.predicted_upper = 1.0 / (1.0 + a.alpha);
        f.default_which = "lower,maxmod,upper:recipe";
    } else if (name == "sharpness") {
        SharpnessParams sp;
        sp.g = a.g_expr.empty() ? RegVarFn::power(a.rho) : parse_regvar(a.g_expr);
        sp.m = parse_regvar(a.m_expr);
        sp.N = a.N;
        sp.shift = a.shift;
        const SharpnessResult res = sharpness_family(sp);
        f.work.spec = res.polygon.profile;
        f.work.companion = res.polygon.hamburger;
        f.work.modulus = res.pi;
        f.params = {{"g_index", sp.g.rho}, {"m", a.m_expr}, {"N", a.N}, {"shift", a.shift}, {"rescale", res.rescale}};
        f.predicted_upper = res.upper.rho;
        f.predicted_lower = res.lower.rho;
        f.default_which = "lower,maxmod,upper:recipe";
    } else if (name == "cantor") {
        const CantorResult res = cantor_diagonal(a.p, a.depth);
        f.work.spec = res.diagonal;
        f.params = {{"p", a.p}, {"depth", a.depth}, {"ratio", res.ratio}};
        f.default_which = "lower,maxmod,upper:opt";
    } else {
        throw InputError("unknown family '" + name + "' (expected chirp, polygon, sharpness, cantor)");
    }
    return f;
}

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex full("^([+-]?" + num + ")([+-])(" + num + ")?i$");
    static const std::regex real_only("^([+-]?" + num + ")$");
    static const std::regex imag_only("^([+-]?)(" + num + ")?i$");
    const std::string s = strip(text);
    std::smatch m;
    if (std::regex_match(s, m, full)) {
        const double im = m[3].matched ? to_number(m[3].str(), "imaginary part") : 1.0;
        return {to_number(m[1].str(), "real part"), m[2].str() == "-" ? -im : im};
    }
    if (std::regex_match(s, m, real_only)) {
        return {to_number(m[1].str(), "real part"), 0.0};
    }
    if (std::regex_match(s, m, imag_only)) {
        const double im = m[2].matched ? to_number(m[2].str(), "imaginary part") : 1.0;
        return {0.0, m[1].str() == "-" ? -im : im};
    }
    throw InputError("complex literal '" + text + "' is not of the form a+bi");
}

RegVarFn parse_regvar(const std::string& text) {
    static const std::regex factor(R"(^(r|log\(r\)|loglog\(r\)|log\(log\(r\)\))(?:\^([+-]?[0-9.eE+-]+))?$)");
    const std::string s = strip(text);
    if (s.empty()) {
        throw InputError("empty function expression");
    }
    double c = 1.0;
    double rho = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '*')) {
        std::smatch m;
        if (std::regex_match(item, m, factor)) {
            const double e = m[2].matched ? to_number(m[2].str(), "exponent") : 1.0;
            const std::string base = m[1].str();
            if (base == "r") {
                rho += e;
            } else if (base == "log(r)") {
                k1 += e;
            } else {
                k2 += e;
            }
        } else {
            c *= to_number(item, "factor");
        }
    }
    RegVarFn f = RegVarFn::power_log(rho, k1, k2, c);
    f.validate();
    return f;
}

std::vector<double> radius_grid(double r_min, double r_max, int count) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
        throw InputError("radius grid: need 0 < rmin < rmax");
    }
    if (count < 2) {
        throw InputError("radius grid: need at least 2 points");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double ratio = std::log(r_max / r_min);
    for (int k = 0; k < count; ++k) {
        out[static_cast<std::size_t>(k)] = r_min * std::exp(ratio * k / (count - 1));
    }
    out.front() = r_min;
    out.back() = r_max;
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Growth of canonical systems: monodromy, bounds, zeros"};
    app.require_subcommand(1);

    std::string system_file;
    std::string z_text = "0+0i";
    GridArgs grid;
    bool grid_given = false;
    std::string which;
    std::string emit_list = "spec,curves,report";
    std::string out_dir;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    double d = 0.5;
    double C = 1.0;
    double R = 100.0;
    std::string keep_list;
    int cut_points = 256;
    std::string family;
    FamilyArgs fa;

    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--rmin", grid.r_min, "smallest radius")->each([&](const std::string&) { grid_given = true; });
        sub->add_option("--rmax", grid.r_max, "largest radius")->each([&](const std::string&) { grid_given = true; });
        sub->add_option("--points", grid.points, "radii in the geometric grid")
            ->each([&](const std::string&) { grid_given = true; });
    };

    auto* mono = app.add_subcommand("monodromy", "scaled monodromy matrix at one z");
    mono->add_option("--system", system_file, "spec JSON file")->required();
    mono->add_option("--z", z_text, "complex literal a+bi");
    mono->add_option("--tol", tol, "refinement tolerance");

    auto* curves = app.add_subcommand("curves", "growth curves as CSV");
    curves->add_option("--system", system_file, "spec JSON file")->required();
    add_grid(curves);
    curves->add_option("--which", which, "comma list of lower, maxmod, upper:recipe, upper:opt")
        ->default_str("maxmod");
    curves->add_option("--out", out_dir, "output directory");
    curves->add_option("--tol", tol, "refinement tolerance");

    auto* example = app.add_subcommand("example", "generate a named family");
    example->add_option("family", family, "chirp, polygon, sharpness or cantor")->required();
    example->add_option("--gamma", fa.gamma);
    example->add_option("--beta", fa.beta);
    example->add_option("--kappa", fa.kappa);
    example->add_option("--rho", fa.rho, "index of g for the sharpness family");
    example->add_option("--g", fa.g_expr, "g as an expression, overrides --rho");
    example->add_option("--m", fa.m_expr, "m as an expression");
    example->add_option("--N", fa.N, "segments in the truncation");
    example->add_option("--shift", fa.shift);
    example->add_option("--p", fa.p, "Cantor exponent");
    example->add_option("--depth", fa.depth, "Cantor depth");
    example->add_option("--count", fa.count, "polygon plateaus");
    example->add_option("--decay", fa.decay, "polygon lengths j^-decay");
    example->add_option("--alpha", fa.alpha, "polygon modulus exponent");
    example->add_option("--emit", emit_list, "comma list of spec, curves, report");
    example->add_option("--which", which, "curves to compute");
    example->add_option("--out", out_dir, "output directory");
    example->add_option("--tol", tol, "refinement tolerance");
    add_grid(example);

    auto* bound = app.add_subcommand("bound-check", "Romanov growth hypotheses along a bound family");
    bound->add_option("--system", system_file, "spec JSON file")->required();
    bound->add_option("--d", d, "order exponent in (0, 1)")->required();
    bound->add_option("--C", C, "constant in the hypotheses");
    add_grid(bound);

    auto* cutc = app.add_subcommand("cut-check", "zero counts before and after cutting segments");
    cutc->add_option("--system", system_file, "Hamburger spec JSON file")->required();
    cutc->add_option("--keep", keep_list, "comma list of 0-based segments to keep; random when absent");
    cutc->add_option("--R", R, "radius");
    cutc->add_option("--points", cut_points, "uniform grid points");
    cutc->add_option("--seed", seed, "seed for the random cut");

    auto* kdb = app.add_subcommand("kdb", "zero density n(R)/(2R)");
    kdb->add_option("--system", system_file, "spec JSON file")->required();
    kdb->add_option("--R", R, "radius");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const auto load = [&]() { return parse_spec(read_file(system_file)); };

    if (mono->parsed()) {
        return guarded(err, [&] {
            const HamiltonianSpec spec = load();
            const cplx z = parse_complex(z_text);
            MonodromyOptions mo;
            mo.tol = tol;
            const MonodromyResult res = monodromy_at(spec, z, mo);
            json j;
            j["W_unit"] = json::array({json::array({complex_json(res.W.unit.m11), complex_json(res.W.unit.m12)}),
                                       json::array({complex_json(res.W.unit.m21), complex_json(res.W.unit.m22)})});
            j["logScale"] = res.W.log_scale;
            j["logNorm"] = res.log_norm;
            j["det_check"] = std::abs(res.log_det);
            j["cells"] = res.cells;
            out << j.dump(2) << "\n";
        });
    }
    if (curves->parsed()) {
        return guarded(err, [&] {
            const Workload w{load(), std::nullopt, std::nullopt};
            const auto g = radius_grid(grid.r_min, grid.r_max, grid.points);
            const auto set = parse_which(which.empty() ? "maxmod" : which);
            emit(out_dir, "curves.csv", curves_csv(g, compute_curves(w, g, set, tol)), out);
        });
    }
    if (example->parsed()) {
        return guarded(err, [&] {
            Family f = build_family(family, fa);
            std::set<std::string> emits;
            std::stringstream ss(strip(emit_list));
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item != "spec" && item != "curves" && item != "report") {
                    throw InputError("unknown --emit item '" + item + "'");
                }
                emits.insert(item);
            }
            if (emits.count("spec") != 0) {
                emit(out_dir, "spec.json", spec_to_json(f.work.spec) + "\n", out);
            }
            if (emits.count("curves") == 0 && emits.count("report") == 0) {
                return;
            }
            const GridArgs ga = grid_given ? grid : f.default_grid;
            const auto g = radius_grid(ga.r_min, ga.r_max, ga.points);
            const CurveSet cs = compute_curves(f.work, g, parse_which(which.empty() ? f.default_which : which), tol);
            if (emits.count("curves") != 0) {
                emit(out_dir, "curves.csv", curves_csv(g, cs), out);
            }
            if (emits.count("report") != 0) {
                std::optional<double> upper = curve_slope(g, cs, "upper:recipe");
                if (!upper) {
                    upper = curve_slope(g, cs, "upper:opt");
                }
                json rep;
                rep["family"] = family;
                rep["params"] = f.params;
                rep["slopes"] = {{"lower", optional_json(curve_slope(g, cs, "lower"))},
                                 {"maxmod", optional_json(curve_slope(g, cs, "maxmod"))},
                                 {"upper", optional_json(upper)}};
                rep["predicted"] = {{"lower", optional_json(f.predicted_lower)},
                                    {"upper", optional_json(f.predicted_upper)}};
                emit(out_dir, "report.json", rep.dump(2) + "\n", out);
            }
        });
    }
    if (bound->parsed()) {
        return guarded(err, [&] {
            const HamiltonianSpec spec = load();
            const auto g = radius_grid(grid.r_min, grid.r_max, grid.points);
            BoundFamily fam;
            if (const auto* p = std::get_if<AngleProfile>(&spec)) {
                const AngleProfile prof = *p;
                const Modulus mod = profile_modulus(prof);
                fam = [prof, mod](double r) { return thm14_recipe(prof, r, mod).data; };
            } else {
                fam = [spec](double r) { return optimize_bound(spec, r, Strategy::CoordinateDescent).data; };
            }
            const RomanovReport rep = romanov_check(spec, d, fam, C, g);
            json j;
            j["d"] = rep.d;
            j["C"] = rep.C;
            j["K"] = rep.K;
            j["holds"] = rep.holds;
            j["all_ok"] = rep.all_ok;
            j["max_required_C"] = json::array();
            for (double v : rep.max_required_C) {
                j["max_required_C"].push_back(number_or_null(v));
            }
            j["rows"] = json::array();
            for (const RomanovRow& row : rep.rows) {
                json jr;
                jr["r"] = row.r;
                jr["lhs"] = row.lhs;
                jr["rhs"] = row.rhs;
                jr["required_C"] = row.required_C;
                jr["ok"] = row.ok;
                j["rows"].push_back(jr);
            }
            out << j.dump(2) << "\n";
        });
    }
    if (cutc->parsed()) {
        return guarded(err, [&] {
            const HamiltonianSpec spec = load();
            const auto* h = std::get_if<HamburgerSpec>(&spec);
            if (h == nullptr) {
                throw InputError("cut-check needs a Hamburger spec");
            }
            std::set<std::size_t> keep;
            if (!keep_list.empty()) {
                std::stringstream ss(strip(keep_list));
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const double v = to_number(item, "segment index");
                    if (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(h->size())) {
                        throw InputError("segment index '" + item + "' out of range");
                    }
                    keep.insert(static_cast<std::size_t>(v));
                }
            } else {
                std::mt19937_64 rng(seed);
                while (keep.empty()) {
                    for (std::size_t j = 0; j < h->size(); ++j) {
                        if ((rng() & 1U) != 0U) {
                            keep.insert(j);
                        }
                    }
                }
            }
            const CutReport rep = cut_zero_inequality(*h, keep, R, static_cast<std::size_t>(std::max(cut_points, 2)));
            json j;
            j["keep"] = keep;
            j["R"] = R;
            j["n_original"] = rep.n_original.back();
            j["n_cut"] = rep.n_cut.back();
            j["max_violation"] = rep.max_violation;
            j["ok"] = rep.ok;
            out << j.dump(2) << "\n";
        });
    }
    if (kdb->parsed()) {
        return guarded(err, [&] {
            const KdbDensity k = kdb_density(load(), R);
            json j;
            j["R"] = R;
            j["count"] = k.count;
            j["empirical"] = k.empirical;
            j["predicted"] = k.predicted;
            out << j.dump(2) << "\n";
        });
    }
    return 2;
}

}  // namespace cansys::cli
