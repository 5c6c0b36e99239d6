// trace_lab: batch front end for profiles, verdicts, Lidskii sums and the
// acceptance suite.  Output goes to --out or stdout only once complete.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tracelab/acceptance.hpp"
#include "tracelab/error.hpp"
#include "tracelab/gallery.hpp"
#include "tracelab/limits.hpp"
#include "tracelab/model_io.hpp"
#include "tracelab/profiles.hpp"

using namespace tracelab;

namespace {

constexpr int kExitConfig = 2, kExitNumeric = 3, kExitModel = 4;

struct Range {
    std::string coord;  // empty when the range had no prefix
    double a = 0.0, b = 0.0;
};

Range parse_range(const std::string& text) {
    Range r;
    std::string body = text;
    if (auto eq = body.find('='); eq != std::string::npos) {
        r.coord = body.substr(0, eq);
        body = body.substr(eq + 1);
    }
    auto dots = body.find("..");
    if (dots == std::string::npos) throw ConfigError("range: expected a..b, got '" + text + "'");
    try {
        std::size_t used = 0;
        r.a = std::stod(body.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("a");
        std::string hi = body.substr(dots + 2);
        r.b = std::stod(hi, &used);
        if (used != hi.size()) throw std::invalid_argument("b");
    } catch (const std::logic_error&) {
        throw ConfigError("range: bad number in '" + text + "'");
    }
    if (!std::isfinite(r.a) || !std::isfinite(r.b) || !(r.b >= r.a)) throw ConfigError("range: '" + text + "' is empty");
    return r;
}

// Linear coordinates get spu points per unit; t and r get spu per decade.
std::vector<DD> range_points(const Range& r, const std::string& coord, int spu) {
    std::vector<DD> pts;
    if (coord == "t" || coord == "r") {
        if (!(r.a > 0.0)) throw ConfigError("range: " + coord + " must be positive");
        long n = static_cast<long>(std::floor(std::log10(r.b / r.a) * spu + 1e-9));
        for (long i = 0; i <= n; ++i) pts.push_back(DD(r.a) * exp(log(DD(10.0)) * (DD(double(i)) / double(spu))));
    } else {
        long n = static_cast<long>(std::floor((r.b - r.a) * spu + 1e-9));
        for (long i = 0; i <= n; ++i) pts.push_back(DD(r.a) + DD(double(i)) / double(spu));
    }
    return pts;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    f << text;
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct ProfileArgs {
    std::string op = "t0", kind = "dixmier", coord = "v", range, out;
    int spu = 16;
};

Profile build_profile(const OperatorModel& m, const std::string& kind) {
    if (kind == "dixmier") return dixmier_profile(m);
    if (kind == "truncated") return truncated_profile(m);
    if (kind == "remainder_mu") return remainder_mu(m);
    if (kind == "remainder_d") return remainder_d(m);
    if (kind == "zeta") return zeta_profile(m);
    if (kind == "beta") return beta_profile(m);
    throw ConfigError("unknown profile kind '" + kind + "'");
}

int cmd_profile(const ProfileArgs& a, bool coord_given) {
    if (a.spu < 1) throw ConfigError("spu must be at least 1");
    Profile p = build_profile(resolve_operator(a.op), a.kind);
    const bool native = a.kind == "zeta" || a.kind == "beta";
    const std::string label = p.coord_label();
    Range r = parse_range(a.range.empty() ? (native ? label + "=1..100" : a.coord + "=0..10") : a.range);
    std::string coord = r.coord.empty() ? (native ? label : a.coord) : r.coord;
    if (native) {
        if (coord != label || (coord_given && a.coord != label)) {
            throw ConfigError(a.kind + " profiles are indexed by " + label + ", not " + (coord != label ? coord : a.coord));
        }
    } else {
        if (coord_given && !r.coord.empty() && r.coord != a.coord) throw ConfigError("range prefix and --coord disagree");
        p = p.reframe(parse_coord(coord));
    }
    std::ostringstream buf;
    write_csv(buf, p, range_points(r, coord, a.spu));
    emit(buf.str(), a.out);
    return 0;
}

struct VerdictArgs {
    std::string op = "t0", cls = "dixmier", thresholds, out;
    int n_min = 1, n_max = 0;
};

int cmd_verdict(const VerdictArgs& a) {
    SweepOptions so;
    if (a.n_min < 1) throw ConfigError("n-min must be at least 1");
    if (a.n_max > 40) throw ConfigError("n-max must be at most 40");
    if (a.n_max > 0) {
        if (a.n_max <= a.n_min) throw ConfigError("n-max must exceed n-min");
        so.n_max = a.n_max;
    }
    so.n_min = a.n_min;
    if (!a.thresholds.empty()) so.thresholds = parse_thresholds(a.thresholds);
    if (a.cls != "dixmier" && a.cls != "dp") throw ConfigError("unknown class '" + a.cls + "' (dixmier or dp)");
    OperatorModel m = resolve_operator(a.op);
    Verdict v = a.cls == "dixmier" ? dixmier_verdict(m, so) : dp_verdict(m, so);
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["operator"] = m.label;
    j["class"] = a.cls;
    nlohmann::ordered_json body = to_json(v);
    for (auto& [k, val] : body.items()) j[k] = val;
    emit(j.dump(2) + "\n", a.out);
    return 0;
}

struct LidskiiArgs {
    std::string op, law = "disc", range = "v=-0.5..10", out, summary;
    std::uint64_t seed = 1;
    std::int64_t n = 10000;
    int spu = 20;
};

int cmd_lidskii(const LidskiiArgs& a) {
    if (a.spu < 1) throw ConfigError("spu must be at least 1");
    Range r = parse_range(a.range);
    std::string coord = r.coord.empty() ? "v" : r.coord;
    SpectrumModel sp;
    std::string source;
    if (!a.op.empty()) {
        OperatorModel m = resolve_operator(a.op);
        if (!m.spectrum) throw ModelError("lidskii: operator '" + m.label + "' has no spectrum");
        sp = *m.spectrum;
        source = m.label;
    } else {
        if (a.n < 0) throw ConfigError("n must be nonnegative");
        sp = random_spectrum(a.seed, a.n, parse_law(a.law));
        source = "random_spectrum(seed=" + std::to_string(a.seed) + ", n=" + std::to_string(a.n) + ", law=" + a.law + ")";
    }
    LidskiiTable tab(sp);
    std::ostringstream buf;
    buf << "v,circle_re,circle_im,rect_re,rect_im,re_only,im_only,d_t,d_re,d_im,circle_rect_ok,re_rect_ok\n";
    long v11 = 0, v12 = 0, rows = 0;
    double slack11 = 0.0, slack12 = 0.0;
    for (DD x : range_points(r, coord, a.spu)) {
        DD v = convert(x, parse_coord(coord), Coord::V);
        LidskiiSums s = tab.at(v);
        double scale = log1p_scale(v).to_double(), inv_t = exp(-v).to_double();
        double d11 = std::hypot((s.circle_re - s.rect_re).to_double(), (s.circle_im - s.rect_im).to_double());
        double b11 = 2.0 * inv_t * static_cast<double>(s.d_t);
        double d12 = std::abs((s.re_only - s.rect_re).to_double());
        double b12 = inv_t * static_cast<double>(s.d_im);
        bool ok11 = d11 <= b11 * (1 + 1e-12) + 1e-14, ok12 = d12 <= b12 * (1 + 1e-12) + 1e-14;
        v11 += !ok11, v12 += !ok12, ++rows;
        if (b11 > 0) slack11 = std::max(slack11, d11 / b11);
        if (b12 > 0) slack12 = std::max(slack12, d12 / b12);
        buf << g17(v.to_double());
        for (DD num : {s.circle_re, s.circle_im, s.rect_re, s.rect_im, s.re_only, s.im_only}) {
            buf << ',' << g17(num.to_double() / scale);
        }
        buf << ',' << s.d_t << ',' << s.d_re << ',' << s.d_im << ',' << (ok11 ? "true" : "false") << ','
            << (ok12 ? "true" : "false") << '\n';
    }
    nlohmann::ordered_json sum{{"spectrum", source},
                               {"eigenvalues", sp.total_multiplicity()},
                               {"scales", rows},
                               {"circle_rect_violations", v11},
                               {"re_rect_violations", v12},
                               {"max_slack_circle_rect", slack11},
                               {"max_slack_re_rect", slack12}};
    emit(buf.str(), a.out);
    if (a.summary.empty()) {
        std::cerr << sum.dump(2) << "\n";
    } else {
        emit(sum.dump(2) + "\n", a.summary);
    }
    return 0;
}

struct AcceptArgs {
    std::vector<int> criteria;
    std::string thresholds;
    bool tamper = false;
};

int cmd_accept(const AcceptArgs& a) {
    AcceptOptions o;
    o.tamper_t0 = a.tamper;
    if (!a.thresholds.empty()) o.thresholds = parse_thresholds(a.thresholds);
    for (int id : a.criteria) {
        if (id < 1 || id > kCriteria) throw ConfigError("no acceptance criterion " + std::to_string(id));
    }
    bool all = true;
    for (int id = 1; id <= kCriteria; ++id) {
        if (!a.criteria.empty() && std::find(a.criteria.begin(), a.criteria.end(), id) == a.criteria.end()) continue;
        CriterionResult r = run_criterion(id, o);
        std::cout << format_result(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

int cmd_gallery(const std::string& action, const std::string& name, const std::string& out) {
    if (action == "list") {
        std::ostringstream buf;
        for (const auto& e : gallery_entries()) buf << e.name << "\t" << e.description << "\n";
        emit(buf.str(), out);
        return 0;
    }
    if (action == "emit") {
        if (name.empty()) throw ConfigError("gallery emit needs a model name");
        emit(to_json(expand(gallery_spec(name))).dump(2) + "\n", out);
        return 0;
    }
    throw ConfigError("gallery: unknown action '" + action + "' (list or emit)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace_lab: singular traces of step-function operator models"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "INI/TOML file with per-command sections; flags override it");
    bool show_config = false;
    app.add_flag("--show-config", show_config, "print the effective configuration and exit");
    app.option_defaults()->always_capture_default();

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "evaluate a profile on a scale grid (CSV)");
    profile->add_option("--op", pa.op, "gallery model or operator file");
    profile->add_option("--kind", pa.kind, "dixmier, truncated, remainder_mu, remainder_d, zeta, beta");
    auto* coord_opt = profile->add_option("--coord", pa.coord, "view coordinate t, v or u");
    profile->add_option("--range", pa.range, "[coord=]a..b");
    profile->add_option("--spu", pa.spu, "samples per unit (per decade for t and r)");
    profile->add_option("--out", pa.out, "output file (default stdout)");

    ProfileArgs za;
    za.kind = "zeta";
    za.op = "harmonic";
    za.spu = 4;
    za.range = "r=10..10000";
    auto* zeta = app.add_subcommand("zeta", "zeta-type profile g(r) = (1/r) tr mu^(1+1/r) (CSV)");
    zeta->add_option("--op", za.op, "gallery model or operator file");
    zeta->add_option("--range", za.range, "r=a..b");
    zeta->add_option("--spu", za.spu, "samples per decade");
    zeta->add_option("--out", za.out, "output file (default stdout)");

    VerdictArgs va;
    auto* verdict = app.add_subcommand("verdict", "measurability verdict (JSON)");
    verdict->add_option("--op", va.op, "gallery model or operator file");
    verdict->add_option("--class", va.cls, "dixmier or dp");
    verdict->add_option("--thresholds", va.thresholds, "strict=10x or periodicity=,vanishing=,convergence=");
    verdict->add_option("--n-min", va.n_min, "first u-window");
    verdict->add_option("--n-max", va.n_max, "last u-window (0: from the model horizon)");
    verdict->add_option("--out", va.out, "output file (default stdout)");

    LidskiiArgs la;
    auto* lidskii = app.add_subcommand("lidskii", "Lidskii region sums and bound checks (CSV + JSON summary)");
    lidskii->add_option("--op", la.op, "operator with a spectrum (default: random spectrum)");
    lidskii->add_option("--seed", la.seed, "random spectrum seed");
    lidskii->add_option("--n", la.n, "random spectrum size");
    lidskii->add_option("--law", la.law, "disc, annulus or real_line");
    lidskii->add_option("--range", la.range, "[coord=]a..b");
    lidskii->add_option("--spu", la.spu, "samples per unit");
    lidskii->add_option("--out", la.out, "CSV file (default stdout)");
    lidskii->add_option("--summary", la.summary, "JSON summary file (default stderr)");

    std::string g_action, g_name, g_out;
    auto* gallery = app.add_subcommand("gallery", "list gallery models or emit one as an operator file");
    gallery->add_option("action", g_action, "list or emit")->required();
    gallery->add_option("name", g_name, "model name for emit");
    gallery->add_option("--out", g_out, "output file (default stdout)");

    AcceptArgs aa;
    auto* accept = app.add_subcommand("accept", "run the acceptance criteria");
    accept->add_option("--criterion", aa.criteria, "criteria to run (default: all)")->delimiter(',');
    accept->add_option("--thresholds", aa.thresholds, "strict=10x or periodicity=,vanishing=,convergence=");
    accept->add_flag("--tamper-t0", aa.tamper, "perturb the k = 10 plateau of T0 by 1%");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (show_config) {
        std::cout << app.config_to_str(true, false);
        return 0;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }
    const std::string what = app.get_subcommands().front()->get_name();
    try {
        if (*profile) return cmd_profile(pa, coord_opt->count() > 0);
        if (*zeta) return cmd_profile(za, false);
        if (*verdict) return cmd_verdict(va);
        if (*lidskii) return cmd_lidskii(la);
        if (*gallery) return cmd_gallery(g_action, g_name, g_out);
        if (*accept) return cmd_accept(aa);
    } catch (const ConfigError& e) {
        std::cerr << what << ": config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ModelError& e) {
        std::cerr << what << ": model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const NumericError& e) {
        std::cerr << what << ": numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
