#include "stacky/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "stacky/ehrhart.hpp"
#include "stacky/error.hpp"
#include "stacky/lambdaring.hpp"
#include "stacky/monoids.hpp"
#include "stacky/stacky.hpp"

namespace stacky::cli {

namespace {

const std::vector<std::string> kCommands = {"ehrhart", "volume", "bps", "delta", "plid-check", "plethystic"};

[[noreturn]] void schema(const std::string& detail) { throw Error("cli", "SchemaViolation", detail); }

bool is_validation_error(const std::string& name) {
    static const std::set<std::string> names = {"SchemaViolation", "ParseError", "InvalidQuiver", "NotSymmetric",
                                                "UnknownCommand"};
    return names.count(name) > 0;
}

// Symbolic and numeric view of an exact scalar at the job's q.
nlohmann::json report(const ExactScalar& s, long long q) {
    auto z = eval_numeric(s, static_cast<long double>(q));
    return {{"exact", s.to_json()},
            {"text", s.to_string()},
            {"numeric", {{"re", static_cast<double>(z.real())}, {"im", static_cast<double>(z.imag())}}}};
}

nlohmann::json reports(const std::vector<ExactScalar>& v, long long q) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : v) a.push_back(report(s, q));
    return a;
}

template <class T>
T param(const nlohmann::json& p, const std::string& key, T fallback) {
    if (!p.contains(key)) return fallback;
    try {
        return p.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        schema("parameter '" + key + "' has the wrong type");
    }
}

HalfLConvention half_l(const Options& opt, const nlohmann::json& p) {
    HalfLConvention c;
    std::string s = opt.half_l;
    if (s.empty() && p.contains("halfL")) {
        auto v = p.at("halfL");
        if (!v.is_array() || v.size() != 2) schema("halfL must be [b1, b2]");
        c.b1 = v[0].get<int>();
        c.b2 = v[1].get<int>();
        return c;
    }
    if (s.empty()) return c;
    auto comma = s.find(',');
    if (comma == std::string::npos) schema("--half-l expects b1,b2");
    try {
        c.b1 = std::stoi(s.substr(0, comma));
        c.b2 = std::stoi(s.substr(comma + 1));
    } catch (const std::exception&) {
        schema("--half-l expects two integers");
    }
    return c;
}

std::vector<DeltaMode> delta_modes(const Options& opt, const nlohmann::json& p, bool all_by_default) {
    std::string s = !opt.delta_mode.empty() ? opt.delta_mode : param<std::string>(p, "mode", "");
    if (s.empty()) {
        if (all_by_default) return {DeltaMode::Differences, DeltaMode::Orbits, DeltaMode::Lattice};
        return {PlidConfig{}.mode};
    }
    try {
        return {parse_delta_mode(s)};
    } catch (const Error& e) {
        schema(e.what());
    }
}

long long job_q(const Options& opt, const nlohmann::json& p, long long fallback) {
    if (opt.q > 0) return opt.q;
    return param<long long>(p, "q", fallback);
}

nlohmann::json cmd_ehrhart(const nlohmann::json& p, const Options& opt) {
    RationalPolytope P = p.contains("weights") ? [&] {
        linalg::RatVec vals;
        for (const auto& v : p.at("vals")) vals.push_back(v.is_string() ? parse_rat(v.get<std::string>()) : Rat(v.get<long>()));
        return fiber_polytope(p.at("weights").get<std::vector<std::vector<long long>>>(), vals);
    }()
                                               : RationalPolytope::from_json(p.contains("polytope") ? p.at("polytope") : p);
    long long R = opt.truncation > 0 ? opt.truncation : param<long long>(p, "R", 0);
    RationalFunctionFit fit = ehrhart_fit(P, R);
    SeriesT s = ehrhart_series(P, fit.witnessed_order);
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& c : s.coeffs) counts.push_back(c.to_string());
    ExactScalar lim = P.empty() ? ExactScalar() : limit_at_infinity(fit);
    return {{"command", "ehrhart"},
            {"polytope", P.to_json()},
            {"counts", counts},
            {"fit", fit.to_json()},
            {"limit", report(lim, job_q(opt, p, 2))}};
}

nlohmann::json cmd_volume(const nlohmann::json& p, const Options& opt) {
    nlohmann::json dj = p.contains("datum") ? p.at("datum") : p;
    if (opt.q > 0) dj["q"] = opt.q;
    ToricStackDatum X = ToricStackDatum::from_json(dj);
    FBar fbar = parse_fbar(param<std::string>(p, "fbar", "one"));
    long long R = opt.truncation > 0 ? opt.truncation : param<long long>(p, "R", 0);
    VolumeResult v = orbifold_volume(X, fbar, R);
    nlohmann::json out = {{"command", "volume"},
                          {"datum", X.to_json()},
                          {"fbar", fbar == FBar::One ? "one" : "gerbe"},
                          {"coefficients", reports(v.series.coeffs, X.q)},
                          {"fit", v.fit.to_json()},
                          {"volume", report(v.volume, X.q)}};
    if (X.torus_rank == 0) out["finiteInertiaSum"] = report(dm_inertia_sum(X, fbar), X.q);
    return out;
}

nlohmann::json cmd_bps(const nlohmann::json& p, const Options& opt) {
    Quiver Q = Quiver::from_json(p.contains("quiver") ? p.at("quiver") : p);
    int G = opt.grade > 0 ? opt.grade : param<int>(p, "gammaBound", 4);
    int L = opt.levels > 0 ? opt.levels : param<int>(p, "levelBound", 2);
    long long q = job_q(opt, p, 2);
    auto conv = half_l(opt, p);
    auto res = quiver_bps(Q, G, L, conv);
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [gamma, v] : res.omega) {
        std::vector<ExactScalar> shown(v.levels.begin(), v.levels.begin() + std::min<long long>(L, v.truncation()));
        table.push_back({{"gamma", gamma}, {"omega", reports(shown, q)}});
    }
    auto integ = quiver_integrality(res);
    return {{"command", "bps"},
            {"quiver", Q.to_json()},
            {"gammaBound", G},
            {"levelBound", L},
            {"q", q},
            {"halfL", {conv.b1, conv.b2}},
            {"table", table},
            {"integrality",
             {{"integral", integ.integral}, {"levelCompatible", integ.level_compatible}, {"positive", integ.positive}}},
            {"symRoundTrip", quiver_sym_round_trip(res)}};
}

nlohmann::json cmd_delta(const nlohmann::json& p, const Options& opt) {
    long long R = opt.truncation > 0 ? opt.truncation : param<long long>(p, "R", param<long long>(p, "r", 24));
    if (R < 1) schema("R must be positive");
    std::vector<DeltaRegion> regions;
    if (p.contains("m") || p.contains("s")) {
        regions.push_back({param<long long>(p, "m", 1), param<long long>(p, "s", 1)});
    } else {
        long long bound = param<long long>(p, "bound", 3);
        for (long long m = 1; m <= bound; ++m)
            for (long long s = 1; s <= bound; ++s) regions.push_back({m, s});
    }
    nlohmann::json rows = nlohmann::json::array();
    for (auto mode : delta_modes(opt, p, true))
        for (const auto& reg : regions) {
            nlohmann::json counts = nlohmann::json::array();
            for (long long r = 1; r <= R; ++r) counts.push_back(delta_count(reg, r, mode));
            auto fit = delta_fit(reg, mode);
            rows.push_back({{"m", reg.m},
                            {"s", reg.s},
                            {"mode", to_string(mode)},
                            {"counts", counts},
                            {"fit", fit.to_json()},
                            {"limit", limit_at_infinity(fit).to_string()}});
        }
    return {{"command", "delta"}, {"R", R}, {"rows", rows}};
}

nlohmann::json cmd_plid(const nlohmann::json& p, const Options& opt) {
    int G = opt.grade > 0 ? opt.grade : param<int>(p, "grade", 3);
    int L = opt.levels > 0 ? opt.levels : param<int>(p, "levels", 3);
    long long q = job_q(opt, p, 2);
    PlidConfig cfg{half_l(opt, p), delta_modes(opt, p, false).front()};
    auto rep = plid_residual(G, L, cfg);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"grade", e.grade},
                           {"level", e.level},
                           {"lhs", report(e.lhs, q)},
                           {"rhsPleth", report(e.rhs_pleth, q)},
                           {"rhsDirect", report(e.rhs_direct, q)},
                           {"diffPleth", report(e.diff_pleth, q)},
                           {"diffDirect", report(e.diff_direct, q)}});
    return {{"command", "plid-check"},
            {"grade", G},
            {"levels", L},
            {"q", q},
            {"mode", to_string(cfg.mode)},
            {"halfL", {cfg.conv.b1, cfg.conv.b2}},
            {"entries", entries},
            {"exactZero", rep.exact_zero}};
}

MonoidPtr make_monoid(const nlohmann::json& m, std::shared_ptr<const LinearObjectsMonoid>& linear) {
    std::string type = param<std::string>(m, "type", "vect");
    if (type == "vect") {
        linear = LinearObjectsMonoid::vect();
        return linear;
    }
    if (type == "quiver") {
        linear = LinearObjectsMonoid::symmetric_quiver(Quiver::from_json(m.at("quiver")));
        return linear;
    }
    if (type == "lattice") return std::make_shared<DiscreteLattice>(param<int>(m, "rank", 1));
    if (type == "affine_line")
        return FreeOrbitMonoid::affine_line(param<long long>(m, "q", 2), param<int>(m, "maxDegree", 4));
    schema("monoid type must be vect, quiver, lattice or affine_line");
}

nlohmann::json cmd_plethystic(const nlohmann::json& p, const Options& opt) {
    std::shared_ptr<const LinearObjectsMonoid> linear;
    MonoidPtr M = make_monoid(p.contains("monoid") ? p.at("monoid") : nlohmann::json::object(), linear);
    int G = opt.grade > 0 ? opt.grade : param<int>(p, "grade", 3);
    int L = opt.levels > 0 ? opt.levels : param<int>(p, "levels", 2);
    if (G < 1 || L < 1) schema("grade and levels must be positive");
    Truncation t{G, G * L};
    auto conv = half_l(opt, p);
    std::string op = param<std::string>(p, "operation", "log");
    nlohmann::json fspec = p.contains("function") ? p.at("function") : nlohmann::json("stacky");
    CountingFunction f(M, t);
    if (fspec == "stacky") {
        if (!linear) schema("the stacky function needs a vect or quiver monoid");
        f = stacky_function(linear, t, conv);
    } else if (fspec == "ones") {
        f = CountingFunction::from(M, t, [](const Element&, int) { return ExactScalar(1); });
    } else if (fspec.is_object() && fspec.contains("entries")) {
        if (std::dynamic_pointer_cast<const DiscreteLattice>(M) == nullptr)
            schema("explicit entries need a lattice-type monoid");
        for (const auto& e : fspec.at("entries"))
            f.set(e.at("element").get<Element>(), e.value("level", 1), ExactScalar::from_json(e.at("value")));
    } else {
        schema("function must be \"stacky\", \"ones\" or {entries: [...]}");
    }
    CountingFunction out(M, t);
    if (op == "log") out = pleth_log(f);
    else if (op == "log_direct") out = log_direct(f);
    else if (op == "sym") out = pleth_sym(f);
    else if (op == "adams") out = adams(f, param<int>(p, "m", 2));
    else schema("operation must be log, log_direct, sym or adams");
    long long q = job_q(opt, p, 2);
    nlohmann::json values = nlohmann::json::array();
    for (int n = 1; n <= t.weight; ++n)
        for (const auto& [x, v] : out.level(n))
            values.push_back({{"element", M->element_to_json(x)}, {"level", n}, {"value", report(v, q)}});
    return {{"command", "plethystic"},
            {"monoid", M->name()},
            {"operation", op},
            {"truncation", {{"grade", t.grade}, {"weight", t.weight}}},
            {"values", values}};
}

std::string numeric_text(const nlohmann::json& rep) {
    std::ostringstream os;
    os << std::setprecision(12) << rep["numeric"]["re"].get<double>();
    double im = rep["numeric"]["im"].get<double>();
    if (im != 0) os << (im > 0 ? "+" : "") << im << "i";
    return os.str();
}

std::string gamma_text(const nlohmann::json& g) {
    std::string s;
    for (const auto& v : g) s += (s.empty() ? "" : ",") + std::to_string(v.get<long long>());
    return s;
}

}  // namespace

nlohmann::json execute(const std::string& command, const nlohmann::json& params, const Options& opt) {
    if (!params.is_object()) schema("job parameters must be a JSON object");
    if (command == "ehrhart") return cmd_ehrhart(params, opt);
    if (command == "volume") return cmd_volume(params, opt);
    if (command == "bps") return cmd_bps(params, opt);
    if (command == "delta") return cmd_delta(params, opt);
    if (command == "plid-check") return cmd_plid(params, opt);
    if (command == "plethystic") return cmd_plethystic(params, opt);
    throw Error("cli", "UnknownCommand", "unknown command '" + command + "'");
}

std::string to_tsv(const std::string& command, const nlohmann::json& rep) {
    std::ostringstream os;
    if (command == "bps") {
        os << "gamma\tlevel\tomega\tnumeric\n";
        for (const auto& row : rep["table"]) {
            int n = 1;
            for (const auto& v : row["omega"]) os << gamma_text(row["gamma"]) << '\t' << n++ << '\t' << v["text"].get<std::string>() << '\t' << numeric_text(v) << '\n';
        }
    } else if (command == "volume") {
        os << "r\tcoefficient\tnumeric\n";
        long long r = 1;
        for (const auto& c : rep["coefficients"]) os << r++ << '\t' << c["text"].get<std::string>() << '\t' << numeric_text(c) << '\n';
        os << "volume\t" << rep["volume"]["text"].get<std::string>() << '\t' << numeric_text(rep["volume"]) << '\n';
    } else if (command == "ehrhart") {
        os << "r\tcount\n";
        long long r = 1;
        for (const auto& c : rep["counts"]) os << r++ << '\t' << c.get<std::string>() << '\n';
        os << "limit\t" << rep["limit"]["text"].get<std::string>() << '\n';
    } else if (command == "delta") {
        os << "m\ts\tmode\tlimit\tcounts\n";
        for (const auto& row : rep["rows"]) {
            std::string counts;
            for (const auto& c : row["counts"]) counts += (counts.empty() ? "" : ",") + std::to_string(c.get<long long>());
            os << row["m"] << '\t' << row["s"] << '\t' << row["mode"].get<std::string>() << '\t'
               << row["limit"].get<std::string>() << '\t' << counts << '\n';
        }
    } else if (command == "plid-check") {
        os << "grade\tlevel\tlhs\tdiff_pleth\tdiff_direct\n";
        for (const auto& e : rep["entries"])
            os << e["grade"] << '\t' << e["level"] << '\t' << e["lhs"]["text"].get<std::string>() << '\t'
               << e["diffPleth"]["text"].get<std::string>() << '\t' << e["diffDirect"]["text"].get<std::string>() << '\n';
        os << "exact_zero\t" << (rep["exactZero"].get<bool>() ? "true" : "false") << '\n';
    } else {
        os << "element\tlevel\tvalue\tnumeric\n";
        for (const auto& v : rep["values"])
            os << v["element"].dump() << '\t' << v["level"] << '\t' << v["value"]["text"].get<std::string>() << '\t'
               << numeric_text(v["value"]) << '\n';
    }
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string output_path;
    auto emit = [&](const std::string& text) {
        if (output_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(output_path);
        f << text;
    };
    auto fail_with = [&](const std::string& kind, const std::string& name, const std::string& module,
                         const std::string& message) {
        nlohmann::json e = {{"error", {{"kind", kind}, {"name", name}, {"module", module}, {"message", message}}}};
        emit(e.dump(2) + "\n");
        err << name << " (" << module << "): " << message << '\n';
        return kind == "ComputeError" ? 1 : 2;
    };
    if (args.empty()) return fail_with("UnknownCommand", "UnknownCommand", "cli", "no command given");
    const std::string command = args[0];
    if (command == "--help" || command == "-h") {
        out << "usage: stacky-volumes <command> --input job.json [flags]\ncommands:";
        for (const auto& c : kCommands) out << ' ' << c;
        out << "\nrun 'stacky-volumes <command> --help' for the flags\n";
        return 0;
    }
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        return fail_with("UnknownCommand", "UnknownCommand", "cli", "unknown command '" + command + "'");

    CLI::App app{"stacky-volumes " + command};
    std::string input;
    Options opt;
    app.add_option("--input", input, "job parameters (JSON file)")->required();
    app.add_option("--output", output_path, "write the report here instead of stdout");
    app.add_option("--format", opt.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--levels", opt.levels);
    app.add_option("--grade", opt.grade);
    app.add_option("--truncation", opt.truncation);
    app.add_option("--q", opt.q);
    app.add_option("--half-l", opt.half_l, "b1,b2");
    app.add_option("--delta-mode", opt.delta_mode)->check(CLI::IsMember({"differences", "orbits", "lattice"}));
    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail_with("SchemaViolation", "SchemaViolation", "cli", e.what());
    }

    nlohmann::json params;
    {
        std::ifstream f(input);
        if (!f) return fail_with("SchemaViolation", "SchemaViolation", "cli", "cannot read " + input);
        try {
            f >> params;
        } catch (const nlohmann::json::exception& e) {
            return fail_with("SchemaViolation", "SchemaViolation", "cli", std::string("invalid JSON: ") + e.what());
        }
    }
    try {
        nlohmann::json rep = execute(command, params, opt);
        emit(opt.format == "tsv" ? to_tsv(command, rep) : rep.dump(2) + "\n");
        return 0;
    } catch (const Error& e) {
        bool validation = is_validation_error(e.name());
        return fail_with(validation ? "SchemaViolation" : "ComputeError", e.name(), e.module(), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail_with("SchemaViolation", "SchemaViolation", "cli", e.what());
    }
}

}  // namespace stacky::cli
