// scprop command-line front end: exact and semiclassical coherent-state
// matrix elements of the quantized cat map, error sweeps, Weyl symbols and
// the operator-algebra verification.  Emits CSV or JSON tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scprop/semiclassical.hpp"
#include "scprop/version.hpp"
#include "scprop/weyl_ops.hpp"

using namespace scprop;
using json = nlohmann::json;

namespace {

struct OutputSink {
    std::string format = "csv";
    std::string path;    // empty = stdout
    std::string config;  // echo line

    std::vector<std::string> columns;
    json rows = json::array();

    void add_row(const json& row) { rows.push_back(row); }

    int write() const {
        std::ostringstream out;
        if (format == "csv") {
            out << "# scprop " << kVersion << "\n";
            out << "# config: " << config << "\n";
            for (size_t i = 0; i < columns.size(); ++i)
                out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
            char buf[64];
            for (const auto& row : rows) {
                for (size_t i = 0; i < columns.size(); ++i) {
                    const auto& v = row.at(columns[i]);
                    if (v.is_number_float()) {
                        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
                        out << buf;
                    } else if (v.is_number_integer()) {
                        out << v.get<long long>();
                    } else {
                        out << v.get<std::string>();
                    }
                    out << (i + 1 < columns.size() ? "," : "\n");
                }
            }
        } else {
            json doc;
            doc["version"] = kVersion;
            doc["config"] = config;
            doc["rows"] = rows;
            out << doc.dump(2) << "\n";
        }
        if (path.empty()) {
            std::cout << out.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) {
                std::cerr << "scprop: cannot open output file '" << path << "'\n";
                return 1;
            }
            f << out.str();
        }
        return 0;
    }
};

Vec2 parse_point(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("point", "expected 'p,q' but got '" + s + "'");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("point", "cannot parse '" + s + "' as p,q");
    }
}

void require_torus_n(const std::vector<int>& ns) {
    for (int n : ns)
        if (n < 3 || n % 2 == 0)
            throw CLI::ValidationError("--n", "torus dimensions must be odd and >= 3 (got " +
                                                   std::to_string(n) + ")");
}

void require_torus_point(const Vec2& x, const std::string& name) {
    if (!(x.p >= 0.0 && x.p < 1.0 && x.q >= 0.0 && x.q < 1.0))
        throw CLI::ValidationError(name, "torus coordinates must lie in [0,1)^2");
}

std::vector<int> resolve_n_list(std::vector<int> ns, int n_min, int n_max) {
    if (!ns.empty()) return ns;
    std::vector<int> out;
    for (int n = n_min; n <= n_max; ++n)
        if (n % 2 == 1) out.push_back(n);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scprop: coherent-state propagator elements for the quantum cat map"};
    app.require_subcommand(1);

    std::string format = "csv", out_path, x1_str = "0.15,0.35", x2_str = "0.65,0.8";
    std::string method_str = "sc3";
    std::vector<int> n_list;
    int n_min = 3, n_max = 31, t = 1, pairs = 0;
    unsigned seed = 1;
    double hbar_plane = 0.0;

    auto add_common = [&](CLI::App* cmd, bool with_points) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "output file (default stdout)");
        if (with_points) {
            cmd->add_option("--x1", x1_str, "first coherent-state label 'p,q'");
            cmd->add_option("--x2", x2_str, "second coherent-state label 'p,q'");
        }
    };

    auto* cmd_exact = app.add_subcommand("exact", "exact propagator matrix element");
    cmd_exact->add_option("--n", n_list, "torus dimension(s), odd >= 3")->required();
    cmd_exact->add_option("--t", t, "map power");
    add_common(cmd_exact, true);

    auto* cmd_sc = app.add_subcommand("semiclassical", "semiclassical matrix element");
    cmd_sc->add_option("--n", n_list, "torus dimension(s), odd >= 3");
    cmd_sc->add_option("--t", t, "map power");
    cmd_sc->add_option("--method", method_str, "sc1 | sc2 | sc3 | sc3lin");
    cmd_sc->add_option("--hbar", hbar_plane,
                       "plane-mode Planck constant (sc3/sc3lin only, no --n)");
    add_common(cmd_sc, true);

    auto* cmd_fig2 = app.add_subcommand(
        "figure2", "relative amplitude errors of SC1/SC2/SC3 against the exact element");
    cmd_fig2->add_option("--n-min", n_min, "sweep start (default 3)");
    cmd_fig2->add_option("--n-max", n_max, "sweep end (default 31)");
    cmd_fig2->add_option("--n", n_list, "explicit N list (overrides the range)");
    cmd_fig2->add_option("--t", t, "map power");
    cmd_fig2->add_option("--pairs", pairs, "average over this many seeded random pairs");
    cmd_fig2->add_option("--seed", seed, "random seed for --pairs");
    add_common(cmd_fig2, true);

    auto* cmd_weyl = app.add_subcommand("weyl-symbol", "torus Weyl symbol of the propagator");
    cmd_weyl->add_option("--n", n_list, "torus dimension(s), odd >= 3")->required();
    cmd_weyl->add_option("--t", t, "map power");
    add_common(cmd_weyl, false);

    auto* cmd_ids = app.add_subcommand("identities", "translation/reflection operator algebra");
    cmd_ids->add_option("--n", n_list, "torus dimension(s), odd, 3..31")->required();
    add_common(cmd_ids, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    OutputSink sink;
    sink.format = format;
    sink.path = out_path;

    const CatMap cat;
    try {
        if (cmd_exact->parsed()) {
            const Vec2 X1 = parse_point(x1_str), X2 = parse_point(x2_str);
            require_torus_n(n_list);
            require_torus_point(X1, "--x1");
            require_torus_point(X2, "--x2");
            std::ostringstream cfg;
            cfg << "exact t=" << t << " x1=" << x1_str << " x2=" << x2_str;
            sink.config = cfg.str();
            sink.columns = {"N", "t", "x1_p", "x1_q", "x2_p", "x2_q", "re", "im"};
            for (int N : n_list) {
                const TorusHilbert space(N);
                const complexd v = exact_cs_element(space, X1, X2, t);
                sink.add_row({{"N", N},
                              {"t", t},
                              {"x1_p", X1.p},
                              {"x1_q", X1.q},
                              {"x2_p", X2.p},
                              {"x2_q", X2.q},
                              {"re", v.real()},
                              {"im", v.imag()}});
            }
        } else if (cmd_sc->parsed()) {
            const Vec2 X1 = parse_point(x1_str), X2 = parse_point(x2_str);
            sc::Method method;
            if (method_str == "sc1") method = sc::Method::SC1;
            else if (method_str == "sc2") method = sc::Method::SC2;
            else if (method_str == "sc3") method = sc::Method::SC3;
            else if (method_str == "sc3lin") method = sc::Method::SC3Lin;
            else throw CLI::ValidationError("--method", "unknown method '" + method_str + "'");

            std::ostringstream cfg;
            cfg << "semiclassical method=" << method_str << " t=" << t << " x1=" << x1_str
                << " x2=" << x2_str;
            if (hbar_plane > 0.0) cfg << " hbar=" << hbar_plane << " (plane)";
            sink.config = cfg.str();
            sink.columns = {"N",   "t",   "method", "re",        "im",
                            "m_p", "m_q", "gauss",  "delta_abs", "drift_abs"};
            auto emit = [&](int N, const sc::CSElement& el) {
                sink.add_row({{"N", N},
                              {"t", t},
                              {"method", method_str},
                              {"re", el.value.real()},
                              {"im", el.value.imag()},
                              {"m_p", el.dominant_m.p},
                              {"m_q", el.dominant_m.q},
                              {"gauss", el.gauss_exponent},
                              {"delta_abs", el.delta.norm()},
                              {"drift_abs", el.drift.norm()}});
            };
            if (hbar_plane > 0.0) {
                if (!n_list.empty())
                    throw CLI::ValidationError("--hbar", "plane mode excludes --n");
                if (method != sc::Method::SC3 && method != sc::Method::SC3Lin)
                    throw CLI::ValidationError("--hbar", "plane mode supports sc3/sc3lin only");
                SymplecticMap2 mt(Mat2::identity());
                for (int i = 0; i < t; ++i) mt = mt * cat.map();
                emit(0, sc::sc3_plane_element(mt, Mat2::identity(), X1, X2, hbar_plane));
            } else {
                if (n_list.empty())
                    throw CLI::ValidationError("--n", "torus mode requires --n");
                require_torus_n(n_list);
                require_torus_point(X1, "--x1");
                require_torus_point(X2, "--x2");
                for (int N : n_list) {
                    const TorusHilbert space(N);
                    sc::CSElement el;
                    switch (method) {
                        case sc::Method::SC1:
                            el = sc::sc1_element(cat, X1, X2, t, space.hbar);
                            break;
                        case sc::Method::SC2:
                            el = sc::sc2_element(cat, X1, X2, t, space.hbar);
                            break;
                        case sc::Method::SC3:
                            el = sc::sc3_element(cat, X1, X2, t, space.hbar);
                            break;
                        default:
                            el = sc::sc3_linearized(cat, X1, X2, t, space.hbar);
                            break;
                    }
                    emit(N, el);
                }
            }
        } else if (cmd_fig2->parsed()) {
            const Vec2 X1 = parse_point(x1_str), X2 = parse_point(x2_str);
            require_torus_point(X1, "--x1");
            require_torus_point(X2, "--x2");
            const std::vector<int> Ns = resolve_n_list(n_list, n_min, n_max);
            require_torus_n(Ns);
            std::ostringstream cfg;
            cfg << "figure2 t=" << t << " x1=" << x1_str << " x2=" << x2_str
                << " pairs=" << pairs << " seed=" << seed;
            sink.config = cfg.str();
            sink.columns = {"N", "E_sc1", "E_sc2", "E_sc3"};

            std::vector<std::pair<Vec2, Vec2>> configs;
            if (pairs <= 0) {
                configs.emplace_back(X1, X2);
            } else {
                std::mt19937 rng(seed);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                for (int i = 0; i < pairs; ++i)
                    configs.emplace_back(Vec2{u(rng), u(rng)}, Vec2{u(rng), u(rng)});
            }
            const std::vector<sc::Method> ms{sc::Method::SC1, sc::Method::SC2, sc::Method::SC3};
            for (int N : Ns) {
                double e1 = 0.0, e2 = 0.0, e3 = 0.0;
                for (const auto& [a, b] : configs) {
                    const auto rows = sc::error_sweep(cat, {N}, t, a, b, ms);
                    for (const auto& r : rows) {
                        if (!r.ok) throw std::runtime_error(r.message);
                        if (r.method == sc::Method::SC1) e1 += r.amp_error;
                        if (r.method == sc::Method::SC2) e2 += r.amp_error;
                        if (r.method == sc::Method::SC3) e3 += r.amp_error;
                    }
                }
                const double inv = 1.0 / double(configs.size());
                sink.add_row(
                    {{"N", N}, {"E_sc1", e1 * inv}, {"E_sc2", e2 * inv}, {"E_sc3", e3 * inv}});
            }
        } else if (cmd_weyl->parsed()) {
            require_torus_n(n_list);
            std::ostringstream cfg;
            cfg << "weyl-symbol t=" << t;
            sink.config = cfg.str();
            sink.columns = {"N", "t", "a", "b", "re", "im"};
            for (int N : n_list) {
                const TorusHilbert space(N);
                const OperatorMatrix U = operator_power(hannay_berry(space), t);
                const auto W = torus_weyl_symbol(space, U);
                for (int a = 0; a < N; ++a)
                    for (int b = 0; b < N; ++b)
                        sink.add_row({{"N", N},
                                      {"t", t},
                                      {"a", a},
                                      {"b", b},
                                      {"re", W(a, b).real()},
                                      {"im", W(a, b).imag()}});
            }
        } else if (cmd_ids->parsed()) {
            require_torus_n(n_list);
            sink.config = "identities";
            sink.columns = {"N",   "tt",        "t_inverse",    "rt",
                            "tr",  "rr",        "rrr",          "r_squared",
                            "completeness", "trace_orthogonality", "unitarity", "pass"};
            bool all_ok = true;
            for (int N : n_list) {
                const TorusHilbert space(N);
                const auto rep = compose_identities_report(space);
                const bool ok = rep.all_pass(1e-10);
                all_ok = all_ok && ok;
                sink.add_row({{"N", N},
                              {"tt", rep.dev_tt},
                              {"t_inverse", rep.dev_t_inverse},
                              {"rt", rep.dev_rt},
                              {"tr", rep.dev_tr},
                              {"rr", rep.dev_rr},
                              {"rrr", rep.dev_rrr},
                              {"r_squared", rep.dev_r_involutive},
                              {"completeness", rep.dev_completeness},
                              {"trace_orthogonality", rep.dev_trace_orthogonality},
                              {"unitarity", rep.dev_unitarity},
                              {"pass", ok ? std::string("yes") : std::string("no")}});
            }
            const int rc = sink.write();
            if (rc != 0) return rc;
            return all_ok ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "scprop: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "scprop: " << e.what() << "\n";
        return 1;
    }
    return sink.write();
}
