#pragma once

// `qha` front end. Exit codes: 0 when every residual passes, 1 for numerical
// failures (a report is still written), 2 for usage errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qha/error.hpp"
#include "qha/fock_core.hpp"
#include "qha/gelfand.hpp"
#include "qha/json_io.hpp"
#include "qha/operator_lab.hpp"
#include "qha/radial_calculus.hpp"
#include "qha/report.hpp"
#include "qha/symbol.hpp"
#include "qha/verify.hpp"

namespace qha::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Applies keys of a JSON config object onto cfg.
inline void apply_config(const Json& j, RunConfig& cfg) {
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "dim") cfg.trunc.dim = value.get<int>();
        else if (key == "inner" || key == "inner_dim") cfg.trunc.inner_dim = value.get<int>();
        else if (key == "radius") cfg.trunc.radius = value.get<double>();
        else if (key == "quad_order") cfg.quad_order = value.get<int>();
        else if (key == "planar_order") cfg.planar_order = value.get<int>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else throw UsageError("unknown config key: " + key);
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

inline std::vector<double> parse_number_list(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return sequence_from_json(Json::parse(text));
        } catch (const Json::exception& e) {
            throw UsageError(std::string("bad sequence: ") + e.what());
        }
    }
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad number in sequence: '" + item + "'");
        }
    }
    return v;
}

inline ComplexPoint parse_point(const std::string& text) {
    const auto v = parse_number_list(text);
    if (v.size() != 2) throw UsageError("a point is written re,im");
    return {v[0], v[1]};
}

struct SequenceSource {
    std::string seq;
    std::string seq_file;
    std::string sqrt_sample;
    int count = 0;

    void attach(CLI::App* sub) {
        sub->add_option("--seq", seq, "Sequence as comma list or JSON array");
        sub->add_option("--seq-file", seq_file, "JSON file holding the sequence");
        sub->add_option("--sqrt-sample", sqrt_sample, "Expression f(s); the sequence is f(sqrt n)");
        sub->add_option("--count", count, "Number of terms for --sqrt-sample");
    }

    std::vector<double> load() const {
        const int given = !seq.empty() + !seq_file.empty() + !sqrt_sample.empty();
        if (given != 1) throw UsageError("give exactly one of --seq, --seq-file, --sqrt-sample");
        if (!seq.empty()) return parse_number_list(seq);
        if (!seq_file.empty()) {
            try {
                return sequence_from_json(read_json_file(seq_file));
            } catch (const InvalidArgument& e) {
                throw UsageError(e.what());
            }
        }
        if (count < 1) throw UsageError("--sqrt-sample needs --count >= 1");
        const Expr f = parse_expression(sqrt_sample);
        std::vector<double> v(count);
        for (int n = 0; n < count; ++n) v[n] = evaluate_radial(f, std::sqrt(static_cast<double>(n)));
        return v;
    }
};

inline std::string csv_of(const std::vector<double>& v) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < v.size(); ++i) out += std::to_string(i) + "," + format_number(v[i]) + "\n";
    return out;
}

struct Outcome {
    RunReport report;
    std::optional<std::vector<double>> csv_sequence;  // set by sequence-valued commands
};

/// Parses argv, runs the subcommand and writes the report. Returns the exit code.
inline int run_subcommand(int argc, const char* const* argv, std::ostream& out = std::cout,
                          std::ostream& err = std::cerr) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg;
    if (const char* path = std::getenv("QHA_CONFIG"); path && *path) {
        try {
            apply_config(read_json_file(path), cfg);
        } catch (const std::exception& e) {
            err << "qha: QHA_CONFIG: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    CLI::App app{"Quantum harmonic analysis on the Fock space: truncated computations and identity checks"};
    app.require_subcommand(1);
    std::string out_path;
    std::string format = "json";
    app.add_option("--dim", cfg.trunc.dim, "Truncation dimension N");
    app.add_option("--inner", cfg.trunc.inner_dim, "Inner block size for identity checks");
    app.add_option("--radius", cfg.trunc.radius, "Largest trusted |z|");
    app.add_option("--quad-order", cfg.quad_order, "Gauss-Laguerre order");
    app.add_option("--planar-order", cfg.planar_order, "Gauss-Hermite order per axis");
    app.add_option("--seed", cfg.seed, "Seed for random test operators");
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    auto add = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    // eigvals
    std::string symbol_text;
    int dim_n = 1;
    int count = 8;
    bool allow_unbounded = false;
    std::string normalization = "gaussian";
    CLI::App* eigvals = add("eigvals", "Eigenvalues of a radial Toeplitz operator");
    eigvals->add_option("--symbol", symbol_text, "Radial symbol expression")->required();
    eigvals->add_option("--n", dim_n, "Complex dimension n");
    eigvals->add_option("--count", count, "Number of eigenvalues");
    eigvals->add_flag("--allow-unbounded", allow_unbounded, "Accept polynomially growing symbols");
    eigvals->add_option("--normalization", normalization, "gaussian: a(sqrt(r/pi)); literal: a(sqrt r)")
        ->check(CLI::IsMember({"gaussian", "literal"}));

    // laplacian
    SequenceSource lap_seq;
    std::string convention = "pi";
    CLI::App* laplacian = add("laplacian", "Operator Laplacian of a radial operator, on its eigenvalues");
    lap_seq.attach(laplacian);
    laplacian->add_option("--convention", convention, "pi: include the factor pi; bare: omit it")
        ->check(CLI::IsMember({"pi", "bare"}));

    // berezin
    SequenceSource ber_seq;
    std::string ber_operator_file;
    std::vector<std::string> ber_points;
    bool ber_laplacian = false;
    CLI::App* berezin_cmd = add("berezin", "Berezin transform of a radial sequence or an operator matrix");
    ber_seq.attach(berezin_cmd);
    berezin_cmd->add_option("--operator-file", ber_operator_file, "OperatorMatrix JSON");
    berezin_cmd->add_option("--z", ber_points, "Point re,im (repeatable)")->required();
    berezin_cmd->add_flag("--laplacian", ber_laplacian, "Also report the Laplacian of the transform");

    // heat
    SequenceSource heat_seq;
    double heat_t = 0.0;
    CLI::App* heat = add("heat", "Heat semigroup on a radial eigenvalue sequence");
    heat_seq.attach(heat);
    heat->add_option("--t", heat_t, "Time t > 0")->required();

    // defect
    SequenceSource defect_seq;
    CLI::App* defect = add("defect", "Finite-window d_Delta defect max |m Delta^2 x_{m-1}|");
    defect_seq.attach(defect);

    // extend
    SequenceSource ext_seq;
    std::vector<double> ext_x;
    bool ext_real = false;
    CLI::App* extend = add("extend", "Square-root interpolation of a sequence");
    ext_seq.attach(extend);
    extend->add_option("--x", ext_x, "Evaluation points (repeatable)")->required();
    extend->add_flag("--real", ext_real, "Use the even extension to R, f(x) = f+(x^2)");

    // approx
    SequenceSource approx_seq;
    double approx_s = 0.04;
    CLI::App* approx = add("approx", "Gaussian-smoothed d_Delta approximant of a sequence");
    approx_seq.attach(approx);
    approx->add_option("--s", approx_s, "Smoothing bandwidth");

    // verify
    std::string suite;
    CLI::App* verify_cmd = add("verify", "Run an identity-verification suite");
    verify_cmd->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(verify::suite_names()));

    // weyl
    std::string weyl_point;
    CLI::App* weyl = add("weyl", "Truncated Weyl operator matrix");
    weyl->add_option("--z", weyl_point, "Point re,im")->required();

    // convolve
    std::string psi_text;
    double conv_t = 0.0;
    std::string operand = "phi";
    std::string conv_toeplitz;
    std::string conv_operator_file;
    CLI::App* convolve = add("convolve", "Function-operator convolution psi * S");
    convolve->add_option("--psi", psi_text, "Integrable weight expression");
    convolve->add_option("--t", conv_t, "Use the heat kernel phi_t as the weight");
    convolve->add_option("--operand", operand, "phi, identity or random")
        ->check(CLI::IsMember({"phi", "identity", "random"}));
    convolve->add_option("--toeplitz", conv_toeplitz, "Operand T_a for this symbol");
    convolve->add_option("--operator-file", conv_operator_file, "Operand from OperatorMatrix JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Outcome result;
    RunReport& report = result.report;
    for (int i = 1; i < argc; ++i) report.command.emplace_back(argv[i]);
    report.config = cfg;
    const TruncationSpec& tr = cfg.trunc;

    auto finish = [&](int code) {
        report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string text;
        if (format == "csv" && code == kExitOk) text = csv_of(*result.csv_sequence);
        else text = report.to_json().dump(2) + "\n";
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path);
            if (!file) {
                err << "qha: cannot write " << out_path << "\n";
                return kExitUsage;
            }
            file << text;
        }
        if (code == kExitOk && !report.pass()) return kExitNumerical;
        return code;
    };

    try {
        tr.validate();
        const bool sequence_valued = eigvals->parsed() || laplacian->parsed() || heat->parsed() || extend->parsed() ||
                                     approx->parsed();
        if (format == "csv" && !sequence_valued) throw UsageError("--format csv is only offered for sequence results");

        if (eigvals->parsed()) {
            const Expr a = parse_symbol(symbol_text, allow_unbounded);
            EigenvalueOptions opts;
            opts.allow_unbounded = allow_unbounded;
            opts.normalization =
                normalization == "literal" ? GammaNormalization::literal : GammaNormalization::gaussian_measure;
            const EigenSequence g = toeplitz_eigenvalues(a, dim_n, count, cfg.quad_order, opts);
            report.results = {{"symbol", to_string(a)}, {"n", dim_n}, {"normalization", normalization},
                              {"eigenvalues", g.values}};
            result.csv_sequence = g.values;
        } else if (laplacian->parsed()) {
            const EigenSequence lam(lap_seq.load());
            const EigenSequence mu =
                laplacian_sequence(lam, convention == "pi" ? PiConvention::with_pi : PiConvention::without_pi);
            report.results = {{"pi_convention", convention == "pi" ? "mu_m = pi (m D^2 l_{m-1} + D l_m)"
                                                                   : "mu_m = m D^2 l_{m-1} + D l_m"},
                              {"mu", mu.values}};
            result.csv_sequence = mu.values;
        } else if (berezin_cmd->parsed()) {
            Json rows = Json::array();
            if (!ber_operator_file.empty()) {
                if (!ber_seq.seq.empty() || !ber_seq.seq_file.empty() || !ber_seq.sqrt_sample.empty())
                    throw UsageError("give either a sequence or --operator-file");
                const OperatorMatrix s = operator_from_json(read_json_file(ber_operator_file), tr);
                for (const auto& p : ber_points) {
                    const ComplexPoint z = parse_point(p);
                    Json row{{"z", {z.re, z.im}}, {"value", to_json(berezin(s, z))}};
                    if (ber_laplacian) row["laplacian"] = to_json(laplacian_of_berezin(s, z));
                    rows.push_back(std::move(row));
                }
            } else {
                const EigenSequence lam(ber_seq.load());
                for (const auto& p : ber_points) {
                    const ComplexPoint z = parse_point(p);
                    Json row{{"z", {z.re, z.im}}, {"value", berezin_radial(lam, z)}};
                    if (ber_laplacian) row["laplacian"] = laplacian_of_berezin_radial(lam, z);
                    rows.push_back(std::move(row));
                }
            }
            report.results = {{"points", std::move(rows)}};
        } else if (heat->parsed()) {
            const EigenSequence lam(heat_seq.load());
            const EigenSequence v = heat_radial(lam, heat_t, cfg.quad_order);
            report.results = {{"t", heat_t}, {"values", v.values}};
            result.csv_sequence = v.values;
        } else if (defect->parsed()) {
            const EigenSequence x(defect_seq.load());
            const std::vector<double> weighted = weighted_second_difference(x.values);
            report.results = {{"defect", d_delta_defect(x)}, {"length", x.size()}};
            if (weighted.size() >= 8) report.results["appears_bounded"] = appears_bounded(weighted);
        } else if (extend->parsed()) {
            const SequenceFunction sigma(ext_seq.load());
            std::vector<double> values;
            for (double x : ext_x) values.push_back(ext_real ? extend_real(sigma, x) : extend_plus(sigma, x));
            report.results = {{"x", ext_x}, {"values", values}, {"extension", ext_real ? "real" : "plus"}};
            result.csv_sequence = values;
        } else if (approx->parsed()) {
            const SequenceFunction sigma(approx_seq.load());
            const ApproxResult r = approx_in_ddelta(sigma, approx_s);
            report.results = {{"s", approx_s},
                              {"nu", r.nu.values},
                              {"window", {r.window_begin, r.window_end}},
                              {"sup_error", r.sup_error},
                              {"defect", r.defect},
                              {"modulus_bound", modulus_of_continuity(sigma, 4.0 * std::sqrt(approx_s))}};
            result.csv_sequence = r.nu.values;
        } else if (verify_cmd->parsed()) {
            Json info = Json::object();
            report.residuals = verify::run_suite(suite, cfg, info);
            report.results = {{"suite", suite}, {"info", info}};
        } else if (weyl->parsed()) {
            report.results = {{"operator", to_json(weyl_matrix(parse_point(weyl_point), tr))}};
        } else if (convolve->parsed()) {
            const int sources = !conv_toeplitz.empty() + !conv_operator_file.empty();
            if (sources > 1) throw UsageError("give at most one of --toeplitz, --operator-file");
            OperatorMatrix s;
            if (!conv_toeplitz.empty()) s = toeplitz_matrix(parse_symbol(conv_toeplitz), tr);
            else if (!conv_operator_file.empty()) s = operator_from_json(read_json_file(conv_operator_file), tr);
            else if (operand == "identity") s = identity_operator(tr);
            else if (operand == "random") s = random_hermitian(tr, cfg.seed);
            else s = rank_one_phi(tr);

            if (psi_text.empty() == (conv_t <= 0.0)) throw UsageError("give exactly one of --psi, --t");
            OperatorMatrix c;
            double l1 = 1.0;
            if (conv_t > 0.0) {
                c = heat_convolve(conv_t, s, cfg.quad_order);
            } else {
                const SymbolFunction psi{parse_symbol(psi_text), {}};
                ConvolutionOptions opts;
                opts.order = cfg.quad_order;
                c = conv_fun_op(psi, s, opts);
                l1 = l1_norm(psi, s.dim(), opts);
            }
            const double lhs = operator_norm(c.inner());
            const double bound = l1 * operator_norm(s.entries);
            report.results = {{"operator", to_json(c)}, {"psi_l1", l1}};
            report.residuals.push_back(verify::make("young_bound_excess", std::max(lhs - bound, 0.0), 1e-9));
        }
    } catch (const UsageError& e) {
        err << "qha: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "qha: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnboundedSymbol& e) {
        err << "qha: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "qha: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const Json::exception& e) {
        err << "qha: malformed JSON input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        report.error = {{"kind", e.kind()}, {"message", e.what()}};
        return finish(kExitNumerical);
    }
    return finish(kExitOk);
}

}  // namespace qha::cli
