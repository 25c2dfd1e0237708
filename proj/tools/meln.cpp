#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meln/analytic.hpp"
#include "meln/assembler.hpp"
#include "meln/errors.hpp"
#include "meln/geometry.hpp"
#include "meln/reduction.hpp"
#include "meln/report.hpp"
#include "meln/simulator.hpp"
#include "meln/suites.hpp"
#include "meln/zeros.hpp"

namespace {

using meln::Rat;
using nlohmann::ordered_json;

ordered_json load_config(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw meln::UsageError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return ordered_json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw meln::ParseError("config " + path + ": " + e.what());
    }
}

template <typename T>
void cfg_override(const CLI::App* sub, const std::string& flag, const ordered_json& cfg,
                  const char* key, T& target) {
    if (sub->count(flag) == 0 && cfg.contains(key)) target = cfg.at(key).get<T>();
}

// Source of the perturbation spec shared by melnikov/zeros/simulate/sweep.
struct SpecSource {
    std::string spec_file;
    bool one_zero = false;
    int n = -1;
    unsigned long long seed = 1;
    bool symmetric = false;

    void add_flags(CLI::App* sub) {
        sub->add_option("--spec", spec_file, "JSON spec file");
        sub->add_flag("--one-zero", one_zero, "use the built-in spec with a simple zero at -1/2");
        sub->add_option("--n", n, "random spec: total degree");
        sub->add_option("--seed", seed, "random spec: 64-bit seed");
        sub->add_flag("--symmetric", symmetric, "random spec: identical half-plane tables");
    }
    void from_config(const CLI::App* sub, const ordered_json& cfg) {
        cfg_override(sub, "--spec", cfg, "spec_file", spec_file);
        cfg_override(sub, "--one-zero", cfg, "one_zero", one_zero);
        cfg_override(sub, "--n", cfg, "n", n);
        cfg_override(sub, "--seed", cfg, "seed", seed);
        cfg_override(sub, "--symmetric", cfg, "symmetric", symmetric);
    }
    meln::PerturbationSpec resolve(const ordered_json& cfg) const {
        if (one_zero) return meln::one_zero_spec();
        if (!spec_file.empty()) return meln::load_spec(spec_file);
        if (cfg.contains("spec")) return meln::spec_from_json_text(cfg.at("spec").dump());
        if (n >= 0) return meln::random_spec(n, seed, symmetric);
        throw meln::UsageError(
            "no spec source: pass --spec, --one-zero, or --n/--seed (or config keys)");
    }
    ordered_json describe(const ordered_json& cfg) const {
        ordered_json d;
        if (one_zero)
            d["source"] = "one-zero";
        else if (!spec_file.empty())
            d["source"] = "file:" + spec_file;
        else if (cfg.contains("spec"))
            d["source"] = "config-inline";
        else {
            d["source"] = "random";
            d["n"] = n;
            d["seed"] = seed;
            d["symmetric"] = symmetric;
        }
        return d;
    }
};

void ensure_parent_dir(const std::string& out_path) {
    const std::filesystem::path parent = std::filesystem::path(out_path).parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw meln::UsageError("cannot create directory " + parent.string() + ": " + ec.message());
}

void emit(const ordered_json& doc, const std::string& out_path) {
    const std::string text = meln::report_text(doc);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        ensure_parent_dir(out_path);
        meln::write_text_file(out_path, text);
    }
}

ordered_json spec_json(const meln::PerturbationSpec& spec) {
    return ordered_json::parse(meln::spec_to_json(spec));
}

ordered_json form_json(const meln::MelnikovForm& form) {
    ordered_json f;
    f["n"] = form.n;
    f["power"] = form.power;
    f["alpha"] = form.alpha.coeff_text();
    f["beta"] = form.beta.coeff_text();
    f["gamma"] = form.gamma.coeff_text();
    f["delta"] = form.delta.coeff_text();
    ordered_json pretty;
    pretty["I01"] = form.coefficient(0).display();
    pretty["I11"] = form.coefficient(1).display();
    pretty["I20"] = form.coefficient(2).display();
    pretty["I02"] = form.coefficient(3).display();
    f["coefficients"] = pretty;
    return f;
}

ordered_json zero_report_json(const meln::ZeroReport& rep, const meln::BoundCheck& bc) {
    ordered_json r;
    r["count_simple"] = rep.count_simple;
    r["flagged"] = rep.flagged();
    r["grid_size"] = rep.grid_size;
    ordered_json brackets = ordered_json::array();
    for (const meln::ZeroBracket& b : rep.brackets) {
        ordered_json bj;
        bj["lo"] = meln::float17(b.lo);
        bj["hi"] = meln::float17(b.hi);
        bj["refined_root"] = meln::float17(b.refined_root);
        bj["kind"] = (b.kind == meln::BracketKind::kSimple) ? "simple" : "flagged_tangency";
        brackets.push_back(bj);
    }
    r["brackets"] = brackets;
    ordered_json bound;
    bound["bound"] = bc.bound;
    bound["effective_count"] = bc.effective_count;
    bound["pass"] = bc.pass;
    r["bound_check"] = bound;
    return r;
}

int run_reduce(int i, int j, const std::string& format) {
    const meln::ReductionResult res = meln::reduce({i, j});
    const char* names[4] = {"I01", "I11", "I20", "I02"};
    const meln::RatFunc* coeffs[4] = {&res.combo.c01, &res.combo.c11, &res.combo.c20,
                                      &res.combo.c02};
    std::string line;
    for (int k = 0; k < 4; ++k) {
        if (coeffs[k]->is_zero()) continue;
        if (!line.empty()) line += "  +  ";
        line += (format == "coeff" ? coeffs[k]->coeff_text() : coeffs[k]->display()) + " * " +
                names[k];
    }
    if (line.empty()) line = "0";
    std::cout << "I(" << i << "," << j << ") = " << line << "\n";
    std::cout << "trace:\n";
    for (const meln::TraceStep& s : res.trace.steps)
        std::cout << "  (" << s.index.i << "," << s.index.j << ") " << s.rule << "\n";
    return 0;
}

int run_verify(const std::string& suite, const std::string& out_path) {
    ordered_json cfg;
    cfg["suite"] = suite;
    ordered_json doc = meln::report_envelope("verify", cfg);
    const ordered_json result = meln::run_suite(suite);
    doc["result"] = result;
    emit(doc, out_path);
    int passed = 0, total = 0;
    for (const auto& c : result.at("checks")) {
        ++total;
        if (c.at("pass").get<bool>()) ++passed;
    }
    std::cerr << "suite " << suite << ": " << (result.at("pass").get<bool>() ? "PASS" : "FAIL")
              << " (" << passed << "/" << total << " checks)\n";
    return result.at("pass").get<bool>() ? 0 : 1;
}

int run_melnikov(const SpecSource& src, const ordered_json& cfg, int grid, double tol, int samples,
                 const std::string& out_dir, bool form_only) {
    const meln::PerturbationSpec spec = src.resolve(cfg);
    const meln::MelnikovForm form = meln::assemble_M(spec);

    ordered_json eff;
    eff["spec"] = src.describe(cfg);
    eff["grid"] = grid;
    eff["tol"] = meln::float17(tol);
    eff["samples"] = samples;

    ordered_json zeros_doc = meln::report_envelope("melnikov", eff);
    std::string prefix = out_dir.empty() ? "." : out_dir;
    prefix += "/melnikov_";

    if (!form_only) {
        ordered_json form_doc = meln::report_envelope("melnikov", eff);
        form_doc["result"]["spec"] = spec_json(spec);
        form_doc["result"]["form"] = form_json(form);
        ensure_parent_dir(prefix + "form.json");
        meln::write_text_file(prefix + "form.json", meln::report_text(form_doc));
    }

    try {
        const meln::ZeroReport rep = meln::count_zeros(form, grid, tol);
        const meln::BoundCheck bc = meln::bound_check(spec, rep);
        zeros_doc["result"] = zero_report_json(rep, bc);
        std::ostringstream csv;
        meln::melnikov_csv(form, samples, csv);
        if (!form_only) meln::write_text_file(prefix + "curve.csv", csv.str());
        emit(zeros_doc, form_only ? "" : prefix + "zeros.json");
        std::cerr << "zeros: " << rep.count_simple << " simple, " << rep.flagged()
                  << " flagged; bound " << bc.bound << " -> " << (bc.pass ? "PASS" : "FAIL")
                  << "\n";
        return bc.pass ? 0 : 1;
    } catch (const meln::DegenerateForm& e) {
        zeros_doc["result"]["degenerate"] = true;
        zeros_doc["result"]["note"] = std::string(e.what());
        emit(zeros_doc, form_only ? "" : prefix + "zeros.json");
        std::cerr << "degenerate (identically zero) form; nothing to count\n";
        return 0;
    }
}

int run_simulate(const SpecSource& src, const ordered_json& cfg, const meln::FlowConfig& fc,
                 int section_grid, double h_lo, double h_hi, const std::string& out_dir) {
    if (section_grid < 2) throw meln::UsageError("--section-grid must be >= 2");
    if (!(h_lo < h_hi)) throw meln::UsageError("--h-lo must be below --h-hi");
    const meln::PerturbationSpec spec = src.resolve(cfg);

    ordered_json eff;
    eff["spec"] = src.describe(cfg);
    eff["epsilon"] = meln::float17(fc.epsilon);
    eff["rtol"] = meln::float17(fc.rtol);
    eff["atol"] = meln::float17(fc.atol);
    eff["event_tol"] = meln::float17(fc.event_tol);
    eff["max_steps"] = fc.max_steps;
    eff["section_grid"] = section_grid;
    eff["h_lo"] = meln::float17(h_lo);
    eff["h_hi"] = meln::float17(h_hi);

    std::ostringstream csv;
    csv << "x0,h0,d,transit_time\n";
    for (int k = 0; k < section_grid; ++k) {
        const double h = h_lo + (h_hi - h_lo) * k / (section_grid - 1);
        const double x0 = meln::section_from_h(h);
        const meln::DisplacementSample s = meln::poincare_displacement(x0, spec, fc);
        csv << meln::float17(s.x0) << "," << meln::float17(s.h0) << "," << meln::float17(s.d)
            << "," << meln::float17(s.transit_time) << "\n";
    }
    const std::vector<meln::LimitCycle> cycles =
        meln::find_limit_cycles(spec, fc, section_grid, h_lo, h_hi);

    ordered_json doc = meln::report_envelope("simulate", eff);
    ordered_json list = ordered_json::array();
    for (const meln::LimitCycle& c : cycles) {
        ordered_json cj;
        cj["x0"] = meln::float17(c.x0);
        cj["h"] = meln::float17(c.h);
        cj["residual"] = meln::float17(c.residual);
        list.push_back(cj);
    }
    doc["result"]["cycles"] = list;
    doc["result"]["count"] = static_cast<int>(cycles.size());

    if (out_dir.empty()) {
        emit(doc, "");
    } else {
        ensure_parent_dir(out_dir + "/displacement.csv");
        meln::write_text_file(out_dir + "/displacement.csv", csv.str());
        meln::write_text_file(out_dir + "/cycles.json", meln::report_text(doc));
    }
    std::cerr << "detected " << cycles.size() << " limit cycle(s)\n";
    return 0;
}

int run_sweep(int n_select, int count, unsigned long long seed0, int grid, double tol,
              const std::string& out_path) {
    ordered_json eff;
    eff["n"] = n_select;
    eff["count"] = count;
    eff["seed"] = seed0;
    eff["grid"] = grid;
    eff["tol"] = meln::float17(tol);
    ordered_json doc = meln::report_envelope("sweep", eff);
    ordered_json per_n = ordered_json::array();
    int violations = 0;
    const int n_lo = (n_select > 0) ? n_select : 2;
    const int n_hi = (n_select > 0) ? n_select : 9;
    for (int n = n_lo; n <= n_hi; ++n) {
        int worst_disc = 0, worst_symm = 0, bad = 0;
        for (int k = 0; k < count; ++k) {
            const bool symmetric = (k % 2 == 1);
            const meln::PerturbationSpec spec =
                meln::random_spec(n, seed0 + 1000ull * n + k, symmetric);
            const meln::ZeroReport rep = meln::count_zeros(meln::assemble_M(spec), grid, tol);
            const meln::BoundCheck bc = meln::bound_check(spec, rep);
            (symmetric ? worst_symm : worst_disc) =
                std::max(symmetric ? worst_symm : worst_disc, bc.effective_count);
            if (!bc.pass) ++bad;
        }
        ordered_json row;
        row["n"] = n;
        row["specs"] = count;
        row["bound_discontinuous"] = meln::theorem_bound(n, false);
        row["bound_symmetric"] = meln::theorem_bound(n, true);
        row["max_count_discontinuous"] = worst_disc;
        row["max_count_symmetric"] = worst_symm;
        row["violations"] = bad;
        per_n.push_back(row);
        violations += bad;
        std::cerr << "n=" << n << ": max " << worst_disc << " (disc) / " << worst_symm
                  << " (symm), violations " << bad << "\n";
    }
    doc["result"]["per_degree"] = per_n;
    doc["result"]["violations"] = violations;
    emit(doc, out_path);
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact generator-basis reduction, first-order displacement assembly, zero counting, "
        "and piecewise-flow simulation for a perturbed cubic center"};
    app.require_subcommand(1);

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce one line integral to the generators");
    int opt_i = 0, opt_j = 0;
    std::string format = "display";
    reduce_cmd->add_option("--i", opt_i, "index i (>= -1)")->required();
    reduce_cmd->add_option("--j", opt_j, "index j (>= 0)")->required();
    reduce_cmd->add_option("--format", format, "display | coeff")
        ->check(CLI::IsMember({"display", "coeff"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite, verify_out;
    verify_cmd->add_option("--suite", suite, "identities|pf|riccati|table-n8|degrees|end2end")
        ->required()
        ->check(CLI::IsMember(meln::suite_names()));
    verify_cmd->add_option("--out", verify_out, "write the JSON report here (default stdout)");

    // melnikov / zeros
    auto* meln_cmd = app.add_subcommand("melnikov", "assemble M, count zeros, check the bound");
    auto* zeros_cmd = app.add_subcommand("zeros", "zero report only, to stdout");
    SpecSource meln_src, zeros_src, sim_src;
    std::string meln_config, zeros_config, sim_config;
    int grid = 64, samples = 512;
    double tol = 1e-13;
    std::string meln_out = ".";
    for (auto [sub, srcp, cfgp] : {std::tuple{meln_cmd, &meln_src, &meln_config},
                                   std::tuple{zeros_cmd, &zeros_src, &zeros_config}}) {
        sub->add_option("--config", *cfgp, "JSON config file (flags override)");
        srcp->add_flags(sub);
        sub->add_option("--grid", grid, "initial scan grid (>= 64)");
        sub->add_option("--tol", tol, "bisection width target");
    }
    meln_cmd->add_option("--samples", samples, "CSV sample count");
    meln_cmd->add_option("--out", meln_out, "output directory");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "sweep the section and detect limit cycles");
    sim_cmd->add_option("--config", sim_config, "JSON config file (flags override)");
    sim_src.add_flags(sim_cmd);
    meln::FlowConfig fc;
    int section_grid = 33;
    double h_lo = -0.95, h_hi = -0.05;
    std::string sim_out;
    sim_cmd->add_option("--epsilon", fc.epsilon, "perturbation strength (|eps| <= 0.05)");
    sim_cmd->add_option("--rtol", fc.rtol, "relative step tolerance");
    sim_cmd->add_option("--atol", fc.atol, "absolute step tolerance");
    sim_cmd->add_option("--event-tol", fc.event_tol, "crossing location tolerance");
    sim_cmd->add_option("--max-steps", fc.max_steps, "step limit per transit");
    sim_cmd->add_option("--section-grid", section_grid, "section sample count");
    sim_cmd->add_option("--h-lo", h_lo, "left end of the swept energy range");
    sim_cmd->add_option("--h-hi", h_hi, "right end of the swept energy range");
    sim_cmd->add_option("--out", sim_out, "output directory (default stdout, no CSV)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "bound harness over many random specs");
    int sweep_n = 0, sweep_count = 200;
    unsigned long long sweep_seed = 1;
    int sweep_grid = 64;
    double sweep_tol = 1e-13;
    std::string sweep_out;
    sweep_cmd->add_option("--n", sweep_n, "one total degree (default: all of 2..9)");
    sweep_cmd->add_option("--count", sweep_count, "specs per degree");
    sweep_cmd->add_option("--seed", sweep_seed, "base seed");
    sweep_cmd->add_option("--grid", sweep_grid, "initial scan grid");
    sweep_cmd->add_option("--tol", sweep_tol, "bisection width target");
    sweep_cmd->add_option("--out", sweep_out, "write the JSON report here (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help stays 0; every parse failure is a usage error
    }

    try {
        if (reduce_cmd->parsed()) return run_reduce(opt_i, opt_j, format);
        if (verify_cmd->parsed()) return run_verify(suite, verify_out);
        if (meln_cmd->parsed()) {
            const ordered_json cfg = load_config(meln_config);
            meln_src.from_config(meln_cmd, cfg);
            cfg_override(meln_cmd, "--grid", cfg, "grid", grid);
            cfg_override(meln_cmd, "--tol", cfg, "tol", tol);
            cfg_override(meln_cmd, "--samples", cfg, "samples", samples);
            cfg_override(meln_cmd, "--out", cfg, "out", meln_out);
            return run_melnikov(meln_src, cfg, grid, tol, samples, meln_out, false);
        }
        if (zeros_cmd->parsed()) {
            const ordered_json cfg = load_config(zeros_config);
            zeros_src.from_config(zeros_cmd, cfg);
            cfg_override(zeros_cmd, "--grid", cfg, "grid", grid);
            cfg_override(zeros_cmd, "--tol", cfg, "tol", tol);
            return run_melnikov(zeros_src, cfg, grid, tol, samples, "", true);
        }
        if (sim_cmd->parsed()) {
            const ordered_json cfg = load_config(sim_config);
            sim_src.from_config(sim_cmd, cfg);
            cfg_override(sim_cmd, "--epsilon", cfg, "epsilon", fc.epsilon);
            cfg_override(sim_cmd, "--rtol", cfg, "rtol", fc.rtol);
            cfg_override(sim_cmd, "--atol", cfg, "atol", fc.atol);
            cfg_override(sim_cmd, "--event-tol", cfg, "event_tol", fc.event_tol);
            cfg_override(sim_cmd, "--max-steps", cfg, "max_steps", fc.max_steps);
            cfg_override(sim_cmd, "--section-grid", cfg, "section_grid", section_grid);
            cfg_override(sim_cmd, "--h-lo", cfg, "h_lo", h_lo);
            cfg_override(sim_cmd, "--h-hi", cfg, "h_hi", h_hi);
            cfg_override(sim_cmd, "--out", cfg, "out", sim_out);
            return run_simulate(sim_src, cfg, fc, section_grid, h_lo, h_hi, sim_out);
        }
        if (sweep_cmd->parsed())
            return run_sweep(sweep_n, sweep_count, sweep_seed, sweep_grid, sweep_tol, sweep_out);
    } catch (const meln::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
