#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "common.hpp"
#include "dynamics.hpp"
#include "jacobi.hpp"
#include "qracah.hpp"
#include "serialize.hpp"
#include "spectrum.hpp"
#include "synthesis.hpp"
#include "transforms.hpp"
#include "version.hpp"

namespace cradle {

struct design_request {
    int big_n = 1;
    std::int64_t r = 2;
    std::int64_t k0 = 0;
    std::int64_t k1 = 1;
    boundary_kind boundary = boundary_kind::free_free;
    double omega = 1.0;
    double m0 = 1.0;
    double pbar = 1.0;
    double alpha = 0.5;
    std::vector<int> surgery;  // pair-start indices, applied in order; each
                               // index refers to the object surgered so far
};

inline std::string boundary_name(boundary_kind b) {
    return b == boundary_kind::fixed_fixed ? "fixed-fixed" : "free-free";
}

inline boundary_kind boundary_from_name(const std::string& s) {
    if (s == "fixed-fixed" || s == "fixed") return boundary_kind::fixed_fixed;
    if (s == "free-free" || s == "free") return boundary_kind::free_free;
    throw validation_error("boundary", "unknown boundary '" + s + "'");
}

// exact, locale-independent request encoding; hashed into provenance
inline std::string canonical_request(const design_request& rq) {
    std::string s = "N=" + std::to_string(rq.big_n) + ";r=" + std::to_string(rq.r) +
                    ";k0=" + std::to_string(rq.k0) + ";k1=" + std::to_string(rq.k1) +
                    ";boundary=" + boundary_name(rq.boundary) +
                    ";omega=" + hexfloat(rq.omega) + ";m0=" + hexfloat(rq.m0) +
                    ";pbar=" + hexfloat(rq.pbar) + ";alpha=" + hexfloat(rq.alpha) +
                    ";surgery=";
    for (std::size_t i = 0; i < rq.surgery.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(rq.surgery[i]);
    }
    return s;
}

struct built_design {
    spectral_design design;            // as requested, before surgery
    jacobi_matrix jac;                 // realized operator (post-surgery, undeformed)
    eigen_system modes;                // its analytic eigensystem
    chain_spec chain;                  // final chain, deformation applied
    weight_table table;                // realized measure (weights match modes)
    std::vector<double> nodes;         // realized spectral nodes
    std::vector<std::int64_t> kept_k;  // eigenintegers surviving surgery
    std::vector<int> surgery;
    double alpha = 0.5;
    double pbar = 1.0;
    bool conditioning_warning = false;
};

inline built_design build_from_request(const design_request& rq) {
    if (!(rq.alpha > 0.0 && rq.alpha < 1.0))
        throw validation_error("alpha-range", "alpha must lie strictly inside (0,1)");
    if (!(rq.m0 > 0.0) || !std::isfinite(rq.m0))
        throw validation_error("m0-range", "m0 must be positive");
    if (!(rq.pbar > 0.0) || !std::isfinite(rq.pbar))
        throw validation_error("pbar-range", "pbar must be positive");

    built_design bd;
    bd.design = make_design(rq.r, rq.k0, rq.k1, rq.big_n, rq.boundary, rq.omega);
    bd.alpha = rq.alpha;
    bd.pbar = rq.pbar;
    bd.surgery = rq.surgery;

    jacobi_matrix jm = build_jacobi(bd.design);
    weight_table wt = make_weight_table(params_of(bd.design), bd.design.boundary);
    bd.conditioning_warning = wt.conditioning_warning;
    std::vector<double> nodes = eigenvalues(bd.design);
    std::vector<std::int64_t> kk = bd.design.kseq;

    for (int k : rq.surgery) {
        if (bd.design.boundary == boundary_kind::free_free && k == 0)
            throw validation_error("surgery-zero-mode",
                                   "removing the zero mode leaves no free-free chain");
        surgery_result sr = surgery_remove_pair(wt, nodes, jm, k);
        jm = std::move(sr.matrix);
        nodes = sr.table.grid;
        wt.weights = std::move(sr.table.weights);
        wt.grid = nodes;
        std::vector<std::int64_t> kk2;
        kk2.reserve(sr.kept.size());
        for (int idx : sr.kept) kk2.push_back(kk[idx]);
        kk = std::move(kk2);
    }

    bd.kept_k = std::move(kk);
    bd.nodes = nodes;
    bd.modes = eigensystem_from_nodes(jm, nodes, wt.weights);
    if (bd.design.boundary == boundary_kind::fixed_fixed)
        bd.chain = synthesize_fixed_fixed(bd.modes, jm, rq.m0, rq.omega);
    else if (rq.surgery.empty())
        bd.chain = synthesize_free_free(jm, rq.m0, rq.omega);
    else
        bd.chain = synthesize_free_free_ladder(jm, rq.m0, rq.omega);
    bd.jac = std::move(jm);
    bd.table = std::move(wt);
    if (bd.alpha != 0.5) bd.chain = deform_chain(bd.chain, bd.alpha);
    return bd;
}

inline nlohmann::json chain_document(const built_design& bd, const design_request& rq) {
    nlohmann::json j;
    j["version"] = 1;
    j["boundary"] = boundary_name(bd.chain.boundary);
    j["masses"] = bd.chain.masses;
    j["springs"] = bd.chain.springs;
    nlohmann::json dj;
    dj["N"] = rq.big_n;
    dj["r"] = rq.r;
    dj["k0"] = rq.k0;
    dj["k1"] = rq.k1;
    dj["omega"] = rq.omega;
    dj["alpha"] = bd.alpha;
    if (!bd.surgery.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (int k : bd.surgery) arr.push_back(nlohmann::json::array({k, k + 1}));
        dj["surgery"] = arr;
    }
    j["design"] = dj;
    nlohmann::json dv;
    dv["q"] = bd.design.q;
    dv["gamma"] = bd.design.gamma;
    dv["Omega"] = bd.design.big_omega;
    dv["kseq"] = bd.kept_k;
    j["derived"] = dv;
    nlohmann::json pv;
    pv["tool"] = std::string(tool_name) + " " + tool_version;
    pv["input_hash"] = hex64(fnv1a64(canonical_request(rq)));
    j["provenance"] = pv;
    return j;
}

struct stored_document {
    design_request request;  // m0 recovered from masses[0]; pbar defaults to 1
    chain_spec chain;
    double q = 0.0;
    double gamma = 0.0;
    double big_omega = 0.0;
    std::vector<std::int64_t> kseq;
    std::string input_hash;
};

inline stored_document parse_chain_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw io_error(std::string("malformed chain document: ") + e.what());
    }
    stored_document sd;
    try {
        sd.chain.boundary = boundary_from_name(j.at("boundary").get<std::string>());
        sd.chain.masses = j.at("masses").get<std::vector<double>>();
        sd.chain.springs = j.at("springs").get<std::vector<double>>();
        const nlohmann::json& dj = j.at("design");
        sd.request.big_n = dj.at("N").get<int>();
        sd.request.r = dj.at("r").get<std::int64_t>();
        sd.request.k0 = dj.at("k0").get<std::int64_t>();
        sd.request.k1 = dj.at("k1").get<std::int64_t>();
        sd.request.omega = dj.at("omega").get<double>();
        sd.request.alpha = dj.at("alpha").get<double>();
        sd.request.boundary = sd.chain.boundary;
        if (dj.contains("surgery")) {
            for (const nlohmann::json& pr : dj.at("surgery")) {
                const int a = pr.at(0).get<int>();
                const int b = pr.at(1).get<int>();
                if (b != a + 1)
                    throw validation_error("surgery-pair", "surgery entries must be adjacent pairs");
                sd.request.surgery.push_back(a);
            }
        }
        const nlohmann::json& dv = j.at("derived");
        sd.q = dv.at("q").get<double>();
        sd.gamma = dv.at("gamma").get<double>();
        sd.big_omega = dv.at("Omega").get<double>();
        sd.kseq = dv.at("kseq").get<std::vector<std::int64_t>>();
        sd.input_hash = j.at("provenance").at("input_hash").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("incomplete chain document: ") + e.what());
    }
    sd.chain.alpha = sd.request.alpha;
    sd.chain.omega = sd.request.omega;
    require_positive_chain(sd.chain);
    if (!sd.chain.masses.empty()) sd.request.m0 = sd.chain.masses[0];
    return sd;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw io_error("write failed for '" + path + "'");
}

inline void emit_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-")
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        write_text_file(out_path, text);
}

namespace detail {

inline double max_relative_delta(const std::vector<double>& got,
                                 const std::vector<double>& want) {
    double scale = 0.0;
    for (double v : want) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    double d = 0.0;
    if (got.size() != want.size()) return 1.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        d = std::max(d, std::abs(got[i] - want[i]) / scale);
    return d;
}

inline double stored_chain_delta(const chain_spec& stored, const chain_spec& rebuilt) {
    return std::max(max_relative_delta(stored.masses, rebuilt.masses),
                    max_relative_delta(stored.springs, rebuilt.springs));
}

}  // namespace detail

inline void cmd_design(const design_request& rq, const std::string& out_path,
                       const std::string& format = "json") {
    if (format != "json")
        throw validation_error("format", "design emits json only");
    built_design bd = build_from_request(rq);
    if (bd.conditioning_warning)
        std::fprintf(stderr, "warning: grid weights span more than 14 orders of magnitude; "
                             "expect extreme mass ratios\n");
    emit_text(out_path, chain_document(bd, rq).dump(2) + "\n");
}

// rebuilds the design, checks the stored chain against it, then samples the
// exact mode evolution; columns are mass-weighted p, physical P, and energy
inline void cmd_simulate(const std::string& spec_path, const std::string& times_arg,
                         const std::string& out_path, const std::string& format = "csv") {
    if (format != "csv")
        throw validation_error("format", "simulate emits csv only");
    const stored_document sd = parse_chain_document(read_text_file(spec_path));
    const built_design bd = build_from_request(sd.request);
    const double delta = detail::stored_chain_delta(sd.chain, bd.chain);
    if (delta > 1e-7)
        throw verification_error("stored chain does not match its design parameters (delta " +
                                 csv_number(delta) + ")");
    if (sd.kseq != bd.kept_k)
        throw verification_error("stored eigeninteger list does not match the design");

    const double tstar = std::numbers::pi / sd.request.omega;
    std::vector<double> times;
    if (times_arg.empty() || times_arg == "auto") {
        for (int i = 0; i < 200; ++i)
            times.push_back(static_cast<double>(i) * tstar / 199.0);
        for (const revival_entry& e : make_revival_schedule(bd.design, bd.alpha))
            times.insert(times.end(), e.times.begin(), e.times.end());
        std::sort(times.begin(), times.end());
    } else {
        std::istringstream ss(times_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t pos = 0;
                const double t = std::stod(tok, &pos);
                if (pos != tok.size() || !std::isfinite(t) || t < 0.0)
                    throw validation_error("times", "bad sample time '" + tok + "'");
                times.push_back(t);
            } catch (const validation_error&) {
                throw;
            } catch (const std::exception&) {
                throw validation_error("times", "bad sample time '" + tok + "'");
            }
        }
        if (times.empty()) throw validation_error("times", "no sample times given");
    }

    const eigen_system es =
        bd.alpha == 0.5 ? bd.modes : deform_eigensystem(bd.modes, bd.alpha);
    const int n_top = static_cast<int>(es.values.size()) - 1;
    const std::vector<double> q0(n_top + 1, 0.0);
    std::vector<double> p0(n_top + 1, 0.0);
    p0[0] = 1.0;

    std::string out = "t";
    for (int i = 0; i <= n_top; ++i) out += ",p_" + std::to_string(i);
    for (int i = 0; i <= n_top; ++i) out += ",P_" + std::to_string(i);
    out += ",E\n";
    for (double t : times) {
        const trajectory_state st = evolve(es, q0, p0, t);
        out += csv_number(t);
        for (int i = 0; i <= n_top; ++i) out += "," + csv_number(st.pvec[i]);
        for (int i = 0; i <= n_top; ++i)
            out += "," + csv_number(std::sqrt(bd.chain.masses[i]) * st.pvec[i]);
        out += "," + csv_number(mode_energy(es, st.qvec, st.pvec)) + "\n";
    }
    emit_text(out_path, out);
}

inline void cmd_schedule(const std::string& spec_path, const std::string& out_path,
                         const std::string& format = "json") {
    if (format != "json")
        throw validation_error("format", "schedule emits json only");
    const stored_document sd = parse_chain_document(read_text_file(spec_path));
    const built_design bd = build_from_request(sd.request);
    const std::vector<revival_entry> sched = make_revival_schedule(bd.design, bd.alpha);
    if (sched.empty())
        throw verification_error("empty revival schedule; Z = r should always qualify");
    nlohmann::json j;
    j["tstar"] = std::numbers::pi / sd.request.omega;
    nlohmann::json entries = nlohmann::json::array();
    for (const revival_entry& e : sched) {
        nlohmann::json je;
        je["Z"] = e.z;
        je["conditions"] = e.condition_ids;
        je["times"] = e.times;
        nlohmann::json preds = nlohmann::json::array();
        for (std::size_t i = 0; i < e.predicted.size(); ++i) {
            nlohmann::json p;
            p["l"] = static_cast<std::int64_t>(i) + 1;
            p["p0"] = e.predicted[i].p0;
            p["pN"] = e.predicted[i].pn;
            preds.push_back(p);
        }
        je["predictions"] = preds;
        entries.push_back(je);
    }
    j["entries"] = entries;
    emit_text(out_path, j.dump(2) + "\n");
}

// full invariant sweep over a stored chain; returns pass/fail, never throws
// for check failures (only for unreadable/invalid input)
inline bool cmd_verify(const std::string& spec_path, const std::string& out_path) {
    const stored_document sd = parse_chain_document(read_text_file(spec_path));
    const built_design bd = build_from_request(sd.request);
    std::string rep;
    bool pass = true;
    const auto line = [&](const std::string& name, bool ok, const std::string& detail) {
        rep += "check " + name + ": " + detail + (ok ? " [PASS]" : " [FAIL]") + "\n";
        if (!ok) pass = false;
    };

    // structure: stored arrays against a fresh rebuild
    const double sdelta = detail::stored_chain_delta(sd.chain, bd.chain);
    const bool structure_ok = sdelta <= 1e-9;
    line("structure", structure_ok, "max relative delta " + csv_number(sdelta));

    // spectrum of the stored chain against the designed eigenvalues
    {
        const std::vector<double> got = chain_eigenvalues_numeric(sd.chain);
        std::vector<double> want(bd.kept_k.size());
        for (std::size_t n = 0; n < bd.kept_k.size(); ++n) {
            const double wk = sd.request.omega * static_cast<double>(bd.kept_k[n]);
            want[n] = wk * wk;
        }
        const double d = detail::max_relative_delta(got, want);
        line("spectrum", d <= 1e-8, "max relative delta " + csv_number(d));
    }

    // mirror symmetry of the stored chain (deformation breaks it by design)
    if (bd.alpha == 0.5) {
        const int n_top = chain_order(sd.chain);
        const std::vector<double> k = full_springs(sd.chain);
        double scale = 0.0, d = 0.0;
        for (int i = 0; i <= n_top; ++i) {
            scale = std::max(scale, sd.chain.masses[i]);
            d = std::max(d, std::abs(sd.chain.masses[i] - sd.chain.masses[n_top - i]));
        }
        for (int i = 0; i < static_cast<int>(k.size()); ++i) {
            scale = std::max(scale, k[i]);
            d = std::max(d, std::abs(k[i] - k[static_cast<int>(k.size()) - 1 - i]));
        }
        const double rel = d / scale;
        line("mirror", rel <= 1e-9, "max relative defect " + csv_number(rel));
    } else {
        rep += "note: mirror symmetry not expected (alpha != 1/2)\n";
    }

    // realized measure
    {
        double s = 0.0, wmin = 1.0;
        for (double w : bd.table.weights) {
            s += w;
            wmin = std::min(wmin, w);
        }
        line("weights", std::abs(s - 1.0) <= 1e-12 && wmin > 0.0,
             "sum deviation " + csv_number(std::abs(s - 1.0)));
    }

    // transfer at t*: certified analytically when the stored chain matches
    // the design; measured numerically on the stored arrays otherwise
    simulation_config cfg;
    cfg.omega = sd.request.omega;
    cfg.tstar = std::numbers::pi / sd.request.omega;
    if (bd.alpha == 0.5) {
        pst_report pr;
        std::string how;
        if (structure_ok) {
            cfg.kseq = bd.kept_k;
            pr = pst_fidelity(bd.modes, cfg);
            how = "analytic modes";
        } else {
            const eigen_system es = eigensystem_numeric(chain_to_jacobi(sd.chain));
            simulation_config fcfg = cfg;
            fcfg.kseq.clear();
            pr = pst_fidelity(es, fcfg);
            how = "numeric modes of the stored chain";
        }
        const double sign = bd.design.k0 % 2 ? -1.0 : 1.0;
        const double enddev = std::abs(pr.pn_over_pbar - sign);
        line("pst", enddev <= 1e-8 && pr.residual <= 1e-8,
             "via " + how + ": end deviation " + csv_number(enddev) + ", interior residual " +
                 csv_number(pr.residual));
    } else {
        rep += "note: no PST (alpha != 1/2); expected end split (|1-2a|, 2sqrt(a(1-a))) = (" +
               csv_number(std::abs(1.0 - 2.0 * bd.alpha)) + ", " +
               csv_number(2.0 * std::sqrt(bd.alpha * (1.0 - bd.alpha))) + ")\n";
    }

    // fractional revival amplitudes at every scheduled fraction
    {
        const eigen_system es =
            bd.alpha == 0.5 ? bd.modes : deform_eigensystem(bd.modes, bd.alpha);
        const int n_top = static_cast<int>(es.values.size()) - 1;
        double worst = 0.0;
        for (const revival_entry& e : make_revival_schedule(bd.design, bd.alpha)) {
            for (std::int64_t ell = 1; ell < e.z; ++ell) {
                const std::vector<double> p = momenta_at_fraction(es, bd.kept_k, ell, e.z);
                const revival_amplitudes& pred = e.predicted[static_cast<std::size_t>(ell) - 1];
                worst = std::max(worst, std::abs(p[0] - pred.p0));
                worst = std::max(worst, std::abs(p[n_top] - pred.pn));
                for (int i = 1; i < n_top; ++i) worst = std::max(worst, std::abs(p[i]));
            }
        }
        line("revival", worst <= 1e-8, "max amplitude deviation " + csv_number(worst));
    }

    rep += pass ? "VERIFY PASS\n" : "VERIFY FAIL\n";
    emit_text(out_path, rep);
    return pass;
}

}  // namespace cradle
