#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cradle/pipeline.hpp"

namespace {

// "k,k+1;k',k'+1;..." -> list of pair-start indices
std::vector<int> parse_surgery(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find(';', pos);
        const std::string item =
            text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        const std::size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw cradle::validation_error("surgery-format",
                                           "surgery pairs look like \"k,k+1;...\"");
        try {
            std::size_t used = 0;
            const int a = std::stoi(item.substr(0, comma), &used);
            if (used != comma)
                throw cradle::validation_error("surgery-format", "bad surgery index");
            const int b = std::stoi(item.substr(comma + 1), &used);
            if (used != item.size() - comma - 1)
                throw cradle::validation_error("surgery-format", "bad surgery index");
            if (b != a + 1)
                throw cradle::validation_error("surgery-pair",
                                               "only adjacent pairs can be removed");
            out.push_back(a);
        } catch (const cradle::validation_error&) {
            throw;
        } catch (const std::exception&) {
            throw cradle::validation_error("surgery-format", "bad surgery index in '" + item +
                                                                 "'");
        }
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"design, simulate, and verify mass-spring chains with perfect "
                 "state transfer and fractional revival"};
    app.set_version_flag("--version",
                         std::string(cradle::tool_name) + " " + cradle::tool_version);
    app.require_subcommand(1);

    int big_n = 1;
    std::int64_t r = 2, k0 = 0, k1 = 1;
    std::string boundary = "free-free";
    double omega = 1.0, m0 = 1.0, pbar = 1.0, alpha = 0.5;
    std::string surgery, out_path, format;
    std::string spec_path, times = "auto";

    CLI::App* cd = app.add_subcommand("design", "synthesize a chain and write its spec");
    cd->add_option("--N", big_n, "chain order (N+1 masses)")->required();
    cd->add_option("--r", r, "spectral recurrence integer, r >= 2")->required();
    cd->add_option("--k0", k0, "first eigeninteger");
    cd->add_option("--k1", k1, "second eigeninteger");
    cd->add_option("--boundary", boundary, "fixed-fixed | free-free");
    cd->add_option("--omega", omega, "time scale (t* = pi/omega)");
    cd->add_option("--m0", m0, "mass scale");
    cd->add_option("--pbar", pbar, "initial momentum amplitude");
    cd->add_option("--alpha", alpha, "deformation parameter in (0,1); 1/2 keeps PST");
    cd->add_option("--surgery", surgery, "adjacent spectral pairs to remove, \"k,k+1;...\"");
    cd->add_option("--out", out_path, "output path (default stdout)");
    cd->add_option("--format", format, "json");

    CLI::App* cs = app.add_subcommand("simulate", "sample the exact evolution to CSV");
    cs->add_option("spec", spec_path, "chain-spec file")->required();
    cs->add_option("--times", times, "comma-separated times, or \"auto\"");
    cs->add_option("--out", out_path, "output path (default stdout)");
    cs->add_option("--format", format, "csv");

    CLI::App* cc = app.add_subcommand("schedule", "revival times and predicted amplitudes");
    cc->add_option("spec", spec_path, "chain-spec file")->required();
    cc->add_option("--out", out_path, "output path (default stdout)");
    cc->add_option("--format", format, "json");

    CLI::App* cv = app.add_subcommand("verify", "run the invariant suite on a spec");
    cv->add_option("spec", spec_path, "chain-spec file")->required();
    cv->add_option("--out", out_path, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(cradle::exit_code::validation);
    }

    try {
        if (cd->parsed()) {
            cradle::design_request rq;
            rq.big_n = big_n;
            rq.r = r;
            rq.k0 = k0;
            rq.k1 = k1;
            rq.boundary = cradle::boundary_from_name(boundary);
            rq.omega = omega;
            rq.m0 = m0;
            rq.pbar = pbar;
            rq.alpha = alpha;
            rq.surgery = parse_surgery(surgery);
            cradle::cmd_design(rq, out_path, format.empty() ? "json" : format);
        } else if (cs->parsed()) {
            cradle::cmd_simulate(spec_path, times, out_path, format.empty() ? "csv" : format);
        } else if (cc->parsed()) {
            cradle::cmd_schedule(spec_path, out_path, format.empty() ? "json" : format);
        } else if (cv->parsed()) {
            if (!cradle::cmd_verify(spec_path, out_path))
                return static_cast<int>(cradle::exit_code::verification);
        }
    } catch (const cradle::validation_error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return static_cast<int>(cradle::exit_code::validation);
    } catch (const cradle::verification_error& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return static_cast<int>(cradle::exit_code::verification);
    } catch (const cradle::io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return static_cast<int>(cradle::exit_code::io);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(cradle::exit_code::validation);
    }
    return 0;
}
