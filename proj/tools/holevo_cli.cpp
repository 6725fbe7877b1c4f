#include <cstddef>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>

#include "CLI11.hpp"

#include <holevo/holevo.hpp>

namespace {

struct SweepFlags {
    double alpha_sq_min = 0.0;
    double alpha_sq_max = 0.0;
    std::size_t points = 51;
    std::string scale = "linear";
    unsigned jobs = 0;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("--alpha-sq-min", f.alpha_sq_min, "Smallest |alpha|^2 in the sweep")
        ->required();
    cmd->add_option("--alpha-sq-max", f.alpha_sq_max, "Largest |alpha|^2 in the sweep")
        ->required();
    cmd->add_option("--points", f.points, "Number of sweep points")->capture_default_str();
    cmd->add_option("--scale", f.scale, "Grid spacing in |alpha|^2")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "Worker threads (0 = all available cores)")
        ->capture_default_str();
}

holevo::SweepSpec to_spec(holevo::SweepKind kind, std::size_t M, const SweepFlags& f) {
    holevo::SweepSpec spec;
    spec.kind = kind;
    spec.M = M;
    spec.alpha_sq_min = f.alpha_sq_min;
    spec.alpha_sq_max = f.alpha_sq_max;
    spec.points = f.points;
    spec.scale = f.scale == "log" ? holevo::SweepScale::LOG : holevo::SweepScale::LINEAR;
    spec.jobs = f.jobs;
    return spec;
}

// Returns the sink for --out: the named file, or stdout when empty.
std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw holevo::ValidationError("cannot open output file: " + path);
    return file;
}

void render_custom(const holevo::CapacityResult& r, std::ostream& out) {
    using holevo::detail::csv_number;
    out << "capacity_bits = " << csv_number(r.capacity_bits) << '\n';
    out << "optimal_prior =";
    for (std::size_t i = 0; i < r.optimal_prior.size(); ++i)
        out << ' ' << csv_number(r.optimal_prior[i]);
    out << '\n';
    out << "eigenvalues =";
    for (double l : r.optimal_eigenvalues) out << ' ' << csv_number(l);
    out << '\n';
    out << "kkt_residual_bits = " << csv_number(r.first_order_residual) << '\n';
    out << "iterations = " << r.iterations << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holevo capacity of pure coherent-state constellations"};
    app.require_subcommand(1);
    app.footer("CSV columns:\n"
               "  psk:    alpha_sq,capacity_bits,iterations\n"
               "  ask3:   alpha_sq,capacity_bits,xi1,iterations\n"
               "  qam16:  alpha_sq,capacity_bits,xi1,xi2,xi3,iterations\n"
               "Values carry 12 significant digits; rows ascend in alpha_sq.\n"
               "Exit codes: 0 success, 2 usage error, 3 invalid input, 4 no convergence.");

    SweepFlags psk_flags, ask3_flags, qam16_flags;
    std::size_t psk_M = 2;
    std::string psk_out, ask3_out, qam16_out, custom_out, threshold_out;

    CLI::App* psk = app.add_subcommand("psk", "Capacity sweep for M-ary PSK (closed form)");
    psk->add_option("--M", psk_M, "Constellation order")->required()->check(CLI::PositiveNumber);
    add_sweep_flags(psk, psk_flags);
    psk->add_option("--out", psk_out, "Output file (default: stdout)");

    CLI::App* ask3 = app.add_subcommand("ask3", "Capacity sweep for the 3-state amplitude set");
    add_sweep_flags(ask3, ask3_flags);
    ask3->add_option("--out", ask3_out, "Output file (default: stdout)");

    CLI::App* qam16 = app.add_subcommand("qam16", "Capacity sweep for 16QAM");
    add_sweep_flags(qam16, qam16_flags);
    qam16->add_option("--out", qam16_out, "Output file (default: stdout)");

    std::string gram_path;
    CLI::App* custom = app.add_subcommand(
        "custom", "Capacity of an arbitrary pure-state ensemble given its Gram matrix.\n"
                  "Gram file: first line M, then M lines of M whitespace-separated\n"
                  "complex entries formatted a+bi; # starts a comment.");
    custom->add_option("--gram", gram_path, "Gram matrix file")->required();
    custom->add_option("--out", custom_out, "Output file (default: stdout)");

    std::string th_kind, th_param;
    CLI::App* threshold =
        app.add_subcommand("threshold", "Bisection-locate where a reduced prior parameter "
                                        "activates (exceeds 1e-4 at the optimum)");
    threshold->add_option("--kind", th_kind, "Constellation family")
        ->required()
        ->check(CLI::IsMember({"ask3", "qam16"}));
    threshold->add_option("--param", th_param, "Reduced parameter to watch")
        ->required()
        ->check(CLI::IsMember({"xi1", "xi2"}));
    threshold->add_option("--out", threshold_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::ofstream file;
        if (*psk) {
            run_sweep(to_spec(holevo::SweepKind::PSK, psk_M, psk_flags),
                      open_sink(psk_out, file));
        } else if (*ask3) {
            run_sweep(to_spec(holevo::SweepKind::ASK3, 3, ask3_flags),
                      open_sink(ask3_out, file));
        } else if (*qam16) {
            run_sweep(to_spec(holevo::SweepKind::QAM16, 16, qam16_flags),
                      open_sink(qam16_out, file));
        } else if (*custom) {
            std::ifstream in(gram_path);
            if (!in) throw holevo::ValidationError("cannot open gram file: " + gram_path);
            const holevo::GramMatrix g = holevo::parse_gram(in);
            render_custom(holevo::generic_capacity(g), open_sink(custom_out, file));
        } else if (*threshold) {
            const holevo::ThresholdResult r = holevo::run_threshold(
                th_kind == "ask3" ? holevo::SweepKind::ASK3 : holevo::SweepKind::QAM16,
                th_param == "xi1" ? holevo::ThresholdParam::XI1 : holevo::ThresholdParam::XI2);
            std::ostream& out = open_sink(threshold_out, file);
            out << "threshold_alpha_sq = " << holevo::detail::csv_number(r.alpha_sq)
                << " (bracket width " << holevo::detail::csv_number(r.width) << ", "
                << r.evaluations << " evaluations)\n";
        }
    } catch (const holevo::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const holevo::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
