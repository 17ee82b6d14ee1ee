#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamloop/report.hpp"

namespace {

int emit(const hamloop::report::json& doc, const std::string& format, const std::string& out) {
    const std::string text =
        format == "json" ? doc.dump(2) + "\n" : hamloop::report::render_table(doc);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(out);
        if (!file) {
            std::cerr << "cannot open output file: " << out << "\n";
            return 2;
        }
        file << text;
    }
    return doc.at("pass").get<bool>() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian loop invariant calculator"};
    app.require_subcommand(1);
    app.fallthrough(); // allow global options like --format after the subcommand

    std::string format = "table", out;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));
    app.add_option("--out", out, "Write the report to PATH instead of standard output");

    hamloop::geom::QuadratureSpec spec;
    app.add_option("--gauss-order", spec.gauss_order, "Gauss-Legendre order")->check(CLI::PositiveNumber);
    app.add_option("--circle-samples", spec.circle_samples, "Initial circle sample count")
        ->check(CLI::PositiveNumber);

    double epsilon_hat = 0.2;
    auto* sphere = app.add_subcommand("sphere", "Rotation loop on the two-sphere");
    sphere->add_option("--epsilon-hat", epsilon_hat, "Cap overlap half-width");

    int torus_n = 1;
    unsigned seed = 1;
    auto* torus = app.add_subcommand("torus", "Seeded reparameterized autonomous loop on a torus");
    torus->add_option("--n", torus_n, "Half-dimension")->check(CLI::Range(1, 4));
    torus->add_option("--seed", seed, "Hamiltonian generator seed");

    int k = 1;
    std::string tau = "3", mu = "1";
    std::vector<double> ladder = {0.05, 0.025, 0.0125};
    bool hirzebruch_default_spec = true;
    auto* hirzebruch = app.add_subcommand("hirzebruch", "Translation loops on a Hirzebruch surface");
    hirzebruch->add_option("--k", k, "Twisting integer")->check(CLI::PositiveNumber);
    hirzebruch->add_option("--tau", tau, "Long edge (rational, \"p/q\")");
    hirzebruch->add_option("--mu", mu, "Height (rational, \"p/q\")");
    hirzebruch->add_option("--ladder", ladder, "Decreasing epsilon ladder");

    std::string chern_scenario = "sphere";
    auto* chern = app.add_subcommand("chern", "Chern pairing from transition phases");
    chern->add_option("--scenario", chern_scenario, "Scenario name")
        ->check(CLI::IsMember({"sphere", "hirzebruch"}));

    auto* verify = app.add_subcommand("verify-all", "Run every golden check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*sphere) return emit(hamloop::report::sphere_document(epsilon_hat, spec), format, out);
        if (*torus) return emit(hamloop::report::torus_document(torus_n, seed, spec), format, out);
        if (*hirzebruch) {
            hamloop::scenarios::HirzebruchParams params{k, hamloop::toric::parse_rational(tau),
                                                        hamloop::toric::parse_rational(mu)};
            // the ladder default quadrature balances accuracy against runtime
            hamloop::geom::QuadratureSpec ladder_spec{8, 1024, 12, 1};
            if (!hirzebruch_default_spec || spec.gauss_order != 16 || spec.circle_samples != 2048)
                ladder_spec = spec;
            return emit(hamloop::report::hirzebruch_document(params, ladder, ladder_spec), format,
                        out);
        }
        if (*chern) return emit(hamloop::report::chern_document(chern_scenario, spec), format, out);
        if (*verify) return emit(hamloop::report::verify_document(), format, out);
    } catch (const hamloop::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
