#include "hamloop/report.hpp"

#include <cmath>
#include <sstream>

#include "hamloop/scenarios/sphere.hpp"
#include "hamloop/scenarios/torus.hpp"

namespace hamloop::report {

namespace {

double rel_err(double value, double target) {
    return std::abs(value - target) / std::max(1e-300, std::abs(target));
}

json expected_pair(const toric::ExactValue& exact, double numeric) {
    json j;
    j["exact"] = rational_to_json(exact);
    j["numeric"] = numeric;
    j["delta"] = numeric - toric::to_double(exact);
    return j;
}

} // namespace

json rational_to_json(const toric::ExactValue& v) {
    json j;
    j["num"] = boost::multiprecision::numerator(v).str();
    j["den"] = boost::multiprecision::denominator(v).str();
    j["approx"] = toric::to_double(v);
    return j;
}

toric::ExactValue rational_from_json(const json& j) {
    return toric::parse_rational(j.at("num").get<std::string>() + "/" +
                                 j.at("den").get<std::string>());
}

json report_to_json(const invariant::InvariantReport& rep) {
    json j;
    j["n"] = rep.n;
    j["charts"] = json::array();
    for (const auto& c : rep.chart_terms) {
        json cj;
        cj["id"] = c.chart_id;
        cj["maslov"] = c.maslov.index;
        cj["raw_winding"] = c.maslov.raw_winding;
        cj["residual"] = c.maslov.residual;
        cj["volume"] = c.volume;
        cj["contribution"] = c.contribution;
        j["charts"].push_back(cj);
    }
    j["pairs"] = json::array();
    for (const auto& p : rep.pair_terms) {
        json pj;
        pj["i"] = p.i;
        pj["k"] = p.k;
        pj["value"] = p.value;
        j["pairs"].push_back(pj);
    }
    j["total"] = rep.total;
    if (rep.error_estimate) j["error_estimate"] = *rep.error_estimate;
    return j;
}

json sphere_document(double epsilon_hat, const geom::QuadratureSpec& spec) {
    const auto sc = scenarios::make_sphere(epsilon_hat);
    const auto rep = invariant::compute_invariant(sc.inputs, spec);
    const double chern = invariant::chern_pairing(sc.inputs.chains, sc.inputs.phases, 1, spec);
    const double two_charts = invariant::corollary_two_charts(
        1, -1, rep.chart_terms[0].volume, rep.chart_terms[1].volume, 1, sc.boundary_constant,
        chern);
    const double punctured =
        invariant::corollary_punctured(1, sc.total_volume, 1, sc.f_south_pole, chern);

    json doc;
    doc["schema"] = "1";
    doc["command"] = "sphere";
    doc["config"] = {{"epsilon_hat", epsilon_hat},
                     {"gauss_order", spec.gauss_order},
                     {"circle_samples", spec.circle_samples}};
    doc["report"] = report_to_json(rep);
    doc["chern"] = chern;
    doc["corollary_two_charts"] = two_charts;
    doc["corollary_punctured"] = punctured;
    doc["expected"] = {{"j_u", sc.expected.j_u},
                       {"j_v", sc.expected.j_v},
                       {"invariant", sc.expected.invariant},
                       {"chern", sc.expected.chern}};
    doc["pass"] = rep.chart_terms[0].maslov.index == sc.expected.j_u &&
                  rep.chart_terms[1].maslov.index == sc.expected.j_v &&
                  std::abs(rep.total) <= 1e-6 && std::abs(chern - sc.expected.chern) <= 1e-4 &&
                  std::abs(two_charts) <= 1e-6 && std::abs(punctured) <= 1e-6;
    return doc;
}

json torus_document(int n, unsigned seed, const geom::QuadratureSpec& spec) {
    const auto sc = scenarios::make_torus(n, seed);
    const auto rep = invariant::compute_invariant(sc.inputs, spec);
    std::vector<symp::MatrixLoop> loops;
    for (const auto& x : sc.sample_points)
        loops.push_back([&sc, x](double t) { return sc.inputs.loop.linearization(1, t, x); });
    int common = -1;
    const bool indep = symp::point_independence_check(loops, spec.circle_samples, &common);

    json doc;
    doc["schema"] = "1";
    doc["command"] = "torus";
    doc["config"] = {{"n", n},
                     {"seed", seed},
                     {"gauss_order", spec.gauss_order},
                     {"circle_samples", spec.circle_samples}};
    doc["report"] = report_to_json(rep);
    doc["maslov_point_independent"] = indep;
    doc["maslov_common_value"] = common;
    doc["expected"] = {{"maslov", sc.expected.maslov}, {"invariant", sc.expected.invariant}};
    doc["pass"] = indep && common == sc.expected.maslov && std::abs(rep.total) <= 1e-6;
    return doc;
}

json hirzebruch_document(const scenarios::HirzebruchParams& params,
                         const std::vector<double>& ladder, const geom::QuadratureSpec& spec) {
    const auto run = scenarios::run_hirzebruch_ladder(params, ladder, spec);
    const auto& e = run.expected;

    json doc;
    doc["schema"] = "1";
    doc["command"] = "hirzebruch";
    doc["config"] = {{"k", params.k},
                     {"tau", rational_to_json(params.tau)},
                     {"mu", rational_to_json(params.mu)},
                     {"ladder", ladder},
                     {"gauss_order", spec.gauss_order},
                     {"circle_samples", spec.circle_samples}};
    doc["kappa"] = rational_to_json(e.kappa);
    doc["kappa_tilde"] = rational_to_json(e.kappa_tilde);

    const char* loop_names[2] = {"phi1_loop", "phi2_loop"};
    const std::vector<invariant::InvariantReport>* reports[2] = {&run.psi_reports,
                                                                 &run.psi_tilde_reports};
    const double extrapolated[2] = {run.i_psi, run.i_psi_tilde};
    const toric::ExactValue exact_totals[2] = {e.i_psi, e.i_psi_tilde};
    const toric::BoundaryTerms* terms[2] = {&e.terms, &e.terms_tilde};
    const std::array<double, 4>* num_terms[2] = {&run.terms, &run.terms_tilde};
    bool pass = true;
    for (int l = 0; l < 2; ++l) {
        json lj;
        lj["per_epsilon"] = json::array();
        for (size_t i = 0; i < run.epsilons.size(); ++i) {
            json ej = report_to_json((*reports[l])[i]);
            ej["epsilon"] = run.epsilons[i];
            lj["per_epsilon"].push_back(ej);
        }
        lj["invariant"] = expected_pair(exact_totals[l], extrapolated[l]);
        const toric::ExactValue exact_terms[4] = {terms[l]->n01, terms[l]->n02, terms[l]->n03,
                                                  terms[l]->n04};
        lj["boundary_terms"] = json::array();
        for (int j = 0; j < 4; ++j) {
            lj["boundary_terms"].push_back(expected_pair(exact_terms[j], (*num_terms[l])[j]));
            pass = pass && rel_err((*num_terms[l])[j], toric::to_double(exact_terms[j])) <= 0.02;
        }
        pass = pass && rel_err(extrapolated[l], toric::to_double(exact_totals[l])) <= 0.01;
        doc[loop_names[l]] = lj;
    }
    doc["ratio"] = expected_pair(e.ratio, run.i_psi_tilde / run.i_psi);
    doc["chern"] = expected_pair(e.chern, run.chern);
    doc["pass"] = pass;
    return doc;
}

json chern_document(const std::string& scenario, const geom::QuadratureSpec& spec) {
    json doc;
    doc["schema"] = "1";
    doc["command"] = "chern";
    doc["config"] = {{"scenario", scenario}};
    if (scenario == "sphere") {
        const auto sc = scenarios::make_sphere();
        const double chern = invariant::chern_pairing(sc.inputs.chains, sc.inputs.phases, 1, spec);
        doc["chern"] = chern;
        doc["expected"] = sc.expected.chern;
        doc["pass"] = std::abs(chern - sc.expected.chern) <= 1e-4;
    } else if (scenario == "hirzebruch") {
        const scenarios::HirzebruchParams params;
        const auto sc = scenarios::make_hirzebruch(params, 0.0125);
        const double chern = invariant::chern_pairing(sc.psi.chains, sc.psi.phases, 2, spec);
        doc["config"]["k"] = params.k;
        doc["config"]["tau"] = rational_to_json(params.tau);
        doc["config"]["mu"] = rational_to_json(params.mu);
        doc["chern"] = chern;
        doc["expected"] = rational_to_json(sc.expected.chern);
        doc["pass"] = rel_err(chern, toric::to_double(sc.expected.chern)) <= 0.01;
    } else {
        throw Error("unknown scenario for the chern subcommand: " + scenario);
    }
    return doc;
}

json verify_document() {
    json doc;
    doc["schema"] = "1";
    doc["command"] = "verify-all";
    doc["criteria"] = json::array();
    bool pass = true;
    for (const auto& r : verify::run_all()) {
        doc["criteria"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        pass = pass && r.pass;
    }
    doc["pass"] = pass;
    return doc;
}

std::string render_table(const json& doc) {
    std::ostringstream os;
    os.precision(9);
    const std::string command = doc.at("command").get<std::string>();
    os << "== " << command << " ==\n";
    if (doc.contains("config")) os << "config: " << doc["config"].dump() << "\n";
    auto print_report = [&os](const json& rep, const std::string& indent) {
        for (const auto& c : rep.at("charts"))
            os << indent << "chart " << c["id"] << ": J = " << c["maslov"]
               << " (residual " << c["residual"].get<double>() << "), volume = "
               << c["volume"].get<double>() << "\n";
        for (const auto& p : rep.at("pairs"))
            os << indent << "N_" << p["i"] << p["k"] << " = " << p["value"].get<double>() << "\n";
        os << indent << "total = " << rep["total"].get<double>() << "\n";
    };
    if (command == "sphere" || command == "torus") {
        print_report(doc["report"], "  ");
        if (doc.contains("chern")) os << "  chern = " << doc["chern"].get<double>() << "\n";
        if (doc.contains("corollary_two_charts"))
            os << "  two-chart corollary = " << doc["corollary_two_charts"].get<double>()
               << "\n  punctured corollary = " << doc["corollary_punctured"].get<double>() << "\n";
    } else if (command == "hirzebruch") {
        for (const char* loop : {"phi1_loop", "phi2_loop"}) {
            os << "  [" << loop << "]\n";
            for (const auto& ej : doc[loop]["per_epsilon"]) {
                os << "   epsilon = " << ej["epsilon"].get<double>() << "\n";
                print_report(ej, "    ");
            }
            os << "   extrapolated invariant = "
               << doc[loop]["invariant"]["numeric"].get<double>() << " (exact "
               << doc[loop]["invariant"]["exact"]["num"].get<std::string>() << "/"
               << doc[loop]["invariant"]["exact"]["den"].get<std::string>() << ")\n";
            for (const auto& t : doc[loop]["boundary_terms"])
                os << "   boundary term = " << t["numeric"].get<double>() << " (exact "
                   << t["exact"]["num"].get<std::string>() << "/"
                   << t["exact"]["den"].get<std::string>() << ")\n";
        }
        os << "  chern = " << doc["chern"]["numeric"].get<double>() << "\n";
    } else if (command == "chern") {
        os << "  chern = " << doc["chern"].get<double>() << "\n";
    } else if (command == "verify-all") {
        for (const auto& c : doc["criteria"])
            os << "  [" << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "] "
               << c["name"].get<std::string>() << ": " << c["detail"].get<std::string>() << "\n";
    }
    os << (doc.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace hamloop::report
