#ifndef HAMLOOP_REPORT_HPP
#define HAMLOOP_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "hamloop/invariant.hpp"
#include "hamloop/scenarios/hirzebruch.hpp"
#include "hamloop/toric.hpp"
#include "hamloop/verify.hpp"

namespace hamloop::report {

using json = nlohmann::ordered_json;

/// Exact rational as {"num", "den", "approx"}.
json rational_to_json(const toric::ExactValue& v);
toric::ExactValue rational_from_json(const json& j);

json report_to_json(const invariant::InvariantReport& rep);

/// Full machine-readable documents for the CLI subcommands; each carries
/// "schema": "1" and a top-level "pass" flag.
json sphere_document(double epsilon_hat, const geom::QuadratureSpec& spec);
json torus_document(int n, unsigned seed, const geom::QuadratureSpec& spec);
json hirzebruch_document(const scenarios::HirzebruchParams& params,
                         const std::vector<double>& ladder, const geom::QuadratureSpec& spec);
json chern_document(const std::string& scenario, const geom::QuadratureSpec& spec);
json verify_document();

/// Human-readable rendering of any of the documents above.
std::string render_table(const json& doc);

} // namespace hamloop::report

#endif
