#pragma once

// JSON records for configs and results. Parsing takes the text of one JSON
// value; `path` prefixes field names in error messages ("models.interior").

#include <string>
#include <string_view>

#include "polycycle/certify.hpp"
#include "polycycle/checks.hpp"
#include "polycycle/frequency.hpp"
#include "polycycle/invariants.hpp"
#include "polycycle/map_family.hpp"
#include "polycycle/th_config.hpp"

namespace polycycle {

// Throws ConfigParseError with line and column on malformed input.
void check_json_syntax(std::string_view text);

// {"kind": "power_law", "C": .., "Lambda": .., "a": .., "beta": ..,
//  "additive_eps": .., "delta": ..}; only Lambda is required.
PowerLawParams power_law_from_json(std::string_view text, std::string_view path = "");
MapFamilyPtr model_from_json(std::string_view text, std::string_view path = "");

// {"lambda", "mu"} or {"Lambda_i", "Lambda_e"}, "xi_E": [..], "xi_I": number
// or [..], optional "perturbation": {"r", "q"}, optional "models":
// {"interior", "exterior", "I", "E"}.
THConfig th_config_from_json(std::string_view text, std::string_view path = "");

std::string to_json(const PowerLawParams& params);
std::string to_json(const InvariantVector& inv);
std::string to_json(const FrequencyReport& report);
std::string to_json(const EstimateCertificate& cert);
std::string to_json(const VerdictResult& verdict);
std::string to_json(const CheckReport& report);

}  // namespace polycycle
