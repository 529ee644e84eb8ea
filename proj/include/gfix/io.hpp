#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "gfix/contract.hpp"
#include "gfix/gspace.hpp"
#include "gfix/picard.hpp"
#include "gfix/trace.hpp"

namespace gfix::io {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Accepts "p/q", "p" or a JSON integer.
Rational rational_from_json(const json& j);

// Space file: {"nu": int, "points": [id...], "dist": [[rational...]...]}
json to_json(const gspace::FiniteGSpace& space);
gspace::FiniteGSpace space_from_json(const json& j);
gspace::FiniteGSpace load_space(const std::filesystem::path& path);

json to_json(const gspace::ValidationReport& report, const gspace::FiniteGSpace& space);

// Map file: {"type":"table","map":{"a":"b",...}} or
//           {"type":"expr","domain":[lo,hi],"expr":"x/(1+x)"}
using AnyMap = std::variant<contract::FiniteMap, contract::IntervalMap>;
/// `space` is required for table maps and ignored for expression maps.
AnyMap map_from_json(const json& j, std::shared_ptr<const gspace::FiniteGSpace> space);
json to_json(const contract::FiniteMap& map);
json to_json(const contract::IntervalMap& map);

json to_json(const contract::ModulusTable& table);
contract::ModulusTable modulus_from_json(const json& j);
json to_json(const contract::ContractionCertificate& cert);
contract::ContractionCertificate certificate_from_json(const json& j);
json to_json(const contract::Refusal& refusal, const gspace::FiniteGSpace& space);

// Trace file: {"space": <path or inline space>, "entries": [ids or numbers]}.
// An inline interval space is {"type":"interval","domain":[lo,hi]}.
using AnyTrace = std::variant<Trace<gspace::FiniteGSpace>, Trace<gspace::IntervalSpace>>;
AnyTrace trace_from_json(const json& j, const std::filesystem::path& base_dir = {});
json to_json(const gspace::IntervalSpace& space);
json to_json(const Trace<gspace::FiniteGSpace>& trace);
json to_json(const Trace<gspace::IntervalSpace>& trace);

json to_json(const picard::OrbitResult<gspace::FiniteGSpace>& result);
json to_json(const picard::OrbitResult<gspace::IntervalSpace>& result);

}  // namespace gfix::io
