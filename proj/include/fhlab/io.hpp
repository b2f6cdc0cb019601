#pragma once

// JSON reading/writing for elements, operator families and reports.
// Malformed input raises FormatError naming the offending field.

#include "json.hpp"
#include <string>

#include "fhlab/algebra.hpp"
#include "fhlab/moyal.hpp"
#include "fhlab/opfamily.hpp"

namespace fhlab::io {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex c);
Complex complex_from_json(const Json& j, const std::string& field);

Json generator_to_json(const Generator& g);
Generator generator_from_json(const Json& j, const std::string& field = "generator");

Json envelope_to_json(const EnvelopeClass& e);
EnvelopeClass envelope_from_json(const Json& j, std::size_t axes, const std::string& field = "envelope");

Json element_to_json(const GradedElement& a);
/// "coeffs" may be omitted when a generator is given.
GradedElement element_from_json(const Json& j);

Json family_to_json(const OperatorFamily& fam);
OperatorFamily family_from_json(const Json& j);

Json to_json(const AxiomReport& r);
Json to_json(const MembershipVerdict& v);
Json to_json(const BoundedVerdict& v);
Json to_json(const TightnessReport& r);
Json to_json(const RepresentationReport& r);

/// Parses a file; syntax errors become FormatError(path, ...).
Json read_json_file(const std::string& path);
GradedElement read_element(const std::string& path);
OperatorFamily read_family(const std::string& path);

}  // namespace fhlab::io
