#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sfd/domain.hpp"
#include "sfd/verify.hpp"

namespace sfd {

inline constexpr const char* kSpecSchema = "sfd-spec/1";
inline constexpr const char* kDomainSchema = "sfd-domain/1";
inline constexpr const char* kReportSchema = "sfd-report/1";

// Input description of a build: field, units, sector counts, options.
struct FieldSpec {
    ZPoly min_poly;
    std::vector<QVec> units;
    std::vector<long long> N;
    // optional explicit twister table: (class tuple, power-basis coords)
    std::optional<std::vector<std::pair<std::vector<long long>, QVec>>> twister;
    long precision_bits = 128;
    std::uint64_t seed = 42;
    int sample_count = 1000;
    double tolerance = 1e-30;
};

FieldSpec parse_field_spec(const nlohmann::json& j);

// Full build pipeline: field, twister (constructed unless supplied), cones.
SignedDomain build_from_spec(const FieldSpec& spec);

nlohmann::json twister_to_json(const Twister& tw);
Twister twister_from_json(const nlohmann::json& j, std::shared_ptr<const NumberField> field,
                          const std::vector<long long>& N);

nlohmann::json domain_to_json(const SignedDomain& dom);
SignedDomain domain_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const VerifyReport& rep);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace sfd
