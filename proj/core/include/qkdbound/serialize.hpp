#pragma once

// JSON wire formats and the CSV scan contract.
//
//   matrix        {"dim": d, "re": [...], "im": [...]}   (row-major)
//   distribution  {"shape": [...], "probs": [...]}       (row-major)
//   povm          {"dim": d, "elements": [matrix...], "labels": [...]}
//   detector      {"dark_total": d, "dark_split": [...], "efficiencies": [...]}
//   class spec    {"alice_povm": povm, "bob_povm": povm, "observed": distribution}
//
// CSV columns: e,lambda_max,i_ent,upper_bound,mutual_info,e_r with nine
// significant digits, '.' separator and LF line endings.

#include <string>
#include <vector>

#include "json.hpp"
#include "qkdbound/bsa.hpp"
#include "qkdbound/pipeline.hpp"

namespace qkdbound {

nlohmann::json to_json(const HermitianMatrix& m);
HermitianMatrix hermitian_from_json(const nlohmann::json& j);

nlohmann::json to_json(const JointDistribution& p);
JointDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Povm& p);
Povm povm_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DetectorSpec& d);
DetectorSpec detector_from_json(const nlohmann::json& j);

EquivalenceClassSpec class_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BsaResult& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json reports_to_json(const std::vector<BoundReport>& reports);

std::string reports_to_csv(const std::vector<BoundReport>& reports);

// Locale-independent formatting at nine significant digits.
std::string format_double(double v);

// Write via a temporary file in the same directory plus an atomic rename,
// so failures never leave partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace qkdbound
