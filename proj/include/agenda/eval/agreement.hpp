#pragma once

#include <span>
#include <string>

#include "json.hpp"

namespace agenda::eval {

struct AgreementReport {
  std::size_t n_items = 0;
  std::size_t n_agree = 0;
  double percent_agreement = 0.0;   // Po
  double expected_agreement = 0.0;  // Pe
  double kappa = 0.0;
};

/// Cohen's kappa between two aligned category sequences (multi-label sets are
/// passed as category_of strings). When Pe = 1, kappa is 1 if Po = 1 and 0 otherwise.
AgreementReport agreement(std::span<const std::string> ann1, std::span<const std::string> ann2);

nlohmann::ordered_json agreement_to_json(const AgreementReport& report);
std::string agreement_to_text(const AgreementReport& report);

}  // namespace agenda::eval
