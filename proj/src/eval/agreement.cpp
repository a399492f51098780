#include "agenda/eval/agreement.hpp"

#include <cstdint>
#include <cstdio>
#include <map>

#include "agenda/core/error.hpp"

namespace agenda::eval {

AgreementReport agreement(std::span<const std::string> ann1, std::span<const std::string> ann2) {
  if (ann1.size() != ann2.size()) {
    throw ValidationError("agreement: annotator sequences differ in length (" + std::to_string(ann1.size()) + " vs " +
                          std::to_string(ann2.size()) + ")");
  }
  if (ann1.empty()) throw ValidationError("agreement: no items");

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> marginals;
  std::uint64_t agree = 0;
  for (std::size_t i = 0; i < ann1.size(); ++i) {
    if (ann1[i] == ann2[i]) ++agree;
    ++marginals[ann1[i]].first;
    ++marginals[ann2[i]].second;
  }
  const std::uint64_t n = ann1.size();
  std::uint64_t chance = 0;  // sum_k c1(k) * c2(k)
  for (const auto& [category, c] : marginals) chance += c.first * c.second;

  AgreementReport r;
  r.n_items = n;
  r.n_agree = agree;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  r.percent_agreement = static_cast<double>(agree) / static_cast<double>(n);
  r.expected_agreement = static_cast<double>(chance) / nn;
  if (chance == n * n) {
    r.kappa = agree == n ? 1.0 : 0.0;
  } else {
    r.kappa = (static_cast<double>(agree) * static_cast<double>(n) - static_cast<double>(chance)) /
              (nn - static_cast<double>(chance));
  }
  return r;
}

nlohmann::ordered_json agreement_to_json(const AgreementReport& report) {
  nlohmann::ordered_json doc;
  doc["kind"] = "agreement";
  doc["n_items"] = report.n_items;
  doc["n_agree"] = report.n_agree;
  doc["percent_agreement"] = report.percent_agreement;
  doc["expected_agreement"] = report.expected_agreement;
  doc["kappa"] = report.kappa;
  doc["granularity"] = "exact_label_set";
  return doc;
}

std::string agreement_to_text(const AgreementReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "items %zu  agree %zu  Po %.3f  Pe %.3f  kappa %.2f\n", report.n_items, report.n_agree,
                report.percent_agreement, report.expected_agreement, report.kappa);
  return buf;
}

}  // namespace agenda::eval
