#include "rvlab/lemma.hpp"

namespace rvlab {

void LemmaReport::record(bool violated, double slack, std::map<std::string, double> context,
                         const std::string& detail) {
  ++instances;
  if (violated) {
    ++violations;
    if (details.size() < kMaxReportDetails && !detail.empty()) details.push_back(detail);
  }
  if (slack < max_slack) {
    max_slack = slack;
    context["slack"] = slack;
    worst_case = std::move(context);
  }
}

void LemmaReport::merge(const LemmaReport& other) {
  instances += other.instances;
  skipped += other.skipped;
  violations += other.violations;
  for (const auto& d : other.details) {
    if (details.size() >= kMaxReportDetails) break;
    details.push_back(d);
  }
  if (other.max_slack < max_slack) {
    max_slack = other.max_slack;
    worst_case = other.worst_case;
  }
}

}  // namespace rvlab
