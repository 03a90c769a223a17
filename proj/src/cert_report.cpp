#include "semiflow/cert_report.hpp"

namespace semiflow {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

void CertReport::fold(const ConditionCheck& part) {
  if (conditions.empty()) verdict = Verdict::certified;
  conditions.push_back(part);
  if (part.verdict == Verdict::violated) {
    verdict = Verdict::violated;
  } else if (part.verdict == Verdict::inconclusive && verdict != Verdict::violated) {
    verdict = Verdict::inconclusive;
  }
}

const ConditionCheck* CertReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace semiflow
