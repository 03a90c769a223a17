#pragma once

#include <map>
#include <string>
#include <vector>

namespace semiflow {

enum class Verdict { certified, violated, inconclusive };

std::string to_string(Verdict v);

struct Witness {
  std::string where;
  double lhs = 0.0;
  double rhs = 0.0;
};

// One named hypothesis check with its evidence.
struct ConditionCheck {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  std::map<std::string, double> stats;
  std::string note;
};

struct CertReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<Witness> witnesses;
  std::map<std::string, double> stats;
  std::string reason;
  std::vector<ConditionCheck> conditions;

  // violated dominates, then inconclusive; certified only if every part is.
  void fold(const ConditionCheck& part);
  const ConditionCheck* find(const std::string& name) const;
};

}  // namespace semiflow
