#include "pispace/report.hpp"

#include <algorithm>

namespace pispace {

const char* to_string(Status s) {
  switch (s) {
    case Status::Verified:
      return "verified";
    case Status::Violated:
      return "violated";
    case Status::Unresolved:
      return "unresolved";
    case Status::Breach:
      return "precondition-breach";
  }
  return "?";
}

void Report::add(std::string check, FinSeq node, Status status, std::string detail) {
  findings.push_back({std::move(check), std::move(node), status, std::move(detail)});
}

void Report::merge(const Report& other) {
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
}

std::size_t Report::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [s](const Finding& f) { return f.status == s; }));
}

nlohmann::json Report::to_json() const {
  nlohmann::json out;
  out["name"] = name;
  out["verified"] = count(Status::Verified);
  out["violated"] = count(Status::Violated);
  out["unresolved"] = count(Status::Unresolved);
  out["breaches"] = count(Status::Breach);
  // only the informative findings are listed individually
  auto& list = out["findings"] = nlohmann::json::array();
  for (const auto& f : findings) {
    if (f.status == Status::Verified) continue;
    list.push_back({{"check", f.check},
                    {"node", pispace::to_string(f.node)},
                    {"status", pispace::to_string(f.status)},
                    {"detail", f.detail}});
  }
  return out;
}

}  // namespace pispace
