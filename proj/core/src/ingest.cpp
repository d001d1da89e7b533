#include "confirm/ingest.hpp"

#include <cctype>
#include <ctime>

#include "json_codec.hpp"

namespace confirm::io {

using detail::ObjectReader;

StudySummary parse_study_summary(std::string_view document) {
  const detail::json j = detail::parse_json(document);
  ObjectReader r(j, "");
  return detail::study_from_json(r, true);
}

std::string serialize_study_summary(const StudySummary& study) {
  return detail::study_to_json(study, true).dump(2) + "\n";
}

etz::VarianceTriple study_to_variance_triple(const StudySummary& study, bool use_published) {
  study.validate();
  const int n_rx_base = study.rx.n_baseline;
  const int n_c_base = study.control.n_baseline;
  const int n_rx_mile = study.rx.n_milestone;
  const int n_c_mile = study.control.n_milestone;
  const auto pooled = [](double sd1, int n1, double sd2, int n2) {
    return ((n1 - 1) * sd1 * sd1 + (n2 - 1) * sd2 * sd2) / (n1 + n2 - 2);
  };
  etz::VarianceTriple v;
  v.var_baseline = pooled(study.rx.sd_baseline, n_rx_base, study.control.sd_baseline, n_c_base);
  v.var_milestone = pooled(study.rx.sd_milestone, n_rx_mile, study.control.sd_milestone, n_c_mile);
  v.var_change = (use_published && study.published_change_variance)
                     ? *study.published_change_variance
                     : etz::change_variance_from_se(study.rx, study.control);
  return v;
}

void ScenarioRecord::validate() const {
  if (!is_valid_scenario_id(id)) throw ParseError("id", "id must be 1-128 characters of [A-Za-z0-9._-], not starting with '.'");
  if (!is_valid_timestamp(created_at)) throw ParseError("created_at", "expected YYYY-MM-DDTHH:MM:SSZ");
  detail::revalidate("study", [&] { study.validate(); });
  if (etz_override) detail::revalidate("etz_override", [&] { etz_override->validate(); });
  detail::revalidate("plan", [&] { plan.validate(); });
  detail::revalidate("", [&] { design.validate(); });
}

etz::EtzComponents scenario_etz(const ScenarioRecord& record) {
  if (record.etz_override) return *record.etz_override;
  return etz::decompose_etz(study_to_variance_triple(record.study));
}

bool is_valid_scenario_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char ch : id) {
    const auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '.' || c == '_' || c == '-')) return false;
  }
  return true;
}

bool is_valid_timestamp(std::string_view ts) {
  // YYYY-MM-DDTHH:MM:SSZ
  static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:ddZ";
  if (ts.size() != shape.size()) return false;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const bool digit = std::isdigit(static_cast<unsigned char>(ts[i])) != 0;
    if (shape[i] == 'd' ? !digit : ts[i] != shape[i]) return false;
  }
  const auto field = [&](std::size_t pos, std::size_t len) { return std::stoi(std::string(ts.substr(pos, len))); };
  const int month = field(5, 2);
  const int day = field(8, 2);
  return month >= 1 && month <= 12 && day >= 1 && day <= 31 && field(11, 2) <= 23 && field(14, 2) <= 59 &&
         field(17, 2) <= 60;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ScenarioRecord parse_scenario(std::string_view document) {
  const detail::json j = detail::parse_json(document);
  ObjectReader r(j, "");
  return detail::scenario_from_json(r);
}

std::string serialize_scenario(const ScenarioRecord& record) {
  return detail::scenario_to_json(record).dump(2) + "\n";
}

}  // namespace confirm::io
