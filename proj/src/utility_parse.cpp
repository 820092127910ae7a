#include "ocevi/utility.hpp"

#include <cstdio>
#include <stdexcept>

namespace ocevi {
namespace {

double parse_parameter(const std::string& text, const std::string& body, const std::string& key) {
  const std::string prefix = key + "=";
  if (body.rfind(prefix, 0) != 0)
    throw std::invalid_argument("utility '" + text + "': expected '" + prefix + "<number>'");
  const std::string number = body.substr(prefix.size());
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(number, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != number.size())
    throw std::invalid_argument("utility '" + text + "': bad number '" + number + "'");
  return value;
}

std::string format_parameter(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int digits = 1; digits <= 17; ++digits) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", digits, x);
    if (std::stod(shorter) == x) return shorter;
  }
  return buf;
}

}  // namespace

Utility<double> parse_utility(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? std::string{} : text.substr(colon + 1);

  if (name == "mean") {
    if (colon != std::string::npos)
      throw std::invalid_argument("utility 'mean' takes no parameters");
    return Utility<double>::mean();
  }
  if (name == "entropic") return Utility<double>::entropic(parse_parameter(text, body, "beta"));
  if (name == "cvar") return Utility<double>::cvar(parse_parameter(text, body, "alpha"));
  if (name == "meanvar") return Utility<double>::mean_variance(parse_parameter(text, body, "c"));
  throw std::invalid_argument("unknown utility '" + text +
                              "' (expected mean, entropic:beta=, cvar:alpha=, meanvar:c=)");
}

std::string to_string(const Utility<double>& u) {
  switch (u.kind) {
    case UtilityKind::Mean:
      return "mean";
    case UtilityKind::Entropic:
      return "entropic:beta=" + format_parameter(u.param);
    case UtilityKind::CVaR:
      return "cvar:alpha=" + format_parameter(u.param);
    case UtilityKind::MeanVariance:
      return "meanvar:c=" + format_parameter(u.param);
    case UtilityKind::Custom:
      return "custom";
  }
  return "custom";
}

}  // namespace ocevi
