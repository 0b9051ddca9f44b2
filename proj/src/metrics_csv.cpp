#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "hyperqd/errors.hpp"
#include "hyperqd/metrics.hpp"

namespace hyperqd {

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << kMetricsCsvHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  r.g_over_kks, r.ks_over_k, r.gamma_over_k, r.F_closed,
                  r.eta_closed, r.F_sim, r.eta_sim);
    os << buf;
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMetricsCsvHeader)
    throw ValidationError("metrics CSV header missing or unexpected");
  std::vector<MetricsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[7];
    const char* p = line.c_str();
    for (int k = 0; k < 7; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p || (k < 6 && *end != ',') || (k == 6 && *end != '\0'))
        throw ValidationError("malformed metrics CSV line " + std::to_string(lineno));
      p = end + 1;
    }
    MetricsRow r;
    r.g_over_kks = v[0];
    r.ks_over_k = v[1];
    r.gamma_over_k = v[2];
    r.F_closed = v[3];
    r.eta_closed = v[4];
    r.F_sim = v[5];
    r.eta_sim = v[6];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hyperqd
