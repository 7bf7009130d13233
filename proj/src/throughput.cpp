#include "siteopt/throughput.hpp"

#include <cmath>
#include <stdexcept>

namespace siteopt {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
}

}  // namespace

double contact_pass_probability(double contact_yield, int terminals,
                                int sites) {
  check_probability(contact_yield, "contact yield");
  if (terminals < 0) throw std::invalid_argument("terminals must be >= 0");
  if (sites < 1) throw std::invalid_argument("sites must be >= 1");
  // 1 - (1 - p^k)^n computed through logs to keep precision when p^k
  // is close to 1.
  if (contact_yield == 0.0) return terminals == 0 ? 1.0 : 0.0;
  double log_pk = terminals * std::log(contact_yield);
  double pk = std::exp(log_pk);
  double log_miss = pk < 0.5 ? std::log1p(-pk)  // log(1 - p^k)
                             : std::log(-std::expm1(log_pk));
  return -std::expm1(sites * log_miss);
}

double manuf_pass_probability(double manufacturing_yield, int sites) {
  check_probability(manufacturing_yield, "manufacturing yield");
  if (sites < 1) throw std::invalid_argument("sites must be >= 1");
  if (manufacturing_yield == 0.0) return 0.0;
  if (manufacturing_yield == 1.0) return 1.0;
  // 1 - (1 - p_m)^n
  return -std::expm1(static_cast<double>(sites) *
                     std::log1p(-manufacturing_yield));
}

double application_time(double contact_time_s, double manuf_time_s,
                        double pass_contact, double pass_manuf,
                        bool abort_on_fail) {
  if (contact_time_s < 0.0 || manuf_time_s < 0.0)
    throw std::invalid_argument("times must be >= 0");
  check_probability(pass_contact, "contact pass probability");
  check_probability(pass_manuf, "manufacturing pass probability");
  if (!abort_on_fail) return contact_time_s + manuf_time_s;
  return contact_time_s + pass_contact * pass_manuf * manuf_time_s;
}

double devices_per_hour(int sites, double index_time_s, double app_time_s) {
  if (sites < 1) throw std::invalid_argument("sites must be >= 1");
  double total = index_time_s + app_time_s;
  if (!(total > 0.0))
    throw std::invalid_argument("index plus application time must be positive");
  return 3600.0 * sites / total;
}

UniqueThroughput unique_devices_per_hour(double contact_yield, int terminals,
                                         double gross_devices_per_hour) {
  check_probability(contact_yield, "contact yield");
  if (terminals < 0) throw std::invalid_argument("terminals must be >= 0");
  UniqueThroughput u;
  double expected_misses = (1.0 - contact_yield) * terminals;
  u.model_strained = expected_misses > 0.5;
  double factor = 1.0 - expected_misses;
  if (factor < 0.0) factor = 0.0;
  u.devices_per_hour = factor * gross_devices_per_hour;
  return u;
}

}  // namespace siteopt
