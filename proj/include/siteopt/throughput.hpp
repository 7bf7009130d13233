// Multi-site wafer test throughput model.
#pragma once

namespace siteopt {

struct ThroughputParams {
  double contact_yield = 1.0;        // per-terminal probe contact yield
  double manufacturing_yield = 1.0;  // per-device yield
  bool broadcast = false;            // shared stimulus channels across sites
  bool abort_on_fail = false;        // tester stops a touchdown early on fail
  bool retest = false;               // rank site counts by unique throughput
};

// Probability that at least one of the n sites has all of its k probed
// terminals in contact: 1 - (1 - p_c^k)^n.
double contact_pass_probability(double contact_yield, int terminals, int sites);

// Probability that at least one of the n contacted devices is good:
// 1 - (1 - p_m)^n.
double manuf_pass_probability(double manufacturing_yield, int sites);

// Time spent testing per touchdown. Without abort-on-fail the full test
// always runs. With it, failing devices are assumed to take no test time
// at all, so the manufacturing time is weighted by the probability that
// a touchdown has something to pass: t_c + P_c * P_m * t_m. That is an
// optimistic bound on the real abort behavior.
double application_time(double contact_time_s, double manuf_time_s,
                        double pass_contact, double pass_manuf,
                        bool abort_on_fail);

// Devices tested per hour at n sites.
double devices_per_hour(int sites, double index_time_s, double app_time_s);

struct UniqueThroughput {
  double devices_per_hour = 0.0;
  // Linearized retest overhead is a poor estimate once expected contact
  // failures per touchdown exceed one half.
  bool model_strained = false;
};

// First-pass throughput discounted by devices needing retest after a
// contact miss: factor 1 - (1 - contact_yield) * terminals, clamped at 0.
UniqueThroughput unique_devices_per_hour(double contact_yield, int terminals,
                                         double gross_devices_per_hour);

}  // namespace siteopt
