#pragma once

namespace mcid {

/// Constants that the analysis leaves inside O(.) bounds. Defaults are the shipped calibration.
struct Constants {
  double c_samp = 4.0;   // samples per component: c_samp |S| ln n / eps^2
  double c_len = 8.0;    // trajectory length: c_len n ln^2 n / eps^4
  double c_test = 4.0;   // iid tester demand: c_test sqrt(k) / eps_sq * ln(1/delta)
  double c_emb = 4.0;    // embedding repetitions per scale: ceil(c_emb ln n)
  double C_fc = 20.0;    // find_comp approximation allowance, multiplies ln n
  double c_N = 32.0;     // sample-demand audit: c_N |S| ln^2 n / eps^2
};

}  // namespace mcid
