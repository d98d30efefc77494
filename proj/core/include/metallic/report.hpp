#pragma once

#include <string>

namespace metallic {

// Result of one named verification; pass holds exactly when
// max_abs_err <= tolerance.
struct CheckReport {
  std::string check_id;
  std::string manifold_id;
  int sample_count = 0;
  double max_abs_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static CheckReport make(std::string check_id, std::string manifold_id, int sample_count,
                          double max_abs_err, double tolerance) {
    CheckReport r;
    r.check_id = std::move(check_id);
    r.manifold_id = std::move(manifold_id);
    r.sample_count = sample_count;
    r.max_abs_err = max_abs_err;
    r.tolerance = tolerance;
    r.pass = max_abs_err <= tolerance;
    return r;
  }
};

}  // namespace metallic
