#pragma once

#include <string>

#include "su2e/certify_infinity.hpp"
#include "su2e/certify_local.hpp"

namespace su2e {

// Combined certificate: both stages plus an overall status.
std::string combined_json(const LocalCertificate& local, const InfinityCertificate* inf);
Status combined_status(const LocalCertificate& local, const InfinityCertificate* inf);

// Decimal endpoints rounded outward, `digits` significant digits.
std::string upper_str(const Ball& x, int digits = 5);
std::string lower_str(const Ball& x, int digits = 5);

// Human-readable tables from any certificate JSON (local, infinity or combined).
// Never recomputes anything.
std::string render_report(const std::string& json_text);

}  // namespace su2e
