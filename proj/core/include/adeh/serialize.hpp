#pragma once

#include "adeh/a1periods.hpp"
#include "adeh/coeffs.hpp"
#include "adeh/fock.hpp"

#include <string>
#include <vector>

/**
 * Deterministic report serialization: JSON with alphabetically sorted keys
 * and fixed-width scientific decimals (so identical runs are byte-identical),
 * plus flat CSV forms.  Real values are printed at `decimals` significant
 * digits — reports use digits-10 to stay clear of the embedding error.
 */
namespace adeh::serialize {

std::string format_real(const cyclo::Real& x, unsigned decimals);
std::string format_rational(const cyclo::Rational& q);

std::string coefficient_report_json(const coeffs::CoefficientReport& rep);
std::string coefficient_report_csv(const coeffs::CoefficientReport& rep);

std::string hirota_report_json(const std::string& type,
                               const std::string& tau_spec,
                               const fock::HirotaResidual& res);

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;  // optional one-line context
};

std::string verify_report_json(unsigned digits,
                               const std::vector<SuiteResult>& suites);

std::string phase_study_csv(const std::vector<a1periods::PhaseStudyRow>& rows,
                            unsigned decimals);

/** Plain-text table of the supported types with rank, h and exponents. */
std::string types_listing_text();

}  // namespace adeh::serialize
