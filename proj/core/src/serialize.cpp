#include "adeh/serialize.hpp"

#include <json.hpp>

#include <sstream>

namespace adeh::serialize {

using nlohmann::json;

std::string format_real(const cyclo::Real& x, unsigned decimals) {
  return x.str(static_cast<std::streamsize>(decimals),
               std::ios_base::scientific);
}

std::string format_rational(const cyclo::Rational& q) { return q.get_str(); }

namespace {

json num_json(const cyclo::Num& x) {
  json j;
  if (auto r = x.as_rational()) {
    j["rational"] = format_rational(*r);
    return j;
  }
  j["conductor"] = x.conductor();
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(format_rational(c));
  j["coords"] = coords;
  return j;
}

}  // namespace

std::string coefficient_report_json(const coeffs::CoefficientReport& rep) {
  const unsigned dec = rep.digits > 10 ? rep.digits - 10 : rep.digits;
  json j;
  j["type"] = rep.id.name();
  j["rank"] = rep.rank;
  j["h"] = rep.h;
  j["exponents"] = rep.exponents;
  j["digits"] = rep.digits;
  j["target"] = format_rational(rep.target);
  j["sum_exact"] = rep.sum_exact;
  j["all_positive"] = rep.all_positive;
  j["max_residual"] = format_real(rep.max_residual, dec);
  j["theorem_pass"] = rep.theorem_pass;
  json orbits = json::array();
  for (const auto& o : rep.orbits) {
    json jo;
    jo["rep"] = o.rep;
    jo["a_exact"] = num_json(o.a_exact);
    if (o.a_rational) jo["a_rational"] = format_rational(*o.a_rational);
    jo["a_value"] = format_real(o.a_value, dec);
    jo["a_tilde"] = format_real(o.a_tilde, dec);
    jo["residual"] = format_real(o.residual, dec);
    jo["phase_sum"] = format_real(o.phase_sum, dec);
    orbits.push_back(jo);
  }
  j["orbits"] = orbits;
  return j.dump(2) + "\n";
}

std::string coefficient_report_csv(const coeffs::CoefficientReport& rep) {
  const unsigned dec = rep.digits > 10 ? rep.digits - 10 : rep.digits;
  std::ostringstream os;
  os << "type,orbit,rep,a_exact,a_value,a_tilde,residual,theorem_pass\n";
  for (size_t i = 0; i < rep.orbits.size(); ++i) {
    const auto& o = rep.orbits[i];
    os << rep.id.name() << "," << i + 1 << ",";
    for (size_t k = 0; k < o.rep.size(); ++k)
      os << (k ? " " : "") << o.rep[k];
    os << "," << (o.a_rational ? format_rational(*o.a_rational)
                               : o.a_exact.str())
       << "," << format_real(o.a_value, dec) << ","
       << format_real(o.a_tilde, dec) << "," << format_real(o.residual, dec)
       << "," << (rep.theorem_pass ? "true" : "false") << "\n";
  }
  return os.str();
}

std::string hirota_report_json(const std::string& type,
                               const std::string& tau_spec,
                               const fock::HirotaResidual& res) {
  json j;
  j["type"] = type;
  j["tau"] = tau_spec;
  j["weight_cap"] = res.weight_cap;
  j["certified_weight"] = res.certified_weight;
  j["zero_to_certified"] = res.zero_to_certified;
  j["first_nonzero_weight"] = res.first_nonzero_weight;
  json comps = json::array();
  for (const auto& [w, poly] : res.nonzero_components) {
    json jc;
    jc["weight"] = w;
    jc["terms"] = static_cast<int>(poly.terms().size());
    jc["leading_term"] = poly.leading_term();
    comps.push_back(jc);
  }
  j["nonzero_components"] = comps;
  return j.dump(2) + "\n";
}

std::string verify_report_json(unsigned digits,
                               const std::vector<SuiteResult>& suites) {
  json j;
  j["digits"] = digits;
  bool all = true;
  json arr = json::array();
  for (const auto& s : suites) {
    json js;
    js["name"] = s.name;
    js["pass"] = s.pass;
    if (!s.detail.empty()) js["detail"] = s.detail;
    arr.push_back(js);
    all = all && s.pass;
  }
  j["suites"] = arr;
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

std::string phase_study_csv(const std::vector<a1periods::PhaseStudyRow>& rows,
                            unsigned decimals) {
  std::ostringstream os;
  os << "s,epsilon,closed_form,quadrature,abs_diff\n";
  for (const auto& r : rows) {
    os << format_real(r.s, 6) << "," << format_real(r.epsilon, 6) << ","
       << format_real(r.closed_form, decimals) << ","
       << format_real(r.quadrature, decimals) << ","
       << format_real(r.abs_diff, 6) << "\n";
  }
  return os.str();
}

std::string types_listing_text() {
  std::ostringstream os;
  os << "type  rank  h   exponents\n";
  for (const auto& id : rootsys::supported_types()) {
    rootsys::CoxeterData cox = rootsys::coxeter(rootsys::build(id));
    std::string name = id.name();
    os << name << std::string(name.size() < 6 ? 6 - name.size() : 1, ' ');
    std::string rank = std::to_string(cox.rank);
    os << rank << std::string(rank.size() < 6 ? 6 - rank.size() : 1, ' ');
    std::string h = std::to_string(cox.h);
    os << h << std::string(h.size() < 4 ? 4 - h.size() : 1, ' ');
    for (size_t k = 0; k < cox.exponents.size(); ++k)
      os << (k ? "," : "") << cox.exponents[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace adeh::serialize
