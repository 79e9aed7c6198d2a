#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "theta_atlas/complexzeros.hpp"
#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/regions.hpp"
#include "theta_atlas/series.hpp"
#include "theta_atlas/spectrum.hpp"

namespace theta_atlas::cli {

namespace {

using json = nlohmann::ordered_json;
using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  int digits = 20;
  std::string format = "json";
  std::string output = "-";
};

PrecisionConfig compute_precision(int digits) { return PrecisionConfig::with_target(std::max(30, digits + 5)); }

std::string num(const Real& x, int digits) {
  if (x.is_zero()) return "0";
  const double a = std::abs(x.to_double());
  const int e10 = static_cast<int>(std::floor(std::log10(a)));
  if (std::isfinite(a) && e10 >= -5 && e10 < 16) return x.fixed(std::max(0, digits - 1 - e10));
  return x.sci(digits);
}

std::string num(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", std::min(digits, 17), x);
  return buf;
}

std::string bound(double e) {
  if (std::isinf(e)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", e);
  return buf;
}

json complex_json(const ComplexPoint& z, int digits) { return {{"re", num(z.re, digits)}, {"im", num(z.im, digits)}}; }

json complex_json(cd z, int digits) { return {{"re", num(z.real(), digits)}, {"im", num(z.imag(), digits)}}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

struct Csv {
  std::ostringstream os;
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << '\n';
  }
};

Real parse_real(const std::string& s, int digits) {
  PrecisionScope scope(digits);
  std::size_t used = 0;
  try {
    (void)std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return Real(std::string_view(s));
}

Parameter parse_q(const std::string& s, int digits) {
  Real q = parse_real(s, digits);
  if (!(q.sign() > 0 && q < Real(1))) throw UsageError("q must lie in (0, 1)");
  return Parameter(std::move(q));
}

ComplexPoint parse_point(const std::string& s, int digits) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return ComplexPoint(parse_real(s, digits), Real(0));
  return ComplexPoint(parse_real(s.substr(0, comma), digits), parse_real(s.substr(comma + 1), digits));
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.output.empty() || c.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + c.output);
  f << text;
}

void emit_json(const json& j, const Common& c, std::ostream& out) { emit(j.dump(2) + "\n", c, out); }

int report_error(const std::string& command, const ThetaError& e, const Common& c, std::ostream& out,
                 std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (c.format == "json") {
    json j;
    j["command"] = command;
    j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    emit_json(j, c, out);
  }
  return kFailure;
}

void check_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (c.format == a) return;
  }
  throw UsageError("format '" + c.format + "' is not supported by this command");
}

void add_common(CLI::App* sub, Common& c, const std::string& default_format = "json") {
  c.format = default_format;
  sub->add_option("--digits", c.digits, "significant digits in the output")->check(CLI::Range(6, 60));
  sub->add_option("--format", c.format, "json, csv or svg");
  sub->add_option("-o,--output", c.output, "output file (default: standard output)");
}

// eval --------------------------------------------------------------------

struct EvalArgs {
  Common c;
  std::string q, x = "0", fn = "theta", eps;
};

json eval_json(const EvalResult& r, int digits) {
  json j;
  j["value"] = complex_json(r.value, digits);
  {
    PrecisionScope scope(std::max(digits + 10, 30));
    j["modulus"] = num(abs(r.value), digits);
  }
  j["abs_error"] = bound(r.abs_error);
  j["terms_used"] = r.terms_used;
  return j;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.c, {"json", "csv"});
  const PrecisionConfig prec = compute_precision(a.c.digits);
  const int parse_digits = prec.working_digits + 20;
  json j;
  j["command"] = "eval";
  j["fn"] = a.fn;
  try {
    // Arguments carry enough digits for the cancellation in the series.
    ComplexPoint x0 = parse_point(a.x, parse_digits);
    const double ax = std::hypot(x0.re.to_double(), x0.im.to_double());
    int digits = parse_digits;
    std::optional<Parameter> q;
    if (a.fn != "katsnelson") {
      if (a.q.empty()) throw UsageError("--q is required");
      Parameter q0 = parse_q(a.q, parse_digits);
      if (ax > 0) digits += plan_theta_series(std::log10(q0.approx()), std::log10(ax), prec).digits;
      q.emplace(parse_q(a.q, digits));
      j["q"] = num(q->value(), a.c.digits);
    }
    ComplexPoint x = parse_point(a.x, digits);
    j["x"] = complex_json(x, a.c.digits);
    j["digits"] = a.c.digits;

    std::vector<std::string> header, row;
    if (a.fn == "theta" || a.fn == "theta-star" || a.fn == "G") {
      EvalResult r = a.fn == "theta"        ? eval_theta(*q, x, prec)
                     : a.fn == "theta-star" ? eval_theta_star(*q, x, prec)
                                            : eval_G(*q, x, prec);
      const json body = eval_json(r, a.c.digits);
      for (auto& [k, v] : body.items()) j[k] = v;
      header = {"fn", "q", "x_re", "x_im", "value_re", "value_im", "abs_error"};
      row = {a.fn, num(q->value(), a.c.digits), num(x.re, a.c.digits), num(x.im, a.c.digits),
             num(r.value.re, a.c.digits), num(r.value.im, a.c.digits), bound(r.abs_error)};
    } else if (a.fn == "katsnelson") {
      if (a.eps.empty()) throw UsageError("--eps is required for katsnelson");
      Real eps = parse_real(a.eps, digits);
      if (!(eps.sign() > 0)) throw UsageError("--eps must be positive");
      EvalResult r = eval_katsnelson_family(eps, x, prec);
      j["eps"] = num(eps, a.c.digits);
      const json body = eval_json(r, a.c.digits);
      for (auto& [k, v] : body.items()) j[k] = v;
      header = {"fn", "eps", "x_re", "x_im", "value_re", "value_im", "abs_error"};
      row = {a.fn, num(eps, a.c.digits), num(x.re, a.c.digits), num(x.im, a.c.digits),
             num(r.value.re, a.c.digits), num(r.value.im, a.c.digits), bound(r.abs_error)};
    } else if (a.fn == "jet") {
      const unsigned parts = kJetValue | kJetDx | kJetDxx | kJetDq | kJetDxq;
      ThetaJet jt = theta_jet(q->value(), x, prec, parts);
      const char* names[] = {"value", "dx", "dxx", "dq", "dxq"};
      const Complex* fields[] = {&jt.value, &jt.dx, &jt.dxx, &jt.dq, &jt.dxq};
      header = {"part", "re", "im", "abs_error"};
      for (int i = 0; i < 5; ++i) {
        j[names[i]] = complex_json(*fields[i], a.c.digits);
        j[names[i]]["abs_error"] = bound(jt.abs_error[i]);
      }
      j["terms_used"] = jt.terms_used;
      Csv csv;
      csv.row(header);
      for (int i = 0; i < 5; ++i) {
        csv.row({names[i], num(fields[i]->re, a.c.digits), num(fields[i]->im, a.c.digits), bound(jt.abs_error[i])});
      }
      if (a.c.format == "csv") {
        emit(csv.os.str(), a.c, out);
      } else {
        emit_json(j, a.c, out);
      }
      return kOk;
    } else if (a.fn == "identities") {
      IdentityResiduals r = check_identities(*q, x, prec);
      const char* names[] = {"functional", "even_odd", "decomposition"};
      json arr = json::array();
      header = {"identity", "residual", "bound", "within_bound"};
      Csv csv;
      csv.row(header);
      for (int i = 0; i < 3; ++i) {
        const bool ok = r.residual[i] <= r.bound[i];
        const std::string res = r.residual[i].sci(3);
        const std::string bnd = r.bound[i].sci(3);
        arr.push_back({{"identity", names[i]}, {"residual", res}, {"bound", bnd}, {"within_bound", ok}});
        csv.row({names[i], res, bnd, ok ? "true" : "false"});
      }
      j["identities"] = arr;
      j["within_bounds"] = r.within_bounds();
      if (a.c.format == "csv") {
        emit(csv.os.str(), a.c, out);
      } else {
        emit_json(j, a.c, out);
      }
      return r.within_bounds() ? kOk : kFailure;
    } else {
      throw UsageError("unknown --fn '" + a.fn + "'");
    }
    if (a.c.format == "csv") {
      Csv csv;
      csv.row(header);
      csv.row(row);
      emit(csv.os.str(), a.c, out);
    } else {
      emit_json(j, a.c, out);
    }
    return kOk;
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    return report_error("eval", e, a.c, out, err);
  }
}

// zeros -------------------------------------------------------------------

struct ZerosArgs {
  Common c;
  std::string q;
  std::string mode = "all";
  double radius = 55.0;
  int count = 10;
};

json certified_json(const CertifiedZero& z, int digits) {
  json j = complex_json(z.location, digits);
  {
    PrecisionScope scope(std::max(digits + 10, 30));
    j["modulus"] = num(abs(z.location), digits);
  }
  j["residual"] = bound(z.residual);
  j["deriv_lower"] = num(z.deriv_lower, 6);
  j["cert_radius"] = bound(z.cert_radius);
  j["newton_step"] = bound(z.newton_step);
  j["status"] = to_string(z.status);
  return j;
}

int cmd_zeros(const ZerosArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.c, {"json", "csv"});
  const PrecisionConfig prec = compute_precision(a.c.digits);
  const Parameter q = parse_q(a.q, prec.working_digits + 10);
  const int d = a.c.digits;
  json j;
  j["command"] = "zeros";
  j["mode"] = a.mode;
  j["q"] = num(q.value(), d);
  Csv csv;
  try {
    if (a.mode == "all") {
      ZeroSet zs = find_all_zeros(q, a.radius, prec);
      j["radius"] = num(zs.radius, 6);
      j["degree"] = zs.degree;
      j["real_count"] = zs.real_count();
      j["pair_count"] = zs.pair_count();
      j["all_certified"] = zs.all_certified();
      json arr = json::array();
      csv.row({"index", "kind", "re", "im", "modulus", "residual", "deriv_lower", "cert_radius", "status"});
      int i = 0;
      for (const auto& z : zs.zeros) {
        json e = certified_json(z, d);
        arr.push_back(e);
        csv.row({std::to_string(++i), z.is_real() ? "real" : "complex", e["re"], e["im"], e["modulus"], e["residual"],
                 e["deriv_lower"], e["cert_radius"], e["status"]});
      }
      j["zeros"] = arr;
    } else if (a.mode == "real") {
      if (a.count < 1) throw UsageError("--count must be >= 1");
      RealZeroList list = list_real_zeros(q, a.count, prec);
      j["first_index"] = list.first_index;
      j["gap"] = list.gap;
      j["short_count"] = list.short_count;
      json arr = json::array();
      csv.row({"k", "location", "residual", "location_error", "bracket_lo", "bracket_hi"});
      for (const auto& z : list.zeros) {
        json e;
        e["k"] = z.k;
        e["location"] = num(z.location, d);
        e["residual"] = bound(z.residual);
        e["location_error"] = bound(z.location_error);
        e["bracket"] = {{"lo", num(z.bracket.lo, 12)}, {"hi", num(z.bracket.hi, 12)}};
        arr.push_back(e);
        csv.row({std::to_string(z.k), e["location"], e["residual"], e["location_error"], num(z.bracket.lo, 12),
                 num(z.bracket.hi, 12)});
      }
      j["zeros"] = arr;
      if (list.stop_reason) j["stop_reason"] = list.stop_reason->what();
    } else if (a.mode == "pairs") {
      const int n = count_pairs(q, prec);
      j["pairs"] = n;
      csv.row({"q", "pairs"});
      csv.row({num(q.value(), d), std::to_string(n)});
    } else {
      throw UsageError("unknown --mode '" + a.mode + "'");
    }
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    return report_error("zeros", e, a.c, out, err);
  }
  if (a.c.format == "csv") {
    emit(csv.os.str(), a.c, out);
  } else {
    emit_json(j, a.c, out);
  }
  return kOk;
}

// spectrum ----------------------------------------------------------------

struct SpectrumArgs {
  Common c;
  int from = 1, to = 25;
  std::vector<int> imaginary;
  double v_lo = 0.2;
  double v_hi = 0.0;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.c, {"json", "csv"});
  const PrecisionConfig prec = compute_precision(a.c.digits);
  const int d = a.c.digits;
  json j;
  j["command"] = "spectrum";
  Csv csv;
  try {
    if (a.imaginary.empty()) {
      if (a.from < 1 || a.to > 40 || a.from > a.to) throw UsageError("need 1 <= --from <= --to <= 40");
      json arr = json::array();
      csv.row({"k", "q_tilde", "y_double", "theta_residual", "theta_x_residual", "published"});
      for (int k = a.from; k <= a.to; ++k) {
        SpectralPoint p = find_spectral_point(k, prec);
        json e;
        e["k"] = k;
        e["q_tilde"] = num(p.q_tilde, d);
        e["y_double"] = num(p.y_double, d);
        e["theta_residual"] = bound(p.residuals[0]);
        e["theta_x_residual"] = bound(p.residuals[1]);
        e["theta_xx"] = num(p.theta_xx, 8);
        e["iterations"] = p.iterations;
        e["used_fallback"] = p.used_fallback;
        e["published"] = k <= 25 ? json(num(kPublishedSpectrum[k - 1], 6)) : json(nullptr);
        e["asymptotic"] = num(spectral_asymptotic(k), 10);
        arr.push_back(e);
        csv.row({std::to_string(k), e["q_tilde"], e["y_double"], e["theta_residual"], e["theta_x_residual"],
                 k <= 25 ? num(kPublishedSpectrum[k - 1], 6) : std::string()});
      }
      j["points"] = arr;
    } else {
      json arr = json::array();
      csv.row({"k2", "v_star", "q_star", "chi", "psi1_residual", "psi2_residual", "theta_residual", "status"});
      for (int k2 : a.imaginary) {
        if (k2 < 2 || k2 > 40) throw UsageError("imaginary-axis indices must lie in [2, 40]");
        double hi = a.v_hi;
        if (hi <= 0.0) hi = find_spectral_point(k2, prec).q_tilde.to_double() - 1e-4;
        PrecisionScope scope(prec.working_digits);
        ImaginaryAxisSolution s = find_imaginary_axis_solution(k2, Real(a.v_lo), Real(hi), prec);
        json e;
        e["k2"] = k2;
        e["v_star"] = num(s.v_star, d);
        e["q_star"] = num(s.q_star, d);
        e["chi"] = num(s.chi, d);
        e["psi1_residual"] = bound(s.residuals[0]);
        e["psi2_residual"] = bound(s.residuals[1]);
        e["theta_residual"] = bound(s.theta_residual);
        e["status"] = to_string(s.certificate.status);
        e["deriv_lower"] = num(s.certificate.deriv_lower, 6);
        e["cert_radius"] = bound(s.certificate.cert_radius);
        arr.push_back(e);
        csv.row({std::to_string(k2), e["v_star"], e["q_star"], e["chi"], e["psi1_residual"], e["psi2_residual"],
                 e["theta_residual"], e["status"]});
      }
      j["solutions"] = arr;
      j["limit"] = num(std::exp(kPi / 2), 10);
    }
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    return report_error("spectrum", e, a.c, out, err);
  }
  if (a.c.format == "csv") {
    emit(csv.os.str(), a.c, out);
  } else {
    emit_json(j, a.c, out);
  }
  return kOk;
}

// verify ------------------------------------------------------------------

struct VerifyArgs {
  Common c;
  std::string theorem, check, grid, q;
  double radius = 55.0;
  double x0 = 0.0;
  double half_power = 0.0;
  double arc_radius = 5.0;
  int samples = 721;
  bool inventory = false;
};

json finding_json(const ZeroFinding& f, int digits) {
  json e;
  e["q"] = num(f.q, 10);
  e["zero"] = complex_json(f.zero, std::min(digits, 17));
  e["margin"] = num(f.margin, 10);
  return e;
}

std::string margin_text(double m) { return std::isinf(m) ? std::string("inf") : num(m, 10); }

int verify_theorem_cmd(const VerifyArgs& a, TheoremId id, std::ostream& out, std::ostream& err) {
  (void)err;
  const PrecisionConfig prec = compute_precision(a.c.digits);
  const std::string spec = !a.grid.empty() ? a.grid : id == TheoremId::T2b ? "0.05:0.66:0.01" : "0.32:0.95:0.005";
  std::vector<double> grid;
  try {
    grid = parse_grid(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  RegionReport rep;
  try {
    rep = verify_theorem(id, grid, a.radius, prec);
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    throw;
  }
  const int d = a.c.digits;
  if (a.c.format == "csv") {
    Csv csv;
    csv.row({"q", "re", "im", "modulus", "status", "tested", "violation"});
    for (const auto& entry : rep.zero_inventory) {
      if (!entry.zeros) continue;
      for (const auto& z : entry.zeros->zeros) {
        const cd w(z.location.re.to_double(), z.location.im.to_double());
        const bool right = w.real() >= 0.0;
        const bool tested = id == TheoremId::T2b || (id == TheoremId::T1 && right) ||
                            (id == TheoremId::T3 && !right && !z.is_real());
        bool violation = false;
        for (const auto& v : rep.violations) violation = violation || (v.q == entry.q && v.zero == w);
        csv.row({num(entry.q, 10), num(z.location.re, d), num(z.location.im, d), num(std::abs(w), 17),
                 to_string(z.status), tested ? "true" : "false", violation ? "true" : "false"});
      }
    }
    emit(csv.os.str(), a.c, out);
    return rep.passed() ? kOk : kFailure;
  }
  json j;
  j["command"] = "verify";
  j["theorem"] = to_string(id);
  j["region"] = {{"kind", to_string(rep.region.kind)}, {"radius", num(rep.region.radius, 6)}};
  j["q_grid"] = {{"spec", spec}, {"count", grid.size()}};
  j["radius_cap"] = num(a.radius, 6);
  j["passed"] = rep.passed();
  j["tested_zeros"] = rep.tested_zeros;
  j["worst_margin"] = margin_text(rep.worst_margin);
  j["max_modulus_right"] = num(rep.max_modulus_right, 10);
  j["max_modulus_left"] = num(rep.max_modulus_left, 10);
  json v = json::array();
  for (const auto& f : rep.violations) v.push_back(finding_json(f, d));
  j["violations"] = v;
  json w = json::array();
  for (const auto& x : rep.warnings) w.push_back({{"q", num(x.q, 10)}, {"message", x.message}});
  j["warnings"] = w;
  json k = json::array(), e = json::array();
  for (const auto& f : rep.outside_katsnelson) k.push_back(finding_json(f, d));
  for (const auto& f : rep.outside_e_plus) e.push_back(finding_json(f, d));
  j["findings"] = {{"outside_katsnelson", k}, {"outside_e_plus", e}};
  if (a.inventory) {
    json inv = json::array();
    for (const auto& entry : rep.zero_inventory) {
      json row;
      row["q"] = num(entry.q, 10);
      if (entry.zeros) {
        json zs = json::array();
        for (const auto& z : entry.zeros->zeros) zs.push_back(certified_json(z, d));
        row["zeros"] = zs;
      } else {
        row["error"] = entry.error;
      }
      inv.push_back(row);
    }
    j["inventory"] = inv;
  }
  emit_json(j, a.c, out);
  return rep.passed() ? kOk : kFailure;
}

int verify_check_cmd(const VerifyArgs& a, std::ostream& out) {
  check_format(a.c, {"json"});
  const PrecisionConfig prec = compute_precision(a.c.digits);
  const int d = a.c.digits;
  json j;
  j["command"] = "verify";
  j["check"] = a.check;
  bool passed = false;
  auto grid_or = [&](const char* def) {
    try {
      return parse_grid(a.grid.empty() ? def : a.grid);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  };
  auto q_or = [&](const char* def) { return parse_q(a.q.empty() ? def : a.q, prec.working_digits + 10); };

  if (a.check == "propmain") {
    PropMainReport r = check_propmain(grid_or("0.5:0.99:0.005"), prec);
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"q", num(row.q, 10)}, {"modulus", num(row.modulus, 12)}, {"derivative", num(row.derivative, 8)}});
    }
    j["step"] = num(r.step, 3);
    j["derivative_positive"] = r.derivative_positive;
    j["modulus_increasing"] = r.modulus_increasing;
    j["rows"] = rows;
    passed = r.derivative_positive && r.modulus_increasing;
  } else if (a.check == "bounds") {
    BoundReport r = check_sw_bounds(grid_or("0.5:0.99:0.01"), prec);
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"q", num(row.q, 10)},
                      {"S", num(row.s, 12)},
                      {"W", num(row.w, 12)},
                      {"S_bound", num(row.s_bound, 12)},
                      {"W_bound", num(row.w_bound, 12)}});
    }
    j["s_bound_holds"] = r.s_bound_holds;
    j["w_bound_holds"] = r.w_bound_holds;
    j["sum_positive"] = r.sum_positive;
    j["worst_w_ratio"] = num(r.worst_w_ratio, 8);
    j["worst_w_q"] = num(r.worst_w_q, 10);
    j["rows"] = rows;
    passed = r.s_bound_holds && r.w_bound_holds;
  } else if (a.check == "arc") {
    ArcReport r = check_arc_minimality(q_or("0.5"), a.arc_radius, a.samples);
    j["q"] = num(r.q, 10);
    j["radius"] = num(r.radius, 10);
    j["samples"] = r.samples;
    j["min_modulus"] = num(r.min_modulus, 12);
    j["argmin_angle"] = num(r.argmin_angle, 12);
    j["minimum_on_axis"] = r.minimum_on_axis;
    j["radial_nondecreasing"] = r.radial_nondecreasing;
    j["radial_min_radius"] = num(r.radial_min_radius, 10);
    passed = r.minimum_on_axis && r.radial_nondecreasing;
  } else if (a.check == "circle") {
    const Parameter q = q_or("0.63");
    double x0 = a.x0;
    if (x0 == 0.0) x0 = -std::pow(q.approx(), -(a.half_power > 0 ? a.half_power : 7.5));
    CircleReport r = check_circle_lemma(q, x0, a.samples, prec);
    j["q"] = num(r.q, 10);
    j["x0"] = num(r.x0, 15);
    j["theta_x0"] = num(r.theta_x0, d);
    j["theta_x0_error"] = bound(r.theta_x0_error);
    j["floor"] = num(r.floor, 4);
    j["min_modulus"] = num(r.min_modulus, 12);
    j["argmin"] = complex_json(r.argmin, 12);
    j["star_minimal_at_x0"] = r.star_minimal_at_x0;
    passed = r.passed;
  } else if (a.check == "c1") {
    C1Report r = check_c1_coefficient_argument(q_or("0.4"), prec);
    j["q"] = num(r.q, 10);
    j["s2"] = num(r.s2, d);
    j["s2_error"] = bound(r.s2_error);
    j["identity_residual"] = bound(r.identity_residual);
    j["zeros_used"] = r.zeros_used;
    j["pair"] = complex_json(r.pair, 15);
    j["phi_c1"] = num(r.phi, 12);
    j["delta"] = num(r.delta, 12);
    j["rho0"] = num(rho0(), 12);
    j["margin"] = num(r.margin, 12);
    j["min_margin"] = num(r.min_margin, 12);
    j["min_margin_q"] = num(r.min_margin_q, 6);
    passed = r.margin_positive && r.identity_residual <= std::max(r.s2_error, 1e-6);
  } else if (a.check == "tau") {
    TauReport r = check_tau_lemma(prec);
    j["tau1"] = num(r.tau1, d);
    j["tau1_error"] = bound(r.tau1_error);
    j["tau2"] = num(r.tau2, d);
    j["tau2_error"] = bound(r.tau2_error);
    j["leibniz_a"] = num(r.leibniz_a, d);
    j["leibniz_b"] = num(r.leibniz_b, d);
    j["tau1_increasing"] = r.tau1_increasing;
    j["tau2_increasing"] = r.tau2_increasing;
    passed = r.tau1_increasing && r.tau2_increasing && r.tau1.sign() < 0 && r.tau2.sign() < 0;
  } else if (a.check == "spectral-disk") {
    json rows = json::array();
    passed = true;
    for (const auto& [s, v] : spectral_disk_radii()) {
      rows.push_back({{"s", s}, {"radius", num(v, 10)}});
      passed = passed && v < 49.8;
    }
    j["rows"] = rows;
  } else {
    throw UsageError("unknown --check '" + a.check + "'");
  }
  j["passed"] = passed;
  emit_json(j, a.c, out);
  return passed ? kOk : kFailure;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.c, {"json", "csv"});
  if (a.theorem.empty() == a.check.empty()) throw UsageError("give exactly one of --theorem and --check");
  try {
    if (!a.theorem.empty()) {
      auto id = parse_theorem(a.theorem);
      if (!id) throw UsageError("unknown theorem '" + a.theorem + "' (T1, T2b, T3)");
      return verify_theorem_cmd(a, *id, out, err);
    }
    return verify_check_cmd(a, out);
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    return report_error("verify", e, a.c, out, err);
  }
}

// contour -----------------------------------------------------------------

struct ContourArgs {
  Common c;
  std::string q;
  double radius = 55.0;
};

constexpr double kViewLeft = -9.0, kViewRight = 6.0, kViewBottom = -7.0, kViewTop = 7.0, kScale = 50.0;

std::string px(cd z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f,%.2f", (z.real() - kViewLeft) * kScale, (kViewTop - z.imag()) * kScale);
  return buf;
}

std::string polyline(const std::vector<cd>& pts, const std::string& style) {
  std::string s = "  <polyline fill=\"none\" " + style + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + px(pts[i]);
  return s + "\"/>\n";
}

std::vector<cd> arc(double r, double from, double to, int n) {
  std::vector<cd> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(std::polar(r, from + (to - from) * i / n));
  return pts;
}

int cmd_contour(const ContourArgs& a, std::ostream& out, std::ostream& err) {
  const Parameter q = parse_q(a.q, 60);
  Common c = a.c;
  if (c.format == "json") c.format = "svg";
  check_format(c, {"svg"});
  ZeroSet zs;
  try {
    zs = find_all_zeros(q, a.radius, compute_precision(c.digits));
  } catch (const ThetaError& e) {
    if (e.kind() == ErrorKind::Domain) throw UsageError(e.what());
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  const double w = (kViewRight - kViewLeft) * kScale, h = (kViewTop - kViewBottom) * kScale;
  std::ostringstream s;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                w, h, w, h);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << buf;
  s << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "  <line x1=\"0\" y1=\"" << kViewTop * kScale << "\" x2=\"" << w << "\" y2=\"" << kViewTop * kScale
    << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  s << "  <line x1=\"" << -kViewLeft * kScale << "\" y1=\"0\" x2=\"" << -kViewLeft * kScale << "\" y2=\"" << h
    << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

  // Katsnelson contour, both branches
  std::vector<cd> upper = katsnelson_contour(400), lower;
  for (cd z : upper) lower.push_back(std::conj(z));
  const std::string dashed = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"";
  s << polyline(upper, dashed) << polyline(lower, dashed);

  const std::string solid = "stroke=\"black\" stroke-width=\"1.5\"";
  // half-annulus A
  std::vector<cd> a_path = arc(5.0, kPi / 2, -kPi / 2, 180);
  for (cd z : arc(1.0, -kPi / 2, kPi / 2, 90)) a_path.push_back(z);
  a_path.push_back(a_path.front());
  s << polyline(a_path, solid);
  // domain D
  const double side = 3.0 / std::sqrt(2.0);
  std::vector<cd> d_path = {cd(0.0, side)};
  for (cd z : arc(3.0, 3 * kPi / 4, 5 * kPi / 4, 90)) d_path.push_back(z);
  d_path.push_back(cd(0.0, -side));
  d_path.push_back(d_path.front());
  s << polyline(d_path, solid);

  for (const auto& z : zs.zeros) {
    const cd p(z.location.re.to_double(), z.location.im.to_double());
    if (p.real() < kViewLeft || p.real() > kViewRight || p.imag() < kViewBottom || p.imag() > kViewTop) continue;
    const std::string pos = px(p);
    const auto comma = pos.find(',');
    s << "  <circle cx=\"" << pos.substr(0, comma) << "\" cy=\"" << pos.substr(comma + 1) << "\" r=\"4\" fill=\""
      << (z.is_real() ? "#1f77b4" : "#d62728") << "\"" << (z.certified() ? "" : " fill-opacity=\"0.4\"") << "/>\n";
  }
  std::snprintf(buf, sizeof buf, "  <text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">q = %s</text>\n",
                num(q.value(), 10).c_str());
  s << buf << "</svg>\n";
  emit(s.str(), c, out);
  return kOk;
}

// constants ---------------------------------------------------------------

int cmd_constants(const Common& c, std::ostream& out, std::ostream& err) {
  check_format(c, {"json"});
  ProofConstants k;
  try {
    k = proof_constants(compute_precision(c.digits));
  } catch (const ThetaError& e) {
    return report_error("constants", e, c, out, err);
  }
  const int d = std::min(c.digits, 15);
  double min_margin = INFINITY, min_q = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double q = 0.3 + 0.2 * i / 2000;
    if (c1_margin(q) < min_margin) {
      min_margin = c1_margin(q);
      min_q = q;
    }
  }
  json j;
  j["command"] = "constants";
  j["zeta0"] = num(k.zeta0, d);
  j["kappa"] = num(k.kappa, d);
  j["kappa_error"] = bound(k.kappa_error);
  j["r0"] = num(k.r0, d);
  j["integration_limit"] = num(k.truncation, 6);
  j["tail_bound"] = bound(k.tail_bound);
  j["w_constant"] = num(k.kappa - 2.0 * k.r0 * std::log(2.0), d);
  j["rho0"] = num(rho0(), d);
  j["phi_c1_0.3"] = num(phi_c1(0.3), d);
  j["phi_c1_0.5"] = num(phi_c1(0.5), d);
  j["c1_min_margin"] = num(min_margin, d);
  j["c1_min_margin_q"] = num(min_q, 6);
  j["exp_half_pi"] = num(std::exp(kPi / 2), d);
  j["exp_pi"] = num(std::exp(kPi), d);
  j["t2b_q_limit"] = num(t2b_q_limit(), d);
  j["spectral_asymptotic_constant"] = num(spectral_asymptotic_constant(), d);
  emit_json(j, c, out);
  return kOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ':') {
      parts.push_back(spec.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) throw std::invalid_argument("grid must have the form lo:hi:step");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      v[i] = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed grid value '" + parts[i] + "'");
    }
    if (used != parts[i].size()) throw std::invalid_argument("malformed grid value '" + parts[i] + "'");
  }
  const double lo = v[0], hi = v[1], step = v[2];
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid needs step > 0 and hi >= lo");
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n > 1000000) throw std::invalid_argument("grid has too many points");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) {
    // round away accumulated binary error so grids print as written
    const double x = std::round((lo + step * i) * 1e12) / 1e12;
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("grid points must lie in (0, 1)");
    out.push_back(x);
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial theta function: evaluation, zeros, spectrum and region checks", "theta-atlas"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate theta, Theta*, G, derivatives or identity residuals");
  add_common(eval, ev.c);
  eval->add_option("--q", ev.q, "parameter q in (0, 1)");
  eval->add_option("--x", ev.x, "point as re,im");
  eval->add_option("--fn", ev.fn, "theta, theta-star, G, jet, identities or katsnelson");
  eval->add_option("--eps", ev.eps, "epsilon for the katsnelson family");

  ZerosArgs zr;
  auto* zeros = app.add_subcommand("zeros", "zeros of theta(q, .)");
  add_common(zeros, zr.c);
  zeros->add_option("--q", zr.q, "parameter q")->required();
  zeros->add_option("--mode", zr.mode, "all (disk), real (first --count real zeros) or pairs");
  zeros->add_option("--radius", zr.radius, "disk radius for --mode all");
  zeros->add_option("--count", zr.count, "number of real zeros");

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "spectral values and imaginary-axis zeros");
  add_common(spectrum, sp.c);
  spectrum->add_option("--from", sp.from, "first index");
  spectrum->add_option("--to", sp.to, "last index");
  spectrum->add_option("--imaginary", sp.imaginary, "indices k2 for purely imaginary zeros")->delimiter(',');
  spectrum->add_option("--v-lo", sp.v_lo, "lower end of the v interval");
  spectrum->add_option("--v-hi", sp.v_hi, "upper end of the v interval (default: just below q_k2)");

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "theorem sweeps and proof checks");
  add_common(verify, vf.c);
  verify->add_option("--theorem", vf.theorem, "T1, T2b or T3");
  verify->add_option("--check", vf.check, "propmain, bounds, arc, circle, c1, tau or spectral-disk");
  verify->add_option("--q-grid", vf.grid, "grid lo:hi:step");
  verify->add_option("--radius", vf.radius, "radius cap for the zero search");
  verify->add_option("--q", vf.q, "parameter for arc, circle and c1");
  verify->add_option("--x0", vf.x0, "circle check: point x0 < -5");
  verify->add_option("--half-power", vf.half_power, "circle check: x0 = -q^{-p}");
  verify->add_option("--arc-radius", vf.arc_radius, "arc check: radius B >= 5");
  verify->add_option("--samples", vf.samples, "samples for arc and circle checks");
  verify->add_flag("--inventory", vf.inventory, "include every zero found in the report");

  ContourArgs ct;
  auto* contour = app.add_subcommand("contour", "SVG of the Katsnelson contour, D, A and the zeros");
  add_common(contour, ct.c, "svg");
  contour->add_option("--q", ct.q, "parameter q")->required();
  contour->add_option("--radius", ct.radius, "disk radius for the zero search");

  Common cs;
  auto* constants = app.add_subcommand("constants", "proof constants");
  add_common(constants, cs);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(ev, out, err);
    if (*zeros) return cmd_zeros(zr, out, err);
    if (*spectrum) return cmd_spectrum(sp, out, err);
    if (*verify) return cmd_verify(vf, out, err);
    if (*contour) return cmd_contour(ct, out, err);
    if (*constants) return cmd_constants(cs, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ThetaError& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace theta_atlas::cli
