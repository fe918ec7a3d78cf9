#include "autopilot/missile/envelope.hpp"

#include <fmt/format.h>

#include <ostream>
#include <set>

namespace autopilot::missile {

namespace {

struct CoefficientField {
  const char* key;
  double AeroCoefficients::*member;
  bool required;
};

constexpr CoefficientField kCoefficientFields[] = {
    {"C_y_beta", &AeroCoefficients::C_y_beta, false},
    {"C_y_delta_r", &AeroCoefficients::C_y_delta_r, false},
    {"C_y_r", &AeroCoefficients::C_y_r, false},
    {"C_z_alpha", &AeroCoefficients::C_z_alpha, true},
    {"C_z_delta_e", &AeroCoefficients::C_z_delta_e, true},
    {"C_z_q", &AeroCoefficients::C_z_q, true},
    {"C_l_delta_a", &AeroCoefficients::C_l_delta_a, false},
    {"C_l_p", &AeroCoefficients::C_l_p, false},
    {"C_m_alpha", &AeroCoefficients::C_m_alpha, true},
    {"C_m_delta_e", &AeroCoefficients::C_m_delta_e, true},
    {"C_m_q", &AeroCoefficients::C_m_q, true},
    {"C_n_beta", &AeroCoefficients::C_n_beta, false},
    {"C_n_delta_r", &AeroCoefficients::C_n_delta_r, false},
    {"C_n_r", &AeroCoefficients::C_n_r, false},
};

OperatingPoint read_point(const io::Document& doc, const io::Section& sec, io::Diagnostics& diag) {
  io::SectionReader r(doc, sec, diag);
  OperatingPoint op;
  op.id = r.text("id");
  op.dynamic_pressure = r.positive("dynamic_pressure");
  op.reference_area = r.positive("reference_area");
  op.reference_length = r.positive("reference_length");
  op.mass = r.positive("mass");
  op.inertia_y = r.positive("inertia_y");
  op.speed = r.positive("speed");
  op.inertia_x = r.number_or("inertia_x", 0.0);
  op.inertia_z = r.number_or("inertia_z", 0.0);
  op.speed_u = r.number_or("speed_u", op.speed);
  op.altitude = r.number_or("altitude", 0.0);
  op.mach = r.number_or("mach", 0.0);
  for (const auto& f : kCoefficientFields)
    op.coefficients.*f.member = f.required ? r.number(f.key) : r.number_or(f.key, 0.0);
  r.reject_unknown();
  return op;
}

}  // namespace

std::vector<TransferFunction> Envelope::plants() const {
  std::vector<TransferFunction> out;
  out.reserve(points.size());
  for (const auto& op : points) out.push_back(open_loop_plant(op, actuator, pitch_rate_gain));
  return out;
}

Envelope read_envelope(const io::Document& doc) {
  io::Diagnostics diag;
  Envelope env;
  const auto actuators = doc.all("actuator");
  if (actuators.size() > 1) diag.add(doc.source, actuators[1]->line, "[actuator] given more than once");
  if (!actuators.empty()) {
    io::SectionReader r(doc, *actuators.front(), diag);
    env.actuator.omega_n = r.positive("omega_n");
    env.actuator.zeta = r.positive("zeta");
    r.reject_unknown();
  }
  const auto gains = doc.all("gains");
  if (gains.empty()) {
    diag.add(doc.source, 1, "missing [gains] section with k_q");
  } else {
    if (gains.size() > 1) diag.add(doc.source, gains[1]->line, "[gains] given more than once");
    io::SectionReader r(doc, *gains.front(), diag);
    env.pitch_rate_gain = r.number("k_q");
    r.reject_unknown();
  }
  const auto sections = doc.all("operating_point");
  if (sections.empty()) diag.add(doc.source, 1, "envelope must contain ≥ 1 point");
  std::set<std::string> ids;
  for (const io::Section* sec : sections) {
    OperatingPoint op = read_point(doc, *sec, diag);
    if (!op.id.empty() && !ids.insert(op.id).second)
      diag.add(doc.source, sec->find("id")->line, "duplicate operating point id '" + op.id + "'");
    env.points.push_back(std::move(op));
  }
  diag.throw_if_any();
  return env;
}

Envelope load_envelope(std::istream& in, const std::string& source) {
  return read_envelope(io::parse_structured_text(in, source));
}

Envelope load_envelope_file(const std::filesystem::path& path) {
  return read_envelope(io::parse_structured_text_file(path));
}

void write_envelope(std::ostream& os, const Envelope& env, const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << "\n\n";
  os << fmt::format("[actuator]\nomega_n = {}\nzeta = {}\n\n", env.actuator.omega_n, env.actuator.zeta);
  os << fmt::format("[gains]\nk_q = {}\n", env.pitch_rate_gain);
  for (const OperatingPoint& op : env.points) {
    os << fmt::format("\n[operating_point]\nid = {}\n", op.id);
    os << fmt::format("dynamic_pressure = {}\nreference_area = {}\nreference_length = {}\nmass = {}\n",
                      op.dynamic_pressure, op.reference_area, op.reference_length, op.mass);
    os << fmt::format("inertia_x = {}\ninertia_y = {}\ninertia_z = {}\nspeed_u = {}\nspeed = {}\n", op.inertia_x,
                      op.inertia_y, op.inertia_z, op.speed_u, op.speed);
    os << fmt::format("altitude = {}\nmach = {}\n", op.altitude, op.mach);
    for (const auto& f : kCoefficientFields) os << fmt::format("{} = {}\n", f.key, op.coefficients.*f.member);
  }
}

Envelope synthetic_envelope(std::span<const double> pressure_factors) {
  OperatingPoint base;
  base.dynamic_pressure = 50000.0;
  base.reference_area = 0.05;
  base.reference_length = 0.5;
  base.mass = 100.0;
  base.inertia_x = 0.5;
  base.inertia_y = 20.0;
  base.inertia_z = 20.0;
  base.speed = 600.0;
  base.speed_u = 600.0;
  base.altitude = 1000.0;
  base.mach = 1.8;
  AeroCoefficients& c = base.coefficients;
  c.C_z_alpha = -40.0;
  c.C_z_delta_e = -5.0;
  c.C_z_q = -1.0;
  c.C_m_alpha = -0.1;
  c.C_m_delta_e = -1.0;
  c.C_m_q = -400.0;
  c.C_l_delta_a = 2.0;
  c.C_l_p = -10.0;

  Envelope env;
  env.pitch_rate_gain = -0.001;
  for (std::size_t i = 0; i < pressure_factors.size(); ++i) {
    OperatingPoint op = base;
    op.id = fmt::format("syn{}", i + 1);
    op.dynamic_pressure *= pressure_factors[i];
    env.points.push_back(op);
  }
  return env;
}

Envelope synthetic_envelope() {
  constexpr double kFactors[] = {0.5, 1.0, 2.0, 4.0};
  return synthetic_envelope(kFactors);
}

Envelope scale_dynamic_pressure(const Envelope& env, std::span<const double> factors) {
  Envelope out = env;
  out.points.clear();
  for (const OperatingPoint& op : env.points) {
    for (double f : factors) {
      OperatingPoint p = op;
      p.id = fmt::format("{}_q{}", op.id, f);
      p.dynamic_pressure *= f;
      out.points.push_back(p);
    }
  }
  return out;
}

}  // namespace autopilot::missile
