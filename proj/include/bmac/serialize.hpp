#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "bmac/kkt.hpp"
#include "bmac/solver.hpp"
#include "bmac/types.hpp"

// Deterministic text output: fixed field order, floats printed with 12
// significant digits so parse/re-serialize round-trips are byte-identical.

namespace bmac {

enum class Unit { Nats, Bits };

inline const char* unit_name(Unit u) { return u == Unit::Nats ? "nats" : "bits"; }

inline const char* location_name(Location l) {
  switch (l) {
    case Location::Interior: return "Interior";
    case Location::BoundaryAxisUser1: return "BoundaryAxisUser1";
    case Location::BoundaryAxisUser2: return "BoundaryAxisUser2";
  }
  return "Interior";
}

inline const char* corner_name(Corner c) { return c == Corner::C1 ? "C1" : "C2"; }

inline const char* method_name(Method m) {
  switch (m) {
    case Method::CaseABoundary: return "CaseABoundary";
    case Method::CaseBBisection: return "CaseBBisection";
    case Method::ClosedForm: return "ClosedForm";
    case Method::GeneralScan: return "GeneralScan";
  }
  return "GeneralScan";
}

inline const char* kind_name(KktKind k) {
  switch (k) {
    case KktKind::GlobalMax: return "GlobalMax";
    case KktKind::LocalMax: return "LocalMax";
    case KktKind::Saddle: return "Saddle";
    case KktKind::LocalMin: return "LocalMin";
    case KktKind::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

// 12 significant digits, shortest form.
inline std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline double rate_in(Unit u, double nats) { return u == Unit::Bits ? nats / ln2 : nats; }

inline std::string solution_to_json(const Solution& s, Unit u) {
  std::string j = "{";
  j += "\"p1\": " + fmt12(s.input.p1);
  j += ", \"p2\": " + fmt12(s.input.p2);
  j += ", \"rate1\": " + fmt12(rate_in(u, s.rates.r1));
  j += ", \"rate2\": " + fmt12(rate_in(u, s.rates.r2));
  j += ", \"value\": " + fmt12(rate_in(u, s.value));
  j += std::string(", \"unit\": \"") + unit_name(u) + "\"";
  j += std::string(", \"location\": \"") + location_name(s.location) + "\"";
  j += std::string(", \"corner\": \"") + corner_name(s.corner) + "\"";
  j += std::string(", \"method\": \"") + method_name(s.method) + "\"";
  j += ", \"p2_tolerance\": " + fmt12(s.p2_tolerance);
  j += "}\n";
  return j;
}

inline std::string solution_to_csv(const Solution& s, Unit u) {
  std::string out = "p1,p2,rate1,rate2,value,unit,location,corner,method,p2_tolerance\n";
  out += fmt12(s.input.p1) + "," + fmt12(s.input.p2) + "," + fmt12(rate_in(u, s.rates.r1)) +
         "," + fmt12(rate_in(u, s.rates.r2)) + "," + fmt12(rate_in(u, s.value)) + "," +
         unit_name(u) + "," + location_name(s.location) + "," + corner_name(s.corner) + "," +
         method_name(s.method) + "," + fmt12(s.p2_tolerance) + "\n";
  return out;
}

inline std::string kkt_points_to_json(const std::vector<KktPoint>& pts, Unit u) {
  std::string j = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (i) j += ", ";
    j += "{\"p1\": " + fmt12(p.input.p1);
    j += ", \"p2\": " + fmt12(p.input.p2);
    j += ", \"residual\": " + fmt12(p.residual);
    j += std::string(", \"kind\": \"") + kind_name(p.kind) + "\"";
    j += std::string(", \"on_boundary\": ") + (p.on_boundary ? "true" : "false");
    j += ", \"rate1\": " + fmt12(rate_in(u, p.rates.r1));
    j += ", \"rate2\": " + fmt12(rate_in(u, p.rates.r2));
    j += ", \"value\": " + fmt12(rate_in(u, p.value));
    j += "}";
  }
  j += "]\n";
  return j;
}

inline std::string kkt_points_to_csv(const std::vector<KktPoint>& pts, Unit u) {
  std::string out = "p1,p2,residual,kind,on_boundary,rate1,rate2,value\n";
  for (const auto& p : pts)
    out += fmt12(p.input.p1) + "," + fmt12(p.input.p2) + "," + fmt12(p.residual) + "," +
           kind_name(p.kind) + "," + (p.on_boundary ? "true" : "false") + "," +
           fmt12(rate_in(u, p.rates.r1)) + "," + fmt12(rate_in(u, p.rates.r2)) + "," +
           fmt12(rate_in(u, p.value)) + "\n";
  return out;
}

inline std::string region_to_csv(const RegionBoundary& rb, Unit u) {
  std::string out = "r1,r2,w1,w2,p1,p2\n";
  for (const auto& v : rb.vertices)
    out += fmt12(rate_in(u, v.rates.r1)) + "," + fmt12(rate_in(u, v.rates.r2)) + "," +
           fmt12(v.w1) + "," + fmt12(v.w2) + "," + fmt12(v.input.p1) + "," +
           fmt12(v.input.p2) + "\n";
  return out;
}

inline std::string region_to_json(const RegionBoundary& rb, Unit u) {
  std::string j = "[";
  for (std::size_t i = 0; i < rb.vertices.size(); ++i) {
    const auto& v = rb.vertices[i];
    if (i) j += ", ";
    j += "{\"r1\": " + fmt12(rate_in(u, v.rates.r1)) + ", \"r2\": " + fmt12(rate_in(u, v.rates.r2)) +
         ", \"w1\": " + fmt12(v.w1) + ", \"w2\": " + fmt12(v.w2) +
         ", \"p1\": " + fmt12(v.input.p1) + ", \"p2\": " + fmt12(v.input.p2) + "}";
  }
  j += "]\n";
  return j;
}

inline std::string g1_to_csv(const std::vector<RatePair>& pts, Unit u) {
  std::string out = "r1,r2\n";
  for (const auto& p : pts)
    out += fmt12(rate_in(u, p.r1)) + "," + fmt12(rate_in(u, p.r2)) + "\n";
  return out;
}

inline std::string g1_to_json(const std::vector<RatePair>& pts, Unit u) {
  std::string j = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) j += ", ";
    j += "[" + fmt12(rate_in(u, pts[i].r1)) + ", " + fmt12(rate_in(u, pts[i].r2)) + "]";
  }
  j += "]\n";
  return j;
}

} // namespace bmac
